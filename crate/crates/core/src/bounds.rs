//! Bound formulas for `f_B(γ)`, the `t`-scan for dense `K_{t,t,t}` blowups,
//! and small experiments around the counting lemmas.
//!
//! All bound arithmetic is in base-2 logs: `γ^{t²}` leaves `f64` range
//! quickly.

use std::io::Write;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{
    blowup_hom_count_raw, exact_cost, k112_hom_count, part_respecting_hom_count, sample_hom_density,
    sample_part_respecting_density, triangle_hom_count, DensityEstimate, HomCount,
};
use crate::error::{Error, Result};
use crate::graph::{random_tripartite, BlowupShape, Graph};
use crate::numeric::{log2_biguint, pow_biguint, ratio_pow};
use crate::rng::derive_seed;

/// Header line that versions the scan CSV columns.
pub const SCAN_CSV_VERSION: &str = "# blowup-lab scan csv v1";
pub const SCAN_CSV_COLUMNS: &str = "t,density_log2,half_width,threshold_log2,satisfied";

fn three_parts(shape: &BlowupShape) -> Result<(f64, f64, f64)> {
    match shape.parts() {
        &[a, b, c] => Ok((a as f64, b as f64, c as f64)),
        other => Err(Error::Domain(format!("expected a three-part shape, got {other:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub shape: Vec<usize>,
    pub gamma_log2: f64,
    /// `abc · log2 γ`
    pub lower_log2: f64,
    /// `((ab + bc + ca) / 3) · log2 γ`
    pub upper_log2: f64,
    pub alon_log2: Option<f64>,
    pub nikiforov_log2: Option<f64>,
    pub nikiforov_c: Option<f64>,
}

/// `γ^{abc} <= f_B(γ) <= γ^{(ab+bc+ca)/3}` for `B = K_{a,b,c}`.
pub fn trivial_bounds(shape: &BlowupShape, gamma: f64) -> Result<BoundReport> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain(format!("triangle density {gamma} outside (0, 1]")));
    }
    trivial_bounds_log2(shape, gamma.log2())
}

/// As [`trivial_bounds`] with `γ` given by its base-2 log (`<= 0`).
pub fn trivial_bounds_log2(shape: &BlowupShape, gamma_log2: f64) -> Result<BoundReport> {
    if !(gamma_log2 <= 0.0) || gamma_log2 == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("log2 density {gamma_log2} outside (-inf, 0]")));
    }
    let (a, b, c) = three_parts(shape)?;
    Ok(BoundReport {
        shape: shape.parts().to_vec(),
        gamma_log2,
        lower_log2: a * b * c * gamma_log2,
        upper_log2: (a * b + b * c + c * a) / 3.0 * gamma_log2,
        alon_log2: None,
        nikiforov_log2: None,
        nikiforov_c: None,
    })
}

/// `log2` of the lower bound `γ^{t²/γ²}` for `K_{t,t,t}`.
pub fn alon_lower_bound(t: usize, gamma: f64) -> Result<f64> {
    if t == 0 {
        return Err(Error::Domain("t must be at least 1".into()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("triangle density {gamma} outside (0, 1)")));
    }
    let t = t as f64;
    Ok(t * t / (gamma * gamma) * gamma.log2())
}

/// `log2` of `2^{-c t² / γ³}`; `c` stands in for the unspecified constant.
pub fn nikiforov_lower_bound(t: usize, gamma: f64, c_param: f64) -> Result<f64> {
    if t == 0 {
        return Err(Error::Domain("t must be at least 1".into()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain(format!("triangle density {gamma} outside (0, 1]")));
    }
    if !(c_param > 0.0) {
        return Err(Error::Domain(format!("constant {c_param} must be positive")));
    }
    let t = t as f64;
    Ok(-c_param * t * t / gamma.powi(3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundKind {
    Trivial,
    Alon,
    Nikiforov,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundComparison {
    pub t: usize,
    pub gamma: f64,
    pub trivial_log2: f64,
    pub alon_log2: f64,
    pub nikiforov_log2: f64,
    pub best: LowerBoundKind,
}

/// The three lower bounds for `K_{t,t,t}` at `γ`, and which is largest
/// (earlier kinds win ties).
pub fn compare_lower_bounds(t: usize, gamma: f64, c_param: f64) -> Result<LowerBoundComparison> {
    let trivial = trivial_bounds(&BlowupShape::balanced(t)?, gamma)?.lower_log2;
    let alon = alon_lower_bound(t, gamma)?;
    let nikiforov = nikiforov_lower_bound(t, gamma, c_param)?;
    let mut best = (LowerBoundKind::Trivial, trivial);
    for (kind, v) in [(LowerBoundKind::Alon, alon), (LowerBoundKind::Nikiforov, nikiforov)] {
        if v > best.1 {
            best = (kind, v);
        }
    }
    Ok(LowerBoundComparison {
        t,
        gamma,
        trivial_log2: trivial,
        alon_log2: alon,
        nikiforov_log2: nikiforov,
        best: best.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t: usize,
    pub mode: DensityMode,
    /// Exact value, or the log of the sampled point estimate.
    pub density_log2: f64,
    /// Zero for exact rows.
    pub half_width: f64,
    /// `log2` of the value compared against the threshold: the exact density,
    /// or the lower confidence edge of a sample.
    pub tested_log2: f64,
    /// `(1 + δ) t² log2 γ`
    pub threshold_log2: f64,
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<DensityEstimate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    Satisfied,
    NoneWithinRange,
    /// Triangle density is zero; there is nothing to scan.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n: usize,
    pub gamma_num: String,
    pub gamma_den: String,
    pub gamma_log2: Option<f64>,
    pub delta: f64,
    pub t_max: usize,
    pub budget: u128,
    pub samples: u64,
    pub seed: u64,
    pub rows: Vec<ScanRow>,
    pub first_satisfying_t: Option<usize>,
    pub status: ScanStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanParams {
    pub delta: f64,
    pub t_max: usize,
    /// Exact counting is used when the cost estimate is within this budget.
    pub budget: u128,
    pub samples: u64,
    pub seed: u64,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self { delta: 0.5, t_max: 4, budget: crate::counting::DEFAULT_TUPLE_BUDGET, samples: 1_000_000, seed: 0 }
    }
}

/// For `t = 2..=t_max`, compares `d_{K_{t,t,t}}(G)` with `γ^{(1+δ)t²}`.
/// Row `t` samples with seed `derive_seed(seed, t)` when exact counting is
/// over budget.
pub fn scan_t(g: &Graph, params: &ScanParams) -> Result<ScanReport> {
    if !(params.delta > 0.0 && params.delta < 1.0) {
        return Err(Error::Domain(format!("delta {} outside (0, 1)", params.delta)));
    }
    if params.samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let gamma = triangle_hom_count(g);
    let mut report = ScanReport {
        n: g.n(),
        gamma_num: gamma.density.numer().to_string(),
        gamma_den: gamma.density.denom().to_string(),
        gamma_log2: gamma.log2_density.is_finite().then_some(gamma.log2_density),
        delta: params.delta,
        t_max: params.t_max,
        budget: params.budget,
        samples: params.samples,
        seed: params.seed,
        rows: Vec::new(),
        first_satisfying_t: None,
        status: ScanStatus::Vacuous,
    };
    if gamma.count.is_zero() {
        return Ok(report);
    }
    let rows = (2..=params.t_max.max(1))
        .into_par_iter()
        .map(|t| scan_row(g, t, gamma.log2_density, params))
        .collect::<Result<Vec<_>>>()?;
    report.first_satisfying_t = rows.iter().find(|r| r.satisfied).map(|r| r.t);
    report.status = match report.first_satisfying_t {
        Some(_) => ScanStatus::Satisfied,
        None => ScanStatus::NoneWithinRange,
    };
    report.rows = rows;
    Ok(report)
}

fn scan_row(g: &Graph, t: usize, gamma_log2: f64, params: &ScanParams) -> Result<ScanRow> {
    let shape = BlowupShape::balanced(t)?;
    let threshold_log2 = (1.0 + params.delta) * (t * t) as f64 * gamma_log2;
    let within_budget = exact_cost(&shape, g.n()).is_some_and(|c| c <= params.budget);
    let row = if within_budget {
        let exact = blowup_hom_count_raw(&shape, g);
        ScanRow {
            t,
            mode: DensityMode::Exact,
            density_log2: exact.log2_density,
            half_width: 0.0,
            tested_log2: exact.log2_density,
            threshold_log2,
            satisfied: exact.log2_density >= threshold_log2,
            estimate: None,
        }
    } else {
        let est = sample_hom_density(&shape, g, params.samples, derive_seed(params.seed, t as u64))?;
        let tested_log2 = est.lower().log2();
        ScanRow {
            t,
            mode: DensityMode::Sampled,
            density_log2: est.point.log2(),
            half_width: est.half_width,
            tested_log2,
            threshold_log2,
            satisfied: tested_log2 >= threshold_log2,
            estimate: Some(est),
        }
    };
    Ok(row)
}

/// One row per line under a versioned header.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut out: W) -> Result<()> {
    writeln!(out, "{SCAN_CSV_VERSION}")?;
    writeln!(out, "{SCAN_CSV_COLUMNS}")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.t, r.density_log2, r.half_width, r.threshold_log2, r.satisfied)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchySchwarzReport {
    pub m: usize,
    /// `Hom_{K_{1,1,2}}(G) · 2m`
    pub lhs: String,
    /// `Hom_{K_3}(G)²`
    pub rhs: String,
    pub holds: bool,
    pub equality: bool,
    pub vacuous: bool,
}

/// Checks `Hom_{K112}(G) · 2m >= Hom_{K3}(G)²` in exact integers: the sum of
/// squared edge codegrees against the squared sum.
pub fn cauchy_schwarz_check(g: &Graph) -> CauchySchwarzReport {
    let m = g.edge_count();
    if m == 0 {
        return CauchySchwarzReport { m, lhs: "0".into(), rhs: "0".into(), holds: true, equality: true, vacuous: true };
    }
    let lhs = k112_hom_count(g).count * BigUint::from(2 * m);
    let tri = triangle_hom_count(g).count;
    let rhs = &tri * &tri;
    CauchySchwarzReport {
        m,
        holds: lhs >= rhs,
        equality: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        vacuous: false,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaPowerReport {
    pub shape: Vec<usize>,
    pub gamma_log2: Option<f64>,
    pub density_log2: Option<f64>,
    pub bound_log2: Option<f64>,
    /// `d_B(G) >= γ^{abc}` as exact rationals.
    pub holds: bool,
    pub vacuous: bool,
}

/// Exact check of `d_{K_{a,b,c}}(G) >= γ^{abc}` where `γ = d_{K3}(G)`.
pub fn gamma_power_lower_check(g: &Graph, shape: &BlowupShape) -> Result<GammaPowerReport> {
    three_parts(shape)?;
    let gamma = triangle_hom_count(g);
    let finite = |x: f64| x.is_finite().then_some(x);
    if gamma.count.is_zero() {
        return Ok(GammaPowerReport {
            shape: shape.parts().to_vec(),
            gamma_log2: None,
            density_log2: None,
            bound_log2: None,
            holds: true,
            vacuous: true,
        });
    }
    let product: usize = shape.parts().iter().product();
    let d = blowup_hom_count_raw(shape, g);
    let bound = ratio_pow(&gamma.density, product as u32);
    Ok(GammaPowerReport {
        shape: shape.parts().to_vec(),
        gamma_log2: finite(gamma.log2_density),
        density_log2: finite(d.log2_density),
        bound_log2: finite(product as f64 * gamma.log2_density),
        holds: d.density >= bound,
        vacuous: false,
    })
}

/// Parameters of a random tripartite counting-lemma experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingLemmaParams {
    pub m: usize,
    /// Cross densities `(A-B, A-C, B-C)`.
    pub alphas: [f64; 3],
    pub zeta: f64,
    /// Blowup order for the `K_{t,t,t}` check; `0` skips it.
    pub t: usize,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingLemmaReport {
    pub params: CountingLemmaParams,
    pub cross_triangles: String,
    /// `α1 α2 α3 m³`
    pub expected: f64,
    pub band_low: f64,
    pub band_high: f64,
    pub triangles_in_band: bool,
    pub kttt: Option<KtttCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KtttCheck {
    pub estimate: DensityEstimate,
    /// `(α1 α2 α3 - ζ)^{t²}`, as a density over part-respecting maps.
    pub bound: f64,
    /// The lower confidence edge clears the bound.
    pub pass: bool,
}

/// Builds a random tripartite host and checks the cross-triangle count
/// against `(α1 α2 α3 ± ζ) m³`, and optionally the part-respecting
/// `K_{t,t,t}` density against `(α1 α2 α3 - ζ)^{t²}`.
pub fn counting_lemma_experiment(params: &CountingLemmaParams) -> Result<CountingLemmaReport> {
    if !(params.zeta >= 0.0) {
        return Err(Error::Domain(format!("zeta {} must be non-negative", params.zeta)));
    }
    let (g, partition) = random_tripartite(params.m, params.alphas, params.seed)?;
    let parts = partition.classes().to_vec();
    let (count, _) = part_respecting_hom_count(&BlowupShape::triangle(1, 1, 1)?, &g, &parts)?;
    let product: f64 = params.alphas.iter().product();
    let m3 = (params.m as f64).powi(3);
    let count_f = count.to_f64().unwrap_or(f64::INFINITY);
    let band_low = (product - params.zeta) * m3;
    let band_high = (product + params.zeta) * m3;
    let kttt = if params.t > 0 && params.m > 0 {
        let shape = BlowupShape::balanced(params.t)?;
        let estimate = sample_part_respecting_density(&shape, &g, &parts, params.samples, derive_seed(params.seed, 1))?;
        let base = product - params.zeta;
        let bound = if base > 0.0 { base.powi((params.t * params.t) as i32) } else { 0.0 };
        let pass = estimate.lower() >= bound;
        Some(KtttCheck { estimate, bound, pass })
    } else {
        None
    };
    Ok(CountingLemmaReport {
        params: params.clone(),
        cross_triangles: count.to_string(),
        expected: product * m3,
        band_low,
        band_high,
        triangles_in_band: band_low <= count_f && count_f <= band_high,
        kttt,
    })
}

pub const PACKING_MAX_M: usize = 60;
pub const PACKING_MAX_T: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub m: usize,
    pub t: usize,
    pub densities: [f64; 3],
    pub c_param: f64,
    pub seed: u64,
    /// Part-respecting `K_{t,t,t}` homomorphisms.
    pub count: String,
    pub count_log2: f64,
    /// `log2(m^{3t} / C^{3t²})`
    pub bound_log2: f64,
    /// `⌊m^{3t} / C^{3t²}⌋` when `C` is an integer.
    pub bound_floor: Option<String>,
    pub holds: bool,
    /// The `C` at which the bound would be tight for this host.
    pub empirical_c: Option<f64>,
}

/// Exact part-respecting `K_{t,t,t}` count on a random tripartite host with
/// all cross densities at least 15/16, against `m^{3t} / C^{3t²}`.
pub fn packing_count_experiment(
    m: usize,
    t: usize,
    densities: [f64; 3],
    c_param: f64,
    seed: u64,
) -> Result<PackingReport> {
    if densities.iter().any(|d| !(15.0 / 16.0..=1.0).contains(d)) {
        return Err(Error::Precondition(format!("densities {densities:?} must lie in [15/16, 1]")));
    }
    if t == 0 || m == 0 {
        return Err(Error::Domain("m and t must be positive".into()));
    }
    if t > PACKING_MAX_T || m > PACKING_MAX_M {
        return Err(Error::resource(format!(
            "packing experiment limited to t <= {PACKING_MAX_T}, m <= {PACKING_MAX_M}"
        )));
    }
    if !(c_param >= 1.0) {
        return Err(Error::Domain(format!("constant {c_param} must be at least 1")));
    }
    let (g, partition) = random_tripartite(m, densities, seed)?;
    let (count, _) = part_respecting_hom_count(&BlowupShape::balanced(t)?, &g, partition.classes())?;
    let count_log2 = log2_biguint(&count);
    let bound_log2 = (3 * t) as f64 * (m as f64).log2() - (3 * t * t) as f64 * c_param.log2();
    let bound_floor = (c_param.fract() == 0.0).then(|| {
        let c = pow_biguint(c_param as usize, 3 * t * t);
        (pow_biguint(m, 3 * t) / c).to_string()
    });
    let holds = match &bound_floor {
        Some(f) => count >= f.parse::<BigUint>().expect("decimal"),
        None => count_log2 >= bound_log2,
    };
    let empirical_c =
        (!count.is_zero()).then(|| (((3 * t) as f64 * (m as f64).log2() - count_log2) / (3 * t * t) as f64).exp2());
    Ok(PackingReport {
        m,
        t,
        densities,
        c_param,
        seed,
        count: count.to_string(),
        count_log2,
        bound_log2,
        bound_floor,
        holds,
        empirical_c,
    })
}

/// `d_H(G)^k` for exact comparison with the density of a tensor power.
pub fn density_power(count: &HomCount, k: u32) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    ratio_pow(&count.density, k)
}
