use std::collections::HashSet;
use std::path::PathBuf;

use blowup_core::bounds::{cauchy_schwarz_check, density_power, gamma_power_lower_check};
use blowup_core::constructions::{behrend_set, rs_graph};
use blowup_core::counting::{blowup_hom_count, k112_hom_count, triangle_hom_count, HomCount};
use blowup_core::graph::{random_graph, tensor_power_with_budget, uniform_blowup, DEFAULT_TENSOR_VERTEX_BUDGET};
use blowup_core::io::{graph_to_string, load_certificate};
use blowup_core::numeric::log2_ratio;
use blowup_core::{BlowupShape, Graph};
use clap::{Args, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::failure::{CmdResult, Failure, FlagContext};
use crate::{emit, load_graph, load_set, Outcome};

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub check: Check,
}

type Counter = fn(&Graph) -> HomCount;

/// Host graph: a file, or `G(n, p)` with a seed.
#[derive(Debug, Args, Serialize)]
pub struct HostArgs {
    #[arg(long = "in", conflicts_with = "n", required_unless_present = "n")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// RS graph: m|S| edge-disjoint triangles covering every edge, no others.
    Rs {
        /// Build from the Behrend set (or `--set`) for this `m`.
        #[arg(long, required_unless_present = "cert")]
        m: Option<usize>,
        #[arg(long, conflicts_with = "cert")]
        set: Option<PathBuf>,
        /// Graph file to check against `--cert`.
        #[arg(long = "in", requires = "cert")]
        input: Option<PathBuf>,
        #[arg(long, requires = "input", conflicts_with = "m")]
        cert: Option<PathBuf>,
    },
    /// Densities of K3 and K_{1,1,2} in the k-th tensor power equal the k-th powers.
    Tensor {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Hom counts scale by q^{|V(B)|} under a uniform q-blowup.
    BlowupIdentity {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// One shape; defaults to every shape up to 2,2,2.
        #[arg(long)]
        shape: Option<String>,
    },
    /// Hom_{K112} * 2|E| >= Hom_{K3}^2.
    Cs {
        #[command(flatten)]
        host: HostArgs,
    },
    /// d_{K_{a,b,c}} >= gamma^{abc}.
    #[command(name = "prop13-lower")]
    #[serde(rename = "prop13-lower")]
    GammaPower {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long)]
        shape: Option<String>,
    },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Rs { .. } => "rs",
            Check::Tensor { .. } => "tensor",
            Check::BlowupIdentity { .. } => "blowup-identity",
            Check::Cs { .. } => "cs",
            Check::GammaPower { .. } => "prop13-lower",
        }
    }
}

impl HostArgs {
    fn load(&self, outcome: &mut Outcome) -> CmdResult<Graph> {
        match (&self.input, self.n) {
            (Some(path), _) => {
                outcome.inputs.push(path.clone());
                load_graph(path)
            }
            (None, Some(n)) => {
                if !(0.0..=1.0).contains(&self.p) {
                    return Err(Failure::flag("--p", format!("must lie in [0, 1], got {}", self.p)));
                }
                outcome.seed = Some(self.seed);
                random_graph(n, self.p, self.seed).flag("--n")
            }
            (None, None) => Err(Failure::flag("--in", "give --in or --n")),
        }
    }
}

fn shapes(shape: &Option<String>) -> CmdResult<Vec<BlowupShape>> {
    match shape {
        Some(s) => Ok(vec![s.parse().flag("--shape")?]),
        None => Ok([(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)]
            .into_iter()
            .map(|(a, b, c)| BlowupShape::triangle(a, b, c).expect("valid shape"))
            .collect()),
    }
}

fn rational(r: &BigRational) -> Value {
    let log2 = log2_ratio(r);
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "log2": log2.is_finite().then_some(log2),
    })
}

/// Prints the report; a failed check becomes exit 4.
fn conclude(check: &str, pass: bool, mut report: Value, counterexample: Option<Value>) -> CmdResult<()> {
    report["check"] = json!(check);
    report["pass"] = json!(pass);
    if let Some(c) = counterexample {
        report["counterexample"] = c;
    }
    emit(&report);
    if pass {
        Ok(())
    } else {
        Err(Failure::Falsified(format!("{check} check failed; see the counterexample in the report")))
    }
}

pub fn run(args: &VerifyArgs) -> CmdResult<Outcome> {
    let mut outcome = Outcome::default();
    let check = args.check.name();
    match &args.check {
        Check::Rs { m, set, input, cert } => verify_rs(*m, set, input, cert, &mut outcome)?,
        Check::Tensor { host, k } => {
            let g = host.load(&mut outcome)?;
            let t = tensor_power_with_budget(&g, *k, DEFAULT_TENSOR_VERTEX_BUDGET).flag("--k")?;
            let mut rows = Vec::new();
            let mut bad = None;
            for (pattern, counter) in [("1,1,1", triangle_hom_count as Counter), ("1,1,2", k112_hom_count)] {
                let power = counter(&t).density;
                let expected = density_power(&counter(&g), *k as u32);
                let ok = power == expected;
                rows.push(json!({"pattern": pattern, "tensor_density": rational(&power), "expected": rational(&expected), "holds": ok}));
                if !ok && bad.is_none() {
                    bad = Some(json!({"pattern": pattern, "graph": graph_to_string(&g)}));
                }
            }
            let report = json!({"n": g.n(), "k": k, "tensor_n": t.n(), "patterns": rows});
            conclude(check, bad.is_none(), report, bad)?;
        }
        Check::BlowupIdentity { host, q, shape } => {
            let g = host.load(&mut outcome)?;
            let shapes = shapes(shape)?;
            let (b, _) = uniform_blowup(&g, *q).flag("--q")?;
            let mut rows = Vec::new();
            let mut bad = None;
            for s in &shapes {
                let base = blowup_hom_count(s, &g)?.count;
                let lifted = blowup_hom_count(s, &b)?.count;
                let expected = &base * BigUint::from(*q).pow(s.order() as u32);
                let ok = lifted == expected;
                rows.push(json!({
                    "shape": s.to_string(),
                    "base": base.to_string(),
                    "blowup": lifted.to_string(),
                    "expected": expected.to_string(),
                    "holds": ok,
                }));
                if !ok && bad.is_none() {
                    bad = Some(json!({"shape": s.to_string(), "graph": graph_to_string(&g)}));
                }
            }
            let report = json!({"n": g.n(), "q": q, "shapes": rows});
            conclude(check, bad.is_none(), report, bad)?;
        }
        Check::Cs { host } => {
            let g = host.load(&mut outcome)?;
            let r = cauchy_schwarz_check(&g);
            let bad = (!r.holds).then(|| json!({"graph": graph_to_string(&g)}));
            let report = serde_json::to_value(&r).expect("report serializes");
            conclude(check, r.holds, report, bad)?;
        }
        Check::GammaPower { host, shape } => {
            let g = host.load(&mut outcome)?;
            let mut rows = Vec::new();
            let mut bad = None;
            for s in &shapes(shape)? {
                let r = gamma_power_lower_check(&g, s)?;
                if !r.holds && bad.is_none() {
                    bad = Some(json!({"shape": s.to_string(), "graph": graph_to_string(&g)}));
                }
                rows.push(serde_json::to_value(&r).expect("report serializes"));
            }
            conclude(check, bad.is_none(), json!({"n": g.n(), "shapes": rows}), bad)?;
        }
    }
    Ok(outcome)
}

fn verify_rs(
    m: Option<usize>,
    set: &Option<PathBuf>,
    input: &Option<PathBuf>,
    cert: &Option<PathBuf>,
    outcome: &mut Outcome,
) -> CmdResult<()> {
    let (g, cert) = match (input, cert, m) {
        (Some(path), Some(cert_path), _) => {
            outcome.inputs.extend([path.clone(), cert_path.clone()]);
            let g = load_graph(path)?;
            let cert = load_certificate(cert_path)
                .map_err(|e| Failure::flag("--cert", format!("{}: {e}", cert_path.display())))?;
            (g, cert)
        }
        (_, _, Some(m)) => {
            let set = match set {
                Some(path) => {
                    outcome.inputs.push(path.clone());
                    load_set(path)?
                }
                None => behrend_set(m as u64).flag("--m")?,
            };
            rs_graph(m, &set).flag("--m")?
        }
        _ => return Err(Failure::flag("--m", "give --m, or --in with --cert")),
    };
    let s = cert.set.len();
    let expected = cert.m * s;
    let triangles = triangle_hom_count(&g).count / BigUint::from(6u32);
    let mut failures = Vec::new();
    let mut counterexample = None;
    if let Err(e) = cert.verify(&g) {
        failures.push(e.to_string());
        counterexample = Some(json!({"certificate": e.to_string()}));
    }
    if triangles != BigUint::from(expected) {
        failures.push(format!("{triangles} triangles, expected {expected}"));
        if counterexample.is_none() {
            counterexample = extra_triangle(&g, &cert.triangles).map(|t| json!({"extra_triangle": t}));
        }
    }
    if g.edge_count() != 3 * expected {
        failures.push(format!("{} edges, expected {}", g.edge_count(), 3 * expected));
    }
    let report = json!({
        "m": cert.m,
        "set_size": s,
        "n": g.n(),
        "edges": g.edge_count(),
        "triangles": triangles.to_string(),
        "expected_triangles": expected,
        "failures": failures,
    });
    conclude("rs", failures.is_empty(), report, counterexample)
}

/// A triangle of `g` missing from the certificate list.
fn extra_triangle(g: &Graph, listed: &[[usize; 3]]) -> Option<[usize; 3]> {
    let listed: HashSet<[usize; 3]> = listed
        .iter()
        .map(|t| {
            let mut t = *t;
            t.sort_unstable();
            t
        })
        .collect();
    g.edges().find_map(|(u, v)| {
        g.neighbors(v).filter(|&w| w > v && g.has_edge(u, w)).map(|w| [u, v, w]).find(|t| !listed.contains(t))
    })
}
