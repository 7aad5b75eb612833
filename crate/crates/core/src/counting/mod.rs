//! Homomorphism counts and densities for triangle blowups `K_{a,b,c}` and
//! small general patterns.
//!
//! A homomorphism `H -> G` maps every edge of `H` to an edge of `G`. Hosts are
//! loopless, so adjacent pattern vertices get distinct images while
//! non-adjacent ones may collide.

mod exact;
mod sample;
mod witness;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use exact::{
    blowup_hom_count, blowup_hom_count_raw, blowup_hom_count_with_budget, edge_triangle_multiplicities, exact_cost,
    hom_count_bruteforce, hom_count_bruteforce_with_budget, k112_hom_count, part_respecting_hom_count,
    triangle_hom_count,
};
pub use sample::{sample_hom_density, sample_part_respecting_density, CONFIDENCE_Z};
pub use witness::{find_blowup_witness, BlowupWitness, WitnessOutcome};

use crate::graph::BlowupShape;
use crate::numeric::{log2_ratio, pow_biguint, ratio};

/// Default cap on map evaluations for [`hom_count_bruteforce`].
pub const DEFAULT_BRUTEFORCE_BUDGET: u128 = 1_000_000_000;

/// Default cap on the `n^{a'+b'}` cost estimate of [`blowup_hom_count`].
pub const DEFAULT_TUPLE_BUDGET: u128 = 1_000_000_000;

/// Exact `Hom_H(G)` with its density `Hom_H(G) / n^h`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomCount {
    /// The blowup shape, when the pattern is one.
    pub pattern: Option<BlowupShape>,
    pub count: BigUint,
    pub pattern_size: usize,
    pub host_size: usize,
    pub density: BigRational,
    pub log2_density: f64,
}

impl HomCount {
    pub fn new(count: BigUint, pattern: Option<BlowupShape>, pattern_size: usize, host_size: usize) -> Self {
        let maps = pow_biguint(host_size, pattern_size);
        let density = if maps.is_zero() { BigRational::zero() } else { ratio(count.clone(), maps) };
        let log2_density = log2_ratio(&density);
        debug_assert!(density <= BigRational::from_integer(1.into()));
        Self { pattern, count, pattern_size, host_size, density, log2_density }
    }

    pub fn to_json(&self) -> HomCountJson {
        HomCountJson {
            pattern: self.pattern.as_ref().map(|p| p.parts().to_vec()),
            pattern_size: self.pattern_size,
            n: self.host_size,
            count: self.count.to_string(),
            density_num: self.density.numer().to_string(),
            density_den: self.density.denom().to_string(),
            log2_density: self.log2_density.is_finite().then_some(self.log2_density),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomCountJson {
    pub pattern: Option<Vec<usize>>,
    pub pattern_size: usize,
    pub n: usize,
    pub count: String,
    pub density_num: String,
    pub density_den: String,
    /// `null` when the count is zero.
    pub log2_density: Option<f64>,
}

/// Monte-Carlo estimate of a homomorphism density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub pattern: Vec<usize>,
    pub n: usize,
    pub samples: u64,
    pub successes: u64,
    pub point: f64,
    /// 99% normal-approximation half-width.
    pub half_width: f64,
    pub seed: u64,
}

impl DensityEstimate {
    pub fn lower(&self) -> f64 {
        (self.point - self.half_width).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        (self.point + self.half_width).min(1.0)
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.point - value).abs() <= self.half_width
    }
}
