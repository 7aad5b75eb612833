//! Big-integer helpers: logarithms, overflow-safe accumulation, surjection weights.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `log2(x)` for arbitrarily large `x`; negative infinity for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits");
    (top as f64).log2() + shift as f64
}

/// `log2` of a non-negative rational.
pub fn log2_ratio(r: &BigRational) -> f64 {
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    log2_biguint(num) - log2_biguint(den)
}

pub fn pow_biguint(base: usize, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// Sum of many `u128` terms that may overflow; spills into a `BigUint`.
#[derive(Clone, Debug, Default)]
pub struct BigAccumulator {
    low: u128,
    high: BigUint,
}

impl BigAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add_u128(&mut self, x: u128) {
        match self.low.checked_add(x) {
            Some(s) => self.low = s,
            None => {
                self.high += BigUint::from(self.low);
                self.low = x;
            }
        }
    }

    pub fn add_big(&mut self, x: &BigUint) {
        self.high += x;
    }

    /// Adds `weight * base^exp` without losing precision.
    #[inline]
    pub fn add_weighted_power(&mut self, weight: u128, base: u128, exp: u32) {
        let term = base.checked_pow(exp).and_then(|p| p.checked_mul(weight));
        match term {
            Some(t) => self.add_u128(t),
            None => {
                let t = num_traits::pow(BigUint::from(base), exp as usize) * BigUint::from(weight);
                self.high += t;
            }
        }
    }

    pub fn merge(mut self, other: BigAccumulator) -> Self {
        self.high += other.high;
        self.add_u128(other.low);
        self
    }

    pub fn finish(self) -> BigUint {
        self.high + BigUint::from(self.low)
    }
}

/// Number of surjections from a `k`-set onto a `j`-set, i.e. ordered
/// `k`-tuples whose set of distinct entries is a fixed `j`-set.
pub fn surjections(k: u32, j: u32) -> u128 {
    if j > k {
        return 0;
    }
    // Inclusion-exclusion: sum_i (-1)^i C(j,i) (j-i)^k.
    let mut total: i128 = 0;
    let mut binom: i128 = 1;
    for i in 0..=j {
        let term = binom * (j as i128 - i as i128).pow(k);
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * (j - i) as i128 / (i + 1) as i128;
    }
    total as u128
}

pub fn binomial2(n: usize) -> BigUint {
    BigUint::from(n) * BigUint::from(n.saturating_sub(1)) / 2u32
}

pub fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn ratio_pow(r: &BigRational, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_of_powers_of_two() {
        for e in [0u32, 1, 10, 63, 64, 65, 200] {
            let x = BigUint::one() << e;
            assert!((log2_biguint(&x) - e as f64).abs() < 1e-12);
        }
        assert_eq!(log2_biguint(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn surjection_table() {
        // k! S(k, j)
        assert_eq!(surjections(1, 1), 1);
        assert_eq!(surjections(2, 1), 1);
        assert_eq!(surjections(2, 2), 2);
        assert_eq!(surjections(3, 2), 6);
        assert_eq!(surjections(3, 3), 6);
        assert_eq!(surjections(4, 2), 14);
        assert_eq!(surjections(2, 3), 0);
        // sum_j C(n,j) surj(k,j) = n^k
        let n = 5u128;
        let total: u128 = (1..=4).map(|j| binom(n, j) * surjections(4, j as u32)).sum();
        assert_eq!(total, n.pow(4));
    }

    fn binom(n: u128, k: u128) -> u128 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn accumulator_spills() {
        let mut acc = BigAccumulator::new();
        acc.add_u128(u128::MAX);
        acc.add_u128(u128::MAX);
        acc.add_weighted_power(3, 1 << 70, 2);
        let expect = BigUint::from(u128::MAX) * 2u32 + (BigUint::one() << 140) * 3u32;
        assert_eq!(acc.finish(), expect);
    }
}
