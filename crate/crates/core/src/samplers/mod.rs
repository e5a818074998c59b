//! Exact uniform samplers over bounded-deviation families, and the sample
//! count needed for uniform convergence.
//!
//! Each sampler fills a table of exact counts `N(., k)` (number of completions
//! using exactly `k` units of deviation from a reference structure) and then
//! draws by walking the table with probabilities proportional to counts.

pub mod grouped;
pub mod tree;
pub mod walk;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};

pub use grouped::{build_group_table, GroupedTable};
pub use tree::{build_tree_table, ChildRule, RootedTree, TreeTable};
pub use walk::{build_walk_table, RoadGraph, Walk, WalkTable};

/// `ceil(c * (n + ln(1/delta)) / alpha^2)`.
pub fn sample_size(n: usize, alpha: f64, delta: f64, c: f64) -> u64 {
    assert!(alpha > 0.0 && alpha <= 1.0 && delta > 0.0 && delta <= 1.0 && c > 0.0);
    (c * (n as f64 + (1.0 / delta).ln()) / (alpha * alpha)).ceil() as u64
}

pub(crate) fn check_budget(d_star: i64) -> Result<usize> {
    usize::try_from(d_star)
        .map_err(|_| Error::Sampler(format!("deviation budget {d_star} is negative")))
}

/// Index `i` drawn with probability `weights[i] / sum(weights)`.
pub(crate) fn pick<R: Rng + ?Sized>(rng: &mut R, weights: &[BigUint]) -> Result<usize> {
    let total: BigUint = weights.iter().sum();
    if total.is_zero() {
        return Err(Error::Sampler(
            "nothing to sample: total count is zero".into(),
        ));
    }
    let mut r = rng.gen_biguint_below(&total);
    for (i, w) in weights.iter().enumerate() {
        if r < *w {
            return Ok(i);
        }
        r -= w;
    }
    unreachable!("r < total")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_size_examples() {
        assert_eq!(sample_size(100, 0.1, 0.05, 1.0), 10300);
        assert_eq!(sample_size(7, 1.0, 1.0, 1.0), 7);
        let a = sample_size(1000, 0.2, 0.1, 1.0) as f64;
        let b = sample_size(2000, 0.2, 0.1, 1.0) as f64;
        assert!((b / a - 2.0).abs() < 0.01);
    }

    #[test]
    fn pick_respects_zero_weights() {
        let mut r = crate::rng::stream(1, 0);
        let w = [
            BigUint::from(0u32),
            BigUint::from(3u32),
            BigUint::from(0u32),
        ];
        for _ in 0..20 {
            assert_eq!(pick(&mut r, &w).unwrap(), 1);
        }
        assert!(pick(&mut r, &[BigUint::from(0u32)]).is_err());
    }
}
