//! Reductions over per-cell data.
//!
//! `Deterministic` splits the input into fixed-size chunks, sums each chunk
//! sequentially and folds the partial sums in index order, so the result is
//! bit-identical for any thread count.

use nalgebra::Vector3;
use rayon::prelude::*;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReductionOrder {
    #[default]
    Deterministic,
    Unordered,
}

impl ReductionOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionOrder::Deterministic => "deterministic",
            ReductionOrder::Unordered => "unordered",
        }
    }
}

pub fn sum_scalar<F>(n: usize, order: ReductionOrder, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    match order {
        ReductionOrder::Deterministic => {
            let partial: Vec<f64> = (0..n.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let hi = ((c + 1) * CHUNK).min(n);
                    (c * CHUNK..hi).map(&f).sum::<f64>()
                })
                .collect();
            partial.into_iter().sum()
        }
        ReductionOrder::Unordered => (0..n).into_par_iter().map(&f).sum(),
    }
}

pub fn sum_vec3<F>(n: usize, order: ReductionOrder, f: F) -> Vector3<f64>
where
    F: Fn(usize) -> Vector3<f64> + Sync,
{
    match order {
        ReductionOrder::Deterministic => {
            let partial: Vec<Vector3<f64>> = (0..n.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let hi = ((c + 1) * CHUNK).min(n);
                    (c * CHUNK..hi).map(&f).fold(Vector3::zeros(), |a, b| a + b)
                })
                .collect();
            partial.into_iter().fold(Vector3::zeros(), |a, b| a + b)
        }
        ReductionOrder::Unordered => (0..n)
            .into_par_iter()
            .map(&f)
            .reduce(Vector3::zeros, |a, b| a + b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_agree_to_rounding() {
        let f = |i: usize| ((i as f64) * 0.37).sin();
        let a = sum_scalar(100_000, ReductionOrder::Deterministic, f);
        let b = sum_scalar(100_000, ReductionOrder::Unordered, f);
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn deterministic_is_repeatable() {
        let f = |i: usize| Vector3::new((i as f64).cos(), 1e-8 * i as f64, 1.0 / (1.0 + i as f64));
        let a = sum_vec3(50_001, ReductionOrder::Deterministic, f);
        let b = sum_vec3(50_001, ReductionOrder::Deterministic, f);
        assert_eq!(a, b);
    }
}
