//! Positive-definiteness scans of `(e^{−R d_ij})`.

use serde::{Deserialize, Serialize};

use crate::linalg::{cholesky_in_place, min_pivot, Parallelism};
use crate::space::FiniteSpace;

/// Outcome of one Cholesky attempt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdEntry {
    pub r: f64,
    pub positive_definite: bool,
    /// Smallest squared pivot on success; the failing pivot otherwise.
    pub pivot: f64,
    /// Bisection estimate of the smallest eigenvalue, on failure only.
    pub min_eigenvalue: Option<f64>,
}

fn is_pd(k: &[f64], n: usize, shift: f64, par: Parallelism) -> bool {
    let mut a = k.to_vec();
    for i in 0..n {
        a[i * n + i] += shift;
    }
    cholesky_in_place(&mut a, n, par).is_ok()
}

/// `λ_min` of a symmetric matrix known to be indefinite, to about `1e-10`
/// relative to its row-sum bound, by bisection on `A + σI ≻ 0`.
fn smallest_eigenvalue(k: &[f64], n: usize, par: Parallelism) -> f64 {
    let bound = (0..n).map(|i| k[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0, bound + 1.0);
    while hi - lo > 1e-10 * bound.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if is_pd(k, n, mid, par) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    -0.5 * (lo + hi)
}

/// Attempts a Cholesky factorization of `(e^{−R d_ij})` for each `R`.
/// Failures are data, not errors.
pub fn pd_probe(space: &FiniteSpace, r_list: &[f64]) -> Vec<PdEntry> {
    pd_probe_with(space, r_list, Parallelism::default())
}

pub fn pd_probe_with(space: &FiniteSpace, r_list: &[f64], par: Parallelism) -> Vec<PdEntry> {
    let n = space.len();
    r_list
        .iter()
        .map(|&r| {
            let k = space.kernel(r, par);
            let mut l = k.clone();
            let entry = match cholesky_in_place(&mut l, n, par) {
                Ok(()) => PdEntry { r, positive_definite: true, pivot: min_pivot(&l, n), min_eigenvalue: None },
                Err(crate::OracleError::NotPositiveDefinite { pivot, .. }) => PdEntry {
                    r,
                    positive_definite: false,
                    pivot,
                    min_eigenvalue: Some(smallest_eigenvalue(&k, n, par)),
                },
                Err(e) => unreachable!("cholesky only reports pivots: {e}"),
            };
            if !entry.positive_definite {
                log::warn!("kernel not positive definite at R = {r} (λ_min ≈ {:?})", entry.min_eigenvalue);
            }
            entry
        })
        .collect()
}
