//! Dense symmetric positive-definite solves.
//!
//! Matrices are square, row-major `Vec<f64>`. The factorization is a
//! right-looking blocked Cholesky whose panel solve and trailing update are
//! data-parallel over rows.

use crate::error::OracleError;

/// Whether the hot loops may use the thread pool.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

const BLOCK: usize = 64;

/// Applies `f(row_index, row)` to rows `start..` of an `n`-column matrix.
pub(crate) fn for_rows<F>(a: &mut [f64], n: usize, start: usize, par: Parallelism, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let rows = &mut a[start * n..];
    #[cfg(feature = "parallel")]
    if par == Parallelism::Parallel {
        use rayon::prelude::*;
        rows.par_chunks_mut(n).enumerate().for_each(|(i, r)| f(start + i, r));
        return;
    }
    let _ = par;
    rows.chunks_mut(n).enumerate().for_each(|(i, r)| f(start + i, r));
}

/// `Σ a_i b_i` with four accumulators.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Overwrites the lower triangle of `a` with `L`, where `a = L Lᵀ`. Only the
/// lower triangle of the input is read.
pub fn cholesky_in_place(a: &mut [f64], n: usize, par: Parallelism) -> Result<(), OracleError> {
    assert_eq!(a.len(), n * n, "matrix is not {n}×{n}");
    let mut kb = 0;
    while kb < n {
        let ke = (kb + BLOCK).min(n);
        let w = ke - kb;
        // diagonal block
        for j in kb..ke {
            let d = a[j * n + j] - dot(&a[j * n + kb..j * n + j], &a[j * n + kb..j * n + j]);
            if !(d > 0.0 && d.is_finite()) {
                return Err(OracleError::NotPositiveDefinite { index: j, pivot: d });
            }
            let d = d.sqrt();
            a[j * n + j] = d;
            for i in j + 1..ke {
                let s = a[i * n + j] - dot(&a[i * n + kb..i * n + j], &a[j * n + kb..j * n + j]);
                a[i * n + j] = s / d;
            }
        }
        if ke == n {
            break;
        }
        let diag: Vec<f64> = (kb..ke).flat_map(|j| a[j * n + kb..j * n + ke].to_vec()).collect();
        // panel: L_ik = A_ik L_kkᵀ⁻¹
        for_rows(a, n, ke, par, |_, row| {
            for j in 0..w {
                let s = row[kb + j] - dot(&row[kb..kb + j], &diag[j * w..j * w + j]);
                row[kb + j] = s / diag[j * w + j];
            }
        });
        let panel: Vec<f64> = (ke..n).flat_map(|i| a[i * n + kb..i * n + ke].to_vec()).collect();
        // trailing update of the lower triangle
        for_rows(a, n, ke, par, |i, row| {
            let pi = &panel[(i - ke) * w..(i - ke + 1) * w];
            for j in ke..=i {
                row[j] -= dot(pi, &panel[(j - ke) * w..(j - ke + 1) * w]);
            }
        });
        kb = ke;
    }
    Ok(())
}

/// Solves `L Lᵀ x = b` given the factor from [`cholesky_in_place`].
pub fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for i in 0..n {
        x[i] = (x[i] - dot(&l[i * n..i * n + i], &x[..i])) / l[i * n + i];
    }
    for i in (0..n).rev() {
        x[i] /= l[i * n + i];
        let xi = x[i];
        for k in 0..i {
            x[k] -= l[i * n + k] * xi;
        }
    }
    x
}

/// Smallest diagonal entry of `L`, squared: a cheap positivity margin.
pub fn min_pivot(l: &[f64], n: usize) -> f64 {
    (0..n).map(|i| l[i * n + i] * l[i * n + i]).fold(f64::INFINITY, f64::min)
}

/// Factors a symmetric matrix and solves `A x = b` with up to two steps of
/// iterative refinement against `apply(x) = A x`. Returns `x` and the final
/// residual `‖A x − b‖_∞ / max(1, ‖b‖_∞)`.
pub fn spd_solve<F>(mut a: Vec<f64>, n: usize, b: &[f64], par: Parallelism, apply: F) -> Result<(Vec<f64>, f64), OracleError>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    cholesky_in_place(&mut a, n, par)?;
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut x = cholesky_solve(&a, n, b);
    let mut resid = f64::INFINITY;
    for step in 0..3 {
        let ax = apply(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        resid = r.iter().fold(0.0f64, |m, v| m.max(v.abs())) / scale;
        if resid < 1e-14 || step == 2 {
            break;
        }
        let dx = cholesky_solve(&a, n, &r);
        x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
    }
    Ok((x, resid))
}

/// `y = A x` for a dense symmetric matrix stored in full.
pub fn sym_matvec(a: &[f64], n: usize, x: &[f64], par: Parallelism) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for_rows(&mut y, 1, 0, par, |i, yi| yi[0] = dot(&a[i * n..(i + 1) * n], x));
    y
}
