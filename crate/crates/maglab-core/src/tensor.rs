//! Symmetric multilinear forms and their base-point jets.

use std::collections::BTreeMap;

use crate::poly::{Mono, Poly, C64};

/// A symmetric `k`-linear form on `ℝⁿ`, stored densely over sorted indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, f64>,
}

fn sorted_indices(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(degree);
    fn rec(dim: usize, degree: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == degree {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, degree, i, cur, out);
            cur.pop();
        }
    }
    rec(dim, degree, 0, &mut cur, &mut out);
    out
}

fn exponents(idx: &[usize]) -> Mono {
    let mut m = Mono::one();
    for &i in idx {
        m.0[i] += 1;
    }
    m
}

/// Number of distinct orderings of a sorted index tuple.
fn multiplicity(idx: &[usize]) -> f64 {
    let k = idx.len();
    let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
    fact(k) / exponents(idx).factorial()
}

impl SymTensor {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        let coeffs = sorted_indices(dim, degree).into_iter().map(|i| (i, 0.0)).collect();
        SymTensor { dim, degree, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Component at an arbitrary (not necessarily sorted) index tuple.
    pub fn get(&self, idx: &[usize]) -> f64 {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.coeffs.get(&s).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.coeffs.insert(s, v);
    }

    /// Reads the real part of a homogeneous polynomial `T(v,…,v)` in the
    /// variables `offset..offset+dim` of `p`.
    pub fn from_poly(p: &Poly, offset: usize, dim: usize, degree: usize) -> Self {
        let mut t = SymTensor::zeros(dim, degree);
        for idx in sorted_indices(dim, degree) {
            let mut m = Mono::one();
            for &i in &idx {
                m.0[offset + i] += 1;
            }
            let c = p.coeff(&m).re / multiplicity(&idx);
            t.coeffs.insert(idx, c);
        }
        t
    }

    /// The polynomial `v ↦ T(v,…,v)` in variables `offset..offset+dim`.
    pub fn to_poly(&self, nvars: usize, offset: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        for (idx, c) in &self.coeffs {
            let mut m = Mono::one();
            for &i in idx {
                m.0[offset + i] += 1;
            }
            p.add_term(m, C64::new(c * multiplicity(idx), 0.0));
        }
        p
    }

    /// `T(v, …, v)`.
    pub fn eval(&self, v: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(idx, c)| c * multiplicity(idx) * idx.iter().map(|&i| v[i]).product::<f64>())
            .sum()
    }

    /// `T(a₁, …, a_k)` for arbitrary vectors.
    pub fn eval_multi(&self, args: &[&[f64]]) -> f64 {
        assert_eq!(args.len(), self.degree);
        let mut total = 0.0;
        let mut idx = vec![0usize; self.degree];
        loop {
            let w: f64 = idx.iter().enumerate().map(|(s, &i)| args[s][i]).product();
            total += w * self.get(&idx);
            let mut pos = 0;
            loop {
                if pos == self.degree {
                    return total;
                }
                idx[pos] += 1;
                if idx[pos] < self.dim {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Contraction of the first two slots with a symmetric matrix.
    pub fn contract_matrix(&self, a: &[Vec<f64>]) -> SymTensor {
        assert!(self.degree >= 2);
        let mut out = SymTensor::zeros(self.dim, self.degree - 2);
        let keys: Vec<Vec<usize>> = out.coeffs.keys().cloned().collect();
        for rest in keys {
            let mut s = 0.0;
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let mut idx = vec![i, j];
                    idx.extend_from_slice(&rest);
                    s += a[i][j] * self.get(&idx);
                }
            }
            out.coeffs.insert(rest, s);
        }
        out
    }

    /// Contraction of the first slot with a vector.
    pub fn contract_vector(&self, w: &[f64]) -> SymTensor {
        assert!(self.degree >= 1);
        let mut out = SymTensor::zeros(self.dim, self.degree - 1);
        let keys: Vec<Vec<usize>> = out.coeffs.keys().cloned().collect();
        for rest in keys {
            let mut s = 0.0;
            for i in 0..self.dim {
                let mut idx = vec![i];
                idx.extend_from_slice(&rest);
                s += w[i] * self.get(&idx);
            }
            out.coeffs.insert(rest, s);
        }
        out
    }

    pub fn scalar(&self) -> f64 {
        assert_eq!(self.degree, 0);
        self.coeffs.values().next().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// A symmetric tensor field known through its Taylor jet at a base point.
#[derive(Clone, Debug, PartialEq)]
pub struct JetTensor {
    pub base: SymTensor,
    /// Keyed by the exponent vector of the `x`-derivative (`α ≠ 0`).
    pub x_derivatives: BTreeMap<Mono, SymTensor>,
    pub jet_order: u32,
}

impl JetTensor {
    /// Extracts a jet from a polynomial in variables `x: 0..dim` and
    /// `v: dim..2·dim`, homogeneous of degree `degree` in `v`.
    pub fn from_poly(p: &Poly, dim: usize, degree: usize, jet_order: u32) -> Self {
        let mut by_alpha: BTreeMap<Mono, Poly> = BTreeMap::new();
        for (m, c) in p.terms() {
            if m.degree_in(dim..2 * dim) as usize != degree || m.degree_in(0..dim) > jet_order {
                continue;
            }
            let mut alpha = Mono::one();
            let mut rest = *m;
            for i in 0..dim {
                alpha.0[i] = m.0[i];
                rest.0[i] = 0;
            }
            by_alpha
                .entry(alpha)
                .or_insert_with(|| Poly::zero(p.nvars()))
                .add_term(rest, *c * alpha.factorial());
        }
        let base = by_alpha
            .remove(&Mono::one())
            .map(|q| SymTensor::from_poly(&q, dim, dim, degree))
            .unwrap_or_else(|| SymTensor::zeros(dim, degree));
        let x_derivatives = by_alpha
            .into_iter()
            .map(|(a, q)| (a, SymTensor::from_poly(&q, dim, dim, degree)))
            .collect();
        JetTensor { base, x_derivatives, jet_order }
    }

    /// The Taylor polynomial `Σ_α (x^α/α!) ∂_x^α T(v,…,v)` with `x` in
    /// variables `0..dim` and `v` in `dim..2·dim`.
    pub fn to_poly(&self, nvars: usize) -> Poly {
        let dim = self.base.dim();
        let mut out = self.base.to_poly(nvars, dim);
        for (alpha, t) in &self.x_derivatives {
            let tp = t.to_poly(nvars, dim);
            let scale = 1.0 / alpha.factorial();
            for (m, c) in tp.terms() {
                out.add_term(m.mul(alpha), c * scale);
            }
        }
        out
    }

    /// The derivative `∂_x^α T` at the base point.
    pub fn derivative(&self, alpha: &Mono) -> Option<&SymTensor> {
        if alpha.degree() == 0 {
            Some(&self.base)
        } else {
            self.x_derivatives.get(alpha)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_roundtrip_and_contractions() {
        // T(v) = v0^2 v1 as a symmetric 3-tensor on R^2
        let mut p = Poly::zero(2);
        p.add_term(Mono::from_exps(&[2, 1]), C64::new(1.0, 0.0));
        let t = SymTensor::from_poly(&p, 0, 2, 3);
        assert!((t.eval(&[2.0, 3.0]) - 12.0).abs() < 1e-14);
        assert!((t.get(&[1, 0, 0]) - 1.0 / 3.0).abs() < 1e-14);
        let back = t.to_poly(2, 0);
        assert!(back.sub(&p).max_abs() < 1e-14);
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let c = t.contract_matrix(&id);
        // trace over the first two slots: T_{00k} + T_{11k}
        assert!((c.get(&[1]) - 1.0 / 3.0).abs() < 1e-14);
        assert!((c.get(&[0]) - 0.0).abs() < 1e-14);
        let w = t.contract_vector(&[1.0, 0.0]);
        assert!((w.eval(&[1.0, 1.0]) - (0.0 + 2.0 / 3.0 + 0.0)).abs() < 1e-14);
        let args: [&[f64]; 3] = [&[2.0, 3.0], &[2.0, 3.0], &[2.0, 3.0]];
        assert!((t.eval_multi(&args) - 12.0).abs() < 1e-12);
    }
}
