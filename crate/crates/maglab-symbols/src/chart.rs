//! Taylor data of a squared distance `G(x, x−v)` at one base point.
//!
//! Polynomials here use the variables `y = x − x₀` in slots `0..n` and the
//! fibre variable (`v` or `ξ`) in slots `n..2n`.

use std::collections::BTreeMap;

use maglab_core::{JetTensor, Mono, Poly, Trunc, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SymbolError;

/// Taylor model `G(x, x−v) = H(x)(v,v) + Σ_{j≥3} C^{(j)}(x; v)` with `x`-jets.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorModelChart {
    pub dim: usize,
    /// The dual metric `g = H⁻¹` as a quadratic form in `ξ`.
    pub metric_dual: JetTensor,
    /// The transversal Hessian `H` as a quadratic form in `v`.
    pub metric: JetTensor,
    /// `C^{(j)}` for `3 ≤ j ≤ j_max`.
    pub taylor_c: BTreeMap<usize, JetTensor>,
    pub jet_order: u32,
}

/// Truncation keeping `y`-jets through `order` in a `2n`-variable polynomial.
pub fn y_trunc(dim: usize, order: u32) -> Trunc {
    Trunc::group(0..dim, order)
}

impl TaylorModelChart {
    /// Splits a polynomial `G(y, v)` into its `v`-homogeneous parts.
    ///
    /// `y`-jets beyond `jet_order` and `v`-degrees beyond `j_max` are dropped.
    pub fn from_expansion(
        dim: usize,
        expansion: &Poly,
        jet_order: u32,
        j_max: usize,
    ) -> Result<Self, SymbolError> {
        assert_eq!(expansion.nvars(), 2 * dim, "expansion must use 2n variables");
        let h = expansion.part_with_degree(dim..2 * dim, 2);
        let metric = JetTensor::from_poly(&h, dim, 2, jet_order);
        let h0 = matrix_of(&metric.base.to_poly(2 * dim, dim), dim);
        if cholesky(&h0).is_none() {
            return Err(SymbolError::NotPositiveDefinite);
        }
        let g = dual_poly_of(&h, dim, jet_order);
        let metric_dual = JetTensor::from_poly(&g, dim, 2, jet_order);
        let mut taylor_c = BTreeMap::new();
        for j in 3..=j_max {
            let c = expansion.part_with_degree(dim..2 * dim, j as u32);
            taylor_c.insert(j, JetTensor::from_poly(&c, dim, j, jet_order));
        }
        Ok(TaylorModelChart { dim, metric_dual, metric, taylor_c, jet_order })
    }

    /// The Euclidean chart `G = |v|²`.
    pub fn flat(dim: usize, jet_order: u32, j_max: usize) -> Self {
        let mut g = Poly::zero(2 * dim);
        for i in 0..dim {
            g.add_term(Mono::var(dim + i).mul(&Mono::var(dim + i)), C64::new(1.0, 0.0));
        }
        Self::from_expansion(dim, &g, jet_order, j_max).expect("identity is positive definite")
    }

    /// Largest stored Taylor degree (2 if only the metric is known).
    pub fn j_max(&self) -> usize {
        self.taylor_c.keys().next_back().copied().unwrap_or(2)
    }

    /// Checks that the chart carries enough data for expansion order `order`.
    pub fn require(&self, order: u32) -> Result<(), SymbolError> {
        if self.jet_order < order {
            return Err(SymbolError::JetShortfall { have: self.jet_order, need: order });
        }
        for j in 3..=order as usize + 2 {
            if !self.taylor_c.contains_key(&j) {
                return Err(SymbolError::MissingTaylor(j));
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        2 * self.dim
    }

    /// `H(y)(v,v)`.
    pub fn metric_poly(&self) -> Poly {
        self.metric.to_poly(self.nvars())
    }

    /// `g(y)(ξ,ξ)`.
    pub fn dual_poly(&self) -> Poly {
        self.metric_dual.to_poly(self.nvars())
    }

    /// `C^{(j)}(y; v)`, zero when not stored.
    pub fn c_poly(&self, j: usize) -> Poly {
        self.taylor_c
            .get(&j)
            .map(|t| t.to_poly(self.nvars()))
            .unwrap_or_else(|| Poly::zero(self.nvars()))
    }

    /// The full stored expansion `H + Σ C^{(j)}`.
    pub fn expansion_poly(&self) -> Poly {
        let mut p = self.metric_poly();
        for j in self.taylor_c.keys() {
            p.add_assign_scaled(&self.c_poly(*j), C64::new(1.0, 0.0));
        }
        p
    }

    /// The Riemannian density `√det H(y)` relative to Lebesgue measure.
    pub fn density_poly(&self) -> Poly {
        let t = y_trunc(self.dim, self.jet_order).with_group(self.dim..2 * self.dim, 0);
        let m = poly_matrix_of(&self.metric_poly(), self.dim);
        poly_det(&m, &t).sqrt(&t)
    }

    pub fn base_metric(&self) -> Vec<Vec<f64>> {
        matrix_of(&self.metric.base.to_poly(self.nvars(), self.dim), self.dim)
    }

    pub fn base_dual(&self) -> Vec<Vec<f64>> {
        matrix_of(&self.metric_dual.base.to_poly(self.nvars(), self.dim), self.dim)
    }
}

/// Entries `M_ij(y)` of a quadratic form `Σ M_ij(y) v_i v_j` in slots `n..2n`.
pub fn poly_matrix_of(q: &Poly, dim: usize) -> Vec<Vec<Poly>> {
    let nv = q.nvars();
    let mut m = vec![vec![Poly::zero(nv); dim]; dim];
    for (mono, c) in q.terms() {
        if mono.degree_in(dim..2 * dim) != 2 {
            continue;
        }
        let idx: Vec<usize> = (0..dim).filter(|&i| mono.0[dim + i] > 0).collect();
        let mut ymono = *mono;
        for i in 0..dim {
            ymono.0[dim + i] = 0;
        }
        if idx.len() == 1 {
            m[idx[0]][idx[0]].add_term(ymono, *c);
        } else {
            m[idx[0]][idx[1]].add_term(ymono, c * 0.5);
            m[idx[1]][idx[0]].add_term(ymono, c * 0.5);
        }
    }
    m
}

/// The real base-point matrix of a quadratic form.
pub fn matrix_of(q: &Poly, dim: usize) -> Vec<Vec<f64>> {
    poly_matrix_of(q, dim)
        .iter()
        .map(|row| row.iter().map(|p| p.constant_term().re).collect())
        .collect()
}

/// Lower Cholesky factor, or `None` if the matrix is not positive definite.
pub fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Inverse of a small dense symmetric positive definite matrix.
pub fn spd_inverse(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let l = cholesky(a)?;
    let mut inv = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut z = vec![0.0; n];
        for i in 0..n {
            let b = if i == col { 1.0 } else { 0.0 };
            z[i] = (b - (0..i).map(|k| l[i][k] * z[k]).sum::<f64>()) / l[i][i];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| l[k][i] * inv[k][col]).sum();
            inv[i][col] = (z[i] - s) / l[i][i];
        }
    }
    Some(inv)
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>], t: &Trunc) -> Vec<Vec<Poly>> {
    let n = a.len();
    let nv = a[0][0].nvars();
    let mut c = vec![vec![Poly::zero(nv); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if a[i][k].is_empty() || b[k][j].is_empty() {
                    continue;
                }
                let p = a[i][k].mul(&b[k][j], t);
                c[i][j].add_assign_scaled(&p, C64::new(1.0, 0.0));
            }
        }
    }
    c
}

/// `H(y)⁻¹` by the Neumann series about the base point.
pub fn poly_matrix_inverse(m: &[Vec<Poly>], t: &Trunc, order: u32) -> Option<Vec<Vec<Poly>>> {
    let n = m.len();
    let nv = m[0][0].nvars();
    let m0: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|p| p.constant_term().re).collect()).collect();
    let inv0 = spd_inverse(&m0)?;
    let inv0p: Vec<Vec<Poly>> =
        inv0.iter().map(|r| r.iter().map(|&v| Poly::real(nv, v)).collect()).collect();
    // E = M − M₀, step = −M₀⁻¹ E
    let e: Vec<Vec<Poly>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|p| {
                    let mut q = p.clone();
                    q.add_term(Mono::one(), -p.constant_term());
                    q
                })
                .collect()
        })
        .collect();
    let step: Vec<Vec<Poly>> = mat_mul(&inv0p, &e, t)
        .into_iter()
        .map(|r| r.into_iter().map(|p| p.scale_re(-1.0)).collect())
        .collect();
    let mut term = inv0p.clone();
    let mut acc = inv0p;
    for _ in 0..order {
        term = mat_mul(&step, &term, t);
        for i in 0..n {
            for j in 0..n {
                acc[i][j].add_assign_scaled(&term[i][j], C64::new(1.0, 0.0));
            }
        }
    }
    Some(acc)
}

/// Determinant by cofactor expansion; adequate for the small dimensions used.
pub fn poly_det(m: &[Vec<Poly>], t: &Trunc) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let nv = m[0][0].nvars();
    let mut out = Poly::zero(nv);
    for col in 0..n {
        if m[0][col].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        let p = m[0][col].mul(&poly_det(&minor, t), t);
        out.add_assign_scaled(&p, C64::new(sign, 0.0));
    }
    out
}

/// The quadratic form `g(y)(ξ,ξ)` dual to `H(y)(v,v)`.
pub fn dual_poly_of(h: &Poly, dim: usize, jet_order: u32) -> Poly {
    let t = y_trunc(dim, jet_order);
    let m = poly_matrix_of(h, dim);
    let inv = poly_matrix_inverse(&m, &t, jet_order).expect("positive definite metric");
    let mut g = Poly::zero(h.nvars());
    for i in 0..dim {
        for j in 0..dim {
            let mut mono = Mono::var(dim + i);
            mono.0[dim + j] += 1;
            for (ym, c) in inv[i][j].terms() {
                g.add_term(ym.mul(&mono), *c);
            }
        }
    }
    g
}

/// A seeded random Taylor model: a perturbed positive definite metric with
/// `y`-dependence and dense random `C^{(j)}` for `3 ≤ j ≤ j_max`.
///
/// The result need not come from an actual distance function, which makes it
/// a stronger test of the algebra than any geometric model.
pub fn random_chart(dim: usize, jet_order: u32, j_max: usize, seed: u64) -> TaylorModelChart {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = 2 * dim;
    let mut g = Poly::zero(nv);
    let ymonos = monomials(0, dim, jet_order);
    for i in 0..dim {
        for j in i..dim {
            let mut vm = Mono::var(dim + i);
            vm.0[dim + j] += 1;
            for ym in &ymonos {
                let scale = if ym.degree() == 0 {
                    if i == j {
                        1.0 + 0.2 * rng.gen::<f64>()
                    } else {
                        0.3 / dim as f64 * rng.gen_range(-1.0..1.0)
                    }
                } else {
                    0.25 * rng.gen_range(-1.0..1.0)
                };
                g.add_term(ym.mul(&vm), C64::new(scale, 0.0));
            }
        }
    }
    for j in 3..=j_max {
        for vm in monomials(dim, dim, j as u32).into_iter().filter(|m| m.degree() == j as u32) {
            for ym in &ymonos {
                let c = 0.3 * rng.gen_range(-1.0..1.0) / (1.0 + ym.degree() as f64);
                g.add_term(ym.mul(&vm), C64::new(c, 0.0));
            }
        }
    }
    TaylorModelChart::from_expansion(dim, &g, jet_order, j_max).expect("diagonally dominant metric")
}

/// All monomials in variables `offset..offset+count` of degree at most `max`.
pub fn monomials(offset: usize, count: usize, max: u32) -> Vec<Mono> {
    let mut out = vec![Mono::one()];
    for i in 0..count {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=(max - m.degree()) {
                let mut mm = *m;
                mm.0[offset + i] = e as u8;
                next.push(mm);
            }
        }
        out = next;
    }
    out.sort();
    out
}
