//! Taylor expansions `G(x₀+y, x₀+y−v)` of squared distances as polynomials in
//! `y` (slots `0..n`) and `v` (slots `n..2n`).

use maglab_core::{Poly, Trunc, C64};

/// Truncation for a distance expansion: `y`-jets through `jet_order` and
/// `v`-degree through `j_max`.
pub fn expansion_trunc(dim: usize, jet_order: u32, j_max: usize) -> Trunc {
    Trunc::group(0..dim, jet_order).with_group(dim..2 * dim, j_max as u32)
}

/// The substitution `y ↦ y − v` on `2n`-variable polynomials.
fn shift_subs(dim: usize) -> Vec<Poly> {
    let nv = 2 * dim;
    let mut subs = Vec::with_capacity(nv);
    for i in 0..dim {
        subs.push(Poly::var(nv, i).sub(&Poly::var(nv, dim + i)));
    }
    for i in 0..dim {
        subs.push(Poly::var(nv, dim + i));
    }
    subs
}

/// `|F(x₀+y) − F(x₀+y−v)|²` for an embedding given by Taylor polynomials of
/// its components in `y`.
///
/// The components must be exact through total degree `jet_order + j_max`.
pub fn embedding_expansion(components: &[Poly], dim: usize, jet_order: u32, j_max: usize) -> Poly {
    let total = Trunc::total(jet_order + j_max as u32);
    let t = expansion_trunc(dim, jet_order, j_max);
    let subs = shift_subs(dim);
    let mut g = Poly::zero(2 * dim);
    for f in components {
        let f = f.truncate(&total);
        let d = f.sub(&f.compose(&subs, &total));
        g.add_assign_scaled(&d.mul(&d, &t), C64::new(1.0, 0.0));
    }
    g
}

/// `Γ^k_{ij}(y)` from a metric `g_{ij}(y)` through `order`.
pub fn christoffel(metric: &[Vec<Poly>], order: u32) -> Vec<Vec<Vec<Poly>>> {
    let n = metric.len();
    let nv = metric[0][0].nvars();
    let t = Trunc::group(0..n, order).with_group(n..nv, 0);
    let m: Vec<Vec<Poly>> = metric.iter().map(|r| r.iter().map(|p| p.truncate(&Trunc::group(0..n, order + 1))).collect()).collect();
    let inv = maglab_symbols::chart::poly_matrix_inverse(&m, &t, order).expect("positive definite metric");
    let mut gamma = vec![vec![vec![Poly::zero(nv); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            // Γ_{l,ij} = ½(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})
            let lower: Vec<Poly> = (0..n)
                .map(|l| {
                    m[j][l].deriv(i).add(&m[i][l].deriv(j)).sub(&m[i][j].deriv(l)).scale_re(0.5).truncate(&t)
                })
                .collect();
            for k in 0..n {
                let mut s = Poly::zero(nv);
                for l in 0..n {
                    s.add_assign_scaled(&inv[k][l].mul(&lower[l], &t), C64::new(1.0, 0.0));
                }
                gamma[k][i][j] = s;
            }
        }
    }
    gamma
}

/// `exp_{x₀+y}(u) − (x₀+y)` as polynomials in `y` and `u` (slots `n..2n`),
/// through `u`-degree `max_deg`.
///
/// With `w(u) = exp(u) − x`, the geodesic equation becomes
/// `E(E−1)w = −Γ(x+w)(Ew, Ew)` for the Euler operator `E = u·∂_u`, which
/// determines the degree-`m` part of `w` from lower degrees.
pub fn exponential_series(gamma: &[Vec<Vec<Poly>>], jet_order: u32, max_deg: usize) -> Vec<Poly> {
    let n = gamma.len();
    let nv = 2 * n;
    let t = Trunc::group(0..n, jet_order).with_group(n..nv, max_deg as u32);
    let mut w: Vec<Poly> = (0..n).map(|i| Poly::var(nv, n + i)).collect();
    for m in 2..=max_deg {
        // Γ(x + w) with w known through degree m − 1
        let mut subs: Vec<Poly> = (0..n).map(|i| Poly::var(nv, i).add(&w[i])).collect();
        for i in 0..n {
            subs.push(Poly::var(nv, n + i));
        }
        let ew: Vec<Poly> = w.iter().map(|p| euler(p, n)).collect();
        let mut next = w.clone();
        for k in 0..n {
            let mut rhs = Poly::zero(nv);
            for i in 0..n {
                for j in 0..n {
                    if gamma[k][i][j].is_empty() {
                        continue;
                    }
                    let g = gamma[k][i][j].compose(&subs, &t);
                    rhs.add_assign_scaled(&g.mul(&ew[i], &t).mul(&ew[j], &t), C64::new(1.0, 0.0));
                }
            }
            let part = rhs.part_with_degree(n..nv, m as u32);
            next[k].add_assign_scaled(&part, C64::new(-1.0 / (m * (m - 1)) as f64, 0.0));
        }
        w = next;
    }
    w
}

fn euler(p: &Poly, n: usize) -> Poly {
    let mut r = Poly::zero(p.nvars());
    for (m, c) in p.terms() {
        let d = m.degree_in(n..2 * n);
        if d > 0 {
            r.add_term(*m, c * d as f64);
        }
    }
    r
}

/// `X_x(v) = exp_x⁻¹(x − v)` from the exponential series, through
/// `v`-degree `j_max − 1`.
///
/// Solves `u = −v − Σ_{k≥2} w_k(u)` by fixed-point iteration; each pass fixes
/// one more degree.
pub fn inverse_exponential(w: &[Poly], jet_order: u32, j_max: usize) -> Vec<Poly> {
    let n = w.len();
    let nv = 2 * n;
    let t = expansion_trunc(n, jet_order, j_max);
    let higher: Vec<Poly> = w.iter().enumerate().map(|(i, p)| p.sub(&Poly::var(nv, n + i))).collect();
    let mut u: Vec<Poly> = (0..n).map(|i| Poly::var(nv, n + i).scale_re(-1.0)).collect();
    for _ in 1..j_max {
        let mut subs: Vec<Poly> = (0..n).map(|i| Poly::var(nv, i)).collect();
        subs.extend(u.iter().cloned());
        u = (0..n)
            .map(|i| Poly::var(nv, n + i).scale_re(-1.0).sub(&higher[i].compose(&subs, &t)))
            .collect();
    }
    u
}

/// `d²_geo(x₀+y, x₀+y−v) = |X_x(v)|²_{g(x)}` from Christoffel symbols and a
/// metric, both exact through total degree `jet_order + j_max`.
pub fn geodesic_expansion_from(
    gamma: &[Vec<Vec<Poly>>],
    metric: &[Vec<Poly>],
    jet_order: u32,
    j_max: usize,
) -> Poly {
    let n = metric.len();
    let w = exponential_series(gamma, jet_order, j_max);
    let u = inverse_exponential(&w, jet_order, j_max);
    let t = expansion_trunc(n, jet_order, j_max);
    let mut g = Poly::zero(2 * n);
    for a in 0..n {
        for b in 0..n {
            let ab = metric[a][b].truncate(&t);
            g.add_assign_scaled(&ab.mul(&u[a], &t).mul(&u[b], &t), C64::new(1.0, 0.0));
        }
    }
    g
}

/// `d²_geo` from a metric exact through total degree `jet_order + j_max + 1`.
pub fn geodesic_expansion(metric: &[Vec<Poly>], jet_order: u32, j_max: usize) -> Poly {
    let gamma = christoffel(metric, jet_order + j_max as u32);
    geodesic_expansion_from(&gamma, metric, jet_order, j_max)
}

/// `arccos(1−δ)² = 2 Σ_{k≥1} (2δ)^k / (k² C(2k,k))` applied to a polynomial
/// `δ` without constant term.
pub fn arccos_sq_series(delta: &Poly, trunc: &Trunc, terms: usize) -> Poly {
    let mut coeffs = vec![C64::new(0.0, 0.0)];
    let mut binom = 1.0;
    for k in 1..=terms {
        binom *= (2 * k * (2 * k - 1)) as f64 / (k * k) as f64;
        coeffs.push(C64::new(2.0 * 2f64.powi(k as i32) / ((k * k) as f64 * binom), 0.0));
    }
    delta.apply_series(&coeffs, trunc)
}
