//! Sparse multivariate polynomials with complex coefficients and truncation.
//!
//! One type serves every jet computation in the workspace: Taylor data of
//! distance functions, symbol coefficients in `(x, ξ)`, and root jets in
//! `(x, ξ′)`. Terms live in a `BTreeMap`, so iteration order (and therefore
//! every floating-point reduction built on it) is deterministic.

use std::collections::BTreeMap;
use std::ops::Range;

pub use num_complex::Complex64 as C64;

/// Maximum number of variables of a [`Poly`].
pub const MAXV: usize = 12;

/// An exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(pub [u8; MAXV]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; MAXV])
    }

    pub fn var(i: usize) -> Self {
        let mut m = Mono::one();
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        let mut m = Mono::one();
        m.0[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, r: Range<usize>) -> u32 {
        self.0[r].iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..MAXV {
            m.0[i] += other.0[i];
        }
        m
    }

    /// `m!` as a float, the product of factorials of the exponents.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&e| (1..=e as u64).map(|k| k as f64).product::<f64>())
            .product()
    }
}

/// Degree caps applied after every product.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trunc {
    /// Per variable-range caps on the partial degree.
    pub groups: Vec<(Range<usize>, u32)>,
    /// Optional cap on the total degree.
    pub total: Option<u32>,
}

impl Trunc {
    /// No truncation at all.
    pub fn none() -> Self {
        Trunc::default()
    }

    pub fn total(max: u32) -> Self {
        Trunc { groups: Vec::new(), total: Some(max) }
    }

    pub fn group(range: Range<usize>, max: u32) -> Self {
        Trunc { groups: vec![(range, max)], total: None }
    }

    pub fn with_group(mut self, range: Range<usize>, max: u32) -> Self {
        self.groups.push((range, max));
        self
    }

    pub fn admits(&self, m: &Mono) -> bool {
        if let Some(t) = self.total {
            if m.degree() > t {
                return false;
            }
        }
        self.groups.iter().all(|(r, cap)| m.degree_in(r.clone()) <= *cap)
    }

    /// True if repeated multiplication by a polynomial without constant term
    /// eventually yields zero, which is what series functions rely on.
    pub fn is_nilpotent_for(&self, nvars: usize) -> bool {
        if self.total.is_some() {
            return true;
        }
        let mut covered = vec![false; nvars];
        for (r, _) in &self.groups {
            for i in r.clone() {
                if i < nvars {
                    covered[i] = true;
                }
            }
        }
        covered.into_iter().all(|c| c)
    }
}

/// A sparse polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, C64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAXV, "too many variables: {nvars}");
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Mono::one(), c);
        p
    }

    pub fn real(nvars: usize, c: f64) -> Self {
        Poly::constant(nvars, C64::new(c, 0.0))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Poly::zero(nvars);
        p.add_term(Mono::var(i), C64::new(1.0, 0.0));
        p
    }

    pub fn monomial(nvars: usize, m: Mono, c: C64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Mono, C64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let e = self.terms.entry(m).or_insert(C64::new(0.0, 0.0));
        *e += c;
        if *e == C64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: &Mono) -> C64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> C64 {
        self.coeff(&Mono::one())
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn max_degree_in(&self, r: Range<usize>) -> u32 {
        self.terms.keys().map(|m| m.degree_in(r.clone())).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, s: C64) {
        debug_assert_eq!(self.nvars, other.nvars);
        if s == C64::new(0.0, 0.0) {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(*m, c * s);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_scaled(other, C64::new(1.0, 0.0));
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_scaled(other, C64::new(-1.0, 0.0));
        r
    }

    pub fn scale(&self, s: C64) -> Poly {
        let mut r = Poly::zero(self.nvars);
        if s == C64::new(0.0, 0.0) {
            return r;
        }
        for (m, c) in &self.terms {
            r.add_term(*m, c * s);
        }
        r
    }

    pub fn scale_re(&self, s: f64) -> Poly {
        self.scale(C64::new(s, 0.0))
    }

    /// Product with degree caps applied termwise.
    pub fn mul(&self, other: &Poly, trunc: &Trunc) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Mono, C64> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !trunc.admits(&m) {
                    continue;
                }
                *acc.entry(m).or_insert(C64::new(0.0, 0.0)) += ca * cb;
            }
        }
        acc.retain(|_, c| *c != C64::new(0.0, 0.0));
        Poly { nvars: self.nvars, terms: acc }
    }

    pub fn truncate(&self, trunc: &Trunc) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| trunc.admits(m)).map(|(m, c)| (*m, *c)).collect(),
        }
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(m, c)| (*m, *c)).collect(),
        }
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut mm = *m;
            mm.0[i] -= 1;
            r.add_term(mm, c * e as f64);
        }
        r
    }

    /// Applies `∂^α` for an exponent vector `α`.
    pub fn deriv_multi(&self, alpha: &Mono) -> Poly {
        let mut r = self.clone();
        for i in 0..self.nvars {
            for _ in 0..alpha.0[i] {
                r = r.deriv(i);
            }
        }
        r
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = *c;
            for i in 0..self.nvars {
                let e = m.0[i];
                if e > 0 {
                    t *= x[i].powu(e as u32);
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_re(&self, x: &[f64]) -> C64 {
        let xc: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.eval(&xc)
    }

    /// Sets the variables in `r` to zero.
    pub fn zero_vars(&self, r: Range<usize>) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(r.clone()) == 0)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Terms whose partial degree in `r` equals `d`.
    pub fn part_with_degree(&self, r: Range<usize>, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(r.clone()) == d)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Re-indexes variables: old variable `i` becomes `map[i]` in a polynomial
    /// with `new_nvars` variables.
    pub fn remap(&self, new_nvars: usize, map: &[usize]) -> Poly {
        let mut r = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut mm = Mono::one();
            for i in 0..self.nvars {
                if m.0[i] > 0 {
                    mm.0[map[i]] += m.0[i];
                }
            }
            r.add_term(mm, *c);
        }
        r
    }

    /// Substitutes `subs[i]` for variable `i`; all `subs` share a variable space.
    pub fn compose(&self, subs: &[Poly], trunc: &Trunc) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::real(nv, 1.0), s.clone()]).collect();
        let mut out = Poly::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(nv, *c);
            for i in 0..self.nvars {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&subs[i], trunc);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e], trunc);
                if t.is_empty() {
                    break;
                }
            }
            out.add_assign_scaled(&t, C64::new(1.0, 0.0));
        }
        out
    }

    /// `f(self)` for a function given by its Taylor coefficients at the
    /// constant term: `f(a₀ + δ) = Σ coeffs[k] δ^k`.
    ///
    /// The truncation must make `δ` nilpotent.
    pub fn apply_series(&self, coeffs: &[C64], trunc: &Trunc) -> Poly {
        debug_assert!(trunc.is_nilpotent_for(self.nvars));
        let a0 = self.constant_term();
        let mut delta = self.clone();
        delta.add_term(Mono::one(), -a0);
        let mut out = Poly::constant(self.nvars, coeffs[0]).truncate(trunc);
        let mut pw = Poly::real(self.nvars, 1.0);
        for c in coeffs.iter().skip(1) {
            pw = pw.mul(&delta, trunc);
            if pw.is_empty() {
                break;
            }
            out.add_assign_scaled(&pw, *c);
        }
        out
    }

    /// Number of series terms needed under `trunc`.
    fn series_len(&self, trunc: &Trunc) -> usize {
        let bound = match trunc.total {
            Some(t) => t as usize,
            None => trunc.groups.iter().map(|(_, c)| *c as usize).sum(),
        };
        bound + 1
    }

    /// `self^s` for complex `s`, principal branch at the constant term.
    pub fn powc(&self, s: C64, trunc: &Trunc) -> Poly {
        let a0 = self.constant_term();
        assert!(a0.norm() > 0.0, "power of a jet with vanishing constant term");
        let n = self.series_len(trunc);
        let mut coeffs = Vec::with_capacity(n + 1);
        // binom(s, k) a0^{s-k}
        let mut binom = C64::new(1.0, 0.0);
        for k in 0..=n {
            coeffs.push(binom * a0.powc(s - k as f64));
            binom = binom * (s - k as f64) / (k as f64 + 1.0);
        }
        self.apply_series(&coeffs, trunc)
    }

    pub fn powf(&self, s: f64, trunc: &Trunc) -> Poly {
        self.powc(C64::new(s, 0.0), trunc)
    }

    pub fn powi(&self, e: u32, trunc: &Trunc) -> Poly {
        let mut r = Poly::real(self.nvars, 1.0).truncate(trunc);
        for _ in 0..e {
            r = r.mul(self, trunc);
        }
        r
    }

    pub fn recip(&self, trunc: &Trunc) -> Poly {
        self.powf(-1.0, trunc)
    }

    pub fn sqrt(&self, trunc: &Trunc) -> Poly {
        self.powf(0.5, trunc)
    }

    pub fn exp(&self, trunc: &Trunc) -> Poly {
        let a0 = self.constant_term();
        let n = self.series_len(trunc);
        let e0 = a0.exp();
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut f = 1.0;
        for k in 0..=n {
            if k > 0 {
                f *= k as f64;
            }
            coeffs.push(e0 / f);
        }
        self.apply_series(&coeffs, trunc)
    }

    pub fn ln(&self, trunc: &Trunc) -> Poly {
        let a0 = self.constant_term();
        let n = self.series_len(trunc);
        let mut coeffs = vec![a0.ln()];
        for k in 1..=n {
            let sgn = if k % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(sgn / (k as f64 * a0.powu(k as u32)));
        }
        self.apply_series(&coeffs, trunc)
    }

    pub fn sin(&self, trunc: &Trunc) -> Poly {
        self.trig(trunc, false)
    }

    pub fn cos(&self, trunc: &Trunc) -> Poly {
        self.trig(trunc, true)
    }

    fn trig(&self, trunc: &Trunc, cosine: bool) -> Poly {
        let a0 = self.constant_term();
        let n = self.series_len(trunc);
        let (s, c) = (a0.sin(), a0.cos());
        // derivatives cycle sin, cos, -sin, -cos (for sin) and cos, -sin, -cos, sin
        let cycle = if cosine { [c, -s, -c, s] } else { [s, c, -s, -c] };
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut f = 1.0;
        for k in 0..=n {
            if k > 0 {
                f *= k as f64;
            }
            coeffs.push(cycle[k % 4] / f);
        }
        self.apply_series(&coeffs, trunc)
    }
}
