//! Deterministic quadrature rules on the model spaces.

use std::f64::consts::PI;

/// Points with weights; `Σ w_i f(p_i)` approximates an integral.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Quadrature {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn push(&mut self, p: Vec<f64>, w: f64) {
        self.points.push(p);
        self.weights.push(w);
    }

    /// `Σ w_i f(p_i)` with pairwise summation.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let terms: Vec<f64> = self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).collect();
        pairwise_sum(&terms)
    }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            z = 0.0;
            dp = 1.0;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    (x.iter().map(|t| a + h * (t + 1.0)).collect(), w.iter().map(|t| t * h).collect())
}

/// Uniform midpoint rule on `[0, ℓ]`.
pub fn midpoint_interval(len: f64, n: usize) -> Quadrature {
    let h = len / n as f64;
    let mut q = Quadrature::default();
    for i in 0..n {
        q.push(vec![(i as f64 + 0.5) * h], h);
    }
    q
}

/// Polar product grid on the disk of radius `r` with about `budget` nodes:
/// midpoint in the radius, uniform in the angle, Jacobian weights.
pub fn polar_grid(r: f64, budget: usize) -> Quadrature {
    let nr = ((budget as f64 / PI).sqrt().round() as usize).max(1);
    let nt = budget.div_ceil(nr).max(1);
    let (dr, dt) = (r / nr as f64, 2.0 * PI / nt as f64);
    let mut q = Quadrature::default();
    for i in 0..nr {
        let rho = (i as f64 + 0.5) * dr;
        for j in 0..nt {
            let t = (j as f64 + 0.5) * dt;
            q.push(vec![rho * t.cos(), rho * t.sin()], rho * dr * dt);
        }
    }
    q
}

/// Near-uniform nodes on the disk of radius `r`: a sunflower spiral inside
/// and a ring of about `2√(πn)` nodes on the boundary circle, all with equal
/// weights.
pub fn sunflower_disk(r: f64, n: usize) -> Quadrature {
    let n = n.max(1);
    let h = (PI / n as f64).sqrt();
    let nb = ((2.0 * (PI * n as f64).sqrt()).round() as usize).min(n / 2);
    let ni = n - nb;
    let golden = PI * (3.0 - 5f64.sqrt());
    let w = PI * r * r / n as f64;
    let mut q = Quadrature::default();
    // interior radii stop half a spacing short of the boundary ring
    let inner = if nb > 0 { 1.0 - 0.5 * h } else { 1.0 };
    for k in 0..ni {
        let t = k as f64 + 0.5;
        let rho = r * inner * (t / ni as f64).sqrt();
        q.push(vec![rho * (t * golden).cos(), rho * (t * golden).sin()], w);
    }
    for j in 0..nb {
        let t = 2.0 * PI * j as f64 / nb as f64;
        q.push(vec![r * t.cos(), r * t.sin()], w);
    }
    q
}

/// Spherical product grid on the ball of radius `r` with about `budget`
/// nodes: midpoint in the radius, Gauss–Legendre in `cos θ`, uniform in `φ`.
pub fn spherical_grid(r: f64, budget: usize) -> Quadrature {
    let nr = ((budget as f64 / 8.0).cbrt().round() as usize).max(1);
    let nz = (2 * nr).max(1);
    let np = budget.div_ceil(nr * nz).max(1);
    let (z, wz) = gauss_legendre(nz);
    let (dr, dp) = (r / nr as f64, 2.0 * PI / np as f64);
    let mut q = Quadrature::default();
    for i in 0..nr {
        let rho = (i as f64 + 0.5) * dr;
        for (zk, wk) in z.iter().zip(&wz) {
            let s = (1.0 - zk * zk).sqrt();
            for j in 0..np {
                let p = (j as f64 + 0.5) * dp;
                q.push(vec![rho * s * p.cos(), rho * s * p.sin(), rho * zk], rho * rho * dr * wk * dp);
            }
        }
    }
    q
}

/// Fibonacci lattice on the sphere of radius `rho` with equal weights.
pub fn fibonacci_sphere(rho: f64, n: usize) -> Quadrature {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let w = 4.0 * PI * rho * rho / n as f64;
    let mut q = Quadrature::default();
    for i in 0..n {
        let z = 1.0 - (2 * i + 1) as f64 / n as f64;
        let s = (1.0 - z * z).sqrt();
        let p = 2.0 * PI * (i as f64 / golden).fract();
        q.push(vec![rho * s * p.cos(), rho * s * p.sin(), rho * z], w);
    }
    q
}

/// Gauss–Legendre in `cos θ` times a uniform rule in `φ` on the sphere of
/// radius `rho`; exact for spherical harmonics of low degree.
pub fn gauss_sphere(rho: f64, nz: usize) -> Quadrature {
    let np = 2 * nz;
    let (z, wz) = gauss_legendre(nz);
    let dp = 2.0 * PI / np as f64;
    let mut q = Quadrature::default();
    for (zk, wk) in z.iter().zip(&wz) {
        let s = (1.0 - zk * zk).sqrt();
        for j in 0..np {
            let p = (j as f64 + 0.5) * dp;
            q.push(vec![rho * s * p.cos(), rho * s * p.sin(), rho * zk], rho * rho * wk * dp);
        }
    }
    q
}
