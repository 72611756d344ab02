//! Finite metric spaces with optional quadrature weights.

use maglab_geometry::GeometryModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::OracleError;
use crate::linalg::{for_rows, Parallelism};

/// Points with a full distance matrix and weights (default 1).
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    pub points: Vec<Vec<f64>>,
    /// Row-major `n × n`.
    pub dist: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FiniteSpace {
    /// Builds a space from a distance matrix and checks symmetry, zero
    /// diagonal, non-negativity, and the triangle inequality on random triples.
    pub fn new(points: Vec<Vec<f64>>, dist: Vec<f64>, weights: Option<Vec<f64>>) -> Result<Self, OracleError> {
        let n = points.len();
        let weights = weights.unwrap_or_else(|| vec![1.0; n]);
        let space = FiniteSpace { points, dist, weights };
        space.validate(256)?;
        Ok(space)
    }

    /// Distances from a closure, evaluated over the upper triangle.
    pub fn from_fn<F>(points: Vec<Vec<f64>>, weights: Option<Vec<f64>>, d: F, par: Parallelism) -> Result<Self, OracleError>
    where
        F: Fn(&[f64], &[f64]) -> f64 + Sync + Send,
    {
        let n = points.len();
        let mut dist = vec![0.0; n * n];
        for_rows(&mut dist, n, 0, par, |i, row| {
            for j in i + 1..n {
                row[j] = d(&points[i], &points[j]);
            }
        });
        for i in 0..n {
            for j in 0..i {
                dist[i * n + j] = dist[j * n + i];
            }
        }
        FiniteSpace::new(points, dist, weights)
    }

    /// Quadrature nodes, weights and exact distances of a model.
    pub fn from_model(model: &dyn GeometryModel, n: usize, par: Parallelism) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::ZeroBudget);
        }
        let q = model.sample(n);
        FiniteSpace::from_fn(q.points, Some(q.weights), |a, b| model.exact_distance(a, b), par)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    /// Structural checks plus `samples` random triangle inequalities.
    pub fn validate(&self, samples: usize) -> Result<(), OracleError> {
        self.validate_seeded(samples, 0x6d61_676c)
    }

    /// [`FiniteSpace::validate`] with the triangle triples drawn from `seed`.
    pub fn validate_seeded(&self, samples: usize, seed: u64) -> Result<(), OracleError> {
        let n = self.len();
        if self.dist.len() != n * n {
            return Err(OracleError::InvalidSpace(format!("distance matrix has {} entries for {n} points", self.dist.len())));
        }
        if self.weights.len() != n || self.weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(OracleError::InvalidSpace("weights must be positive, one per point".into()));
        }
        for i in 0..n {
            if self.d(i, i) != 0.0 {
                return Err(OracleError::InvalidSpace(format!("d({i},{i}) = {}", self.d(i, i))));
            }
            for j in 0..i {
                let (a, b) = (self.d(i, j), self.d(j, i));
                if !(a >= 0.0 && a.is_finite()) || a != b {
                    return Err(OracleError::InvalidSpace(format!("d({i},{j}) = {a}, d({j},{i}) = {b}")));
                }
            }
        }
        if n >= 3 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                let (ij, jk, ik) = (self.d(i, j), self.d(j, k), self.d(i, k));
                if ik > ij + jk + 1e-12 * (1.0 + ik) {
                    return Err(OracleError::InvalidSpace(format!("triangle inequality fails at ({i},{j},{k})")));
                }
            }
        }
        Ok(())
    }

    /// `e^{−R d_ij}` in full.
    pub fn kernel(&self, r: f64, par: Parallelism) -> Vec<f64> {
        let n = self.len();
        let mut k = vec![0.0; n * n];
        for_rows(&mut k, n, 0, par, |i, row| {
            for (kij, dij) in row.iter_mut().zip(&self.dist[i * n..(i + 1) * n]) {
                *kij = (-r * dij).exp();
            }
        });
        k
    }

    /// `y = (e^{−R d_ij}) x` without storing the kernel.
    pub fn kernel_apply(&self, r: f64, x: &[f64], par: Parallelism) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for_rows(&mut y, 1, 0, par, |i, yi| {
            yi[0] = self.dist[i * n..(i + 1) * n].iter().zip(x).map(|(d, xj)| (-r * d).exp() * xj).sum();
        });
        y
    }
}
