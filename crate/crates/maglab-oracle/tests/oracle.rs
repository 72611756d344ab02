use maglab_geometry::builtin_model;
use maglab_oracle::*;
use nalgebra::DMatrix;
use serde_json::json;

fn line(points: &[f64]) -> FiniteSpace {
    let pts = points.iter().map(|&x| vec![x]).collect();
    FiniteSpace::from_fn(pts, None, |a, b| (a[0] - b[0]).abs(), Parallelism::default()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn finite_magnitude_examples() {
    assert!((finite_magnitude(&line(&[0.3]), 7.0).unwrap() - 1.0).abs() < 1e-15);
    for t in [0.1, 1.0, 3.0] {
        let m = finite_magnitude(&line(&[0.0, t]), 1.0).unwrap();
        assert!((m - 2.0 / (1.0 + (-t).exp())).abs() < 1e-14);
    }
    let far = line(&[0.0, 100.0, 200.0, 300.0, 400.0]);
    assert!((finite_magnitude(&far, 5.0).unwrap() - 5.0).abs() < 1e-12);
    // equally spaced points: 1 + (N−1) tanh(Rh/2)
    let pts: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
    let m = finite_magnitude(&line(&pts), 3.0).unwrap();
    assert!((m - (1.0 + 49.0 * (0.15f64).tanh())).abs() < 1e-11);
    assert!(matches!(finite_magnitude(&far, -1.0), Err(OracleError::InvalidScale(_))));
}

#[test]
fn cholesky_matches_nalgebra_and_paths_agree() {
    let n = 150;
    let b = DMatrix::from_fn(n, n, |i, j| ((i * 31 + j * 17) % 23) as f64 / 23.0 - 0.4);
    let a = &b * b.transpose() + DMatrix::identity(n, n) * 0.5;
    let flat: Vec<f64> = (0..n * n).map(|k| a[(k / n, k % n)]).collect();
    let mut seq = flat.clone();
    let mut par = flat.clone();
    cholesky_in_place(&mut seq, n, Parallelism::Sequential).unwrap();
    cholesky_in_place(&mut par, n, Parallelism::Parallel).unwrap();
    assert_eq!(seq, par);
    let l = a.clone().cholesky().unwrap().l();
    for i in 0..n {
        for j in 0..=i {
            assert!((seq[i * n + j] - l[(i, j)]).abs() < 1e-12);
        }
    }
    let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
    let x = cholesky_solve(&seq, n, &rhs);
    let ax = &a * nalgebra::DVector::from_vec(x);
    assert!(ax.iter().zip(&rhs).all(|(u, v)| (u - v).abs() < 1e-10));
    let mut bad = flat.clone();
    bad[0] = -1.0;
    assert!(matches!(
        cholesky_in_place(&mut bad, n, Parallelism::Sequential),
        Err(OracleError::NotPositiveDefinite { index: 0, .. })
    ));
}

#[test]
fn solver_residual_is_small_for_ill_conditioned_kernels() {
    let model = builtin_model("disk", &json!({"radius": 1.0})).unwrap();
    let space = FiniteSpace::from_model(model.as_ref(), 1500, Parallelism::default()).unwrap();
    let r = 2.0;
    let ones = vec![1.0; space.len()];
    let (_, resid) =
        spd_solve(space.kernel(r, Parallelism::default()), space.len(), &ones, Parallelism::default(), |x| {
            space.kernel_apply(r, x, Parallelism::default())
        })
        .unwrap();
    assert!(resid < 1e-8, "residual {resid}");
}

#[test]
fn interval_points_reach_the_closed_form() {
    let model = builtin_model("interval", &json!({"length": 2.0})).unwrap();
    let m = nystrom_magnitude_with(model.as_ref(), 2000, 20.0, Scheme::Points, Parallelism::default()).unwrap();
    assert!(rel(m, 21.0) < 1e-3, "{m}");
    let rings = nystrom_magnitude_with(model.as_ref(), 400, 20.0, Scheme::Rings, Parallelism::default()).unwrap();
    assert!(rel(rings, 21.0) < 1e-3, "{rings}");
}

#[test]
fn disk_and_sphere_match_the_expansion() {
    let disk = builtin_model("disk", &json!({"radius": 1.0})).unwrap();
    assert_eq!(Scheme::Auto.resolve(disk.as_ref()), Scheme::Rings);
    let m = nystrom_magnitude(disk.as_ref(), 1000, 20.0).unwrap();
    assert!(rel(m, 231.125) < 0.01, "{m}");
    let sphere = builtin_model("sphere2_geodesic", &json!({"radius": 1.0})).unwrap();
    assert_eq!(Scheme::Auto.resolve(sphere.as_ref()), Scheme::Corrected);
    let m = nystrom_magnitude(sphere.as_ref(), 3000, 15.0).unwrap();
    assert!(rel(m, 452.0) < 0.02, "{m}");
    // homogeneous: the corrected scheme is exact, M = vol / ∫ e^{−Rd}
    let exact = 2.0 * (225.0 + 1.0) / (1.0 + (-15.0 * std::f64::consts::PI).exp());
    assert!(rel(m, exact) < 1e-10);
    let ellipse = builtin_model("ellipse", &json!({})).unwrap();
    assert_eq!(Scheme::Auto.resolve(ellipse.as_ref()), Scheme::Points);
    assert!(matches!(
        nystrom_magnitude_with(ellipse.as_ref(), 10, 1.0, Scheme::Rings, Parallelism::default()),
        Err(OracleError::Unsupported { .. })
    ));
}

#[test]
fn ball_shells_match_the_expansion() {
    let ball = builtin_model("ball3", &json!({"radius": 1.0})).unwrap();
    let grid = log_grid(8.0, 30.0, 8);
    let rep = fit_coefficients(ball.as_ref(), &grid, 600, 2).unwrap();
    assert_eq!(rep.scheme, Scheme::Rings);
    let want = [1.0 / 6.0, 1.0, 2.0];
    let tol = [0.01, 0.05, 0.25];
    for k in 0..3 {
        assert!(rel(rep.coefficients[k], want[k]) < tol[k], "{:?}", rep.coefficients);
    }
}

#[test]
fn fits_recover_synthetic_series() {
    let grid = log_grid(8.0, 40.0, 7);
    let truth = [0.5, 1.5, 1.125, -0.3];
    let m: Vec<f64> = grid.iter().map(|r| truth.iter().enumerate().map(|(k, c)| c * r.powi(2 - k as i32)).sum()).collect();
    let (c, resid, cond) = fit_series(2, &grid, &m, 3).unwrap();
    assert!(c.iter().zip(&truth).all(|(a, b)| (a - b).abs() < 1e-8), "{c:?}");
    assert!(resid < 1e-9 && cond > 1.0);
    assert!(matches!(fit_series(2, &grid[..3], &m[..3], 2), Err(OracleError::GridTooShort { need: 4, .. })));
    let tight: Vec<f64> = (0..8).map(|i| 100.0 + 1e-3 * i as f64).collect();
    let flat = vec![1.0; 8];
    assert!(matches!(fit_series(1, &tight, &flat, 4), Err(OracleError::IllConditioned(_))));
}

#[test]
fn interval_fit() {
    let model = builtin_model("interval", &json!({"length": 2.0})).unwrap();
    let rep =
        fit_coefficients_with(model.as_ref(), &[5.0, 10.0, 20.0, 40.0], 2000, 1, Scheme::Points, Parallelism::default())
            .unwrap();
    assert!(rel(rep.coefficients[0], 1.0) < 5e-3 && rel(rep.coefficients[1], 1.0) < 5e-3, "{:?}", rep.coefficients);
    assert_eq!(rep.magnitudes.len(), 4);
}

#[test]
fn points_converge_monotonically() {
    let disk = builtin_model("disk", &json!({"radius": 1.0})).unwrap();
    let sphere = builtin_model("sphere2_geodesic", &json!({"radius": 1.0})).unwrap();
    for (model, r) in [(&disk, 8.0), (&sphere, 5.0)] {
        let m: Vec<f64> = [200, 400, 800, 1600]
            .iter()
            .map(|&n| nystrom_magnitude_with(model.as_ref(), n, r, Scheme::Points, Parallelism::default()).unwrap())
            .collect();
        let d: Vec<f64> = m.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(d[0] > d[1] && d[1] > d[2], "{} {m:?}", model.name());
    }
    let space = FiniteSpace::from_model(disk.as_ref(), 300, Parallelism::default()).unwrap();
    let mags: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|&r| finite_magnitude(&space, r).unwrap()).collect();
    assert!(mags.windows(2).all(|w| w[0] < w[1]) && mags[4] < 300.0, "{mags:?}");
}

#[test]
fn pd_probes() {
    let interval = builtin_model("interval", &json!({"length": 2.0})).unwrap();
    let space = FiniteSpace::from_model(interval.as_ref(), 200, Parallelism::default()).unwrap();
    assert!(pd_probe(&space, &[0.1, 1.0, 10.0, 100.0]).iter().all(|e| e.positive_definite && e.pivot > 0.0));
    assert!(pd_probe(&line(&[0.0, 0.5]), &[0.01, 1.0, 50.0]).iter().all(|e| e.positive_definite));
    // the complete bipartite graph K_{3,2} is not positive definite at small R
    let side = |i: usize| usize::from(i >= 3);
    let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
    let k32 = FiniteSpace::from_fn(
        pts,
        None,
        |a, b| {
            let (i, j) = (a[0] as usize, b[0] as usize);
            if i == j { 0.0 } else if side(i) == side(j) { 2.0 } else { 1.0 }
        },
        Parallelism::default(),
    )
    .unwrap();
    let r = 0.2;
    let entry = &pd_probe(&k32, &[r])[0];
    assert!(!entry.positive_definite);
    let kernel = DMatrix::from_row_slice(5, 5, &k32.kernel(r, Parallelism::default()));
    let lmin = kernel.symmetric_eigenvalues().min();
    assert!((entry.min_eigenvalue.unwrap() - lmin).abs() < 1e-8, "{entry:?} vs {lmin}");
    let torus = builtin_model("torus2_geodesic", &json!({"length": 1.0})).unwrap();
    let tspace = FiniteSpace::from_model(torus.as_ref(), 100, Parallelism::default()).unwrap();
    assert_eq!(pd_probe(&tspace, &[0.5, 1.0, 5.0]).len(), 3);
}

#[test]
fn spaces_are_validated() {
    let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
    let good = vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0];
    assert!(FiniteSpace::new(pts.clone(), good.clone(), None).is_ok());
    let mut asym = good.clone();
    asym[1] = 1.5;
    assert!(FiniteSpace::new(pts.clone(), asym, None).is_err());
    let mut diag = good.clone();
    diag[4] = 0.1;
    assert!(FiniteSpace::new(pts.clone(), diag, None).is_err());
    let tri = vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0];
    assert!(FiniteSpace::new(pts.clone(), tri, None).is_err());
    assert!(FiniteSpace::new(pts, good, Some(vec![1.0, -1.0, 1.0])).is_err());
}
