//! The subcommands. Each returns its artifacts; writing them is the caller's job.

use maglab_boundary::{boundary_density_b, boundary_symbols_json};
use maglab_expansion::{
    assemble_c, assemble_c_with, closed_form_c012, energy_series, AssembleOptions, ExpansionError, ExpansionSeries,
};
use maglab_geometry::{builtin_models, GeometryError, GeometryModel};
use maglab_oracle::{
    fit_coefficients_with, nystrom_magnitude_with, pd_probe_with, FiniteSpace, Parallelism, Scheme,
};
use maglab_symbols::{eval_a_j0, random_chart, scalar_curvature_invariant, SymbolEngine, TaylorModelChart};
use serde_json::{json, Value};

use crate::config::{
    parse_r_grid, Command, CompareArgs, ExpandArgs, FitArgs, Geometry, MagnitudeArgs, OracleArgs, OutputArgs,
    ProbeArgs, RunConfig, SymbolsArgs, SCHEMA,
};
use crate::error::CliError;
use crate::output::{Artifacts, Table};

/// How the two series are normalized, echoed into every expansion artifact.
pub const CONVENTION: &str =
    "magnitude(R) ~ sum_k c_k R^(n-k); energy(R) ~ sum_k epsilon_k R^(-n-k), the formal reciprocal series";

const FIT_GRID: &str = "8:40:8";
const MAGNITUDE_GRID: &str = "2:40:8";
const PROBE_GRID: &str = "0.1:20:12";

/// Runs one subcommand.
pub fn run(command: &Command) -> Result<Artifacts, CliError> {
    match command {
        Command::Expand(a) => cmd_expand(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Symbols(a) => cmd_symbols(a),
        Command::Magnitude(a) => cmd_magnitude(a),
        Command::Fit(a) => cmd_fit(a),
        Command::PdProbe(a) => cmd_pd_probe(a),
        Command::Models(a) => cmd_models(a),
    }
}

fn base_config(command: &str, geo: &Geometry, out: &OutputArgs) -> RunConfig {
    let mut cfg = RunConfig::new(command, out.seed);
    cfg.model = Some(geo.spec.model.clone());
    cfg.params = geo.model.params();
    cfg
}

/// `{"schema": 1, "command", "config", ...body}`.
fn envelope(cfg: &RunConfig, body: Value) -> Result<Value, CliError> {
    let mut out = json!({ "schema": SCHEMA, "command": cfg.command, "config": serde_json::to_value(cfg)? });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    Ok(out)
}

fn oracle_setup(geo: &Geometry, args: &OracleArgs, default_grid: &str) -> Result<(usize, Vec<f64>), CliError> {
    let n = args.n.unwrap_or(geo.spec.quadrature_n);
    if n == 0 {
        return Err(CliError::Usage("--N must be positive".into()));
    }
    let grid = parse_r_grid(args.r_grid.as_deref().unwrap_or(default_grid))?;
    Ok((n, grid))
}

fn no_symbolic_path(e: &ExpansionError) -> bool {
    matches!(e, ExpansionError::Geometry(GeometryError::NoSymbolicPath(_)))
}

/// The symbolic series, or `None` for oracle-only models.
fn symbolic_series(model: &dyn GeometryModel, k: u32) -> Result<Option<ExpansionSeries>, CliError> {
    match assemble_c(model, k) {
        Ok(s) => Ok(Some(s)),
        Err(e) if no_symbolic_path(&e) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `c_0..c_K` by quadrature of the symbolic densities, with the energy series.
pub fn cmd_expand(args: &ExpandArgs) -> Result<Artifacts, CliError> {
    let geo = args.model.resolve()?;
    let model = geo.model.as_ref();
    let mut cfg = base_config("expand", &geo, &args.output);
    cfg.k = Some(args.k);
    let opts = AssembleOptions {
        interior_budget: args.interior_budget,
        boundary_budget: args.boundary_budget,
        experimental: args.experimental,
    };
    let c = assemble_c_with(model, args.k, &opts)?;
    let eps = energy_series(&c)?;
    let closed = closed_form_c012(model).ok().map(|s| s.coefficients);
    let mut table = Table::new(&["quantity", "k", "value"]);
    for (name, values) in [("c", &c.coefficients), ("epsilon", &eps.coefficients)] {
        for (k, v) in values.iter().enumerate() {
            table.push(vec![name.into(), k.to_string(), fmt(*v)]);
        }
    }
    let json = envelope(
        &cfg,
        json!({
            "model": model.name(),
            "params": model.params(),
            "n": model.dim(),
            "convention": CONVENTION,
            "c": c.coefficients,
            "epsilon": eps.coefficients,
            "closed_form_c012": closed,
        }),
    )?;
    Ok(Artifacts::new("expand", json).with_table(table))
}

/// Gap between a fitted and a symbolic coefficient: relative, or absolute
/// when the symbolic value is zero.
fn coefficient_gap(fitted: f64, target: f64) -> (f64, &'static str) {
    if target.abs() < 1e-12 {
        ((fitted - target).abs(), "absolute")
    } else {
        ((fitted - target).abs() / target.abs(), "relative")
    }
}

/// Symbolic coefficients against an oracle fit.
pub fn cmd_compare(args: &CompareArgs) -> Result<Artifacts, CliError> {
    let geo = args.model.resolve()?;
    let model = geo.model.as_ref();
    let (n, grid) = oracle_setup(&geo, &args.oracle, FIT_GRID)?;
    let scheme = Scheme::from(args.oracle.scheme).resolve(model);
    let mut cfg = base_config("compare", &geo, &args.output);
    cfg.k = Some(args.k);
    cfg.n = Some(n);
    cfg.r_grid = Some(grid.clone());
    cfg.scheme = Some(scheme);
    let symbolic = symbolic_series(model, args.k)?;
    let fit = fit_coefficients_with(model, &grid, n, args.k as usize, scheme, Parallelism::default())?;
    let tols = [args.tol_c0, args.tol_c1, args.tol_c2];
    let mut table = Table::new(&["k", "symbolic", "fitted", "gap", "gap_kind", "tolerance", "pass"]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (k, &fitted) in fit.coefficients.iter().enumerate() {
        let target = symbolic.as_ref().map(|s| s.coefficients[k]);
        let tol = tols.get(k).copied();
        let (gap, kind) = match target {
            Some(t) => {
                let (g, kind) = coefficient_gap(fitted, t);
                (Some(g), Some(kind))
            }
            None => (None, None),
        };
        let pass = match (gap, tol) {
            (Some(g), Some(t)) => Some(g <= t),
            _ => None,
        };
        if pass == Some(false) {
            failures.push(format!(
                "c{k}: fitted {fitted} vs symbolic {} ({} gap {} > {})",
                target.unwrap_or(f64::NAN),
                kind.unwrap_or(""),
                gap.unwrap_or(f64::NAN),
                tol.unwrap_or(f64::NAN)
            ));
        }
        table.push(vec![
            k.to_string(),
            target.map(fmt).unwrap_or_default(),
            fmt(fitted),
            gap.map(fmt).unwrap_or_default(),
            kind.unwrap_or("").into(),
            tol.map(fmt).unwrap_or_default(),
            pass.map(|p| if p { "PASS" } else { "FAIL" }.to_string()).unwrap_or_default(),
        ]);
        rows.push(json!({
            "k": k,
            "symbolic": target,
            "fitted": fitted,
            "gap": gap,
            "gap_kind": kind,
            "tolerance": tol,
            "pass": pass,
        }));
    }
    let note = symbolic.is_none().then(|| format!("no symbolic path for `{}`; oracle results only", model.name()));
    if let Some(note) = &note {
        log::warn!("{note}");
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let json = envelope(
        &cfg,
        json!({
            "model": model.name(),
            "status": status,
            "note": note,
            "rows": rows,
            "fit": fit,
        }),
    )?;
    let mut art = Artifacts::new("compare", json).with_table(table);
    if !failures.is_empty() {
        art.failure = Some(CliError::Tolerance(failures.join("; ")));
    }
    Ok(art)
}

fn parse_point(model: &dyn GeometryModel, at: &str, boundary: bool) -> Result<Vec<f64>, CliError> {
    let ambient = model.sample(1).points[0].len();
    match at {
        "base" => {
            let quad = if boundary { model.boundary_quadrature(1) } else { model.sample(1) };
            quad.points
                .into_iter()
                .next()
                .ok_or_else(|| CliError::Usage(format!("model `{}` has no boundary", model.name())))
        }
        "pole" => {
            let radius = model.params().get("radius").and_then(Value::as_f64);
            match (model.name().starts_with("sphere"), radius) {
                (true, Some(r)) if !boundary => Ok(vec![0.0, 0.0, r]),
                _ => Err(CliError::Usage("--at pole needs an interior point of a sphere model".into())),
            }
        }
        coords => {
            let p = coords
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|_| CliError::Usage(format!("bad point `{coords}`")))?;
            if p.len() != ambient {
                return Err(CliError::Usage(format!("point needs {ambient} ambient coordinates, got {}", p.len())));
            }
            Ok(p)
        }
    }
}

/// Names the terms of `q_{±,1}` by the power of `(ξ_n − h_±)` they carry:
/// exponent `−μ−1−m` is coefficient `a_{m,±}`.
fn name_first_order_terms(body: &mut Value, dim: usize) {
    let mu = (dim as f64 + 1.0) / 2.0;
    for (list, key, sign) in [("q_plus", "exp_plus", "+"), ("q_minus", "exp_minus", "-")] {
        let Some(terms) = body[list][1]["symbol"]["terms"].as_array_mut() else { continue };
        for t in terms {
            if let Some(e) = t[key].as_f64() {
                let m = -e - mu - 1.0;
                if m >= 0.0 && (m - m.round()).abs() < 1e-12 {
                    t["name"] = json!(format!("a_{{{},{sign}}}", m.round() as i64));
                }
            }
        }
    }
}

fn interior_symbols(chart: &TaylorModelChart, j: u32) -> Result<Value, CliError> {
    let mut engine = SymbolEngine::new(chart, j)?;
    let dump = |family: Vec<maglab_symbols::InteriorSymbol>| -> Vec<Value> {
        family
            .iter()
            .enumerate()
            .map(|(i, s)| json!({ "j": i, "zero": s.is_zero(), "symbol": s.to_json() }))
            .collect()
    };
    let q = dump(engine.q_family(j)?);
    let a = dump(engine.parametrix(j)?);
    let diag = (0..=j).map(|i| eval_a_j0(chart, i)).collect::<Result<Vec<f64>, _>>()?;
    let s = if j >= 2 && chart.dim >= 2 { Some(scalar_curvature_invariant(chart)?) } else { None };
    Ok(json!({
        "dim": chart.dim,
        "order": j,
        "q": q,
        "a": a,
        "a_j0": diag,
        "scalar_curvature": s,
    }))
}

/// Interior or boundary symbol terms at a point.
pub fn cmd_symbols(args: &SymbolsArgs) -> Result<Artifacts, CliError> {
    let j = args.j;
    let mut cfg = RunConfig::new("symbols", args.output.seed);
    cfg.k = Some(j);
    if let Some(dim) = args.random_chart {
        if !(1..=5).contains(&dim) {
            return Err(CliError::Usage("--random-chart needs 1 ≤ dim ≤ 5".into()));
        }
        let jet = args.jet_order.unwrap_or(j).max(j);
        cfg.jet_order = Some(jet);
        cfg.params = json!({ "random_chart": dim });
        let chart = random_chart(dim, jet, j as usize + 2, args.output.seed);
        let body = interior_symbols(&chart, j)?;
        let json = envelope(&cfg, json!({ "kind": "interior", "point": Value::Null, "symbols": body }))?;
        return Ok(Artifacts::new("symbols", json));
    }
    let geo = args.model.resolve()?;
    let model = geo.model.as_ref();
    let jet = args.jet_order.unwrap_or(geo.spec.jet_order).max(j);
    cfg.model = Some(geo.spec.model.clone());
    cfg.params = model.params();
    cfg.jet_order = Some(jet);
    let p = parse_point(model, &args.at, args.boundary)?;
    let body = if args.boundary {
        // the factor jets in η share the symbol order, so dump at the jet order
        // and keep the first `j + 1` entries
        let chart = model
            .boundary_collar(&p, jet.max(1), jet as usize + 2)?
            .ok_or_else(|| CliError::Usage(format!("model `{}` has no boundary", model.name())))?;
        let mut body = boundary_symbols_json(&chart, jet.max(1))?;
        for list in ["q_plus", "q_minus", "w_plus", "w_minus"] {
            if let Some(v) = body[list].as_array_mut() {
                v.truncate(j as usize + 1);
            }
        }
        body["order"] = json!(j);
        body["jet_order"] = json!(jet.max(1));
        name_first_order_terms(&mut body, chart.dim);
        let b = (1..=j).map(|k| boundary_density_b(&chart, k)).collect::<Result<Vec<f64>, _>>()?;
        body["boundary_density"] = json!(b);
        body
    } else {
        interior_symbols(&model.interior_chart(&p, jet, j as usize + 2)?, j)?
    };
    let kind = if args.boundary { "boundary" } else { "interior" };
    let json = envelope(&cfg, json!({ "model": model.name(), "kind": kind, "point": p, "symbols": body }))?;
    Ok(Artifacts::new("symbols", json))
}

/// Numerical magnitude on a grid next to the truncated series.
pub fn cmd_magnitude(args: &MagnitudeArgs) -> Result<Artifacts, CliError> {
    let geo = args.model.resolve()?;
    let model = geo.model.as_ref();
    let (n, grid) = oracle_setup(&geo, &args.oracle, MAGNITUDE_GRID)?;
    let scheme = Scheme::from(args.oracle.scheme).resolve(model);
    let mut cfg = base_config("magnitude", &geo, &args.output);
    cfg.k = Some(args.k);
    cfg.n = Some(n);
    cfg.r_grid = Some(grid.clone());
    cfg.scheme = Some(scheme);
    let (series, source) = match symbolic_series(model, args.k)? {
        Some(s) => (Some(s), "assembled"),
        None => match closed_form_c012(model) {
            Ok(s) => (Some(s), "closed_form"),
            Err(_) => (None, "none"),
        },
    };
    let mut table = Table::new(&["R", "M_num", "M_series", "rel_gap"]);
    let mut rows = Vec::new();
    for &r in &grid {
        let m = nystrom_magnitude_with(model, n, r, scheme, Parallelism::default())?;
        let s = series.as_ref().map(|s| s.eval(r));
        let gap = s.map(|s| (m - s).abs() / s.abs());
        table.push(vec![fmt(r), fmt(m), s.map(fmt).unwrap_or_default(), gap.map(fmt).unwrap_or_default()]);
        rows.push(json!({ "R": r, "M_num": m, "M_series": s, "rel_gap": gap }));
    }
    let json = envelope(
        &cfg,
        json!({
            "model": model.name(),
            "series_source": source,
            "c": series.map(|s| s.coefficients),
            "rows": rows,
        }),
    )?;
    Ok(Artifacts::new("magnitude", json).with_table(table))
}

/// Oracle magnitudes and the fitted coefficients.
pub fn cmd_fit(args: &FitArgs) -> Result<Artifacts, CliError> {
    let geo = args.model.resolve()?;
    let model = geo.model.as_ref();
    let (n, grid) = oracle_setup(&geo, &args.oracle, FIT_GRID)?;
    let scheme = Scheme::from(args.oracle.scheme).resolve(model);
    let mut cfg = base_config("fit", &geo, &args.output);
    cfg.k = Some(args.k);
    cfg.n = Some(n);
    cfg.r_grid = Some(grid.clone());
    cfg.scheme = Some(scheme);
    let fit = fit_coefficients_with(model, &grid, n, args.k as usize, scheme, Parallelism::default())?;
    let mut table = Table::new(&["R", "M_num", "M_fit"]);
    for (&r, &m) in fit.r_grid.iter().zip(&fit.magnitudes) {
        let fitted = ExpansionSeries::new(fit.dim, fit.coefficients.clone()).eval(r);
        table.push(vec![fmt(r), fmt(m), fmt(fitted)]);
    }
    let json = envelope(&cfg, json!({ "model": model.name(), "fit": fit }))?;
    Ok(Artifacts::new("fit", json).with_table(table))
}

/// Cholesky scan of the sampled kernel matrix. Failures are reported, not raised.
pub fn cmd_pd_probe(args: &ProbeArgs) -> Result<Artifacts, CliError> {
    let geo = args.model.resolve()?;
    let model = geo.model.as_ref();
    let (n, grid) = oracle_setup(&geo, &args.oracle, PROBE_GRID)?;
    let mut cfg = base_config("pd-probe", &geo, &args.output);
    cfg.n = Some(n);
    cfg.r_grid = Some(grid.clone());
    let par = Parallelism::default();
    let space = FiniteSpace::from_model(model, n, par)?;
    space.validate_seeded(args.triangle_samples, args.output.seed)?;
    let entries = pd_probe_with(&space, &grid, par);
    let mut table = Table::new(&["R", "positive_definite", "pivot", "min_eigenvalue"]);
    for e in &entries {
        table.push(vec![
            fmt(e.r),
            e.positive_definite.to_string(),
            fmt(e.pivot),
            e.min_eigenvalue.map(fmt).unwrap_or_default(),
        ]);
    }
    let all_pd = entries.iter().all(|e| e.positive_definite);
    let json = envelope(
        &cfg,
        json!({
            "model": model.name(),
            "flags": model.flags(),
            "points": space.len(),
            "all_positive_definite": all_pd,
            "entries": entries,
        }),
    )?;
    Ok(Artifacts::new("pd-probe", json).with_table(table))
}

/// The builtin models with their default parameters.
pub fn cmd_models(args: &OutputArgs) -> Result<Artifacts, CliError> {
    let cfg = RunConfig::new("models", args.seed);
    let models = builtin_models();
    let mut table = Table::new(&["name", "dim", "symbolic"]);
    for m in &models {
        table.push(vec![m.name.into(), m.dim.to_string(), m.symbolic.to_string()]);
    }
    let json = envelope(&cfg, json!({ "models": models }))?;
    Ok(Artifacts::new("models", json).with_table(table))
}

/// Shortest round-trip decimal; empty for non-finite values.
fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        String::new()
    }
}
