use serde_json::json;

use wright_hopf::bifurcation::{
    classify_sequence, schwarzian_guard, BifurcationPoint, Direction, SequenceClassification,
};
use wright_hopf::cooke::{branch_map_check, cooke_map, cooke_residual, linear_period};
use wright_hopf::dde_sim::{
    amplitude_sweep, find_periodic_orbit, integrate, steps_per_delay, History, OrbitOptions,
    SweepOptions,
};
use wright_hopf::period_bounds::{bound_for, monotonicity_flags};
use wright_hopf::spectral::{critical_value, crossing_speed_exact, crossing_speed_numeric};
use wright_hopf::{make_builtin, Nonlinearity};

use crate::args::{BoundsArgs, ClassifyArgs, CookeArgs, SequenceArgs, SimulateArgs, Source, SweepArgs};
use crate::error::CliError;
use crate::output::{Cell, Report, Table};

/// Largest Cooke residual accepted relative to the orbit's own residual.
const COOKE_RATIO: f64 = 10.0;

fn nonlinearity(source: &Source) -> Result<Nonlinearity, CliError> {
    let f = match (&source.preset, &source.cubic) {
        (Some(name), None) => make_builtin(name)?,
        (None, Some(c)) if c.len() == 3 => Nonlinearity::from_raw_cubic(c[0], c[1], c[2])?,
        _ => return Err(CliError::Usage("give exactly one of --preset or --cubic D1 F2 F3".into())),
    };
    f.require_positive_slope()?;
    Ok(f)
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--tol {tol} must be a nonnegative number")))
    }
}

fn check_step(step: f64) -> Result<(), CliError> {
    steps_per_delay(step).map(|_| ()).map_err(|e| CliError::Usage(e.to_string()))
}

fn check_etas(etas: &[f64]) -> Result<(), CliError> {
    if etas.is_empty() || etas.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err(CliError::Usage("eta values must be positive".into()));
    }
    Ok(())
}

fn sequence_json(seq: &SequenceClassification) -> serde_json::Value {
    json!({ "case": seq.case.as_str(), "n": seq.n, "B": seq.b, "C": seq.c, "tol": seq.tol })
}

fn describe(f: &Nonlinearity) -> serde_json::Value {
    json!({ "name": f.name(), "d1": f.d1(), "B": f.b(), "C": f.c() })
}

pub fn classify(args: &ClassifyArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let f = nonlinearity(&args.source)?;
    let seq = classify_sequence(f.b(), f.c(), args.tol);
    let mut table = Table::new(&[
        "k", "mu_k", "mu", "direction", "branch_side", "K", "H", "crossing_speed", "case", "n",
    ]);
    let mut rows = Vec::new();
    for k in args.k_range.0..=args.k_range.1 {
        let p = BifurcationPoint::new(f.b(), f.c(), k, args.tol);
        let speed = crossing_speed_numeric(k, 1e-4)?;
        let side = p.branch_side.map(|s| s.as_str());
        table.push(vec![
            k.into(),
            p.mu_k.into(),
            f.original_mu(p.mu_k).into(),
            p.direction.as_str().into(),
            side.map_or(Cell::Empty, Cell::from),
            p.k_coefficient.into(),
            p.threshold.into(),
            speed.into(),
            seq.case.as_str().into(),
            seq.n.into(),
        ]);
        rows.push(json!({
            "k": k,
            "mu_k": p.mu_k,
            "mu": f.original_mu(p.mu_k),
            "omega_k": p.omega_k,
            "direction": p.direction.as_str(),
            "delta_k": p.delta_k,
            "branch_side": side,
            "K": p.k_coefficient,
            "H": p.threshold,
            "crossing_speed": speed,
            "crossing_speed_exact": crossing_speed_exact(k),
            "sequence_agrees": seq.direction_at(k) == p.direction,
        }));
    }
    Ok(Report {
        table,
        json: json!({
            "nonlinearity": describe(&f),
            "sequence": sequence_json(&seq),
            "points": rows,
        }),
    })
}

pub fn sequence(args: &SequenceArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let f = nonlinearity(&args.source)?;
    let grid: Vec<f64> = (0..=200).map(|i| -1.0 + 0.01 * i as f64).collect();
    let mut report = schwarzian_guard(&f, &grid);
    // the guard uses the default tolerance; honour the requested one
    report.sequence = classify_sequence(f.b(), f.c(), args.tol);
    let seq = report.sequence;
    let mut table = Table::new(&[
        "name",
        "d1",
        "B",
        "C",
        "case",
        "n",
        "schwarzian_at_zero",
        "identity_error",
        "negative_schwarzian",
        "consistent",
    ]);
    table.push(vec![
        f.name().into(),
        f.d1().into(),
        f.b().into(),
        f.c().into(),
        seq.case.as_str().into(),
        seq.n.into(),
        report.schwarzian_at_zero.into(),
        report.identity_error.into(),
        report.all_negative.into(),
        report.consistent.into(),
    ]);
    Ok(Report {
        table,
        json: json!({
            "nonlinearity": describe(&f),
            "sequence": sequence_json(&seq),
            "schwarzian": {
                "at_zero": report.schwarzian_at_zero,
                "identity_error": report.identity_error,
                "grid": [-1.0, 1.0],
                "negative_on_grid": report.all_negative,
                "excluded": report.excluded,
                "zero_curvature": report.zero_curvature,
                "consistent": report.consistent,
            },
        }),
    })
}

pub fn bounds(args: &BoundsArgs) -> Result<Report, CliError> {
    check_etas(&args.eta.0)?;
    let f = nonlinearity(&args.source)?;
    let seq = classify_sequence(f.b(), f.c(), wright_hopf::bifurcation::DEFAULT_TOL);
    let mut table = Table::new(&["eta", "lower", "upper", "source"]);
    let mut rows = Vec::new();
    for &eta in &args.eta.0 {
        let b = bound_for(&seq, args.k, eta)?;
        let (lower, upper) = b.map_or((None, None), |b| (b.lower, b.upper));
        let source = b.map(|b| b.source.as_str());
        table.push(vec![
            eta.into(),
            lower.into(),
            upper.into(),
            source.map_or(Cell::Empty, Cell::from),
        ]);
        rows.push(json!({ "eta": eta, "lower": lower, "upper": upper, "source": source }));
    }
    let mono = monotonicity_flags(&seq, args.k, None);
    Ok(Report {
        table,
        json: json!({
            "nonlinearity": describe(&f),
            "sequence": sequence_json(&seq),
            "k": args.k,
            "direction": seq.direction_at(args.k as i64).as_str(),
            "linear_period": linear_period(args.k),
            "increasing_asserted": mono.increasing_asserted,
            "decreasing_allowed": mono.decreasing_allowed,
            "bounds": rows,
        }),
    })
}

pub fn simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    check_step(args.step)?;
    if !(args.t_end > 0.0 && args.t_end.is_finite()) {
        return Err(CliError::Usage(format!("--t-end {} must be positive", args.t_end)));
    }
    let f = nonlinearity(&args.source)?;
    let traj = integrate(&f, args.mu, History::Constant(args.amplitude), args.t_end, args.step)?;
    let mut table = Table::new(&["t", "x"]);
    let (mut ts, mut xs) = (Vec::new(), Vec::new());
    for k in traj.knots().iter().filter(|k| k.t >= 0.0) {
        table.push(vec![k.t.into(), k.x.into()]);
        ts.push(k.t);
        xs.push(k.x);
    }
    Ok(Report {
        table,
        json: json!({
            "nonlinearity": describe(&f),
            "mu": args.mu,
            "amplitude": args.amplitude,
            "step": args.step,
            "t_end": args.t_end,
            "t": ts,
            "x": xs,
        }),
    })
}

pub fn sweep(args: &SweepArgs) -> Result<Report, CliError> {
    check_etas(&args.eta.0)?;
    check_step(args.step)?;
    if args.slack.is_nan() || args.slack < 0.0 {
        return Err(CliError::Usage("--slack must be nonnegative".into()));
    }
    let f = nonlinearity(&args.source)?;
    let seq = classify_sequence(f.b(), f.c(), wright_hopf::bifurcation::DEFAULT_TOL);
    let direction = seq.direction_at(0);
    if direction == Direction::Degenerate {
        return Err(CliError::Usage("the first bifurcation is degenerate".into()));
    }
    let mut opts = SweepOptions::default();
    opts.orbit.step = args.step;
    opts.threshold.step = args.step;
    let swept = amplitude_sweep(&f, direction, &args.eta.0, &opts)?;
    let mut table = Table::new(&[
        "eta",
        "mu",
        "amplitude",
        "period",
        "bound_lower",
        "bound_upper",
        "within_bounds",
    ]);
    let mut rows = Vec::new();
    for r in &swept.rows {
        let bound = bound_for(&seq, 0, r.eta)?;
        let (lower, upper) = bound.map_or((None, None), |b| (b.lower, b.upper));
        let within = bound.map(|b| b.contains(r.period, args.slack));
        table.push(vec![
            r.eta.into(),
            r.mu.into(),
            r.amplitude.into(),
            r.period.into(),
            lower.into(),
            upper.into(),
            within.map_or(Cell::Empty, Cell::from),
        ]);
        let mono = monotonicity_flags(&seq, 0, Some(r.period));
        rows.push(json!({
            "eta": r.eta,
            "mu": r.mu,
            "amplitude": r.amplitude,
            "period": r.period,
            "bound_lower": lower,
            "bound_upper": upper,
            "bound_source": bound.map(|b| b.source.as_str()),
            "within_bounds": within,
            "monotonicity_consistent": mono.consistent,
        }));
    }
    Ok(Report {
        table,
        json: json!({
            "nonlinearity": describe(&f),
            "sequence": sequence_json(&seq),
            "k": 0,
            "direction": direction.as_str(),
            "step": args.step,
            "slack": args.slack,
            "fit": swept.fit.map(|fit| json!({
                "slope": fit.slope,
                "intercept": fit.intercept,
                "r_squared": fit.r_squared,
            })),
            "rows": rows,
        }),
    })
}

pub fn cooke_check(args: &CookeArgs) -> Result<Report, CliError> {
    check_step(args.step)?;
    if args.l_max == 0 || args.k_max > 1000 || args.l_max > 1000 {
        return Err(CliError::Usage("need 1 <= --l-max <= 1000 and --k-max <= 1000".into()));
    }
    let f = nonlinearity(&args.source)?;
    let mut table = Table::new(&[
        "kind",
        "k",
        "l",
        "mu_in",
        "period_in",
        "mu_out",
        "period_out",
        "target_mu",
        "target_period",
        "residual",
        "reference_residual",
        "pass",
    ]);
    let mut branch = Vec::new();
    for k in 0..=args.k_max {
        for l in 0..=args.l_max {
            let (mu, t) = (critical_value(k as i64), linear_period(k));
            let image = cooke_map(mu, t, l)?;
            let pass = branch_map_check(k, l);
            let (tm, tt) = (critical_value((k + l) as i64), linear_period(k + l));
            table.push(vec![
                "branch".into(),
                k.into(),
                l.into(),
                mu.into(),
                t.into(),
                image.mu_out.into(),
                image.period_out.into(),
                tm.into(),
                tt.into(),
                Cell::Empty,
                Cell::Empty,
                pass.into(),
            ]);
            branch.push(json!({ "k": k, "l": l, "mu_out": image.mu_out, "period_out": image.period_out, "pass": pass }));
        }
    }
    let opts = OrbitOptions {
        step: args.step,
        tolerance: 1e-9,
        ..Default::default()
    };
    let orbit = find_periodic_orbit(&f, args.mu, 0.1, &opts)?;
    let own = orbit.equation_residual(&f, 512)?;
    let mut transforms = Vec::new();
    for l in 1..=args.l_max {
        let image = cooke_map(orbit.mu, orbit.period, l)?;
        let residual = cooke_residual(&orbit, l, &f)?;
        let pass = residual <= COOKE_RATIO * own;
        table.push(vec![
            "orbit".into(),
            Cell::Empty,
            l.into(),
            orbit.mu.into(),
            orbit.period.into(),
            image.mu_out.into(),
            image.period_out.into(),
            Cell::Empty,
            Cell::Empty,
            residual.into(),
            own.into(),
            pass.into(),
        ]);
        transforms.push(json!({
            "l": l,
            "mu_out": image.mu_out,
            "period_out": image.period_out,
            "residual": residual,
            "pass": pass,
        }));
    }
    Ok(Report {
        table,
        json: json!({
            "nonlinearity": describe(&f),
            "branch_map": branch,
            "orbit": {
                "mu": orbit.mu,
                "period": orbit.period,
                "amplitude": orbit.amplitude,
                "residual": own,
            },
            "transforms": transforms,
            "ratio_limit": COOKE_RATIO,
        }),
    })
}
