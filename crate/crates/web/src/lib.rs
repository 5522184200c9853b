//! Browser bindings: classification table, trajectories and period-bound
//! curves, each returned as a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use wright_hopf::bifurcation::{classify_sequence, BifurcationPoint, DEFAULT_TOL};
use wright_hopf::dde_sim::{integrate, History};
use wright_hopf::period_bounds::bound_for;
use wright_hopf::{make_builtin, Nonlinearity};

/// Points beyond this are dropped from a trajectory so the page stays fast.
const MAX_POINTS: usize = 20_000;

#[derive(Serialize)]
struct Row {
    k: i64,
    mu_k: f64,
    direction: &'static str,
    branch_side: Option<&'static str>,
    threshold: f64,
    k_coefficient: f64,
}

#[derive(Serialize)]
struct Table {
    name: String,
    b: f64,
    c: f64,
    case: &'static str,
    n: Option<i64>,
    rows: Vec<Row>,
}

#[derive(Serialize)]
struct Series {
    t: Vec<f64>,
    x: Vec<f64>,
}

#[derive(Serialize)]
struct Curves {
    k: u32,
    direction: &'static str,
    source: Option<&'static str>,
    eta: Vec<f64>,
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
}

fn source(preset: &str, b: f64, c: f64) -> Result<Nonlinearity, String> {
    if preset.is_empty() {
        Ok(Nonlinearity::cubic(b, c))
    } else {
        make_builtin(preset).map_err(|e| e.to_string())
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Classification of bifurcations `k_min..=k_max`; an empty `preset` means
/// the cubic `x + B x^2 + C x^3`.
pub fn table_json(preset: &str, b: f64, c: f64, k_min: i32, k_max: i32) -> Result<String, String> {
    if k_min > k_max || k_max - k_min > 200 {
        return Err("need k_min <= k_max and at most 200 rows".into());
    }
    let f = source(preset, b, c)?;
    f.require_positive_slope().map_err(|e| e.to_string())?;
    let seq = classify_sequence(f.b(), f.c(), DEFAULT_TOL);
    let rows = (k_min as i64..=k_max as i64)
        .map(|k| {
            let p = BifurcationPoint::new(f.b(), f.c(), k, DEFAULT_TOL);
            Row {
                k,
                mu_k: f.original_mu(p.mu_k),
                direction: p.direction.as_str(),
                branch_side: p.branch_side.map(|s| s.as_str()),
                threshold: p.threshold,
                k_coefficient: p.k_coefficient,
            }
        })
        .collect();
    to_json(&Table {
        name: f.name().to_string(),
        b: f.b(),
        c: f.c(),
        case: seq.case.as_str(),
        n: seq.n,
        rows,
    })
}

/// Trajectory from the constant history `amplitude`, thinned to at most
/// `MAX_POINTS` samples.
pub fn trajectory_json(
    preset: &str,
    b: f64,
    c: f64,
    mu: f64,
    amplitude: f64,
    t_end: f64,
    steps_per_unit: u32,
) -> Result<String, String> {
    let f = source(preset, b, c)?;
    if !(t_end > 0.0 && t_end <= 5000.0) {
        return Err("t_end must lie in (0, 5000]".into());
    }
    let step = 1.0 / steps_per_unit as f64;
    let traj = integrate(&f, mu, History::Constant(amplitude), t_end, step).map_err(|e| e.to_string())?;
    let knots: Vec<_> = traj.knots().iter().filter(|k| k.t >= 0.0).collect();
    let stride = knots.len().div_ceil(MAX_POINTS).max(1);
    let (t, x) = knots.iter().step_by(stride).map(|k| (k.t, k.x)).unzip();
    to_json(&Series { t, x })
}

/// Period bounds for branch `k` on `count` points of `(0, eta_max]`.
pub fn bounds_json(preset: &str, b: f64, c: f64, k: u32, eta_max: f64, count: u32) -> Result<String, String> {
    if eta_max.is_nan() || eta_max <= 0.0 || count == 0 || count > 2000 {
        return Err("need eta_max > 0 and 1..=2000 points".into());
    }
    let f = source(preset, b, c)?;
    let seq = classify_sequence(f.b(), f.c(), DEFAULT_TOL);
    let mut curves = Curves {
        k,
        direction: seq.direction_at(k as i64).as_str(),
        source: None,
        eta: Vec::new(),
        lower: Vec::new(),
        upper: Vec::new(),
    };
    for i in 1..=count {
        let eta = eta_max * i as f64 / count as f64;
        // past the guard of the subcritical bounds nothing more is plotted
        let Ok(bound) = bound_for(&seq, k, eta) else { break };
        curves.eta.push(eta);
        curves.source = bound.map(|b| b.source.as_str()).or(curves.source);
        curves.lower.push(bound.and_then(|b| b.lower));
        curves.upper.push(bound.and_then(|b| b.upper));
    }
    to_json(&curves)
}

#[wasm_bindgen]
pub fn classification_table(preset: &str, b: f64, c: f64, k_min: i32, k_max: i32) -> Result<String, JsError> {
    table_json(preset, b, c, k_min, k_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(
    preset: &str,
    b: f64,
    c: f64,
    mu: f64,
    amplitude: f64,
    t_end: f64,
    steps_per_unit: u32,
) -> Result<String, JsError> {
    trajectory_json(preset, b, c, mu, amplitude, t_end, steps_per_unit).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn period_bounds(preset: &str, b: f64, c: f64, k: u32, eta_max: f64, count: u32) -> Result<String, JsError> {
    bounds_json(preset, b, c, k, eta_max, count).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn poly_switch_table() {
        let v: Value = serde_json::from_str(&table_json("poly-switch", 0.0, 0.0, 0, 3).unwrap()).unwrap();
        assert_eq!(v["case"], "SwitchNonneg");
        assert_eq!(v["n"], 1);
        let dirs: Vec<_> = v["rows"].as_array().unwrap().iter().map(|r| r["direction"].clone()).collect();
        assert_eq!(dirs, ["subcritical", "subcritical", "supercritical", "supercritical"]);
    }

    #[test]
    fn custom_cubic_table() {
        let v: Value = serde_json::from_str(&table_json("", 0.0, 1.0, 0, 0).unwrap()).unwrap();
        assert_eq!(v["rows"][0]["direction"], "subcritical");
        assert!(table_json("nope", 0.0, 0.0, 0, 1).is_err());
        assert!(table_json("wright", 0.0, 0.0, 2, 1).is_err());
    }

    #[test]
    fn trajectory_is_thinned() {
        let v: Value = serde_json::from_str(&trajectory_json("wright", 0.0, 0.0, 1.8, 0.1, 2000.0, 64).unwrap()).unwrap();
        let n = v["t"].as_array().unwrap().len();
        assert!(n <= MAX_POINTS && n > 10_000);
        assert_eq!(v["x"][0], 0.1);
        assert!(trajectory_json("wright", 0.0, 0.0, 1.8, 0.1, 10.0, 7).is_err());
    }

    #[test]
    fn bound_curves() {
        let v: Value = serde_json::from_str(&bounds_json("poly-switch", 0.0, 0.0, 0, 0.2, 20).unwrap()).unwrap();
        assert_eq!(v["source"], "theorem4-interior");
        assert_eq!(v["eta"].as_array().unwrap().len(), 20);
        let v: Value = serde_json::from_str(&bounds_json("wright", 0.0, 0.0, 0, 0.2, 5).unwrap()).unwrap();
        assert_eq!(v["source"], "theorem2");
        assert!(v["upper"][0].is_null());
    }
}
