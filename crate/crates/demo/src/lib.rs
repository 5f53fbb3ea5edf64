//! Browser bindings for the demo page in `www/`. Every export returns a JSON
//! string; errors surface as thrown JS exceptions.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use dieudonne::constructions::build_minimal;
use dieudonne::harness::{verify_cutoff_upper, witness_lower, WitnessOptions};
use dieudonne::newton::np_enumerate;
use dieudonne::{NewtonPolygon, RingParams, WittRing};

fn drawable(np: &NewtonPolygon) -> Value {
    json!({
        "label": np.to_string(),
        "polygon": np,
        "vertices": np.vertices(),
    })
}

pub fn witness_json(c: u32, d: u32, p: u64) -> Result<Value, String> {
    let options = WitnessOptions {
        p,
        observational_trials: 0,
        ..WitnessOptions::default()
    };
    let report = witness_lower(c, d, options).map_err(|e| e.to_string())?;
    let body = &report.body;
    Ok(json!({
        "bounds": body.bounds,
        "precision": body.precision,
        "congruence_level": body.congruence_level,
        "base": drawable(&body.base.linearization),
        "twisted": drawable(&body.twisted.linearization),
        "twisted_qx_valuations": body.twisted.qx_valuations,
        "checks": body.checks,
        "passed": report.passed(),
    }))
}

pub fn enumerate_json(c: u32, d: u32) -> Result<Value, String> {
    if c + d == 0 || c + d > 12 {
        return Err("choose 1 <= c + d <= 12".into());
    }
    Ok(Value::Array(
        np_enumerate(c, d).iter().map(drawable).collect(),
    ))
}

/// Perturbs the minimal isoclinic module of height c + d and dimension d
/// and tallies the polygons that occur.
pub fn experiment_json(
    c: u32,
    d: u32,
    p: u64,
    level: u32,
    trials: u32,
    seed: u64,
) -> Result<Value, String> {
    if c + d == 0 || c + d > 8 || trials > 2000 {
        return Err("choose 1 <= c + d <= 8 and at most 2000 trials".into());
    }
    let ring =
        Arc::new(WittRing::new(RingParams::new(p, 1, d + level + 4)).map_err(|e| e.to_string())?);
    let np = NewtonPolygon::isoclinic(c + d, d).map_err(|e| e.to_string())?;
    let module = build_minimal(&ring, &np).map_err(|e| e.to_string())?;
    let report = verify_cutoff_upper(&module, "minimal", level, u64::from(trials), seed)
        .map_err(|e| e.to_string())?;
    let mut tally: BTreeMap<String, (u32, &NewtonPolygon)> = BTreeMap::new();
    for outcome in &report.body.outcomes {
        tally
            .entry(outcome.polygon.to_string())
            .or_insert((0, &outcome.polygon))
            .0 += 1;
    }
    let observed: Vec<Value> = tally
        .values()
        .map(|(count, np)| {
            let mut v = drawable(np);
            v["count"] = json!(count);
            v
        })
        .collect();
    Ok(json!({
        "subject": drawable(&report.body.subject_np),
        "j": dieudonne::newton::bounds(c, d).j,
        "level": level,
        "verdict": report.body.verdict,
        "observed": observed,
    }))
}

fn to_js(result: Result<Value, String>) -> Result<String, JsValue> {
    result
        .map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn witness_polygons(c: u32, d: u32, p: u32) -> Result<String, JsValue> {
    to_js(witness_json(c, d, u64::from(p)))
}

#[wasm_bindgen]
pub fn enumerate_polygons(c: u32, d: u32) -> Result<String, JsValue> {
    to_js(enumerate_json(c, d))
}

#[wasm_bindgen]
pub fn perturbation_experiment(
    c: u32,
    d: u32,
    p: u32,
    level: u32,
    trials: u32,
    seed: u32,
) -> Result<String, JsValue> {
    to_js(experiment_json(
        c,
        d,
        u64::from(p),
        level,
        trials,
        u64::from(seed),
    ))
}
