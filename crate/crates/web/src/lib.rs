//! Browser bindings. Every function takes plain strings and returns a JSON
//! document, with an `error` field on failure.

use serde_json::{json, Value};
use toro_core::model::{validate_germ, GermInput, State};
use toro_core::ramification::{classify_subcase, log_jacobian, toroidal_at};
use toro_core::toric2::{strong_factorize, Fan2, Ray};
use toro_core::toroidalize::{current_rlog, run, DEFAULT_MAX_STEPS};
use toro_core::trace::{dot_x, dot_y};
use wasm_bindgen::prelude::wasm_bindgen;

fn names(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn error(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn parse(f_y1: &str, f_y2: &str, boundary_x: &str, boundary_y: &str) -> Result<GermInput, String> {
    GermInput::parse(f_y1, f_y2, &names(boundary_x), &names(boundary_y)).map_err(|e| e.to_string())
}

/// Validation, log Jacobian, ramification divisor and subcase of a germ.
/// Boundaries are comma-separated coordinate names such as `"x1,x2"`.
#[wasm_bindgen]
pub fn analyze_germ(f_y1: &str, f_y2: &str, boundary_x: &str, boundary_y: &str) -> String {
    let input = match parse(f_y1, f_y2, boundary_x, boundary_y) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    let map = input.local_map();
    if let Err(d) = validate_germ(&map) {
        return json!({ "valid": false, "diagnostic": d.to_string() }).to_string();
    }
    let mut state = match State::new(&input) {
        Ok(s) => s,
        Err(d) => return error(d),
    };
    let rlog = match current_rlog(&mut state) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let subcase = classify_subcase(&map).map(|d| d.subcase.to_string()).map_err(|e| e.to_string());
    json!({
        "valid": true,
        "r_log": log_jacobian(&map).to_string(),
        "R_log": rlog.to_text(),
        "subcase": subcase.unwrap_or_else(|e| e),
        "toroidal": toroidal_at(&map) == Ok(true),
    })
    .to_string()
}

/// Runs to a toroidal atlas and returns the trace events, the atlas and
/// both DOT forests.
#[wasm_bindgen]
pub fn run_trace(f_y1: &str, f_y2: &str, boundary_x: &str, boundary_y: &str, max_steps: u32) -> String {
    let input = match parse(f_y1, f_y2, boundary_x, boundary_y) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    let mut state = match State::new(&input) {
        Ok(s) => s,
        Err(d) => return error(format!("not log smooth: {d}")),
    };
    let limit = if max_steps == 0 { DEFAULT_MAX_STEPS } else { max_steps as usize };
    let result = run(&mut state, limit);
    let events = serde_json::to_value(&state.events).unwrap_or(Value::Null);
    let (atlas, err) = match result {
        Ok(s) => (serde_json::to_value(&s.atlas).unwrap_or(Value::Null), Value::Null),
        Err(e) => (Value::Null, Value::String(e.to_string())),
    };
    json!({
        "events": events,
        "atlas": atlas,
        "error": err,
        "dot_x": dot_x(&state, &state.subcases),
        "dot_y": dot_y(&state),
    })
    .to_string()
}

fn fan_from_json(text: &str) -> Result<Fan2, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let rays = v
        .get("rays")
        .and_then(Value::as_array)
        .ok_or("expected {\"rays\": [[u, v], ...]}")?
        .iter()
        .map(|r| match r.as_array().map(|p| (p.first().and_then(Value::as_i64), p.get(1).and_then(Value::as_i64))) {
            Some((Some(a), Some(b))) => Ok(Ray(a, b)),
            _ => Err(format!("bad ray {r}")),
        })
        .collect::<Result<Vec<Ray>, String>>()?;
    Fan2::new(rays).map_err(|e| e.to_string())
}

/// Blowup/blowdown script between two smooth fans given as
/// `{"rays": [[u, v], ...]}`.
#[wasm_bindgen]
pub fn toric_factor(fan_a: &str, fan_b: &str) -> String {
    let fans = fan_from_json(fan_a).and_then(|a| Ok((a, fan_from_json(fan_b)?)));
    match fans.and_then(|(a, b)| strong_factorize(&a, &b).map_err(|e| e.to_string())) {
        Ok(f) => serde_json::to_string(&f).unwrap_or_else(error),
        Err(e) => error(e),
    }
}
