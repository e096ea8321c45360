//! Browser bindings: region masks, threshold curves and single-state
//! reports, all returned as JSON strings.
//!
//! The plain functions (`*_json`) are ordinary Rust and are tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors to `JsValue`.

use qsep_core::criteria::{self, Tolerances};
use qsep_core::families::{self, FamilySpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn grid(step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(format!("step must lie in (0, 1], got {step}"));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| ((k as f64 * step) * 1e12).round() / 1e12).collect())
}

fn witness(family: &str, d: usize, x: f64) -> Result<f64, String> {
    match family {
        "werner" => criteria::werner_p(d, x),
        "isotropic" => criteria::isotropic_q(d, x),
        other => return Err(format!("unknown family {other:?} (expected werner or isotropic)")),
    }
    .map_err(|e| e.to_string())
}

/// Closed-form detection mask over `d = d_lo..=d_hi` and the parameter
/// grid `0, step, ..., 1`:
/// `{"family", "d": [...], "x": [...], "mask": [[0|1, ...], ...]}`.
pub fn region_mask_json(family: &str, d_lo: usize, d_hi: usize, step: f64) -> Result<String, String> {
    if d_lo < 2 || d_hi < d_lo {
        return Err(format!("bad dimension range {d_lo}..{d_hi}"));
    }
    let xs = grid(step)?;
    let ds: Vec<usize> = (d_lo..=d_hi).collect();
    let mask = ds
        .iter()
        .map(|&d| {
            xs.iter()
                .map(|&x| witness(family, d, x).map(|w| u8::from(criteria::witness_detects(w))))
                .collect::<Result<Vec<u8>, String>>()
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(json!({"family": family, "d": ds, "x": xs, "mask": mask}).to_string())
}

/// Witness threshold for `d = 2..=max_d` by bisection to 1e-12:
/// `{"family", "d": [...], "threshold": [...]}`.
pub fn threshold_curve_json(family: &str, max_d: usize) -> Result<String, String> {
    let mut ds = Vec::new();
    let mut thresholds = Vec::new();
    for d in 2..=max_d.max(2) {
        let detects = |x: f64| witness(family, d, x).map(criteria::witness_detects);
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if detects(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        ds.push(d);
        thresholds.push(0.5 * (lo + hi));
    }
    Ok(json!({"family": family, "d": ds, "threshold": thresholds}).to_string())
}

/// Inequality and PPT verdicts for the 3x3 Horodecki mixture over an
/// `(a, p)` grid: `{"a": [...], "p": [...], "violated": [[...]], "npt": [[...]]}`.
pub fn horodecki_mask_json(step: f64) -> Result<String, String> {
    let xs = grid(step)?;
    let mut violated = Vec::new();
    let mut npt = Vec::new();
    for &a in &xs {
        let mut v_row = Vec::new();
        let mut n_row = Vec::new();
        for &p in &xs {
            let rho = families::horodecki_mixture(a, p).map_err(|e| e.to_string())?;
            let c = criteria::cond_inequality(&rho).map_err(|e| e.to_string())?;
            v_row.push(u8::from(c.violated));
            n_row.push(u8::from(criteria::ppt_test(&rho, qsep_core::DEFAULT_TOL).npt));
        }
        violated.push(v_row);
        npt.push(n_row);
    }
    Ok(json!({"a": xs, "p": xs, "violated": violated, "npt": npt}).to_string())
}

/// Full criterion report for a family member given as JSON, e.g.
/// `{"kind": "werner", "d": 3, "eta": 0.8}`.
pub fn family_report_json(spec: &str, tol: f64) -> Result<String, String> {
    let spec: FamilySpec = serde_json::from_str(spec).map_err(|e| e.to_string())?;
    let rho = spec.build().map_err(|e| e.to_string())?;
    let report = criteria::analyze(&rho, Tolerances::uniform(tol));
    let detected = report.entanglement_detected();
    let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    value["entanglement_detected"] = json!(detected);
    value["family"] = json!(spec.to_string());
    Ok(value.to_string())
}

#[wasm_bindgen]
pub fn region_mask(family: &str, d_lo: usize, d_hi: usize, step: f64) -> Result<String, JsValue> {
    region_mask_json(family, d_lo, d_hi, step).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn threshold_curve(family: &str, max_d: usize) -> Result<String, JsValue> {
    threshold_curve_json(family, max_d).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn horodecki_mask(step: f64) -> Result<String, JsValue> {
    horodecki_mask_json(step).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn family_report(spec: &str, tol: f64) -> Result<String, JsValue> {
    family_report_json(spec, tol).map_err(|e| JsValue::from_str(&e))
}
