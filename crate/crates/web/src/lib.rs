//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string. The logic lives in [`api`] so it can
//! be tested without a JavaScript host.

use wasm_bindgen::prelude::*;

pub mod api;

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Worksheet and exact BF₁₀ for every success count at sample size `n`.
#[wasm_bindgen]
pub fn bf_curve(n: u32, k: f64, alternative: &str, convention: &str) -> Result<String, JsError> {
    js(api::bf_curve(n as u64, k, alternative, convention))
}

/// Running deviation and indicator series for a 0/1 sample.
#[wasm_bindgen]
pub fn deviation_trace(samples: &str, k: f64, canonical: bool) -> Result<String, JsError> {
    js(api::deviation_trace(samples, k, canonical))
}

/// Corrected BF₁₀ under the model fitted to the bundled table.
#[wasm_bindgen]
pub fn correct(frequency: f64, value: f64) -> Result<String, JsError> {
    js(api::correct(frequency, value))
}

/// Fitted calibration curves and data points of the bundled model.
#[wasm_bindgen]
pub fn calibration_curves(step: f64) -> Result<String, JsError> {
    js(api::calibration_curves(step))
}
