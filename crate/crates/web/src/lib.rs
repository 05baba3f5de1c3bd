//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string; errors surface as JS exceptions.

use cremona::document::{parse_document, MatrixDocument};
use cremona::enumeration::{enumerate_classes, verify_class_set, EnumerationSummary, VerifyOptions};
use cremona::invariants::{johnson_check, InvariantReport, KMode};
use cremona::map::{phi_nd, ExponentMatrix, ValidateOptions};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
pub struct Analysis {
    pub map: MatrixDocument,
    pub determinant: String,
    pub birational: bool,
    pub inverse: Option<MatrixDocument>,
    pub invariants: Option<InvariantReport>,
    /// Why `invariants` is missing, when the map is birational.
    pub note: Option<String>,
}

pub fn phi_text(n: usize, d: u64) -> Result<String, String> {
    if !(2..=12).contains(&n) || !(1..=64).contains(&d) {
        return Err("need 2 <= n <= 12 and 1 <= d <= 64".into());
    }
    Ok(phi_nd(n, d).to_string())
}

pub fn analyze_text(input: &str) -> Result<Analysis, String> {
    let raw = parse_document(input).map_err(|e| e.to_string())?;
    let m = ExponentMatrix::validate(&raw.rows, ValidateOptions { normalize: true })
        .map_err(|e| e.to_string())?;
    let birational = m.is_birational();
    let mut analysis = Analysis {
        map: MatrixDocument::from(&m),
        determinant: m.determinant().to_string(),
        birational,
        inverse: None,
        invariants: None,
        note: None,
    };
    if !birational {
        return Ok(analysis);
    }
    let inverse = m.invert().map_err(|e| e.to_string())?;
    analysis.inverse = Some(MatrixDocument::from(&inverse));
    if m.n() == 3 {
        analysis.invariants = Some(johnson_check(&m, KMode::Checked).map_err(|e| e.to_string())?);
    } else {
        analysis.note = Some("invariants are computed for n = 3 only".into());
    }
    Ok(analysis)
}

/// Largest degree the page will enumerate for each `n`, so a click stays
/// well under a second.
fn demo_limit(n: usize) -> Option<u64> {
    match n {
        2 => Some(30),
        3 => Some(5),
        4 => Some(2),
        _ => None,
    }
}

pub fn enumerate_summary(n: usize, d: u64) -> Result<EnumerationSummary, String> {
    let limit = demo_limit(n).ok_or("n must be 2, 3 or 4")?;
    if d < 1 || d > limit {
        return Err(format!("d must be in 1..={limit} for n = {n}"));
    }
    let found = enumerate_classes(n, d, 1);
    Ok(verify_class_set(n, d, &found, VerifyOptions { jobs: 1, oracle: false }))
}

fn to_json<T: Serialize>(value: Result<T, String>) -> Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

/// The extremal map of degree `d` on P^n, in the text matrix format.
#[wasm_bindgen]
pub fn phi(n: usize, d: u32) -> Result<String, JsError> {
    phi_text(n, d.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(input: &str) -> Result<String, JsError> {
    to_json(analyze_text(input))
}

#[wasm_bindgen]
pub fn enumerate(n: usize, d: u32) -> Result<String, JsError> {
    to_json(enumerate_summary(n, d.into()))
}
