//! Browser bindings: certify a family instance, run the oracle on small ones, list presets.

use serde::Serialize;
use tetrad::chardeg;
use tetrad::doc::ReportDocument;
use tetrad::families::{build, enumerate_g, lemma_certificate, Caps, FamilyParams};
use tetrad::grp;
use wasm_bindgen::prelude::*;

/// Largest `|G|` the page will enumerate.
pub const WEB_MAX_ORDER: u64 = 50_000;

#[derive(Serialize)]
struct OracleSummary {
    label: String,
    order: u64,
    classes: usize,
    degrees: Vec<u64>,
    degree_set: Vec<u64>,
    derived_length: Option<usize>,
    fitting_height: usize,
}

fn parse(params_json: &str) -> Result<FamilyParams, String> {
    let params: FamilyParams = serde_json::from_str(params_json).map_err(|e| format!("bad parameters: {e}"))?;
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

pub fn certify_json(params_json: &str) -> Result<String, String> {
    let inst = build(&parse(params_json)?).map_err(|e| e.to_string())?;
    let cert = lemma_certificate(&inst, &Caps::default());
    Ok(ReportDocument::new(&inst, Some(cert), None).to_json())
}

pub fn oracle_json(params_json: &str) -> Result<String, String> {
    let params = parse(params_json)?;
    let inst = build(&params).map_err(|e| e.to_string())?;
    let caps = Caps { max_order: WEB_MAX_ORDER, ..Caps::default() };
    let g = enumerate_g(&inst, &caps)?;
    let rep = chardeg::degrees(&g, caps.max_classes).map_err(|e| e.to_string())?;
    let summary = OracleSummary {
        label: params.label(),
        order: g.order() as u64,
        classes: rep.degrees.len(),
        degrees: rep.degrees,
        degree_set: rep.degree_set,
        derived_length: grp::derived_length(g.as_ref()),
        fitting_height: grp::fitting_height(&g),
    };
    serde_json::to_string_pretty(&summary).map_err(|e| e.to_string())
}

pub fn presets_json() -> String {
    serde_json::to_string(&FamilyParams::presets()).expect("presets serialize")
}

/// Report document (certificate only) for a parameter object such as `{"family":"fitting_two","p":3}`.
#[wasm_bindgen]
pub fn certify(params_json: &str) -> Result<String, JsValue> {
    certify_json(params_json).map_err(|e| JsValue::from_str(&e))
}

/// Degrees, derived length and Fitting height of `G`, for `|G|` up to [`WEB_MAX_ORDER`].
#[wasm_bindgen]
pub fn oracle(params_json: &str) -> Result<String, JsValue> {
    oracle_json(params_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}
