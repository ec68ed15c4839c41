//! Browser bindings. Each export takes edge-list text and returns a JSON
//! string the page draws from; the plain `*_json` functions are the same
//! operations without the JS boundary so they can be tested natively.

use serde_json::{json, Value};
use shiftkit::conversion::{convert_to_shift_enabled, DescriptionMode, PerturbationPolicy, SparsityPattern};
use shiftkit::exact::RationalMatrix;
use shiftkit::io::report::{fmt_matrix, PatternSearchSection, ShiftSection};
use shiftkit::io::{build_shift, parse_graph_str, parse_matrix, InputFormat, ShiftKind};
use shiftkit::locality::density;
use shiftkit::pattern::exists_shift_enabled_with_pattern;
use shiftkit::real::RealMatrix;
use shiftkit::shift::{construct_nonrepresentable_filter, is_shift_enabled, ConstructedFilter};
use shiftkit::spectral::{symm_eig, ToleranceConfig};
use wasm_bindgen::prelude::*;

/// Largest graph the demo accepts; keeps the page responsive.
pub const MAX_NODES: usize = 24;

fn shift_from(edges: &str) -> Result<RationalMatrix, String> {
    let input = parse_graph_str(edges, InputFormat::EdgeList, ShiftKind::Adjacency).map_err(|e| e.to_string())?;
    if input.n > MAX_NODES {
        return Err(format!("the demo handles at most {MAX_NODES} nodes"));
    }
    build_shift(&input).map_err(|e| e.to_string())
}

fn to_string(v: Value) -> String {
    serde_json::to_string(&v).expect("json values serialize")
}

pub fn analyze_json(edges: &str) -> Result<String, String> {
    let cfg = ToleranceConfig::default();
    let s = shift_from(edges)?;
    let report = is_shift_enabled(&s, &cfg);
    let eig = symm_eig(&s, &cfg).map_err(|e| e.to_string())?;
    let section = ShiftSection::new(&report, Some(&eig.eigenvalues));
    Ok(to_string(json!({ "shift": section, "eigenvalues": eig.eigenvalues, "matrix": s.to_f64_rows() })))
}

/// Uses `filter` (matrix text) when given, else a constructed filter that
/// commutes with the shift but is no polynomial in it.
pub fn convert_json(edges: &str, filter: &str, epsilon: Option<f64>) -> Result<String, String> {
    let cfg = ToleranceConfig::default();
    let s = shift_from(edges)?;
    let h = if filter.trim().is_empty() {
        match construct_nonrepresentable_filter(&s, &cfg).map_err(|e| e.to_string())? {
            ConstructedFilter::Exact(h) => h,
            ConstructedFilter::Approximate(_) => return Err("no exact filter; supply one".into()),
        }
    } else {
        parse_matrix(filter).map_err(|e| e.to_string())?
    };
    let policy = match epsilon {
        Some(e) => PerturbationPolicy::with_epsilon(e),
        None => PerturbationPolicy::default(),
    };
    let out = convert_to_shift_enabled(&s, &h, &policy, &cfg).map_err(|e| e.to_string())?;
    Ok(to_string(json!({
        "original": s.to_f64_rows(),
        "filter": fmt_matrix(&h),
        "converted": out.s_tilde.rows(),
        "epsilon": out.epsilon,
        "shift_enabled": out.shift_enabled,
        "commutes_with_h": out.commutes_with_h,
        "strict_same_graph": out.strict_same_graph,
        "loose_same_graph": out.loose_same_graph,
        "recovery_residual": out.recovery.as_ref().map(|r| r.residual),
        "density_original": density(&RealMatrix::from_rational(&s), 0.0),
        "density_converted": density(&out.s_tilde, policy.zero_tol),
    })))
}

pub fn search_json(edges: &str, mode: &str, trials: u32, seed: u32) -> Result<String, String> {
    let s = shift_from(edges)?;
    let mode: DescriptionMode = mode.parse()?;
    let pattern = SparsityPattern::of_matrix(&s, mode);
    let report =
        exists_shift_enabled_with_pattern(&pattern, None, trials.into(), seed.into()).map_err(|e| e.to_string())?;
    let section = PatternSearchSection::new(&report, mode, trials.into(), seed.into(), None);
    Ok(to_string(json!({ "search": section })))
}

#[wasm_bindgen]
pub fn analyze(edges: &str) -> Result<String, JsValue> {
    analyze_json(edges).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn convert(edges: &str, filter: &str, epsilon: Option<f64>) -> Result<String, JsValue> {
    convert_json(edges, filter, epsilon).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn search_pattern(edges: &str, mode: &str, trials: u32, seed: u32) -> Result<String, JsValue> {
    search_json(edges, mode, trials, seed).map_err(|e| JsValue::from_str(&e))
}
