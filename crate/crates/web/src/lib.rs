//! Browser bindings. Every export takes and returns plain strings; failures
//! come back as `{"error": kind, "message": ...}`.

use gorulab::exactnum::Rational;
use gorulab::fgraded;
use gorulab::molien::{self, GroupSpec};
use gorulab::triangles::{self, Presentation};
use gorulab::Error;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_GROUP_ORDER: usize = 2_000;
const MAX_K: u32 = 40;

fn error_json(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

/// Text rendering of a coefficient triangle.
pub fn triangle_text(r: i32, rows: u32, presentation: &str) -> Result<String, String> {
    let p: Presentation = presentation.parse().map_err(|e: Error| error_json(&e))?;
    let rows = rows.min(40) as usize;
    triangles::emit_triangle(r.into(), rows, p).map(|t| t.to_string()).map_err(|e| error_json(&e))
}

/// Relation check on a JSON array of rationals; `r = None` derives it from `γ_0, γ_1`.
pub fn check_gammas_json(gammas: &str, r: Option<i32>, m_max: u32) -> Result<String, String> {
    let run = || -> gorulab::Result<String> {
        let g: Vec<Rational> = serde_json::from_str(gammas).map_err(|e| Error::Parse(e.to_string()))?;
        let r = match r {
            Some(r) => i64::from(r),
            None => {
                let [g0, g1, ..] = g.as_slice() else {
                    return Err(Error::InsufficientCoefficients("need γ_0 and γ_1".into()));
                };
                let d = fgraded::degree_from_gammas(g0, g1)?;
                d.to_i64()
                    .filter(|_| d.is_integer())
                    .ok_or_else(|| Error::InvalidInput(format!("2γ_1/γ_0 = {d} is not an integer")))?
            }
        };
        let check = fgraded::check_relations(&g, r, i64::from(m_max.clamp(1, 60)))?;
        let violation = check.first_violation().map(|(f, x)| {
            json!({ "family": f, "m": x.m, "residual": x.reduced_residual, "certificate": x.certificate() })
        });
        let evaluated: usize = check.reports.iter().map(|rep| rep.residuals.len()).sum();
        Ok(json!({
            "r": r,
            "consistent": check.is_consistent(),
            "evaluated": evaluated,
            "skipped": check.skipped_count(),
            "violation": violation,
        })
        .to_string())
    };
    run().map_err(|e| error_json(&e))
}

/// Molien series and Gorenstein screen of a group given as JSON.
pub fn molien_screen_json(group: &str, k: u32, m_max: u32) -> Result<String, String> {
    let run = || -> gorulab::Result<String> {
        let spec: GroupSpec = serde_json::from_str(group).map_err(|e| Error::Parse(e.to_string()))?;
        let g = spec.closure(MAX_GROUP_ORDER)?;
        let k = k.clamp(3, MAX_K) as usize;
        let series = molien::molien_series(&g, k)?;
        let report = molien::gorenstein_screen(&g, k, i64::from(m_max.clamp(1, 60)))?;
        Ok(json!({
            "group": g.summary(),
            "hilbert": series.hilbert.to_string(),
            "gammas": series.laurent.gammas,
            "pseudoreflections": report.pseudoreflections,
            "verdict": report.verdict,
        })
        .to_string())
    };
    run().map_err(|e| error_json(&e))
}

#[wasm_bindgen]
pub fn triangle(r: i32, rows: u32, presentation: &str) -> Result<String, JsValue> {
    triangle_text(r, rows, presentation).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check_gammas(gammas: &str, r: Option<i32>, m_max: u32) -> Result<String, JsValue> {
    check_gammas_json(gammas, r, m_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn molien_screen(group: &str, k: u32, m_max: u32) -> Result<String, JsValue> {
    molien_screen_json(group, k, m_max).map_err(|e| JsValue::from_str(&e))
}
