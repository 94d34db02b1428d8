use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use singinv::cmeval::EvalResult;
use singinv::IntPoly;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Timing {
    pub seconds: f64,
}

/// Structured output of every subcommand under `--json`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub result: Value,
    pub timing: Timing,
    /// Where each curve record and fixture came from.
    pub provenance: BTreeMap<String, String>,
}

/// Ascending coefficients as decimal strings.
pub fn poly_json(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn value_json(v: &EvalResult, digits: u32) -> Value {
    serde_json::json!({
        "re": v.value.re.to_decimal(digits),
        "im": v.value.im.to_decimal(digits),
        "err": format!("{:e}", v.err),
        "terms": v.terms_used,
    })
}

pub fn value_text(v: &EvalResult, digits: u32) -> String {
    format!("{}  (err {:.1e}, {} terms)", v.value.to_decimal(digits), v.err, v.terms_used)
}
