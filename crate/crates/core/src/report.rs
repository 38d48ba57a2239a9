//! JSON-lines records shared by every subcommand.

use serde_json::{json, Map, Value};

use crate::measures::{Mode, Params, FLOAT_TOLERANCE};
use crate::rational::{fraction_string, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// An exact number: `{"mode": "rational", "value": "num/den"}`.
pub fn exact(r: &Rational) -> Value {
    json!({ "mode": "rational", "value": fraction_string(r) })
}

/// A float with the tolerance it carries.
pub fn float(x: f64) -> Value {
    json!({ "mode": "float", "value": x, "tolerance": FLOAT_TOLERANCE })
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Rational => "rational",
        Mode::Float => "float",
    }
}

pub fn params(p: &Params) -> Value {
    serde_json::to_value(p.record()).expect("params serialize")
}

/// One output record: `schema_version`, `check`, `graph`, then `body`'s
/// fields.
pub fn record(check: &str, graph: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("check".into(), json!(check));
    map.insert("graph".into(), json!(graph));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

/// Serialize records as JSON lines.
pub fn lines(records: &[Value]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn records_carry_schema_and_modes() {
        let r = record("demo", "g", json!({"value": exact(&rat(2, 4)), "gap": float(0.5)}));
        let line = lines(&[r]);
        assert_eq!(
            line,
            "{\"check\":\"demo\",\"gap\":{\"mode\":\"float\",\"tolerance\":1e-12,\"value\":0.5},\"graph\":\"g\",\"schema_version\":1,\"value\":{\"mode\":\"rational\",\"value\":\"1/2\"}}\n"
        );
    }
}
