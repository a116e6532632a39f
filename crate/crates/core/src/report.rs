//! Canonical JSON emission for reports.
//!
//! Reports are regression artifacts: given the same configuration they must
//! be byte-identical across runs on one platform. Keys are emitted sorted
//! and every float is printed with 17 significant digits, which
//! round-trips f64 exactly.

use serde_json::Value;

/// Schema version stamped into every report this crate emits.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Render a JSON value canonically: sorted object keys, fixed float format.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            newline(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's default map is a BTreeMap, so iteration is
            // already key-sorted; sort defensively in case the feature
            // set changes.
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(indent + 1, out);
                out.push_str(&serde_json::to_string(k).expect("key serialization"));
                out.push_str(": ");
                write_value(&map[*k], indent + 1, out);
            }
            newline(indent, out);
            out.push('}');
        }
    }
}

fn newline(indent: usize, out: &mut String) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits in scientific notation; enough to reconstruct
/// the exact f64.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "\"nan\"".to_string();
    }
    if x.is_infinite() {
        return format!("\"{}inf\"", if x < 0.0 { "-" } else { "" });
    }
    format!("{x:.16e}")
}
