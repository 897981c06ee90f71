//! JSON output with fixed six-decimal floats.
//!
//! Integers print as integers; every other number prints with exactly six
//! decimals so that outputs diff cleanly and compare byte-for-byte across runs.

use serde::Serialize;
use serde_json::Value;

pub fn to_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("output serializes");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&value.to_string()),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (None, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&fixed(n.as_f64().expect("finite number"))),
        },
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                out.push_str(if i > 0 { ",\n" } else { "\n" });
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                out.push_str(if i > 0 { ",\n" } else { "\n" });
                indent(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            indent(out, depth);
            out.push('}');
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn indent(out: &mut String, depth: usize) {
    out.extend(std::iter::repeat_n("  ", depth));
}

/// Six-decimal fixed notation. Negative zero prints as zero.
pub fn fixed(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_fixed_integers_plain() {
        let v = json!({"a": 0.5, "b": 3, "c": [1.0, 2], "d": null, "e": {"f": "x\"y"}, "g": []});
        assert_eq!(
            to_json(&v),
            "{\n  \"a\": 0.500000,\n  \"b\": 3,\n  \"c\": [1.000000, 2],\n  \"d\": null,\n  \"e\": {\n    \"f\": \"x\\\"y\"\n  },\n  \"g\": []\n}\n"
        );
    }

    #[test]
    fn nested_arrays_break_lines() {
        let v = json!([{"k": 1}, {"k": 2}]);
        assert_eq!(to_json(&v), "[\n  {\n    \"k\": 1\n  },\n  {\n    \"k\": 2\n  }\n]\n");
    }

    #[test]
    fn output_parses_back() {
        let v = json!({"map": 0.123456789, "neg": -1e-9});
        let parsed: Value = serde_json::from_str(&to_json(&v)).unwrap();
        assert_eq!(parsed["map"].as_f64(), Some(0.123457));
        assert_eq!(parsed["neg"].as_f64(), Some(0.0));
    }
}
