//! Deterministic report rendering.

use serde_json::Value;

/// Floats are written with 17 significant digits.
pub fn format_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        format!("{:.16e}", n.as_f64().expect("finite json number"))
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => format_number(n),
        Value::String(s) => serde_json::to_string(s).expect("string serializes"),
        Value::Array(_) | Value::Object(_) => unreachable!("scalar called on a container"),
    }
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (k, x) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&scalar(x));
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(x, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push_str(": ");
                write_json(x, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&scalar(other)),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, 0, &mut out);
    out.push('\n');
    out
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&join(k), x, rows)),
        Value::Array(items) => items.iter().enumerate().for_each(|(k, x)| flatten(&join(&k.to_string()), x, rows)),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

/// Two-column `key,value` CSV of the flattened report; nested keys are
/// joined with `.` and array elements are indexed from 0.
pub fn to_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["key", "value"]).expect("in-memory write");
    for (k, x) in rows {
        writer.write_record([k, x]).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_use_seventeen_digits() {
        let v = json!({ "a": 0.1, "b": 3, "c": [1.5, -2.0], "d": null, "e": "x" });
        let text = to_json(&v);
        assert!(text.contains("\"a\": 1.0000000000000001e-1"));
        assert!(text.contains("\"b\": 3"));
        assert!(text.contains("[1.5000000000000000e0, -2.0000000000000000e0]"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"], json!(0.1));
    }

    #[test]
    fn csv_flattens_paths() {
        let v = json!({ "x": { "y": [true, 2] }, "z": null });
        assert_eq!(to_csv(&v), "key,value\nx.y.0,true\nx.y.1,2\nz,\n");
    }
}
