//! JSON and CSV writers with fixed 17-significant-digit floats.

use serde_json::{Map, Value};

/// Formats a float with 17 significant digits; non-finite values become
/// `null` in JSON and the bare words in CSV.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (_, Some(u), _) => out.push_str(&u.to_string()),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&float(f)),
            _ => out.push_str("null"),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Pretty JSON with the metadata block under `"metadata"`.
pub fn json_document(metadata: &Value, result: Value) -> String {
    let mut map = Map::new();
    map.insert("metadata".into(), metadata.clone());
    match result {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    let mut out = String::new();
    write_json(&Value::Object(map), 0, &mut out);
    out.push('\n');
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(f)) => float(f),
            _ => String::new(),
        },
        other => {
            let mut s = String::new();
            write_json(other, 0, &mut s);
            s.split_whitespace().collect::<Vec<_>>().join(" ")
        }
    }
}

/// CSV table preceded by `# key: value` metadata lines.
pub fn csv_document(metadata: &Value, header: &[&str], rows: &[Vec<Value>]) -> String {
    let mut out = String::new();
    if let Value::Object(map) = metadata {
        for (k, v) in map {
            out.push_str(&format!("# {k}: {}\n", cell(v)));
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(cell)).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv"));
    out
}

/// Flattens an object into `key,value` rows, joining nested keys with `.`.
pub fn flatten(v: &Value) -> Vec<Vec<Value>> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<Vec<Value>>) {
        match v {
            Value::Object(map) => {
                for (k, item) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, item, out);
                }
            }
            other => out.push(vec![Value::String(prefix.to_string()), other.clone()]),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_carry_17_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(-2.0), "-2.0000000000000000e0");
        assert_eq!(float(f64::NAN), "NaN");
    }

    #[test]
    fn json_round_trips() {
        let doc = json_document(&json!({"tool": "x"}), json!({"value": 0.1, "n": 3, "v": [1.5, null]}));
        let back: Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(back["value"].as_f64(), Some(0.1));
        assert_eq!(back["n"].as_u64(), Some(3));
        assert_eq!(back["metadata"]["tool"], "x");
    }

    #[test]
    fn csv_quotes_and_comments() {
        let doc = csv_document(&json!({"seed": 1}), &["a", "b"], &[vec![json!("T(1,2)"), json!(0.5)]]);
        assert_eq!(doc, "# seed: 1\na,b\n\"T(1,2)\",5.0000000000000000e-1\n");
    }
}
