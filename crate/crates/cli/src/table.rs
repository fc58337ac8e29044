//! Plain-text rendering: one line per JSON leaf, `path  value`, with the
//! value in its JSON encoding so a table can be read back.

use serde_json::{Map, Value};

fn flatten_into(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_into(&key, x, out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, x) in items.iter().enumerate() {
                flatten_into(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), v.clone())),
    }
}

/// Leaves of `v` with their paths, in document order.
pub fn flatten(v: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    flatten_into("", v, &mut out);
    out
}

pub fn render(v: &Value) -> String {
    let rows = flatten(v);
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    for (k, x) in rows {
        let key = if k.is_empty() { "." } else { k.as_str() };
        s.push_str(&format!("{key:<width$}  {x}\n"));
    }
    s
}

/// Inverse of [`render`] up to key order: the flattened leaves.
pub fn parse(text: &str) -> Result<Vec<(String, Value)>, String> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (key, rest) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| format!("malformed line: {line}"))?;
            let value: Value = serde_json::from_str(rest.trim()).map_err(|e| e.to_string())?;
            let key = if key == "." {
                String::new()
            } else {
                key.to_string()
            };
            Ok((key, value))
        })
        .collect()
}

/// Flattened leaves as an ordered map, convenient for comparisons.
pub fn leaves(v: &Value) -> Map<String, Value> {
    flatten(v).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn render_and_parse_round_trip() {
        let v = json!({"a": {"b": ["1/2", 3]}, "c": [], "d": "x y", "e": null});
        let back: Map<String, Value> = parse(&render(&v)).unwrap().into_iter().collect();
        assert_eq!(back, leaves(&v));
        assert_eq!(back["a.b[0]"], json!("1/2"));
        assert_eq!(back["c"], json!([]));
        assert_eq!(back["d"], json!("x y"));
    }
}
