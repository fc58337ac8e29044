//! JSON system documents: parsing with field paths in errors, and canonical
//! emission.

use std::fmt;

use rigidconv::{format_rational, parse_rational, Error, FuchsianSystem, MatQ, Rational};
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Field path such as `residues[1][0][1]`, or `line 3, column 7` for
    /// malformed JSON.
    pub path: String,
    /// Kind of the underlying library error, if the failure came from
    /// system validation.
    pub kind: Option<&'static str>,
    pub message: String,
}

impl ParseError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError {
            path: path.into(),
            kind: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemDocument {
    pub name: Option<String>,
    pub description: Option<String>,
    pub system: FuchsianSystem,
}

impl SystemDocument {
    pub fn new(system: FuchsianSystem) -> Self {
        SystemDocument {
            name: None,
            description: None,
            system,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            ParseError::at(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, ParseError> {
        let obj = value
            .as_object()
            .ok_or_else(|| ParseError::at("$", "expected a JSON object"))?;
        let name = optional_string(obj, "name")?;
        let description = optional_string(obj, "description")?;

        let rank = obj
            .get("rank")
            .ok_or_else(|| ParseError::at("rank", "missing field"))?
            .as_u64()
            .ok_or_else(|| ParseError::at("rank", "expected a non-negative integer"))?
            as usize;

        let points_value = obj
            .get("points")
            .ok_or_else(|| ParseError::at("points", "missing field"))?
            .as_array()
            .ok_or_else(|| ParseError::at("points", "expected an array"))?;
        let points = points_value
            .iter()
            .enumerate()
            .map(|(i, v)| rational_field(v, &format!("points[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;

        let residues_value = obj
            .get("residues")
            .ok_or_else(|| ParseError::at("residues", "missing field"))?
            .as_array()
            .ok_or_else(|| ParseError::at("residues", "expected an array"))?;
        if residues_value.len() != points.len() {
            return Err(ParseError::at(
                "residues",
                format!(
                    "{} residues for {} points",
                    residues_value.len(),
                    points.len()
                ),
            ));
        }
        let residues = residues_value
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_field(m, rank, &format!("residues[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;

        let system = FuchsianSystem::new(rank, points, residues).map_err(|e| {
            let path = match &e {
                Error::DuplicatePoints { index, .. } => format!("points[{index}]"),
                _ => "$".to_string(),
            };
            ParseError {
                path,
                kind: Some(e.kind()),
                message: e.to_string(),
            }
        })?;
        Ok(SystemDocument {
            name,
            description,
            system,
        })
    }

    /// Canonical form: optional metadata, then rank, points and residues
    /// with every rational in lowest terms as a string.
    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        if let Some(name) = &self.name {
            obj.insert("name".into(), json!(name));
        }
        if let Some(description) = &self.description {
            obj.insert("description".into(), json!(description));
        }
        obj.insert("rank".into(), json!(self.system.rank()));
        obj.insert("points".into(), rationals(self.system.points()));
        obj.insert(
            "residues".into(),
            Value::Array(self.system.residues().iter().map(matrix_value).collect()),
        );
        Value::Object(obj)
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }
}

fn optional_string(obj: &Map<String, Value>, key: &str) -> Result<Option<String>, ParseError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(ParseError::at(key, "expected a string")),
    }
}

fn rational_field(v: &Value, path: &str) -> Result<Rational, ParseError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| ParseError::at(path, e.to_string())),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rational(&n.to_string()).map_err(|e| ParseError::at(path, e.to_string()))
        }
        Value::Number(_) => Err(ParseError::at(
            path,
            "floating-point numbers are not accepted; write rationals as \"a/b\"",
        )),
        _ => Err(ParseError::at(path, "expected a rational string")),
    }
}

fn matrix_field(v: &Value, n: usize, path: &str) -> Result<MatQ, ParseError> {
    let rows = v
        .as_array()
        .ok_or_else(|| ParseError::at(path, "expected an array of rows"))?;
    if rows.len() != n {
        return Err(ParseError::at(
            path,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| ParseError::at(&row_path, "expected an array"))?;
        if entries.len() != n {
            return Err(ParseError::at(
                &row_path,
                format!("expected {n} entries, found {}", entries.len()),
            ));
        }
        for (j, x) in entries.iter().enumerate() {
            data.push(rational_field(x, &format!("{row_path}[{j}]"))?);
        }
    }
    MatQ::new(n, n, data).map_err(|e| ParseError::at(path, e.to_string()))
}

pub fn rational_value(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn rationals(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rational_value).collect())
}

pub fn matrix_value(m: &MatQ) -> Value {
    Value::Array(m.to_rows().iter().map(|row| rationals(row)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_rank_one_document() {
        let doc = SystemDocument::parse(
            r#"{"rank":1,"points":["0","1"],"residues":[[["1/2"]],[["1/3"]]]}"#,
        )
        .unwrap();
        assert_eq!(doc.system.rank(), 1);
        assert_eq!(doc.system.points().len(), 2);
        let again = SystemDocument::parse(&doc.to_canonical_string()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn canonicalizes_rationals() {
        let doc = SystemDocument::parse(
            r#"{"rank":1,"points":["0","2/4"],"residues":[[["-6/4"]],[[3]]]}"#,
        )
        .unwrap();
        let v = doc.to_value();
        assert_eq!(v["points"], json!(["0", "1/2"]));
        assert_eq!(v["residues"], json!([[["-3/2"]], [["3"]]]));
    }

    #[test]
    fn errors_carry_paths() {
        let e = SystemDocument::parse(
            r#"{"rank":1,"points":["0","1"],"residues":[[["1/0"]],[["1/3"]]]}"#,
        )
        .unwrap_err();
        assert_eq!(e.path, "residues[0][0][0]");
        let e = SystemDocument::parse(
            r#"{"rank":1,"points":["0","0"],"residues":[[["1"]],[["1/3"]]]}"#,
        )
        .unwrap_err();
        assert_eq!(e.path, "points[1]");
        assert_eq!(e.kind, Some("DuplicatePoints"));
        let e = SystemDocument::parse(r#"{"rank":2,"points":["0"],"residues":[[["1","0"]]]}"#)
            .unwrap_err();
        assert_eq!(e.path, "residues[0]");
        let e =
            SystemDocument::parse(r#"{"rank":1,"points":[0.5],"residues":[[["1"]]]}"#).unwrap_err();
        assert_eq!(e.path, "points[0]");
        let e = SystemDocument::parse("{\"rank\":1,\n\"points\":[}").unwrap_err();
        assert!(e.path.starts_with("line 2"), "{}", e.path);
    }
}
