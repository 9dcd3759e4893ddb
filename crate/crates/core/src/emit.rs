//! Text encodings shared by the grid writer and the CLI.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which round-trips
//! every finite `f64`. Non-finite values become the literals `inf`, `-inf`
//! and `nan` in CSV and the corresponding strings in JSON.

use crate::error::{Error, Result};

/// Fixed 17-significant-digit rendering of `x`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON rendering of `x`; non-finite values are quoted.
pub fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt_num(x)
    } else {
        format!("\"{}\"", fmt_num(x))
    }
}

/// Inverse of [`fmt_num`]; also accepts any decimal literal.
pub fn parse_num(text: &str) -> Result<f64> {
    text.trim().parse::<f64>().map_err(|_| Error::Format(format!("not a number: {text:?}")))
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A JSON-like value with deterministic formatting.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
    List(Vec<Value>),
    Object(Record),
}

impl Value {
    pub fn nums(xs: &[f64]) -> Value {
        Value::List(xs.iter().map(|&x| Value::Num(x)).collect())
    }

    pub fn to_json(&self) -> String {
        match self {
            Value::Num(x) => json_num(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => json_str(s),
            Value::Null => "null".into(),
            Value::List(xs) => {
                let parts: Vec<String> = xs.iter().map(Value::to_json).collect();
                format!("[{}]", parts.join(","))
            }
            Value::Object(r) => r.to_json(),
        }
    }

    /// CSV cell text. Lists are joined with `;`.
    pub fn to_csv(&self) -> String {
        match self {
            Value::Num(x) => fmt_num(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
            Value::List(xs) => xs.iter().map(Value::to_csv).collect::<Vec<_>>().join(";"),
            Value::Object(r) => r.to_json(),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<u32> for Value {
    fn from(i: u32) -> Self {
        Value::Int(i as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.into())
    }
}

impl From<Record> for Value {
    fn from(r: Record) -> Self {
        Value::Object(r)
    }
}

/// Ordered key/value pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.into(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.into(), value.into()));
    }

    pub fn to_json(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{}:{}", json_str(k), v.to_json())).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Header line and one data line.
    pub fn to_csv(&self) -> String {
        let header: Vec<&str> = self.0.iter().map(|(k, _)| k.as_str()).collect();
        let row: Vec<String> = self.0.iter().map(|(_, v)| v.to_csv()).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

/// Rows sharing one set of columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::to_csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by column name.
    pub fn to_value(&self) -> Value {
        Value::List(
            self.rows
                .iter()
                .map(|row| {
                    Value::Object(Record(self.columns.iter().cloned().zip(row.iter().cloned()).collect()))
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_literals() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        assert_eq!(json_num(f64::NEG_INFINITY), "\"-inf\"");
        assert_eq!(parse_num("-inf").unwrap(), f64::NEG_INFINITY);
        assert!(parse_num("abc").is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        for &x in &[0.1, 1.0 / 3.0, -1e-300, 6.02214076e23, f64::MIN_POSITIVE, 5e-324, f64::MAX] {
            assert_eq!(parse_num(&fmt_num(x)).unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn records_and_tables() {
        let r = Record::new().with("a", 1.5).with("b", "x\"y").with("c", Value::nums(&[1.0, f64::INFINITY]));
        assert_eq!(
            r.to_json(),
            "{\"a\":1.5000000000000000e0,\"b\":\"x\\\"y\",\"c\":[1.0000000000000000e0,\"inf\"]}"
        );
        let mut t = Table::new(&["n", "v"]);
        t.push(vec![Value::Int(3), Value::Num(f64::NEG_INFINITY)]);
        assert_eq!(t.to_csv(), "n,v\n3,-inf\n");
        assert_eq!(t.to_json(), "[{\"n\":3,\"v\":\"-inf\"}]");
    }
}
