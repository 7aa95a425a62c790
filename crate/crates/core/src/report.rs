//! Flat report records with fixed number formatting, written as CSV or
//! single-line JSON.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Significant digits kept in reports.
pub const DIGITS: usize = 15;

/// Rounds to 15 significant digits. Non-finite values pass through and -0
/// becomes 0.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest text that reads back as `round_sig(x)`, in exponent form outside
/// `[1e-5, 1e16)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // serde_json prints the shortest round-trip form with the same switch
    // to exponent notation
    serde_json::to_string(&round_sig(x)).unwrap_or_else(|_| x.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    /// A list: a JSON array, `;`-separated in CSV.
    Nums(Vec<f64>),
    Int(i64),
    Str(String),
    Bool(bool),
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Num(x) => fmt_num(*x),
            Field::Nums(xs) => xs.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(";"),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(x) => serde_json::Number::from_f64(round_sig(*x)).map(Value::Number).unwrap_or(Value::Null),
            Field::Nums(xs) => Value::Array(xs.iter().map(|x| Field::Num(*x).json()).collect()),
            Field::Int(i) => Value::from(*i),
            Field::Str(s) => Value::from(s.as_str()),
            Field::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}
impl From<Vec<f64>> for Field {
    fn from(x: Vec<f64>) -> Self {
        Field::Nums(x)
    }
}
impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Int(x as i64)
    }
}
impl From<u64> for Field {
    fn from(x: u64) -> Self {
        Field::Int(x as i64)
    }
}
impl From<i64> for Field {
    fn from(x: i64) -> Self {
        Field::Int(x)
    }
}
impl From<bool> for Field {
    fn from(x: bool) -> Self {
        Field::Bool(x)
    }
}
impl From<&str> for Field {
    fn from(x: &str) -> Self {
        Field::Str(x.to_string())
    }
}
impl From<String> for Field {
    fn from(x: String) -> Self {
        Field::Str(x)
    }
}

/// Ordered key/value record.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Field)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) {
        self.0.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> Vec<&str> {
        self.0.iter().map(|(k, _)| k.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self.0.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        Value::Object(map).to_string()
    }
}

/// CSV with a header taken from the first record; all records must share
/// its keys.
pub fn to_csv(records: &[Record]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = records.first() {
        let keys = first.keys();
        w.write_record(&keys).map_err(io)?;
        for (i, r) in records.iter().enumerate() {
            if r.keys() != keys {
                return Err(Error::Input(format!("record {i} has different columns")));
            }
            w.write_record(r.0.iter().map(|(_, v)| v.text())).map_err(io)?;
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Input(e.to_string()))?).map_err(|e| Error::Input(e.to_string()))
}

/// One JSON object per line.
pub fn to_json_lines(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_json());
        out.push('\n');
    }
    out
}

fn io(e: csv::Error) -> Error {
    Error::Input(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(2.0 * std::f64::consts::PI), "6.28318530717959");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(1.5e-7), "1.5e-7");
        assert_eq!(fmt_num(3.0), "3.0");
        assert_eq!(fmt_num(f64::NAN), "NaN");
        assert_eq!(fmt_num(-0.0), "0.0");
    }

    #[test]
    fn csv_and_json() {
        let rs = vec![
            Record::new().with("id", "a").with("x", 0.5).with("ok", true),
            Record::new().with("id", "b,c").with("x", 1e-9).with("ok", false),
        ];
        let csv = to_csv(&rs).unwrap();
        assert_eq!(csv, "id,x,ok\na,0.5,true\n\"b,c\",1e-9,false\n");
        assert_eq!(rs[0].to_json(), r#"{"id":"a","x":0.5,"ok":true}"#);
        let list = Record::new().with("r", vec![1.0, 0.25]);
        assert_eq!(list.to_json(), r#"{"r":[1.0,0.25]}"#);
        assert_eq!(to_csv(&[list]).unwrap(), "r\n1.0;0.25\n");
        let bad = vec![rs[0].clone(), Record::new().with("y", 1.0)];
        assert!(to_csv(&bad).is_err());
    }
}
