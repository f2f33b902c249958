//! Tabular results and their CSV / JSON renderings. Reals are always written
//! with 17 significant digits so both formats round-trip exactly.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<i128> for Cell {
    fn from(v: i128) -> Self {
        Cell::Int(v)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

pub fn format_real(x: f64) -> String {
    // one spelling for zero
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::Number(Number::from_str(&v.to_string()).expect("integer literal")),
            Cell::Real(v) if v.is_finite() => {
                Value::Number(Number::from_str(&format_real(*v)).expect("finite real"))
            }
            Cell::Real(_) | Cell::Null => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// rendered as a single JSON object instead of an array
    pub single: bool,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new(), single: false }
    }

    pub fn single(name: &'static str, columns: &[&'static str], row: Vec<Cell>) -> Self {
        let mut t = Table::new(name, columns);
        t.push(row);
        t.single = true;
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    fn json_row(&self, row: &[Cell]) -> Value {
        let mut obj = Map::new();
        for (c, v) in self.columns.iter().zip(row) {
            obj.insert(c.to_string(), v.json());
        }
        Value::Object(obj)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    /// every resolved parameter, in a fixed order
    pub params: Vec<(&'static str, Cell)>,
    pub tables: Vec<Table>,
}

pub const ARTIFACT: &str = "poincare";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, params: Vec::new(), tables: Vec::new() }
    }

    pub fn param(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.params.push((key, value.into()));
    }

    pub fn header_line(&self) -> String {
        let mut s = format!("# {ARTIFACT} {VERSION} {}", self.command);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={}", v.text()));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header_line();
        out.push('\n');
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push_str(&format!("# {}\n", t.name));
            }
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(&t.columns).expect("in-memory write");
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::text)).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8 fields"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut params = Map::new();
        for (k, v) in &self.params {
            params.insert(k.to_string(), v.json());
        }
        let mut header = Map::new();
        header.insert("artifact".into(), ARTIFACT.into());
        header.insert("version".into(), VERSION.into());
        header.insert("command".into(), self.command.into());
        header.insert("parameters".into(), Value::Object(params));
        let mut root = Map::new();
        root.insert("header".into(), Value::Object(header));
        for t in &self.tables {
            let v = if t.single {
                t.rows.first().map_or(Value::Null, |r| t.json_row(r))
            } else {
                Value::Array(t.rows.iter().map(|r| t.json_row(r)).collect())
            };
            root.insert(t.name.into(), v);
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json values");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_keep_seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(-2.0), "-2.0000000000000000e0");
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, f64::MIN_POSITIVE] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn renders_both_formats() {
        let mut r = Report::new("demo");
        r.param("k", 12u32);
        r.param("tol", 1e-12);
        r.tables.push(Table::single("result", &["a", "b", "c"], vec![1.5.into(), "x,y".into(), Cell::Null]));
        let csv = r.to_csv();
        let want = format!(
            "# poincare {VERSION} demo k=12 tol=9.9999999999999998e-13\na,b,c\n1.5000000000000000e0,\"x,y\",\n"
        );
        assert_eq!(csv, want);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["header"]["parameters"]["k"].as_u64(), Some(12));
        assert_eq!(v["result"]["a"].as_f64(), Some(1.5));
        assert!(v["result"]["c"].is_null());
    }
}
