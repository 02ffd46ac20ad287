//! Output records shared by every subcommand.
//!
//! A record is a parameter echo plus named sections, each a table of rows.
//! JSON writes one object `{schema_version, command, parameters, payload}`
//! with `payload.<section>` an array of row objects. CSV writes a single
//! table: the parameter columns, a `record` column naming the section, and
//! the union of all section columns (blank where a section has no value).
//! Both formats render every number from the same cell, so they agree
//! digit for digit.

use std::io::Write;

use gsaw_core::arith::{fraction_string, to_f64, BigRational};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "gsaw/1";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Float(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn fraction(r: &BigRational) -> Cell {
        Cell::Text(fraction_string(r))
    }

    pub fn float_of(r: &BigRational) -> Cell {
        Cell::Float(to_f64(r))
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => Value::from(*n),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
            other => match other.json() {
                Value::Null => String::new(),
                v => v.to_string(),
            },
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Clone, Debug)]
pub struct Section {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "section {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Clone, Debug)]
pub struct Record {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, Cell)>,
    pub sections: Vec<Section>,
}

impl Record {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            parameters: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.parameters.push((key, value.into()));
        self
    }

    pub fn section(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn to_json(&self) -> Value {
        let mut params = Map::new();
        for (k, v) in &self.parameters {
            params.insert(k.to_string(), v.json());
        }
        let mut payload = Map::new();
        for s in &self.sections {
            let rows = s
                .rows
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    for (c, v) in s.columns.iter().zip(r) {
                        o.insert(c.to_string(), v.json());
                    }
                    Value::Object(o)
                })
                .collect();
            payload.insert(s.name.to_string(), Value::Array(rows));
        }
        let mut top = Map::new();
        top.insert("schema_version".into(), SCHEMA_VERSION.into());
        top.insert("command".into(), self.command.into());
        top.insert("parameters".into(), Value::Object(params));
        top.insert("payload".into(), Value::Object(payload));
        Value::Object(top)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        out.write_all(b"\n")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut columns: Vec<&str> = Vec::new();
        for s in &self.sections {
            for c in &s.columns {
                if !columns.contains(c) {
                    columns.push(c);
                }
            }
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let mut header = vec!["schema_version", "command"];
        header.extend(self.parameters.iter().map(|(k, _)| *k));
        header.push("record");
        header.extend(columns.iter().copied());
        w.write_record(&header)?;
        let fixed: Vec<String> = [SCHEMA_VERSION.to_string(), self.command.to_string()]
            .into_iter()
            .chain(self.parameters.iter().map(|(_, v)| v.csv()))
            .collect();
        for s in &self.sections {
            for r in &s.rows {
                let mut line = fixed.clone();
                line.push(s.name.to_string());
                for c in &columns {
                    line.push(match s.columns.iter().position(|x| x == c) {
                        Some(i) => r[i].csv(),
                        None => String::new(),
                    });
                }
                w.write_record(&line)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gsaw_core::arith::rat;

    fn sample() -> Record {
        let mut r = Record::new("demo").param("n_max", 3usize).param("C", "1");
        let mut a = Section::new("distribution", &["n", "probability", "probability_float"]);
        a.push(vec![3usize.into(), Cell::fraction(&rat(1, 8)), Cell::float_of(&rat(1, 8))]);
        r.section(a);
        let mut b = Section::new("summary", &["decay"]);
        b.push(vec![f64::NAN.into()]);
        r.section(b);
        r
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "schema_version,command,n_max,C,record,n,probability,probability_float,decay");
        assert_eq!(lines[1], "gsaw/1,demo,3,1,distribution,3,1/8,0.125,");
        assert_eq!(lines[2], "gsaw/1,demo,3,1,summary,,,,");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_key_order_is_stable() {
        let v = sample().to_json();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["schema_version", "command", "parameters", "payload"]);
        let params: Vec<&String> = v["parameters"].as_object().unwrap().keys().collect();
        assert_eq!(params, ["n_max", "C"]);
        assert_eq!(v["payload"]["distribution"][0]["probability"], "1/8");
        assert!(v["payload"]["summary"][0]["decay"].is_null());
    }
}
