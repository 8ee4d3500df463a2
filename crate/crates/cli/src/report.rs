//! Tabular reports and their CSV/JSON serialisations.
//!
//! Every numeric column `x` travels with an `x_tol` column: an absolute error
//! estimate or bound for that value (zero for exact counts). Complex values
//! split into `x_re`, `x_im` sharing one `x_tol`.

use std::io::Write;

use serde_json::{Map, Number, Value};
use weyl_lab_core::Complex64 as C;

use crate::spec_file::NumericPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Row label such as an index; carries no tolerance.
    Index,
    Real,
    Complex,
    /// Integer-valued quantity with a tolerance.
    Count,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Index(i64),
    Real(f64, f64),
    Complex(C, f64),
    Count(i64, f64),
    Text(String),
}

impl Cell {
    fn kind(&self) -> Kind {
        match self {
            Cell::Index(_) => Kind::Index,
            Cell::Real(..) => Kind::Real,
            Cell::Complex(..) => Kind::Complex,
            Cell::Count(..) => Kind::Count,
            Cell::Text(_) => Kind::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Normalised echo of the command and its parameters.
    pub command: String,
    pub digest: String,
    pub policy: NumericPolicy,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
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

impl Report {
    pub fn new(command: String, digest: String, policy: NumericPolicy, columns: &[(&str, Kind)]) -> Self {
        let columns = columns.iter().map(|(n, k)| Column { name: n.to_string(), kind: *k }).collect();
        Self { command, digest, policy, columns, rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        for (c, col) in row.iter().zip(&self.columns) {
            assert_eq!(c.kind(), col.kind, "column {} kind", col.name);
        }
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Flat field names, in output order, excluding the echo fields.
    pub fn field_names(&self) -> Vec<String> {
        let mut out = vec![];
        for c in &self.columns {
            match c.kind {
                Kind::Index | Kind::Text => out.push(c.name.clone()),
                Kind::Real | Kind::Count => {
                    out.push(c.name.clone());
                    out.push(format!("{}_tol", c.name));
                }
                Kind::Complex => {
                    out.push(format!("{}_re", c.name));
                    out.push(format!("{}_im", c.name));
                    out.push(format!("{}_tol", c.name));
                }
            }
        }
        out
    }

    fn flat_strings(row: &[Cell]) -> Vec<String> {
        let mut out = vec![];
        for c in row {
            match c {
                Cell::Index(i) => out.push(i.to_string()),
                Cell::Text(s) => out.push(s.clone()),
                Cell::Real(x, t) => out.extend([fmt_f64(*x), fmt_f64(*t)]),
                Cell::Count(n, t) => out.extend([n.to_string(), fmt_f64(*t)]),
                Cell::Complex(z, t) => out.extend([fmt_f64(z.re), fmt_f64(z.im), fmt_f64(*t)]),
            }
        }
        out
    }

    pub fn to_csv(&self) -> std::io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(vec![]);
        let mut header = vec!["command".to_string(), "digest".into(), "policy".into()];
        header.extend(self.field_names());
        w.write_record(&header)?;
        let policy = self.policy.compact();
        for row in &self.rows {
            let mut rec = vec![self.command.clone(), self.digest.clone(), policy.clone()];
            rec.extend(Self::flat_strings(row));
            w.write_record(&rec)?;
        }
        w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))
    }

    pub fn to_json(&self) -> Vec<u8> {
        fn num(x: f64) -> Value {
            Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        let names = self.field_names();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut vals = vec![];
                for c in row {
                    match c {
                        Cell::Index(i) => vals.push(Value::from(*i)),
                        Cell::Text(s) => vals.push(Value::from(s.clone())),
                        Cell::Real(x, t) => vals.extend([num(*x), num(*t)]),
                        Cell::Count(n, t) => vals.extend([Value::from(*n), num(*t)]),
                        Cell::Complex(z, t) => vals.extend([num(z.re), num(z.im), num(*t)]),
                    }
                }
                Value::Object(names.iter().cloned().zip(vals).collect::<Map<_, _>>())
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), self.command.clone().into());
        top.insert("digest".into(), self.digest.clone().into());
        top.insert("numeric_policy".into(), serde_json::to_value(self.policy).expect("policy serialises"));
        top.insert("columns".into(), Value::from(names));
        top.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_vec_pretty(&Value::Object(top)).expect("report serialises");
        out.push(b'\n');
        out
    }

    pub fn render(&self, format: Format) -> std::io::Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(report: &Report, format: Format, path: Option<&std::path::Path>) -> std::io::Result<()> {
    let bytes = report.render(format)?;
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("t".into(), "d".into(), NumericPolicy::default(), &[("i", Kind::Index), ("x", Kind::Real), ("z", Kind::Complex)]);
        r.push(vec![Cell::Index(0), Cell::Real(0.1, 1e-10), Cell::Complex(C::new(1.0 / 3.0, -2.0), 0.0)]);
        r
    }

    #[test]
    fn header_only_when_empty() {
        let mut r = sample();
        r.rows.clear();
        let s = String::from_utf8(r.to_csv().unwrap()).unwrap();
        assert_eq!(s, "command,digest,policy,i,x,x_tol,z_re,z_im,z_tol\n");
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        let s = String::from_utf8(sample().to_csv().unwrap()).unwrap();
        let line = s.lines().nth(1).unwrap();
        let z_re: f64 = line.split(',').nth(6).unwrap().parse().unwrap();
        assert_eq!(z_re, 1.0 / 3.0);
    }

    #[test]
    fn json_keys_in_column_order() {
        let v: Value = serde_json::from_slice(&sample().to_json()).unwrap();
        let row = v["rows"][0].as_object().unwrap();
        let keys: Vec<&str> = row.keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["i", "x", "x_tol", "z_re", "z_im", "z_tol"]);
        assert_eq!(row["z_re"].as_f64().unwrap(), 1.0 / 3.0);
    }
}
