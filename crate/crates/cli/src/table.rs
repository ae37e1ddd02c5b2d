//! Column tables and their byte-stable CSV / JSON encodings.
//!
//! Floats are written with 9 significant digits in `%g` style, so identical
//! inputs always produce identical files.

use std::io::Write;

use anyhow::Result;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write(&self, format: Format, out: impl Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, mut out: impl Write) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell_json(cell)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &rows)?;
        out.write_all(b"\n")?;
        Ok(())
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Num(v) => fmt_sig9(*v),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
    }
}

fn cell_json(cell: &Cell) -> Value {
    match cell {
        Cell::Int(v) => Value::from(*v),
        // Round-trip through the text form so JSON carries the same digits.
        Cell::Num(v) if v.is_finite() => Value::from(fmt_sig9(*v).parse::<f64>().expect("formatted float")),
        Cell::Num(_) => Value::Null,
        Cell::Text(s) => Value::from(s.as_str()),
        Cell::Bool(b) => Value::from(*b),
    }
}

/// `%.9g`: 9 significant digits, fixed notation for exponents in `-4..9`,
/// trailing zeros removed.
pub fn fmt_sig9(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        trim_zeros(format!("{:.*}", (8 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(0.1), "0.1");
        assert_eq!(fmt_sig9(30.0), "30");
        assert_eq!(fmt_sig9(-10.0), "-10");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig9(123_456_789.4), "123456789");
        assert_eq!(fmt_sig9(1_234_567_890.0), "1.23456789e+09");
        assert_eq!(fmt_sig9(9.999_999_999_7), "10");
        assert_eq!(fmt_sig9(1.5e-5), "1.5e-05");
        assert_eq!(fmt_sig9(2.0e-4), "0.0002");
        assert_eq!(fmt_sig9(-2.718_281_828_459e-12), "-2.71828183e-12");
        assert_eq!(fmt_sig9(f64::NAN), "NaN");
        assert_eq!(fmt_sig9(-0.0), "0");
    }

    #[test]
    fn csv_uses_lf_and_json_mirrors_the_digits() {
        let mut t = Table::new(&["n", "x", "tag", "ok"]);
        t.push(vec![4usize.into(), (2.0f64 / 3.0).into(), "a,b".into(), true.into()]);
        t.push(vec![9usize.into(), f64::NAN.into(), "c".into(), false.into()]);
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "n,x,tag,ok\n4,0.666666667,\"a,b\",true\n9,NaN,c,false\n");
        let mut json = Vec::new();
        t.write_json(&mut json).unwrap();
        let v: Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v[0]["x"], Value::from(0.666666667));
        assert_eq!(v[1]["x"], Value::Null);
        assert_eq!(v[0]["ok"], Value::from(true));
    }
}
