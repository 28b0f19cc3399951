//! JSON and CSV rendering.
//!
//! Numbers are written in shortest round-trip form, so every printed value
//! carries full double precision. Non-finite values become the strings
//! `"inf"`, `"-inf"` and `"nan"`.

use std::io::Write;

use anyhow::Result;
use divbound_core::DiscreteDist;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum LogBase {
    #[default]
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
    #[value(name = "10")]
    Ten,
}

impl LogBase {
    /// Multiplier taking a value in nats to this base.
    pub fn factor(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => 1.0 / std::f64::consts::LN_2,
            LogBase::Ten => 1.0 / std::f64::consts::LN_10,
        }
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn dist(d: &DiscreteDist) -> Value {
    json!({ "support": nums(d.support()), "mass": nums(d.mass()) })
}

pub fn pair(p: &DiscreteDist, q: &DiscreteDist) -> Value {
    json!({ "p": dist(p), "q": dist(q) })
}

/// CSV text of a number.
pub fn cell(x: f64) -> String {
    match num(x) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

/// Rows sharing one header, printable as CSV or as a JSON array of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                v => v.to_string(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .cloned()
                        .zip(row.iter().cloned())
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Flattens the scalar fields of an object into a one-row table.
pub fn scalar_table(v: &Value) -> Table {
    let mut header = Vec::new();
    let mut row = Vec::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            if !(val.is_object() || val.is_array()) {
                header.push(k.clone());
                row.push(val.clone());
            }
        }
    }
    Table {
        header,
        rows: vec![row],
    }
}
