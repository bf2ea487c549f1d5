//! Tabular reports and their CSV and JSON encodings.

use dioph_core::numkit::RatInterval;
use dioph_core::{DyadicEnclosure, Measure, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::cache::ARTIFACT_VERSION;

/// Column set of `measure` reports.
pub const MEASURE_COLUMNS: &[&str] = &[
    "case",
    "n",
    "H",
    "psi",
    "delta",
    "interval",
    "measure_lo",
    "measure_hi",
    "measure_rat",
    "poly_count",
    "essential_count",
    "nonessential_count",
    "wall_ms",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Str(String),
    Int(i128),
    Float(f64),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(v) => json!(v),
                Err(_) => Value::String(v.to_string()),
            },
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => Value::String(fmt_f64(*v)),
            Cell::Bool(b) => json!(b),
            Cell::Null => Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i128)
            }
        }
    )*};
}
int_cell!(u32, u64, usize, i64);

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        i128::try_from(v).map_or_else(|_| Cell::Str(v.to_string()), Cell::Int)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

/// Largest double not above `r`.
pub fn f64_down(r: &Rational) -> f64 {
    let v = r.to_f64().unwrap_or(f64::NEG_INFINITY);
    match Rational::from_float(v) {
        Some(q) if &q > r => v.next_down(),
        _ => v,
    }
}

/// Smallest double not below `r`.
pub fn f64_up(r: &Rational) -> f64 {
    let v = r.to_f64().unwrap_or(f64::INFINITY);
    match Rational::from_float(v) {
        Some(q) if &q < r => v.next_up(),
        _ => v,
    }
}

/// Decimal `lo`, `hi` of an enclosure, rounded outward.
pub fn enclosure_cells(e: &DyadicEnclosure) -> [Cell; 2] {
    [Cell::Float(f64_down(&e.lo.to_rational())), Cell::Float(f64_up(&e.hi.to_rational()))]
}

pub fn interval_cells(e: &RatInterval) -> [Cell; 2] {
    [Cell::Float(f64_down(&e.lo)), Cell::Float(f64_up(&e.hi))]
}

/// `lo`, `hi`, and the exact `p/q` when known.
pub fn measure_cells(m: &Measure) -> [Cell; 3] {
    let [lo, hi] = enclosure_cells(&m.enclosure);
    [lo, hi, m.exact.as_ref().map(|r| r.to_string()).into()]
}

#[derive(Clone, Debug)]
pub struct Table {
    pub report: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Report-level values: fitted slopes, thresholds, verdicts.
    pub summary: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(report: &'static str, columns: &[&'static str]) -> Self {
        Table { report, columns: columns.to_vec(), rows: Vec::new(), summary: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.report);
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, v: impl Into<Cell>) {
        self.summary.push((key, v.into()));
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("write to memory");
        }
        w.into_inner().expect("flush to memory")
    }

    pub fn to_json(&self, config: &str) -> Vec<u8> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().map(Cell::json)).collect()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        let config: Map<String, Value> = config
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect();
        let doc = json!({
            "version": ARTIFACT_VERSION,
            "report": self.report,
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
        });
        let mut out = serde_json::to_vec_pretty(&doc).expect("serializable");
        out.push(b'\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outward_rounding() {
        let third = Rational::new(1.into(), 3.into());
        assert!(Rational::from_float(f64_down(&third)).unwrap() <= third);
        assert!(Rational::from_float(f64_up(&third)).unwrap() >= third);
        let half = Rational::new(1.into(), 2.into());
        assert_eq!((f64_down(&half), f64_up(&half)), (0.5, 0.5));
    }

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new("demo", &["psi", "x"]);
        t.push(vec!["pow:c=1,w=3".into(), Cell::Null]);
        assert_eq!(String::from_utf8(t.to_csv()).unwrap(), "psi,x\n\"pow:c=1,w=3\",\n");
    }
}
