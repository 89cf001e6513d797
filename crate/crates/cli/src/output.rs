use std::io::Write;

use serde_json::{Map, Value};
use weilmod::coeff::{CoeffRing, CycField, FinField};
use weilmod::linalg::Mat;

use crate::args::Format;
use crate::CliError;

/// Coefficient rings the CLI can print.
pub trait Emit: CoeffRing {
    fn approx_value(&self, a: &Self::Elem) -> Option<(f64, f64)>;
}

impl Emit for CycField {
    fn approx_value(&self, a: &Self::Elem) -> Option<(f64, f64)> {
        Some(self.approx(a))
    }
}

impl Emit for FinField {
    fn approx_value(&self, _: &Self::Elem) -> Option<(f64, f64)> {
        None
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Printer {
    pub approx: bool,
}

impl Printer {
    /// {"ring", "coeffs"} plus an optional labelled float.
    pub fn scalar<R: Emit>(&self, r: &R, x: &R::Elem) -> Value {
        let mut v = r.to_json(x);
        if self.approx {
            if let (Some((re, im)), Some(obj)) = (r.approx_value(x), v.as_object_mut()) {
                obj.insert("approx".into(), serde_json::json!({ "re": re, "im": im, "note": "floating-point, not authoritative" }));
            }
        }
        v
    }

    pub fn matrix<R: Emit>(&self, r: &R, m: &Mat<R::Elem>) -> Value {
        Value::Array((0..m.rows).map(|i| Value::Array((0..m.cols).map(|j| self.scalar(r, m.get(i, j))).collect())).collect())
    }
}

pub fn render(v: &Value, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_vec(v).map_err(|e| CliError::Io(e.to_string()))?;
            s.push(b'\n');
            Ok(s)
        }
        Format::Csv => render_csv(v),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// A top-level `rows` array of objects becomes a table; any other object
/// becomes `key,value` lines.
fn render_csv(v: &Value) -> Result<Vec<u8>, CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    let empty = Map::new();
    let obj = v.as_object().unwrap_or(&empty);
    match obj.get("rows").and_then(Value::as_array) {
        Some(rows) if rows.iter().all(Value::is_object) => {
            let header: Vec<String> = rows.first().and_then(Value::as_object).map(|o| o.keys().cloned().collect()).unwrap_or_default();
            w.write_record(&header).map_err(io)?;
            for r in rows {
                let o = r.as_object().expect("object row");
                w.write_record(header.iter().map(|k| o.get(k).map(cell).unwrap_or_default())).map_err(io)?;
            }
        }
        _ => {
            w.write_record(["key", "value"]).map_err(io)?;
            for (k, x) in obj {
                w.write_record([k.clone(), cell(x)]).map_err(io)?;
            }
        }
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_bytes(target: Option<&str>, bytes: &[u8]) -> Result<(), CliError> {
    match target {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
