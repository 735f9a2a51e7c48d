//! Deterministic text output: CSV with full-precision floats and JSON.
//!
//! CSV dialect: comma separators, '.' decimal point, `\n` line endings,
//! header always present, floats printed with 17 significant digits so a
//! round trip through text is bit-exact. Optional cells are left empty.

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A float rendered with 17 significant digits (1 before the point, 16
/// after), round-trip exact for f64.
pub fn fmt_f64(x: f64) -> String {
    assert!(x.is_finite(), "refusing to serialize non-finite value");
    format!("{x:.16e}")
}

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    /// Rendered as an empty CSV cell / JSON null.
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

/// A column-ordered table with a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let items: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s =
            serde_json::to_string_pretty(&Value::Array(items)).expect("table is valid JSON");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Complex amplitudes as `[[re, im], ...]` JSON.
pub fn amplitudes_json(amps: &[num_complex::Complex64]) -> Value {
    Value::Array(
        amps.iter()
            .map(|z| Value::Array(vec![Value::from(z.re), Value::from(z.im)]))
            .collect(),
    )
}

/// A complex matrix as nested `[[re, im], ...]` rows.
pub fn matrix_json(m: &ifm_core::ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            let z = m[(i, j)];
                            Value::Array(vec![Value::from(z.re), Value::from(z.im)])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for &x in &[0.5, 1.0 / 3.0, 3.0 - 2.0 * 2.0_f64.sqrt(), 1e-300, -2.5e17] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["n", "x", "label", "opt"]);
        t.push(vec![
            Cell::Int(3),
            Cell::Float(0.5),
            Cell::Text("SUB".into()),
            Cell::Missing,
        ]);
        assert_eq!(t.to_csv(), "n,x,label,opt\n3,5.0000000000000000e-1,SUB,\n");
    }

    #[test]
    fn json_uses_null_for_missing() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::Int(1), Cell::Missing]);
        let parsed: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert!(parsed[0]["b"].is_null());
        assert_eq!(parsed[0]["a"], 1);
    }
}
