use std::str::FromStr;

use serde_json::{Map, Number, Value};

/// One output value. Numbers are printed with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(String),
    Text(String),
}

impl Cell {
    pub fn int(v: impl ToString) -> Self {
        Cell::Int(v.to_string())
    }

    pub fn text(v: impl Into<String>) -> Self {
        Cell::Text(v.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_num(*x),
            Cell::Int(s) | Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::Number(Number::from_str(&format_num(*x)).expect("valid number")),
            Cell::Num(_) => Value::Null,
            Cell::Int(s) => Value::Number(Number::from_str(s).expect("valid integer")),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

pub fn format_num(x: f64) -> String {
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

/// A summary block followed by a table. CSV puts the summary in `# key = value` lines.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub summary: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn with_columns(columns: &[&'static str]) -> Self {
        Report { columns: columns.to_vec(), ..Report::default() }
    }

    pub fn note(&mut self, key: impl Into<String>, value: Cell) {
        self.summary.push((key.into(), value));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k} = {}\n", v.render()));
        }
        if self.columns.is_empty() {
            return out;
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        out.push_str(&String::from_utf8(bytes).expect("utf-8 output"));
        out
    }

    pub fn to_json(&self) -> String {
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect()))
            .collect();
        let mut top = Map::new();
        top.insert("summary".into(), Value::Object(summary));
        top.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json values serialize");
        s.push('\n');
        s
    }
}
