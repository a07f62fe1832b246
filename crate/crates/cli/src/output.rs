//! Report model shared by every subcommand and its JSON/CSV renderings.
//! Both formats carry the same numbers, each printed with 17 significant
//! digits.

use serde_json::{Map, Number, Value};
use tunnelcheck::format::sig17;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => sig17(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // non-finite values have no JSON number form
            Cell::Num(x) if !x.is_finite() => Value::Null,
            Cell::Num(x) => Value::Number(sig17(*x).parse::<Number>().expect("sig17 is a JSON number")),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub units: String,
    pub scalars: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &str, units: &str) -> Self {
        Self { command: command.into(), units: units.into(), ..Default::default() }
    }

    pub fn scalar(&mut self, name: &str, v: impl Into<Cell>) -> &mut Self {
        self.scalars.push((name.into(), v.into()));
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_json(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command.as_str()));
        top.insert("units".into(), Value::from(self.units.as_str()));
        let scalars: Map<String, Value> = self.scalars.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        top.insert("scalars".into(), Value::Object(scalars));
        if !self.columns.is_empty() {
            top.insert("columns".into(), Value::from(self.columns.clone()));
            let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
            top.insert("rows".into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
        s.push('\n');
        s
    }

    /// Scalars as `# name,value` comment lines, then the table.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# command,{}\n# units,{}\n", self.command, self.units);
        for (k, v) in &self.scalars {
            s.push_str(&format!("# {k},{}\n", v.csv()));
        }
        if !self.columns.is_empty() {
            s.push_str(&self.columns.join(","));
            s.push('\n');
            for r in &self.rows {
                let cells: Vec<String> = r.iter().map(Cell::csv).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_carry_same_numbers() {
        let mut r = Report::new("t", "natural");
        r.scalar("x", 0.1).scalar("flag", true);
        r.columns(&["a", "b"]);
        r.row(vec![1.0.into(), f64::NAN.into()]);
        let j = r.to_json();
        assert!(j.contains("\"x\": 1.0000000000000001e-1"));
        assert!(j.contains("null"));
        let c = r.to_csv();
        assert!(c.contains("# x,1.0000000000000001e-1"));
        assert!(c.contains("1.0000000000000000e0,NaN"));
    }

    #[test]
    fn csv_quotes_text() {
        assert_eq!(Cell::from("a,b").csv(), "\"a,b\"");
    }
}
