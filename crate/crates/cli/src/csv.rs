//! Minimal CSV table with a fixed header and 17-significant-digit floats.

use std::fmt::Write as _;

pub enum Cell {
    Int(i64),
    Real(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

pub struct Table {
    columns: usize,
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Table {
            columns: header.len(),
            text,
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns, "row width does not match header");
        for (i, c) in cells.into_iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            // writing into a String cannot fail
            let _ = match c {
                Cell::Int(n) => write!(self.text, "{n}"),
                Cell::Real(x) => write!(self.text, "{x:.16e}"),
            };
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
