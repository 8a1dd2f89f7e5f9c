//! Output formatting shared by every subcommand.
//!
//! CSV: `,` separators, `\n` line endings, reals in scientific notation with
//! 17 significant digits (`{:.16e}`), which round-trips every `f64`.
//! JSON: keys appear in struct declaration order.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// 17 significant digits, scientific notation.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV document under construction.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn with_header(columns: &[&str]) -> Self {
        let mut buf = columns.join(",");
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            match cell {
                Cell::Int(v) => write!(self.buf, "{v}").unwrap(),
                Cell::Real(v) => self.buf.push_str(&real(*v)),
            }
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub enum Cell {
    Int(i64),
    Real(f64),
}

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for &x in &[0.0, -0.0, 1.125, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, f64::MAX] {
            let s = real(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(real(1.125), "1.1250000000000000e0");
        assert_eq!(real(-0.125), "-1.2500000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::with_header(&["a", "b"]);
        csv.row(&[Cell::Int(3), Cell::Real(0.5)]);
        assert_eq!(csv.finish(), "a,b\n3,5.0000000000000000e-1\n");
    }
}
