//! Minimal CSV emission: `#` comment lines, a header row, and numbers with
//! 12 significant digits.

use std::fmt::Write as _;

/// 12 significant digits, `.` decimal separator. Plain decimal notation for
/// magnitudes in `[1e-5, 1e15)`, scientific otherwise; zero prints as `0`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn opt_flag(b: Option<bool>) -> String {
    b.map(|b| flag(b).to_string()).unwrap_or_default()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            comments: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(2.0), "2");
        assert_eq!(num(0.665), "0.665");
        assert_eq!(num(2.0 / 3.0), "0.666666666667");
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(-1.5e-17), "-1.5e-17");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(123456789.12345679), "123456789.123");
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn renders_comments_header_rows() {
        let mut t = Table::new(&["a", "b"]);
        t.comment("grid a=0:1:0.5");
        t.push(vec![num(0.5), flag(true).into()]);
        t.push(vec![opt_num(None), opt_flag(Some(false))]);
        assert_eq!(t.render(), "# grid a=0:1:0.5\na,b\n0.5,1\n,0\n");
    }
}
