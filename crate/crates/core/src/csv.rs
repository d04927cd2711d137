//! Minimal CSV emission with a fixed float format.

use std::fmt::Write as _;

/// 17 significant digits in scientific notation, `.` as decimal separator.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows under a fixed header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    columns: Vec<&'static str>,
    body: String,
    rows: usize,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            body: String::new(),
            rows: 0,
        }
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    /// Appends a row; panics if the field count does not match the header.
    pub fn push<S: AsRef<str>>(&mut self, fields: &[S]) {
        assert_eq!(fields.len(), self.columns.len(), "row width must match the header");
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            self.body.push_str(f.as_ref());
        }
        self.body.push('\n');
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn render(&self) -> String {
        let mut s = String::with_capacity(self.body.len() + 64);
        let _ = writeln!(s, "{}", self.columns.join(","));
        s.push_str(&self.body);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(-2.5), "-2.5000000000000000e0");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn header_then_rows() {
        let mut t = Table::new(&["a", "b"]);
        t.push(&["1", "2"]);
        assert_eq!(t.render(), "a,b\n1,2\n");
        assert_eq!(t.rows(), 1);
    }
}
