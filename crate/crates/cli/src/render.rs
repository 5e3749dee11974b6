use search_pursuit::rational::{format_rational, to_decimal};
use search_pursuit::Rational;

use crate::document::DECIMAL_PLACES;

pub fn fraction_and_decimal(r: &Rational) -> String {
    format!("{} ({})", format_rational(r), to_decimal(r, DECIMAL_PLACES))
}

/// Left-aligned plain-text table with two-space gutters.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        out.push_str(&line(
            &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
        ));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align() {
        let mut t = Table::new(&["k", "value"]);
        t.row(vec!["5".into(), "3/55".into()]);
        t.row(vec!["10".into(), "1/10".into()]);
        assert_eq!(t.render(), "k   value\n--  -----\n5   3/55\n10  1/10\n");
    }
}
