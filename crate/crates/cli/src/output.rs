//! CSV and gnuplot data emission.

use std::fmt::Write as _;

use crate::study::StudyReport;

/// 17 significant digits.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Quotes a field if it contains separators.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Default, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let line = |cells: &[String]| cells.iter().map(|c| field(c)).collect::<Vec<_>>().join(",");
        out.push_str(&line(&self.header));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

pub fn study_table(rep: &StudyReport) -> Table {
    let mut t = Table::new(&[
        "operator", "expr", "grid", "seed", "param", "error", "order", "value", "extrapolated",
    ]);
    for r in &rep.rows {
        let order = if r.exact { "exact".to_string() } else { opt(r.order) };
        t.push(vec![
            r.operator.clone(),
            rep.expr.clone(),
            rep.grid.to_string(),
            rep.seed.to_string(),
            r.param.to_string(),
            num(r.error),
            order,
            num(r.value),
            opt(r.extrapolated),
        ]);
    }
    t
}

/// Gnuplot data: one block per curve, `# name` comment, blocks separated by two blank lines
/// so that `index` selects a curve.
pub fn plot_blocks(curves: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut out = String::new();
    for (k, (name, pts)) in curves.iter().enumerate() {
        if k > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# {name}");
        for &(x, y) in pts {
            let _ = writeln!(out, "{} {}", num(x), num(y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(field("a,b"), "\"a,b\"");
    }
}
