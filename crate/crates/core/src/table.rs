//! CSV tables with fixed numeric formatting.
//!
//! Numbers are printed with 10 significant digits in the style of C's `%.10g`
//! (trailing zeros dropped, exponent form outside `1e-5 <= |x| < 1e10`), dot
//! decimal separator and `\n` line endings, so output is byte-stable.

use thiserror::Error;

use crate::model::MetricsRow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("row has {found} cells, header has {expected}")]
pub struct ColumnMismatch {
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    comments: Vec<String>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<(), ColumnMismatch> {
        if row.len() != self.header.len() {
            return Err(ColumnMismatch {
                expected: self.header.len(),
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Add a trailing `# ...` line.
    pub fn comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out
    }
}

/// Format `x` with 10 significant digits like `%.10g`.
pub fn fmt_num(x: f64) -> String {
    const DIGITS: i32 = 10;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // `{:e}` rounds correctly; read the exponent back from it
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let mantissa = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

pub fn fmt_opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn fmt_opt_int(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Column names for [`metrics_cells`].
pub const METRICS_HEADER: [&str; 9] = ["P_q", "epsilon", "EN", "S", "R", "d", "t", "S_LB", "R_LB"];

pub fn metrics_cells(row: &MetricsRow) -> Vec<String> {
    vec![
        fmt_num(row.p_q),
        fmt_num(row.epsilon),
        fmt_num(row.expected_n),
        fmt_num(row.s),
        fmt_num(row.r),
        fmt_opt_int(row.d),
        fmt_opt_int(row.t),
        fmt_opt_num(row.s_lb),
        fmt_opt_num(row.r_lb),
    ]
}
