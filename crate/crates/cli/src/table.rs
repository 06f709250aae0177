//! Tabular output with bit-stable number formatting.
//!
//! Every number is written like C's `%.17g`: 17 significant digits, which is
//! enough to round-trip any `f64`, trailing zeros stripped, exponent form
//! outside `1e-4 ≤ |v| < 1e17`. CSV uses LF line endings; JSON is an object
//! with `columns`, `rows` and `meta` (keys sorted).

use std::fmt::Write as _;
use std::io::{self, Write};
use std::str::FromStr;

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Header, numeric rows and a metadata record.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub meta: Map<String, Value>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        OutputTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            meta: Map::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.insert(key.to_owned(), value.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format_g17(*v));
            }
            out.push('\n');
        }
        out
    }

    /// Non-finite numbers become `null`.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n\"columns\": ");
        out.push_str(&Value::from(self.columns.clone()).to_string());
        out.push_str(",\n\"rows\": [");
        for (j, row) in self.rows.iter().enumerate() {
            out.push_str(if j == 0 { "\n[" } else { ",\n[" });
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if v.is_finite() {
                    out.push_str(&format_g17(*v));
                } else {
                    out.push_str("null");
                }
            }
            out.push(']');
        }
        out.push_str("\n],\n\"meta\": ");
        out.push_str(&Value::Object(self.meta.clone()).to_string());
        out.push_str("\n}\n");
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn emit(&self, format: Format, sink: &mut impl Write) -> io::Result<()> {
        sink.write_all(self.render(format).as_bytes())?;
        sink.flush()
    }
}

/// `%.17g` formatting of a double.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_owned();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.to_owned();
    }
    // `{:.16e}` rounds correctly to 17 significant digits: d.dddddddddddddddde±X
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mut out = String::from(sign);
    if !(-4..17).contains(&exp) {
        let frac = digits[1..].trim_end_matches('0');
        out.push_str(&digits[..1]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    } else if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(digits.trim_end_matches('0'));
    } else {
        let split = exp as usize + 1;
        out.push_str(&digits[..split]);
        let frac = digits[split..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        let cases: [(f64, &str); 16] = [
            (1.0 / 3.0, "0.33333333333333331"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (0.1, "0.10000000000000001"),
            (100.0, "100"),
            (1e-5, "1.0000000000000001e-05"),
            (1e-4, "0.0001"),
            (1.5e-4, "0.00014999999999999999"),
            (1e16, "10000000000000000"),
            (1e17, "1e+17"),
            (123456789.125, "123456789.125"),
            (6.02214076e23, "6.0221407599999999e+23"),
            (-1e-300, "-1e-300"),
            (f64::MAX, "1.7976931348623157e+308"),
            (5e-324, "4.9406564584124654e-324"),
            (std::f64::consts::PI, "3.1415926535897931"),
        ];
        for (v, s) in cases {
            assert_eq!(format_g17(v), s, "{v:e}");
        }
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(-0.0), "-0");
        assert_eq!(format_g17(f64::NAN), "nan");
        assert_eq!(format_g17(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn round_trips_exactly() {
        // pseudo-random bit patterns from a 64-bit LCG
        let mut state: u64 = 0x2545_f491_4f6c_dd1d;
        for _ in 0..20_000 {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            let x = f64::from_bits(state);
            if x.is_finite() && x != 0.0 {
                assert_eq!(format_g17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
            }
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = OutputTable::new(["a", "b"]);
        assert_eq!(t.to_csv(), "a,b\n");
    }

    #[test]
    fn json_layout() {
        let mut t = OutputTable::new(["x", "y"]);
        t.push(vec![1.0 / 3.0, f64::NAN]);
        t.set_meta("termination", "r_min_cutoff");
        let doc: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(doc["columns"], serde_json::json!(["x", "y"]));
        assert_eq!(doc["rows"][0][0].as_f64().unwrap(), 1.0 / 3.0);
        assert!(doc["rows"][0][1].is_null());
        assert_eq!(doc["meta"]["termination"], "r_min_cutoff");
        assert!(t.to_json().contains("0.33333333333333331"));
    }

    #[test]
    #[should_panic]
    fn ragged_rows_are_rejected() {
        OutputTable::new(["a", "b"]).push(vec![1.0]);
    }
}
