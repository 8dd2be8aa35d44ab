//! CSV and JSON encoders.

use std::io::{self, Write};

use eit_core::sweep::ResponseCurve;
use serde_json::{Map, Value};

use crate::args::Format;

pub const CURVE_HEADER: &str = "delta,e1,e1_normalized,sin2theta1,e2,sin2theta2";

/// Positional decimal with at most 12 significant digits and no exponent,
/// trailing zeros trimmed. Non-finite values are written as `NaN`, `inf`
/// or `-inf`.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    // `{:e}` rounds correctly; the digits are then placed positionally.
    let sci = format!("{:.11e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let mut s = String::with_capacity(digits.len() + point.unsigned_abs() as usize + 3);
    if x < 0.0 {
        s.push('-');
    }
    if point <= 0 {
        s.push_str("0.");
        s.extend(std::iter::repeat_n('0', point.unsigned_abs() as usize));
        s.push_str(&digits);
    } else if point as usize >= digits.len() {
        s.push_str(&digits);
        s.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        s.push_str(&digits[..point as usize]);
        s.push('.');
        s.push_str(&digits[point as usize..]);
    }
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

fn field(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Writes `curve` in the requested format.
pub fn serialize<W: Write + ?Sized>(curve: &ResponseCurve, format: Format, w: &mut W) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "{CURVE_HEADER}")?;
            for i in 0..curve.len() {
                let norm = curve.e1_normalized.as_ref().map(|v| v[i]);
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    format_number(curve.delta_grid[i]),
                    format_number(curve.e1[i]),
                    field(norm),
                    field(curve.sin2theta1[i]),
                    format_number(curve.e2[i]),
                    field(curve.sin2theta2[i]),
                )?;
            }
            Ok(())
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, curve)?;
            writeln!(w)
        }
    }
}

pub fn to_bytes(curve: &ResponseCurve, format: Format) -> Vec<u8> {
    let mut buf = Vec::new();
    serialize(curve, format, &mut buf).expect("writing to memory");
    buf
}

/// Inverse of the JSON encoding.
pub fn parse_json(bytes: &[u8]) -> serde_json::Result<ResponseCurve> {
    serde_json::from_slice(bytes)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Opt(Option<f64>),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Opt(x)
    }
}

/// Small named-column table for the non-sweep subcommands.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Emit a single JSON object instead of an array.
    pub single: bool,
}

impl Table {
    pub fn write<W: Write + ?Sized>(&self, format: Format, w: &mut W) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(x) => format_number(*x),
                            Cell::Opt(x) => field(*x),
                            Cell::Text(s) => s.clone(),
                        })
                        .collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
                Ok(())
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, c)| {
                                let v = match c {
                                    Cell::Num(x) => Value::from(*x),
                                    Cell::Opt(x) => x.map(Value::from).unwrap_or(Value::Null),
                                    Cell::Text(s) => Value::from(s.as_str()),
                                };
                                (k.to_string(), v)
                            })
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                let value = match (self.single, objects.len()) {
                    (true, 1) => objects.into_iter().next().unwrap(),
                    _ => Value::Array(objects),
                };
                serde_json::to_writer_pretty(&mut *w, &value)?;
                writeln!(w)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_twelve_digits() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-0.8), "-0.8");
        assert_eq!(format_number(8.650519031141868e-4), "0.000865051903114");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(123456789012345.0), "123456789012000");
        assert_eq!(format_number(9.9999999999996), "10");
        assert_eq!(format_number(26666.666666666668), "26666.6666667");
        assert_eq!(format_number(1e-20), "0.00000000000000000001");
    }

    #[test]
    fn zero_curve_row() {
        let c = ResponseCurve {
            delta_grid: vec![0.0],
            e1: vec![0.0],
            e1_normalized: None,
            sin2theta1: vec![None],
            e2: vec![0.0],
            sin2theta2: vec![None],
            t_eval: None,
            stationary: true,
        };
        let text = String::from_utf8(to_bytes(&c, Format::Csv)).unwrap();
        assert_eq!(text, format!("{CURVE_HEADER}\n0,0,,,0,\n"));
        let json = String::from_utf8(to_bytes(&c, Format::Json)).unwrap();
        assert!(json.contains("\"sin2theta1\": [\n    null\n  ]"), "{json}");
        assert_eq!(parse_json(json.as_bytes()).unwrap(), c);
    }

    #[test]
    fn table_csv_and_json() {
        let t = Table {
            columns: vec!["xi", "regime", "relaxation_time"],
            rows: vec![vec![Cell::Num(1.0001), Cell::Text("critical".into()), Cell::Opt(None)]],
            single: true,
        };
        let mut csv = Vec::new();
        t.write(Format::Csv, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "xi,regime,relaxation_time\n1.0001,critical,\n");
        let mut json = Vec::new();
        t.write(Format::Json, &mut json).unwrap();
        let v: Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["regime"], "critical");
        assert!(v["relaxation_time"].is_null());
    }
}
