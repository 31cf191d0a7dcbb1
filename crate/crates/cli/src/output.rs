//! Deterministic JSON and CSV rendering. Every float goes through [`fmt_f64`],
//! which prints 17 significant digits so values round-trip exactly.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `%.17g` with trailing zeros dropped; integral values keep a `.0`.
/// Non-finite values have no JSON spelling and render as `null`.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if (-5..17).contains(&exp) {
        let (int, frac) = if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), "0".repeat((-exp - 1) as usize) + &digits)
        };
        let frac = frac.trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{}.{frac}e{exp}", &digits[..1])
    }
}

struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17);
    value.serialize(&mut ser).expect("reports serialize");
    out.push(b'\n');
    out
}

/// Long-format CSV: one `field,value` row per scalar leaf, with nested
/// positions joined by dots (`pair_certificates.0.1`).
pub fn to_csv<T: Serialize>(value: &T) -> Vec<u8> {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut rows = Vec::new();
    flatten("", &v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, v]).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::Null => out.push((prefix.into(), String::new())),
        Value::Bool(b) => out.push((prefix.into(), b.to_string())),
        Value::String(s) => out.push((prefix.into(), s.clone())),
        Value::Number(n) => {
            let s = match (n.as_u64(), n.as_i64(), n.as_f64()) {
                (Some(u), _, _) => u.to_string(),
                (None, Some(i), _) => i.to_string(),
                (None, None, Some(f)) => fmt_f64(f),
                _ => n.to_string(),
            };
            out.push((prefix.into(), s));
        }
    }
}

pub fn render<T: Serialize>(value: &T, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(value),
        Format::Csv => to_csv(value),
    }
}
