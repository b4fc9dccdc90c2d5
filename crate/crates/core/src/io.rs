//! Lossless text rendering of numbers and a minimal CSV writer.

use std::io::{self, Write};

/// `%.17g`: 17 significant digits, fixed notation for decimal exponents in
/// `[-4, 17)`, trailing zeros removed.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };

    if (-4..17).contains(&exp) {
        let body = if exp >= 0 {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        format!("{sign}{}", strip_fraction(&body))
    } else {
        let body = format!("{}.{}", &digits[..1], &digits[1..]);
        let exp_sign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{}e{exp_sign}{:02}", strip_fraction(&body), exp.abs())
    }
}

fn strip_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, header: &[&str]) -> io::Result<Self> {
        writeln!(out, "{}", header.join(","))?;
        Ok(Self { out })
    }

    pub fn numbers(&mut self, row: &[f64]) -> io::Result<()> {
        let fields: Vec<String> = row.iter().map(|&v| fmt_g17(v)).collect();
        writeln!(self.out, "{}", fields.join(","))
    }

    pub fn fields(&mut self, row: &[String]) -> io::Result<()> {
        writeln!(self.out, "{}", row.join(","))
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
