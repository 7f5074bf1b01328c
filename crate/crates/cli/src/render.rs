//! CSV emission and parsing for the `x,x_scaled,value,class` schema.

use murmur_core::Series;

use crate::CliError;

pub const CSV_HEADER: &str = "x,x_scaled,value,class";

/// Significant digits used for every rendered float.
pub const SIG_DIGITS: usize = 12;

/// Decimal rendering to `sig` significant digits with trailing zeros
/// trimmed. Magnitudes outside [1e-5, 1e15) fall back to exponent form.
pub fn format_sig(v: f64, sig: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", sig.saturating_sub(1), v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };
    if !(-5..15).contains(&exp) {
        let m = trim_fraction(&format!("{}.{}", &digits[..1], &digits[1..]));
        return format!("{sign}{m}e{exp}");
    }
    let body = if exp >= 0 {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            format!("{digits}{}", "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn series_csv(series: &Series) -> String {
    let mut rows: Vec<_> = series.points.iter().collect();
    rows.sort_by(|a, b| (&a.class_tag, a.x).cmp(&(&b.class_tag, b.x)));
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in rows {
        let scaled = *p.x_scaled.numer() as f64 / *p.x_scaled.denom() as f64;
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.x,
            format_sig(scaled, SIG_DIGITS),
            format_sig(p.value.to_f64(), SIG_DIGITS),
            p.class_tag
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub x: u64,
    pub x_scaled: f64,
    pub value: f64,
    pub class: String,
}

/// Parses emitted CSV text. A completely empty file reads as no rows.
pub fn parse_csv(text: &str, path: &str) -> Result<Vec<CsvRow>, CliError> {
    let err = |line: usize, msg: String| CliError::Schema { path: path.to_string(), msg: format!("line {line}: {msg}") };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        None => return Ok(Vec::new()),
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((n, h)) => return Err(err(n, format!("expected header {CSV_HEADER:?}, found {h:?}"))),
    }
    let mut rows = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(err(n, format!("expected 4 fields, found {}", fields.len())));
        }
        let num = |s: &str, what: &str| s.trim().parse::<f64>().map_err(|_| err(n, format!("bad {what}: {s:?}")));
        rows.push(CsvRow {
            x: fields[0].trim().parse().map_err(|_| err(n, format!("bad x: {:?}", fields[0])))?,
            x_scaled: num(fields[1], "x_scaled")?,
            value: num(fields[2], "value")?,
            class: fields[3].trim().to_string(),
        });
    }
    Ok(rows)
}
