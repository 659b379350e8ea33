//! Deterministic serialization helpers. Every float that reaches stdout is
//! rounded to 12 significant digits first, so identical runs produce
//! byte-identical JSON and CSV on any platform and thread count.

use serde_json::{Number, Value};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("round-trip of formatted float")
}

/// JSON number carrying the rounded value.
pub fn num(x: f64) -> Value {
    match Number::from_f64(sig12(x)) {
        Some(n) => Value::Number(n),
        None => Value::Null,
    }
}

/// CSV field text for a rounded float.
pub fn float_field(x: f64) -> String {
    format!("{}", sig12(x))
}

/// Minimal CSV quoting: wrap fields containing separators or quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)] // the literal is the 12-digit rounding
    fn rounding_is_stable() {
        assert_eq!(sig12(std::f64::consts::SQRT_2), 1.41421356237);
        assert_eq!(float_field(2.0), "2");
        assert_eq!(float_field(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(sig12(0.1)), sig12(0.1));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("GF(8)"), "GF(8)");
        assert_eq!(csv_field("GF(8){1,1,0,1}"), "\"GF(8){1,1,0,1}\"");
    }
}
