//! Fixed-precision float text shared by every report.

use std::fmt;

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

pub const SIGNIFICANT_DIGITS: usize = 10;

/// `%.{digits}g`-style text: scientific notation outside [1e-4, 1e{digits}),
/// trailing zeros trimmed. Non-finite values print as `NaN`/`inf`/`-inf`.
pub fn format_significant(value: f64, digits: usize) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, value)).to_string()
    }
}

fn trim_zeros(text: &str) -> &str {
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.')
    } else {
        text
    }
}

/// Value rounded to [`SIGNIFICANT_DIGITS`], so that re-reading the printed text
/// gives back the same `f64`.
pub fn round_significant(value: f64) -> f64 {
    format_significant(value, SIGNIFICANT_DIGITS)
        .parse()
        .unwrap_or(value)
}

pub fn sig10(value: f64) -> String {
    format_significant(value, SIGNIFICANT_DIGITS)
}

/// `f64` that serializes as a JSON number with ten significant digits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Sig10(pub f64);

impl Serialize for Sig10 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!(
                "non-finite value {} in report",
                self.0
            )));
        }
        let raw = RawValue::from_string(sig10(self.0)).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sig10 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Sig10)
    }
}

impl fmt::Display for Sig10 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&sig10(self.0))
    }
}

impl From<f64> for Sig10 {
    fn from(value: f64) -> Self {
        Sig10(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig10(0.766), "0.766");
        assert_eq!(sig10(0.7659999999999), "0.766");
        assert_eq!(sig10(1.0 / 3.0), "0.3333333333");
        assert_eq!(sig10(123456.789), "123456.789");
        assert_eq!(sig10(1e-7), "1e-07");
        assert_eq!(sig10(2.5e-5), "2.5e-05");
        assert_eq!(sig10(0.0001), "0.0001");
        assert_eq!(sig10(12345678901.0), "1.23456789e+10");
        assert_eq!(sig10(-0.25), "-0.25");
        assert_eq!(sig10(16.0), "16");
        assert_eq!(sig10(0.0), "0");
    }

    #[test]
    fn rounding_is_idempotent() {
        for v in [0.1, 0.7659999, 1.0 / 7.0, 3.3e-9, 12.0] {
            let r = round_significant(v);
            assert_eq!(round_significant(r), r);
            assert_eq!(sig10(r), sig10(v));
        }
    }

    #[test]
    fn json_number_text() {
        let text = serde_json::to_string(&vec![Sig10(0.1 + 0.2), Sig10(2.0)]).unwrap();
        assert_eq!(text, "[0.3,2]");
        let back: Vec<Sig10> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![Sig10(0.3), Sig10(2.0)]);
        assert!(serde_json::to_string(&Sig10(f64::NAN)).is_err());
    }
}
