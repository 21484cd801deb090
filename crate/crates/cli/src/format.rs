//! Deterministic CSV cell formatting.

/// Nine significant digits, positional for exponents in `[-5, 14]` and
/// scientific (`1.23456789e-7`) outside. Trailing zeros are kept so every
/// finite nonzero value carries exactly nine digits.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..=14).contains(&exp) {
        return sci;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let mut out = String::with_capacity(24);
    if negative {
        out.push('-');
    }
    if exp >= 0 {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    }
    out
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(35.853), "35.8530000");
        assert_eq!(sig9(-0.000123456789123), "-0.000123456789");
        assert_eq!(sig9(123456789.0), "123456789");
        assert_eq!(sig9(1234567891234.0), "1234567890000");
        assert_eq!(sig9(1e-7), "1.00000000e-7");
        assert_eq!(sig9(9.9999999999), "10.0000000");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-0.0), "0");
        assert_eq!(sig9(f64::NAN), "NaN");
    }

    #[test]
    fn round_trips_to_nine_digits() {
        for x in [0.1, 2.0 / 3.0, 35.8293, 1e-5 * std::f64::consts::PI, 4.85, 1e14 + 1.0] {
            let back: f64 = sig9(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-9 * x.abs(), "{x} -> {}", sig9(x));
        }
    }
}
