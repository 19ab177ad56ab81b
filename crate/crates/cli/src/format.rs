//! Fixed six-significant-digit number formatting.
//!
//! Values are rounded once, at the sixth significant digit, from their exact
//! binary value with ties to even (the rounding `{:.5e}` performs). Magnitudes
//! in `[1e-4, 1e6)` print in positional notation, others as `d.ddddde±x`.
//! Output never depends on the platform, so tables compare byte for byte.

use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 6;

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };
    if !(-4..6).contains(&exp) {
        return format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..]);
    }
    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let point = exp as usize + 1;
        if point >= digits.len() {
            digits.clone()
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    };
    format!("{sign}{body}")
}

/// Rounds `x` to six significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("round trip")
}

/// Rounds every float in a JSON tree; integers are left alone.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_range() {
        assert_eq!(fmt_num(1.0), "1.00000");
        assert_eq!(fmt_num(0.3), "0.300000");
        assert_eq!(fmt_num(-2.5), "-2.50000");
        assert_eq!(fmt_num(964.76), "964.760");
        assert_eq!(fmt_num(123456.4), "123456");
        assert_eq!(fmt_num(0.00012345678), "0.000123457");
    }

    #[test]
    fn exponent_range() {
        assert_eq!(fmt_num(1234567.0), "1.23457e6");
        assert_eq!(fmt_num(0.47e-4), "4.70000e-5");
        assert_eq!(fmt_num(-6.67e-10), "-6.67000e-10");
    }

    #[test]
    fn carry_moves_the_exponent() {
        assert_eq!(fmt_num(999999.5), "1.00000e6");
        assert_eq!(fmt_num(9.999996), "10.0000");
    }

    #[test]
    fn ties_go_to_even() {
        // exactly representable ties
        assert_eq!(fmt_num(100000.5), "100000");
        assert_eq!(fmt_num(1000002.5 * 10.0), "1.00000e7");
        assert_eq!(fmt_num(1000015.0), "1.00002e6");
        assert_eq!(fmt_num(1000025.0), "1.00002e6");
        assert_eq!(fmt_num(100000.75), "100001");
        assert_eq!(fmt_num(100001.5), "100002");
        assert_eq!(fmt_num(100002.5), "100002");
    }

    #[test]
    fn specials() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn json_rounding() {
        let mut v = serde_json::json!({"a": 1.23456789, "b": [2, 0.1], "c": "x"});
        round_json(&mut v);
        assert_eq!(v.to_string(), r#"{"a":1.23457,"b":[2,0.1],"c":"x"}"#);
    }

    proptest::proptest! {
        #[test]
        fn printed_value_parses_back_to_rounded(x in proptest::num::f64::NORMAL) {
            let text = fmt_num(x);
            let back: f64 = text.parse().unwrap();
            proptest::prop_assert_eq!(back, round_sig(x));
            proptest::prop_assert!((back - x).abs() <= 5e-6 * x.abs());
        }

        #[test]
        fn rounding_is_idempotent(x in -1e12f64..1e12) {
            proptest::prop_assert_eq!(round_sig(round_sig(x)), round_sig(x));
            proptest::prop_assert_eq!(fmt_num(round_sig(x)), fmt_num(x));
        }
    }
}
