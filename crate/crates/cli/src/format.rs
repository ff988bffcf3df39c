//! Number formatting shared by every subcommand: 12 significant digits,
//! `%g`-style, so output is stable across platforms and runs.

use serde_json::Value;

pub const SIG_DIGITS: usize = 12;

/// `printf("%.12g", x)`, except that negative zero prints as `0`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `(a,b,c)` with each entry through [`num`].
pub fn tuple(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| num(x)).collect();
    format!("({})", parts.join(","))
}

/// Rounds every floating-point number in `v` to 12 significant digits.
/// Integers are left alone.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let rounded: f64 = num(x).parse().unwrap_or(x);
            if let Some(r) = serde_json::Number::from_f64(rounded) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes `value` with rounded floats.
pub fn json<T: serde::Serialize>(value: &T, pretty: bool) -> String {
    let mut v = serde_json::to_value(value).expect("serializable");
    round_json(&mut v);
    if pretty {
        serde_json::to_string_pretty(&v).expect("serializable")
    } else {
        serde_json::to_string(&v).expect("serializable")
    }
}
