//! Number formatting shared by every output format.

use serde_json::Value;

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}")
        .parse()
        .expect("formatted float re-parses")
}

/// Shortest decimal that re-parses to `round_sig(x)`.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    // Avoid "-0".
    if r == 0.0 {
        "0".to_owned()
    } else {
        format!("{r}")
    }
}

/// Applies [`round_sig`] to every float in a JSON tree.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(num) if num.is_f64() => {
            if let Some(f) = num.as_f64() {
                if let Some(rounded) = serde_json::Number::from_f64(round_sig(f)) {
                    *num = rounded;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}
