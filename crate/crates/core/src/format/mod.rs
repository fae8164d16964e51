//! Plain-text file formats.
//!
//! All numbers are written with at most nine significant digits, and every
//! writer emits LF line endings in a fixed section order, so files are
//! diffable and regenerate byte for byte.

mod instance;
mod solution;
mod streets;

pub use instance::{parse_instance, parse_network, serialize_instance, serialize_network};
pub use solution::{parse_solution, serialize_solution};
pub use streets::{parse_streets, serialize_streets};

/// Formats `x` like C's `%.9g`: nine significant digits, trailing zeros
/// trimmed, scientific notation only for very large or small magnitudes.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

/// Rounds `x` to the value its nine-digit text form parses back to.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0;
    }
    fmt_num(x).parse().expect("fmt_num output parses")
}
