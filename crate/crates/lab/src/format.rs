//! Text output: log10 values with 12 significant digits, trajectory CSVs.

use std::fmt::Write as _;

use ctm_core::Trajectory;

const SIGNIFICANT_DIGITS: i32 = 12;

/// Formats `value` with 12 significant digits, plain decimal notation for
/// magnitudes in `[1e-5, 1e15)` and scientific notation otherwise. Trailing
/// zeros are dropped; zero prints as `0`.
pub fn format_log10(value: f64) -> String {
    if value == 0.0 {
        return "0".to_owned();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS - 1 - exponent).max(0) as usize;
        let text = format!("{value:.decimals$}");
        let text = if text.contains('.') {
            text.trim_end_matches('0').trim_end_matches('.')
        } else {
            &text
        };
        if text == "-0" {
            "0".to_owned()
        } else {
            text.to_owned()
        }
    } else {
        format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, value)
    }
}

/// The value a reader of [`format_log10`] output recovers.
pub fn rounded(value: f64) -> f64 {
    format_log10(value).parse().unwrap_or(value)
}

/// CSV with header `n,log10_value` and rows `n = 1..N`, LF line endings.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(24 * (trajectory.len() + 1));
    out.push_str("n,log10_value\n");
    for (i, v) in trajectory.log10_values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, format_log10(*v));
    }
    out
}
