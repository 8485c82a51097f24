//! Locale-independent number output with 12 significant digits.

/// Rounds to 12 significant digits. Non-finite values pass through and
/// negative zero becomes zero.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest plain-decimal rendering of [`sig12`]`(x)`.
pub fn format_sig12(x: f64) -> String {
    format!("{}", sig12(x))
}
