//! Shared number formatting for CSV and summary files.

/// Scientific notation with 12 significant digits, e.g. `-1.13728383416e0`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}
