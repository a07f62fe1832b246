//! Deterministic number formatting shared by every CSV/JSON emitter.

/// 17 significant digits in scientific notation; round-trips any f64.
/// Non-finite values print as `NaN`, `inf` or `-inf`.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
