use crate::error::Result;

/// Central difference `(f(x+h) − f(x−h)) / 2h`.
pub fn finite_difference<F: Fn(f64) -> f64>(f: F, at: f64, h: f64) -> f64 {
    (f(at + h) - f(at - h)) / (2.0 * h)
}

/// As [`finite_difference`], passing evaluation failures through.
pub fn try_finite_difference<F: Fn(f64) -> Result<f64>>(f: F, at: f64, h: f64) -> Result<f64> {
    Ok((f(at + h)? - f(at - h)?) / (2.0 * h))
}
