//! Shared CSV float formatting.

/// Scientific notation with 17 significant digits; parses back to the
/// same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lossless() {
        for &x in &[0.1, 1.0 / 3.0, std::f64::consts::PI, -2.5e-300, 6.02e23] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
