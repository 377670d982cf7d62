//! Deterministic, locale-independent number formatting for data files.

/// 15 significant digits; lowercase scientific when `|x| < 1e-3` or
/// `|x| ≥ 1e6`; plain `0` for zero. Never reads the locale, so output is
/// byte-identical across platforms.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs();
    if !(1e-3..1e6).contains(&mag) {
        format!("{x:.14e}")
    } else {
        // Fixed-point with 15 significant digits: the count of digits after
        // the point depends on the magnitude (14 − floor(log10 |x|)).
        let exp = mag.log10().floor() as i32;
        let prec = (14 - exp).max(0) as usize;
        format!("{x:.prec$}")
    }
}
