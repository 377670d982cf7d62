//! Modified Bessel function of the second kind, K_ν(x), real positive
//! argument, real order, plus its x-derivative.
//!
//! Evaluated from the integral representation
//!
//! ```text
//! K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt
//! ```
//!
//! as an e^x-scaled, peak-shifted integrand handled by tanh-sinh quadrature
//! on a truncated interval: the working integrand is
//! `exp(−x(cosh t − 1) + lncosh(νt) − M)` with `M` the coarse-scanned peak
//! of the exponent, so the quadrature only ever sees values in (0, 1].
//! `lncosh(y) = |y| + log1p(e^{−2|y|}) − ln 2` keeps large orders from
//! overflowing. The derivative uses K_ν'(x) = −(K_{ν−1} + K_{ν+1})/2
//! (K is even in its order, so ν < 1 needs no special casing).

use crate::{Error, Result};

/// Value and x-derivative of K_ν at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselK {
    pub value: f64,
    pub derivative: f64,
}

const X_MIN: f64 = 1e-8;
const X_MAX: f64 = 700.0;
const NU_MAX: f64 = 60.0;

/// K_ν(x) and K_ν'(x). Supported domain: `1e-8 ≤ x ≤ 700`, `|ν| ≤ 60`,
/// rejecting combinations whose value overflows f64.
pub fn bessel_k(nu: f64, x: f64) -> Result<BesselK> {
    let value = bessel_k_value(nu, x)?;
    let km = bessel_k_value(nu - 1.0, x)?;
    let kp = bessel_k_value(nu + 1.0, x)?;
    Ok(BesselK {
        value,
        derivative: -0.5 * (km + kp),
    })
}

/// K_ν(x) alone.
pub fn bessel_k_value(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(Error::invalid(format!(
            "bessel_k: non-finite input nu={nu}, x={x}"
        )));
    }
    if !(X_MIN..=X_MAX).contains(&x) {
        return Err(Error::OutOfRange(format!(
            "bessel_k: x = {x} outside [{X_MIN}, {X_MAX}]"
        )));
    }
    let anu = nu.abs();
    if anu > NU_MAX + 1.0 {
        // +1 so the derivative recurrence at |ν| = NU_MAX still works.
        return Err(Error::OutOfRange(format!(
            "bessel_k: |nu| = {anu} outside [0, {NU_MAX}]"
        )));
    }

    // Exponent of the scaled integrand: g(t) = −x(cosh t − 1) + lncosh(νt).
    let g = |t: f64| -x * (t.cosh() - 1.0) + lncosh(anu * t);

    // Truncation point: g(T) ≈ −(M + 45) ⇒ tail < e^{−45} of the peak.
    // Fixed-point iteration on x(cosh T − 1) = 45 + M_est + νT.
    let mut t_end = ((1.0 + 45.0 / x).max(1.0 + 1e-12)).acosh().max(1.0);
    for _ in 0..6 {
        let target = 45.0 + anu * t_end + lncosh_peak_estimate(anu, x);
        t_end = (1.0 + target / x).acosh().max(1.0);
    }

    // Coarse scan for the exponent peak M (for scaling only; any
    // underestimate merely costs a little dynamic range).
    let mut m = 0.0f64; // g(0) = 0
    let scan_n = 256;
    for i in 1..=scan_n {
        let t = t_end * i as f64 / scan_n as f64;
        m = m.max(g(t));
    }

    // ln K = M − x + ln ∫ e^{g−M}; reject if it cannot fit in f64.
    if m - x > 705.0 {
        return Err(Error::OutOfRange(format!(
            "bessel_k: K_{nu}({x}) overflows f64 (exponent ≈ {:.1})",
            m - x
        )));
    }

    let integral = tanh_sinh(|t| (g(t) - m).exp(), 0.0, t_end, 1e-13)?;
    let scale = (m - x).exp();
    let value = scale * integral;
    if !value.is_finite() {
        return Err(Error::Convergence {
            context: "bessel_k",
            detail: format!("non-finite result for nu={nu}, x={x}"),
        });
    }
    Ok(value)
}

/// ln cosh(y) without overflow: |y| + log1p(e^{−2|y|}) − ln 2.
#[inline]
fn lncosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Rough upper bound for the lncosh contribution at the integrand peak,
/// used only to pick the truncation point.
fn lncosh_peak_estimate(anu: f64, x: f64) -> f64 {
    if anu == 0.0 {
        return 0.0;
    }
    // Peak near t* = asinh(ν/x); lncosh(νt) ≤ νt there.
    anu * (anu / x).asinh()
}

/// Tanh-sinh quadrature on [a, b]: doubles the node density per level until
/// two consecutive levels agree to `tol` (relative). The integrand is
/// assumed smooth; node weights decay double-exponentially so the j-loop
/// can cut off early.
pub(crate) fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let pi_2 = std::f64::consts::FRAC_PI_2;

    let mut previous = f64::NAN;
    for level in 2..=12u32 {
        let h = 0.5f64.powi(level as i32);
        // t_max: where the transformed weight underflows.
        let j_max = (6.0 / h) as i64;
        let mut sum = 0.0f64;
        for j in -j_max..=j_max {
            let t = h * j as f64;
            let sh = pi_2 * t.sinh();
            let u = sh.tanh(); // node in (−1, 1)
            let ch = sh.cosh();
            let w = pi_2 * t.cosh() / (ch * ch); // weight
            if w < 1e-320 {
                continue;
            }
            let x = mid + half * u;
            let fx = f(x);
            sum += w * fx;
        }
        let estimate = sum * h * half;
        if level >= 4 && (estimate - previous).abs() <= tol * estimate.abs().max(1e-300) {
            return Ok(estimate);
        }
        previous = estimate;
    }
    Err(Error::Convergence {
        context: "tanh_sinh",
        detail: format!("no convergence to {tol:e} on [{a}, {b}]"),
    })
}
