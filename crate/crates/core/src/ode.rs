//! Numerical workhorses shared by the log-derivative evaluator and the
//! eigenfunction constructor: an adaptive embedded Runge–Kutta 5(4) pair
//! (Dormand–Prince coefficients, FSAL), quintic Hermite interpolation of
//! accepted steps, and adaptive Simpson quadrature.

use crate::{Error, Result};

/// What the per-step observer wants the driver to do next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StepControl {
    Continue,
    /// Stop after this accepted step; `integrate` returns the current state.
    Stop,
}

/// One accepted step, handed to the observer: endpoint states and the ODE
/// right-hand side at both ends (enough for quintic reconstruction when the
/// second derivative is otherwise known).
#[derive(Debug, Clone, Copy)]
pub(crate) struct AcceptedStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    #[allow(dead_code)]
    pub f0: [f64; N],
    #[allow(dead_code)]
    pub f1: [f64; N],
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (5th-order weights minus embedded 4th-order weights).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const MAX_STEPS: usize = 2_000_000;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction). The
/// observer sees every accepted step and may stop the run early; the return
/// value is the state at `t1` or at the early-stop point.
pub(crate) fn integrate<const N: usize, F, O>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    rtol: f64,
    atol: f64,
    mut observer: O,
) -> Result<(f64, [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&AcceptedStep<N>) -> StepControl,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((t0, y0));
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);

    // Conservative opener; rejections shrink it and the controller recovers
    // the right scale within a couple of steps.
    let mut h = 0.01 * span;

    for _ in 0..MAX_STEPS {
        if (t - t1).abs() <= 1e-14 * span.abs() {
            return Ok((t, y));
        }
        if (t1 - t) * dir < h.abs() {
            h = t1 - t;
        }
        if h.abs() < 1e-15 * t.abs().max(1.0) {
            return Err(Error::Convergence {
                context: "rk45",
                detail: format!("step size underflow at t = {t}"),
            });
        }

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            t + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = f(t + h, &y_new);

        // Embedded error estimate, RMS-scaled.
        let mut err_sq = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / N as f64).sqrt();

        // A non-finite error estimate (state blew up inside the attempted
        // step) must shrink h directly — feeding NaN to the controller
        // would poison every later step size.
        if !err.is_finite() {
            h *= 0.1;
            continue;
        }

        if err <= 1.0 {
            let step = AcceptedStep {
                t0: t,
                t1: t + h,
                y0: y,
                y1: y_new,
                f0: k1,
                f1: k7,
            };
            t += h;
            y = y_new;
            k1 = k7; // FSAL
            let control = observer(&step);
            h *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
            if control == StepControl::Stop {
                return Ok((t, y));
            }
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Err(Error::Convergence {
        context: "rk45",
        detail: format!("exceeded {MAX_STEPS} steps (t = {t}, target {t1})"),
    })
}

/// One quintic Hermite segment: matches value, first and second derivative
/// at both ends. Interpolation error tracks the integrator's local error
/// (~(κh)⁶/46080 relative for solutions varying like e^{κq}), which keeps
/// finite-difference probes of the interpolant meaningful.
#[derive(Debug, Clone, Copy)]
pub(crate) struct QuinticSegment {
    pub q0: f64,
    pub h: f64,
    c: [f64; 6],
}

impl QuinticSegment {
    /// Build from endpoint data: (value, derivative, second derivative) at
    /// `q0` and at `q0 + h`. Derivatives are with respect to `q`.
    pub fn new(q0: f64, h: f64, lo: (f64, f64, f64), hi: (f64, f64, f64)) -> Self {
        let (y0, d0, s0) = (lo.0, lo.1 * h, lo.2 * h * h);
        let (y1, d1, s1) = (hi.0, hi.1 * h, hi.2 * h * h);
        let a = y1 - y0 - d0 - 0.5 * s0;
        let b = d1 - d0 - s0;
        let c = s1 - s0;
        QuinticSegment {
            q0,
            h,
            c: [
                y0,
                d0,
                0.5 * s0,
                10.0 * a - 4.0 * b + 0.5 * c,
                -15.0 * a + 7.0 * b - c,
                6.0 * a - 3.0 * b + 0.5 * c,
            ],
        }
    }

    #[inline]
    pub fn eval(&self, q: f64) -> f64 {
        let t = (q - self.q0) / self.h;
        let c = &self.c;
        ((((c[5] * t + c[4]) * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0]
    }

    /// Multiply the represented polynomial by a constant.
    pub fn scale(&mut self, k: f64) {
        for c in &mut self.c {
            *c *= k;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_to_high_accuracy() {
        let (_, y) = integrate(
            |_t, y: &[f64; 1]| [-y[0]],
            0.0,
            5.0,
            [1.0],
            1e-12,
            1e-14,
            |_| StepControl::Continue,
        )
        .unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn integrates_backwards() {
        // y' = cos t from π to 0: y(0) = y(π) + (sin 0 − sin π) = y(π).
        let (_, y) = integrate(
            |t: f64, _y: &[f64; 1]| [t.cos()],
            std::f64::consts::PI,
            0.0,
            [2.0],
            1e-12,
            1e-14,
            |_| StepControl::Continue,
        )
        .unwrap();
        let err = (y[0] - 2.0).abs();
        // Global error accumulates a few dozen local-tolerance steps.
        assert!(err < 1e-10, "error {err:.3e}");
    }

    #[test]
    fn observer_can_stop_early() {
        let mut crossings = 0;
        let (t, y) = integrate(
            |_t, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            100.0,
            [1.0, 0.0],
            1e-10,
            1e-12,
            |step| {
                if step.y1[0] < 0.0 {
                    crossings += 1;
                    StepControl::Stop
                } else {
                    StepControl::Continue
                }
            },
        )
        .unwrap();
        assert_eq!(crossings, 1);
        assert!(t < 2.0, "stopped at t = {t}");
        assert!(y[0] < 0.0);
    }

    #[test]
    fn quintic_reproduces_quintic_exactly() {
        // p(q) = q⁵ − 2q³ + q on [0.3, 1.1]
        let p = |q: f64| q.powi(5) - 2.0 * q.powi(3) + q;
        let dp = |q: f64| 5.0 * q.powi(4) - 6.0 * q * q + 1.0;
        let d2p = |q: f64| 20.0 * q.powi(3) - 12.0 * q;
        let (a, b) = (0.3, 1.1);
        let seg = QuinticSegment::new(a, b - a, (p(a), dp(a), d2p(a)), (p(b), dp(b), d2p(b)));
        for i in 0..=20 {
            let q = a + (b - a) * i as f64 / 20.0;
            assert!((seg.eval(q) - p(q)).abs() < 1e-14, "q = {q}");
        }
    }

    #[test]
    fn segment_scaling() {
        let seg0 = QuinticSegment::new(0.0, 1.0, (1.0, 2.0, 3.0), (4.0, 5.0, 6.0));
        let mut seg = seg0;
        seg.scale(-2.5);
        for i in 0..=10 {
            let q = i as f64 / 10.0;
            let want = -2.5 * seg0.eval(q);
            assert!((seg.eval(q) - want).abs() <= 1e-14 * want.abs());
        }
    }
}
