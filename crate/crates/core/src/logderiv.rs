//! The right-side logarithmic derivative `R(δ) = φ_R'(0)/φ_R(0)`, where
//! `φ_R` is the solution on `q > 0` that decays as `q → ∞`, and the left
//! decay rate `α = √(δ + γ)`.
//!
//! In the reduced variables the right-side equation is `φ'' = W(q) φ` with
//!
//! ```text
//! W(q; δ) = δ + w(q),   w(q) = 2 (u_R(q) − u_R(0)⁻ᵒᶠᶠˢᵉᵗ) =
//!     q          (linear)
//!     2 q²       (parabolic)
//!     2 b e^q    (exponential)
//! ```
//!
//! (the additive offset `a` cancels, so `R` depends only on the profile
//! shape and `δ`). Three evaluation methods:
//!
//! * **Airy closed form** (linear): `R(δ) = Ai'(δ)/Ai(δ)`;
//! * **Bessel closed form** (exponential, `δ > 0` only): the decaying
//!   solution is `K_ν(z₀ e^{q/2})` with `ν = 2√δ`, `z₀ = 2√(2b)`, giving
//!   `R(δ) = (z₀/2) K_ν'(z₀)/K_ν(z₀)`;
//! * **inward integration** (any profile): Riccati equation
//!   `s' = W − s²` integrated from deep inside the forbidden region
//!   (`W(q_start) ≥ 50`) down to 0, seeded with the WKB value
//!   `s = −√W(q_start)`; the seed error is crushed by the exponential
//!   contraction onto the decaying solution. Poles of `R` (nodes of `φ_R`
//!   at the origin) are crossed by switching to the reciprocal variable
//!   `v = 1/s`, `v' = 1 − W v²`, with hysteresis thresholds so the
//!   integration never chatters between charts.
//!
//! `R` is strictly decreasing in `δ` between consecutive poles.

use crate::ode::{integrate, StepControl};
use crate::specfun;
use crate::units::{DimensionlessModel, ProfileKind};
use crate::{Error, Result};

/// Left-side decay rate `α = √(δ + γ)`. A candidate with `δ + γ ≤ 0` has no
/// decaying left tail (it sits at or above the left continuum edge).
pub fn alpha(delta: f64, gamma: f64) -> Result<f64> {
    let sum = delta + gamma;
    if sum <= 0.0 {
        return Err(Error::NotABoundState { delta, gamma, sum });
    }
    Ok(sum.sqrt())
}

/// Shape of the right-side potential, stripped of its additive offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RightProfile {
    pub kind: ProfileKind,
    /// Reduced exponential coefficient; 1.0 (unused) for other kinds.
    pub b: f64,
}

impl RightProfile {
    pub fn from_model(model: &DimensionlessModel) -> RightProfile {
        RightProfile {
            kind: model.kind,
            b: model.b.unwrap_or(1.0),
        }
    }

    /// `w(q) = 2(u_R(q) − a)`, the δ-independent part of `W`.
    #[inline]
    pub fn shift(&self, q: f64) -> f64 {
        match self.kind {
            ProfileKind::Linear => q,
            ProfileKind::Parabolic => 2.0 * q * q,
            ProfileKind::Exponential => 2.0 * self.b * q.exp(),
        }
    }

    /// Full Riccati/Schrödinger coefficient `W(q; δ) = δ + w(q)`.
    #[inline]
    pub fn w(&self, q: f64, delta: f64) -> f64 {
        delta + self.shift(q)
    }

    /// Starting abscissa for inward integration: far enough out that
    /// `W(q_start) ≥ 50` (≥ 25 above the turning point in energy), with a
    /// floor of 1 so the integration always has room to contract.
    pub fn suggested_start(&self, delta: f64) -> f64 {
        let need = 50.0 - delta;
        let q = match self.kind {
            ProfileKind::Linear => need,
            ProfileKind::Parabolic => (need.max(0.0) / 2.0).sqrt(),
            ProfileKind::Exponential => (need / (2.0 * self.b)).max(1.0).ln(),
        };
        q.max(1.0)
    }
}

/// How `R(δ)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `Ai'(δ)/Ai(δ)` — linear profile only.
    AiryClosedForm,
    /// `(z₀/2) K_ν'(z₀)/K_ν(z₀)` — exponential profile, point evaluator for
    /// `δ > 0` only (the order `2√δ` turns imaginary below threshold, so
    /// root scans over windows reaching `δ ≤ 0` must integrate instead).
    BesselClosedForm,
    /// Riccati inward integration — any profile.
    InwardIntegration,
}

/// Evaluator for the right-side logarithmic derivative at `q = 0`.
#[derive(Debug, Clone, Copy)]
pub struct LogDerivEvaluator {
    profile: RightProfile,
    method: Method,
    rtol: f64,
    atol: f64,
}

/// Riccati chart-switching thresholds: leave the `s` chart above |s| = 100,
/// return from the reciprocal chart below |s| = 50. The gap prevents
/// chattering at a chart boundary.
const S_CHART_EXIT: f64 = 100.0;
const V_CHART_EXIT: f64 = 0.02; // |v| = 1/|s| above this ⇒ |s| < 50

/// |R| beyond this is reported as a pole hit rather than a value.
const POLE_MAGNITUDE: f64 = 1e12;

impl LogDerivEvaluator {
    /// Preferred method for the profile: closed form for linear (fast,
    /// ~1e-14), integration otherwise. The Bessel closed form is *not*
    /// auto-selected because it cannot cover δ ≤ 0, where the exponential
    /// model's bound states usually live.
    pub fn auto(profile: RightProfile) -> LogDerivEvaluator {
        let method = match profile.kind {
            ProfileKind::Linear => Method::AiryClosedForm,
            _ => Method::InwardIntegration,
        };
        LogDerivEvaluator {
            profile,
            method,
            rtol: 1e-10,
            atol: 1e-12,
        }
    }

    /// Explicit method choice; errors on profile/method mismatches.
    pub fn with_method(profile: RightProfile, method: Method) -> Result<LogDerivEvaluator> {
        match (method, profile.kind) {
            (Method::AiryClosedForm, ProfileKind::Linear)
            | (Method::BesselClosedForm, ProfileKind::Exponential)
            | (Method::InwardIntegration, _) => Ok(LogDerivEvaluator {
                profile,
                method,
                rtol: 1e-10,
                atol: 1e-12,
            }),
            (m, k) => Err(Error::invalid(format!(
                "method {m:?} does not apply to the {k} profile"
            ))),
        }
    }

    /// Override integration tolerances (inward-integration method only).
    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> LogDerivEvaluator {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn profile(&self) -> RightProfile {
        self.profile
    }

    /// `R(δ)`. Errors: `Pole` when δ lands on (or numerically inside) a
    /// pole of `R`; `OutOfRange` for arguments a closed form cannot reach.
    pub fn eval(&self, delta: f64) -> Result<f64> {
        if !delta.is_finite() {
            return Err(Error::invalid(format!(
                "R(δ): δ must be finite, got {delta}"
            )));
        }
        match self.method {
            Method::AiryClosedForm => airy_logderiv(delta),
            Method::BesselClosedForm => bessel_logderiv(self.profile.b, delta),
            Method::InwardIntegration => self.eval_from(delta, self.profile.suggested_start(delta)),
        }
    }

    /// Inward integration from an explicit start point. Public as a
    /// validation hook: doubling `q_start` must not move `R` by more than
    /// ~1e-9, which the tests assert.
    pub fn eval_from(&self, delta: f64, q_start: f64) -> Result<f64> {
        let prof = self.profile;
        let w0 = prof.w(q_start, delta);
        if w0 <= 0.0 {
            return Err(Error::invalid(format!(
                "inward integration must start in the forbidden region \
                 (W({q_start}; {delta}) = {w0} ≤ 0)"
            )));
        }

        // Two charts: y = s (log-derivative) or y = v = 1/s.
        let s_rhs = |q: f64, y: &[f64; 1]| [prof.w(q, delta) - y[0] * y[0]];
        let v_rhs = |q: f64, y: &[f64; 1]| [1.0 - prof.w(q, delta) * y[0] * y[0]];

        let mut q = q_start;
        let mut s_val = -w0.sqrt(); // WKB seed for the decaying solution
        let mut s_chart = s_val.abs() < S_CHART_EXIT;
        if !s_chart {
            s_val = 1.0 / s_val;
        }

        for _ in 0..10_000 {
            if s_chart {
                let (q_end, y) = integrate(s_rhs, q, 0.0, [s_val], self.rtol, self.atol, |st| {
                    if st.y1[0].abs() >= S_CHART_EXIT {
                        StepControl::Stop
                    } else {
                        StepControl::Continue
                    }
                })?;
                q = q_end;
                s_val = y[0];
                if q == 0.0 || q.abs() < 1e-14 * q_start {
                    return Ok(s_val);
                }
                s_val = 1.0 / s_val;
                s_chart = false;
            } else {
                let (q_end, y) = integrate(v_rhs, q, 0.0, [s_val], self.rtol, self.atol, |st| {
                    if st.y1[0].abs() >= V_CHART_EXIT {
                        StepControl::Stop
                    } else {
                        StepControl::Continue
                    }
                })?;
                q = q_end;
                s_val = y[0];
                if q == 0.0 || q.abs() < 1e-14 * q_start {
                    let v = s_val;
                    if v.abs() * POLE_MAGNITUDE < 1.0 {
                        // Landed on a node of φ_R: R has a simple pole here
                        // with O(1–10²) residue, so the pole sits within
                        // ~10³·|v| of this δ.
                        let hw = (1e3 * v.abs()).max(1e-12);
                        return Err(Error::Pole {
                            delta,
                            lo: delta - hw,
                            hi: delta + hw,
                        });
                    }
                    return Ok(1.0 / v);
                }
                s_val = 1.0 / s_val;
                s_chart = true;
            }
        }
        Err(Error::Convergence {
            context: "riccati",
            detail: format!("chart switching did not terminate at δ = {delta}"),
        })
    }
}

/// Linear profile: `R(δ) = Ai'(δ)/Ai(δ)`, guarded against the zeros of Ai.
fn airy_logderiv(delta: f64) -> Result<f64> {
    let v = specfun::airy(delta)?;
    // Newton estimate of the distance to the nearest zero of Ai; valid
    // because all zeros of Ai are simple.
    let dist = (v.ai / v.ai_prime).abs();
    if dist < 1e-10 {
        return Err(Error::Pole {
            delta,
            lo: delta - 2.0 * dist - 1e-12,
            hi: delta + 2.0 * dist + 1e-12,
        });
    }
    Ok(v.ai_prime / v.ai)
}

/// Exponential profile, `δ > 0`: `R(δ) = (z₀/2) K_ν'(z₀)/K_ν(z₀)`.
fn bessel_logderiv(b: f64, delta: f64) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "Bessel closed form needs δ > 0 (order 2√δ), got δ = {delta}"
        )));
    }
    let nu = 2.0 * delta.sqrt();
    let z0 = 2.0 * (2.0 * b).sqrt();
    let k = specfun::bessel_k(nu, z0)?;
    Ok(0.5 * z0 * k.derivative / k.value)
}
