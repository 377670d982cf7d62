//! Dimensional reduction. Each right-hand profile has a natural length unit
//! `L` that strips all dimensionful constants from the Schrödinger equation:
//!
//! * linear      `U_R(x) = A + B x`        →  `L = (ħ² / 2mB)^{1/3}`, reduced
//!   slope exactly 1/2: `u_R(q) = a + q/2`;
//! * parabolic   `U_R(x) = A + B x²`       →  `L = ħ^{1/2} / (mB)^{1/4}`,
//!   `u_R(q) = a + q²`;
//! * exponential `U_R(x) = A + B e^{βx}`   →  `L = 1/β`, `u_R(q) = a + b e^q`
//!   with `b = mB / (ħ²β²)`.
//!
//! Reduced quantities: `q = x/L`, `ε = mL²E/ħ²`, `u₀ = mLU₀/ħ²`,
//! `a = mL²A/ħ²`, `u_L = mL²U_L/ħ²`, and the two solver-facing combinations
//! `γ = 2(u_L − a)` and `δ = 2(a − ε)`. A state is bound iff `a − γ/2 < ε <
//! u_L`, i.e. iff `δ + γ > 0` at fixed `δ` below the left continuum.

use crate::{Error, Result};

/// Shape of the right-hand potential profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Linear,
    Parabolic,
    Exponential,
}

impl ProfileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Linear => "linear",
            ProfileKind::Parabolic => "parabolic",
            ProfileKind::Exponential => "exponential",
        }
    }
}

impl std::fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Laboratory-frame inputs. `scale` is the profile coefficient `B` (units
/// depend on the profile kind); `rate` is the exponential decay constant `β`
/// and must be present exactly when the kind is exponential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParameters {
    pub mass: f64,
    pub hbar: f64,
    /// Delta strength `U₀` (energy × length); negative is attractive.
    pub delta_strength: f64,
    /// Constant left-side potential `U_L` (energy).
    pub left_level: f64,
    /// Right-profile offset `A = U_R(0)` (energy).
    pub offset: f64,
    /// Right-profile coefficient `B > 0`.
    pub scale: f64,
    /// Exponential rate `β > 0`; `None` for linear/parabolic.
    pub rate: Option<f64>,
}

impl PhysicalParameters {
    fn validate(&self, kind: ProfileKind) -> Result<()> {
        let all = [
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("delta_strength", self.delta_strength),
            ("left_level", self.left_level),
            ("offset", self.offset),
            ("scale", self.scale),
        ];
        for (name, v) in all {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        if self.mass <= 0.0 {
            return Err(Error::invalid(format!(
                "mass must be > 0, got {}",
                self.mass
            )));
        }
        if self.hbar <= 0.0 {
            return Err(Error::invalid(format!(
                "hbar must be > 0, got {}",
                self.hbar
            )));
        }
        if self.scale <= 0.0 {
            return Err(Error::invalid(format!(
                "scale must be > 0, got {}",
                self.scale
            )));
        }
        match (kind, self.rate) {
            (ProfileKind::Exponential, Some(beta)) if beta.is_finite() && beta > 0.0 => Ok(()),
            (ProfileKind::Exponential, other) => Err(Error::invalid(format!(
                "exponential profile needs rate > 0, got {other:?}"
            ))),
            (_, Some(_)) => Err(Error::invalid(
                "rate is only meaningful for the exponential profile".to_string(),
            )),
            (_, None) => Ok(()),
        }
    }
}

/// The fully reduced model the solver works on. `L` is kept so energies can
/// be mapped back to laboratory units; a directly specified dimensionless
/// model carries `L = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessModel {
    pub kind: ProfileKind,
    /// Reduced delta strength `u₀`.
    pub u0: f64,
    /// Well depth parameter `γ = 2(u_L − a)`; bound states need `δ + γ > 0`.
    pub gamma: f64,
    /// Right-profile offset `a = u_R(0)`.
    pub a: f64,
    /// Reduced exponential coefficient; `Some` exactly for exponential.
    pub b: Option<f64>,
    /// Length unit used in the reduction (1 for native dimensionless input).
    pub length_unit: f64,
}

impl DimensionlessModel {
    /// Validated constructor for native dimensionless input (`L = 1`).
    pub fn new(kind: ProfileKind, u0: f64, gamma: f64, a: f64, b: Option<f64>) -> Result<Self> {
        for (name, v) in [("u0", u0), ("gamma", gamma), ("a", a)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        match (kind, b) {
            (ProfileKind::Exponential, Some(b)) if b.is_finite() && b > 0.0 => {}
            (ProfileKind::Exponential, other) => {
                return Err(Error::invalid(format!(
                    "exponential profile needs b > 0, got {other:?}"
                )))
            }
            (_, Some(_)) => {
                return Err(Error::invalid(
                    "b is only meaningful for the exponential profile".to_string(),
                ))
            }
            (_, None) => {}
        }
        Ok(DimensionlessModel {
            kind,
            u0,
            gamma,
            a,
            b,
            length_unit: 1.0,
        })
    }

    /// Left continuum edge `u_L = a + γ/2`.
    pub fn u_left(&self) -> f64 {
        self.a + 0.5 * self.gamma
    }

    /// Right-side reduced potential `u_R(q)` for `q ≥ 0`.
    pub fn u_right(&self, q: f64) -> f64 {
        match self.kind {
            ProfileKind::Linear => self.a + 0.5 * q,
            ProfileKind::Parabolic => self.a + q * q,
            ProfileKind::Exponential => self.a + self.b.unwrap() * q.exp(),
        }
    }

    /// Reduced energy of a root: `ε = a − δ/2`.
    pub fn epsilon_of_delta(&self, delta: f64) -> f64 {
        self.a - 0.5 * delta
    }
}

/// The natural length unit for a profile. Errors on invalid parameters.
pub fn length_scale(kind: ProfileKind, p: &PhysicalParameters) -> Result<f64> {
    p.validate(kind)?;
    Ok(match kind {
        ProfileKind::Linear => (p.hbar * p.hbar / (2.0 * p.mass * p.scale)).cbrt(),
        ProfileKind::Parabolic => p.hbar.sqrt() / (p.mass * p.scale).powf(0.25),
        ProfileKind::Exponential => 1.0 / p.rate.unwrap(),
    })
}

/// Full reduction of a physical parameter set.
pub fn reduce(kind: ProfileKind, p: &PhysicalParameters) -> Result<DimensionlessModel> {
    let l = length_scale(kind, p)?;
    let m_over_h2 = p.mass / (p.hbar * p.hbar);
    let u0 = m_over_h2 * l * p.delta_strength;
    let a = m_over_h2 * l * l * p.offset;
    let u_l = m_over_h2 * l * l * p.left_level;
    let gamma = 2.0 * (u_l - a);
    let b = match kind {
        ProfileKind::Exponential => {
            // b = m L² B / ħ² = m B / (ħ² β²)
            Some(m_over_h2 * l * l * p.scale)
        }
        _ => None,
    };
    Ok(DimensionlessModel {
        kind,
        u0,
        gamma,
        a,
        b,
        length_unit: l,
    })
}

/// Map a reduced energy back to laboratory units: `E = ħ² ε / (m L²)`.
pub fn restore_energy(model: &DimensionlessModel, p: &PhysicalParameters, epsilon: f64) -> f64 {
    let l = model.length_unit;
    p.hbar * p.hbar * epsilon / (p.mass * l * l)
}
