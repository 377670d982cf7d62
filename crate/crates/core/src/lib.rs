//! Bound states of a one-dimensional Schrödinger particle living on a line that
//! changes character at the origin: a constant potential `U_L` on the left
//! half-line, a monotonically rising profile on the right half-line (linear,
//! parabolic, or exponential), and a Dirac delta of strength `U_0` pinned at
//! the interface.
//!
//! Everything is solved in dimensionless form. With a model-specific length
//! unit `L` (see [`units`]), the reduced equation on each half-line is
//!
//! ```text
//! φ''(q) = 2 (u(q) − ε) φ(q),        q = x / L,  ε = m L² E / ħ²,
//! ```
//!
//! and the delta contributes a jump `φ'(0⁺) − φ'(0⁻) = 2 u₀ φ(0)` with
//! `u₀ = m L U₀ / ħ²`. Writing `δ = 2(a − ε)` (so `ε = a − δ/2`, with `a` the
//! right-profile offset) and `γ = 2(u_L − a)`, a bound state must decay as
//! `e^{α q}` on the left with `α = √(δ + γ)`, and matching logarithmic
//! derivatives at the origin gives the quantization condition
//!
//! ```text
//! R(δ) = 2 u₀ + √(δ + γ),
//! ```
//!
//! where `R(δ) = φ_R'(0)/φ_R(0)` is the log-derivative of the decaying
//! right-side solution. `R` is evaluated in closed form where one exists
//! (Airy functions for the linear profile, modified Bessel `K` for the
//! exponential profile at `δ > 0`) or by inward Riccati integration
//! ([`logderiv`]). Root finding over `δ` lives in [`quantize`], an
//! independent finite-difference eigensolver in [`oracle`], and the special
//! functions backing the closed forms in [`specfun`].
//!
//! The crate is data-parallel by default (feature `parallel`, on by default,
//! pulls in rayon); every parallel map has a sequential twin selected by
//! [`exec::ExecPolicy`], and both produce bit-identical results.

pub mod error;
pub mod exec;
pub mod logderiv;
mod ode;
pub mod oracle;
pub mod quantize;
pub mod specfun;
pub mod units;

pub use error::Error;
pub use exec::ExecPolicy;
pub use logderiv::{LogDerivEvaluator, Method, RightProfile};
pub use quantize::{BoundState, GraphicalSolutionData, QuantizationProblem};
pub use units::{DimensionlessModel, PhysicalParameters, ProfileKind};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
