//! Error type shared by all solver modules.

/// Everything that can go wrong while setting up or solving a model.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter fails a domain precondition (non-finite, wrong sign, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A special-function argument is outside the supported range.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// `δ + γ ≤ 0`: the candidate energy sits at or above the left continuum,
    /// so no decaying left tail exists and the state cannot be bound.
    #[error(
        "not a bound state: delta + gamma = {sum:.6e} <= 0 (delta = {delta}, gamma = {gamma})"
    )]
    NotABoundState { delta: f64, gamma: f64, sum: f64 },

    /// The right-side log-derivative was requested at (or numerically on top
    /// of) one of its poles. The bracket is an interval containing the pole.
    #[error("log-derivative pole near delta = {delta} (bracket [{lo}, {hi}])")]
    Pole { delta: f64, lo: f64, hi: f64 },

    /// Root scan hit the upper window edge while the residual still had the
    /// sign that allows a further root; widen the window to `suggested`.
    #[error("scan window [.., {delta_max}] too small, root suspected beyond; retry with delta_max = {suggested}")]
    WindowTooSmall { delta_max: f64, suggested: f64 },

    /// An iterative scheme (ODE step control, quadrature refinement, inverse
    /// iteration, ...) failed to reach its tolerance.
    #[error("convergence failure in {context}: {detail}")]
    Convergence {
        context: &'static str,
        detail: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
