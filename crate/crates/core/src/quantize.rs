//! Bound-state quantization: roots of `F(δ) = R(δ) − 2u₀ − √(δ + γ)` over
//! the admissible window `δ ∈ (−γ, δ_max]`.
//!
//! Structure of `F` that the root finder leans on:
//!
//! * `R` is strictly decreasing between consecutive poles and runs from
//!   `+∞` (just above a pole) to `−∞` (just below the next), while the
//!   right-hand side `2u₀ + √(δ+γ)` is increasing — so `F` is strictly
//!   decreasing on every pole-free cell and each cell holds **at most one**
//!   root, present exactly when `F` changes sign across the cell.
//! * Poles of `R` are the `δ` at which the decaying right-side solution has
//!   a node at the origin. A node needs the origin to be classically
//!   forbidden-free, i.e. `W(0; δ) = δ + w(0) < 0`, so all poles sit below
//!   `−w(0)` and the pole scan can stop there.
//! * `F(δ) → −∞` as `δ → ∞`, so a positive `F` at the window top means a
//!   root above it: reported as [`Error::WindowTooSmall`] with a suggested
//!   extension (applied automatically by [`QuantizationProblem::find_roots`]).
//!
//! The coefficient on `u₀` in the right-hand side is **2**: integrating
//! `φ'' = 2(u − ε)φ` across the interface gives the full jump
//! `φ'(0⁺) − φ'(0⁻) = 2u₀ φ(0)`, and axis labels that fold the 2 into `u₀`
//! are a different normalization of the same condition. The independent
//! finite-difference model in [`oracle`](crate::oracle) reproduces the
//! spectra computed here, pinning the `2u₀` form.
//!
//! Poles are located by scanning for `− → +` sign transitions of `R`
//! (impossible for a decreasing function except across a pole) with a step
//! at least 25× finer than the minimal pole spacing `π/√|W(0; δ_min)|`,
//! then bisecting on the sign of `R`.

use crate::exec::{self, ExecPolicy};
use crate::logderiv::{alpha, LogDerivEvaluator, Method, RightProfile};
use crate::ode::{integrate, QuinticSegment, StepControl};
use crate::specfun;
use crate::units::DimensionlessModel;
use crate::{Error, Result};

/// The Airy closed form overflows past `x ≈ 104`; windows are clamped a
/// little below that and a root beyond the clamp is reported honestly as
/// out of range (inward integration has no such cap).
const AIRY_WINDOW_CAP: f64 = 100.0;

/// Half-width of the exclusion gap around poles in graphical sampling.
const POLE_GAP: f64 = 1e-3;

/// Tolerances for the eigenfunction tail integration.
const TAIL_RTOL: f64 = 1e-10;
const TAIL_ATOL: f64 = 1e-12;

/// 6-point Gauss–Legendre nodes/weights on [−1, 1] (positive half; the rule
/// is symmetric). Exact for polynomials of degree ≤ 11, hence exact for the
/// square of a quintic segment.
const GL6_X: [f64; 3] = [
    0.238_619_186_083_196_9,
    0.661_209_386_466_264_5,
    0.932_469_514_203_152,
];
const GL6_W: [f64; 3] = [
    0.467_913_934_572_691_05,
    0.360_761_573_048_138_6,
    0.171_324_492_379_170_35,
];

/// One bound state of the interface model, with enough data to evaluate its
/// normalized eigenfunction anywhere.
#[derive(Debug, Clone)]
pub struct BoundState {
    /// 1-based, ordered by increasing energy (decreasing δ starts at 1).
    pub index: usize,
    /// Root of the quantization condition.
    pub delta: f64,
    /// Reduced energy `ε = a − δ/2`.
    pub epsilon: f64,
    /// Left decay rate `α = √(δ + γ)`.
    pub alpha: f64,
    /// Matching defect `|R(δ) − 2u₀ − α|` at the reported root. A quality
    /// indicator for the match, not a bound on the δ error.
    pub residual: f64,
    amplitude: f64,
    tail: RightTail,
}

#[derive(Debug, Clone)]
enum RightTail {
    /// `φ_R(q) = Ai(δ + q) / Ai(δ)` exactly.
    Airy { delta: f64, inv_ai0: f64 },
    /// Quintic Hermite segments covering `[0, q_end]`, already scaled so the
    /// value at the origin is 1; continued as `φ(q_end) e^{−κ_end (q−q_end)}`
    /// beyond the last sample.
    Sampled {
        segments: Vec<QuinticSegment>,
        q_end: f64,
        phi_end: f64,
        kappa_end: f64,
    },
}

impl BoundState {
    /// `φ(0)`: the normalized eigenfunction's value at the interface
    /// (chosen positive).
    pub fn amplitude_at_origin(&self) -> f64 {
        self.amplitude
    }

    /// Normalized eigenfunction `φ(q)`, `∫ φ² dq = 1` over the whole line:
    /// `C e^{αq}` on the left, the stored decaying tail on the right.
    pub fn eigenfunction(&self, q: f64) -> f64 {
        if !q.is_finite() {
            return f64::NAN;
        }
        if q <= 0.0 {
            return self.amplitude * (self.alpha * q).exp();
        }
        let tail = match &self.tail {
            RightTail::Airy { delta, inv_ai0 } => {
                // The only reachable failure is an argument beyond the
                // overflow guard, where Ai has long since underflowed.
                specfun::airy(delta + q).map_or(0.0, |v| v.ai * inv_ai0)
            }
            RightTail::Sampled {
                segments,
                q_end,
                phi_end,
                kappa_end,
            } => {
                if q >= *q_end {
                    phi_end * (-kappa_end * (q - q_end)).exp()
                } else {
                    let i = segments
                        .partition_point(|s| s.q0 + s.h < q)
                        .min(segments.len() - 1);
                    segments[i].eval(q)
                }
            }
        };
        self.amplitude * tail
    }
}

/// Sampled graphical form of the quantization condition: the two sides of
/// `R(δ) = 2u₀ + √(δ+γ)` over a δ window, with pole positions and the
/// intersection abscissas (= bound-state δ's over the *full* root window).
#[derive(Debug, Clone)]
pub struct GraphicalSolutionData {
    pub deltas: Vec<f64>,
    /// `R(δ)`; `None` within [`POLE_GAP`](self) of a pole, where the curve
    /// is off to ±∞.
    pub lhs: Vec<Option<f64>>,
    pub rhs: Vec<f64>,
    pub poles: Vec<f64>,
    pub intersections: Vec<f64>,
}

/// Root finder for one model. Window and tolerances are builder-adjustable;
/// defaults suit |u₀| up to a few units.
#[derive(Debug, Clone, Copy)]
pub struct QuantizationProblem {
    model: DimensionlessModel,
    evaluator: LogDerivEvaluator,
    delta_max: f64,
    margin: f64,
    root_tol: f64,
    scan_step: Option<f64>,
    exec: ExecPolicy,
}

impl QuantizationProblem {
    /// Problem with the profile's preferred evaluator and the default
    /// window `(−γ + margin, max(10, 8u₀² + 2)]` — wide enough for the
    /// δ-dominated state of a strongly attractive interface (δ* ≲ u₀²).
    pub fn new(model: DimensionlessModel) -> QuantizationProblem {
        QuantizationProblem {
            model,
            evaluator: LogDerivEvaluator::auto(RightProfile::from_model(&model)),
            delta_max: 10.0f64.max(8.0 * model.u0 * model.u0 + 2.0),
            margin: 1e-9,
            root_tol: 1e-12,
            scan_step: None,
            exec: ExecPolicy::default(),
        }
    }

    /// Swap in a different evaluator (e.g. inward integration to
    /// cross-check a closed form). Its profile must match the model.
    pub fn with_evaluator(mut self, evaluator: LogDerivEvaluator) -> Result<Self> {
        if evaluator.profile() != RightProfile::from_model(&self.model) {
            return Err(Error::invalid(format!(
                "evaluator profile {:?} does not match the model profile {:?}",
                evaluator.profile(),
                RightProfile::from_model(&self.model)
            )));
        }
        self.evaluator = evaluator;
        Ok(self)
    }

    /// Upper end of the root window.
    pub fn with_delta_max(mut self, delta_max: f64) -> Result<Self> {
        if !delta_max.is_finite() || delta_max <= -self.model.gamma {
            return Err(Error::invalid(format!(
                "delta_max must be finite and above −γ = {}, got {delta_max}",
                -self.model.gamma
            )));
        }
        self.delta_max = delta_max;
        Ok(self)
    }

    /// Offset of the window bottom above the left continuum edge `−γ`.
    pub fn with_margin(mut self, margin: f64) -> Result<Self> {
        if !(margin > 0.0 && margin <= 0.1) {
            return Err(Error::invalid(format!(
                "margin must lie in (0, 0.1], got {margin}"
            )));
        }
        self.margin = margin;
        Ok(self)
    }

    /// Relative δ width at which root bisection stops.
    pub fn with_root_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(Error::invalid(format!(
                "root_tol must lie in (0, 1e-3], got {tol}"
            )));
        }
        self.root_tol = tol;
        Ok(self)
    }

    /// Override the pole-scan step (default: 25× finer than the minimal
    /// pole spacing).
    pub fn with_scan_step(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::invalid(format!(
                "scan step must be positive, got {step}"
            )));
        }
        self.scan_step = Some(step);
        Ok(self)
    }

    pub fn with_exec(mut self, exec: ExecPolicy) -> Self {
        self.exec = exec;
        self
    }

    pub fn model(&self) -> &DimensionlessModel {
        &self.model
    }

    pub fn evaluator(&self) -> &LogDerivEvaluator {
        &self.evaluator
    }

    /// Bottom of the admissible window, `−γ + margin`.
    pub fn delta_min(&self) -> f64 {
        -self.model.gamma + self.margin
    }

    pub fn window(&self) -> (f64, f64) {
        (self.delta_min(), self.delta_max)
    }

    /// Right-hand side of the quantization condition, `2u₀ + √(δ+γ)`.
    pub fn rhs(&self, delta: f64) -> Result<f64> {
        Ok(2.0 * self.model.u0 + alpha(delta, self.model.gamma)?)
    }

    /// Matching defect `R(δ) − 2u₀ − √(δ+γ)`; zero at a bound state.
    pub fn residual(&self, delta: f64) -> Result<f64> {
        self.f_value(delta)
    }

    /// All bound states, deepest first. Extends the window (up to four
    /// doublings) if the initial one clips a root from above.
    pub fn find_roots(&self) -> Result<Vec<BoundState>> {
        let mut delta_max = self.delta_max;
        let mut last_err = None;
        for _ in 0..=4 {
            match self.roots_in(delta_max) {
                Err(Error::WindowTooSmall { suggested, .. }) => {
                    last_err = Some(Error::WindowTooSmall {
                        delta_max,
                        suggested,
                    });
                    delta_max = suggested;
                }
                other => return other,
            }
        }
        Err(last_err.expect("loop ran at least once"))
    }

    /// Like [`find_roots`](Self::find_roots) but strictly within the
    /// configured window: a clipped root surfaces as
    /// [`Error::WindowTooSmall`] instead of extending.
    pub fn find_roots_in_window(&self) -> Result<Vec<BoundState>> {
        self.roots_in(self.delta_max)
    }

    /// Both sides of the quantization condition sampled over
    /// `[δ_min, delta_hi]` (default top 0, where the classically allowed
    /// interface region ends for zero-offset profiles), plus pole and
    /// intersection positions.
    pub fn graphical_data(
        &self,
        samples: usize,
        delta_hi: Option<f64>,
    ) -> Result<GraphicalSolutionData> {
        if samples < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        let lo = self.delta_min();
        let hi = delta_hi.unwrap_or(0.0);
        if !hi.is_finite() || hi <= lo {
            return Err(Error::invalid(format!(
                "sampling window top {hi} must exceed δ_min = {lo}"
            )));
        }
        let poles = self.scan_poles(lo, hi)?;
        let intersections: Vec<f64> = self.find_roots()?.iter().map(|s| s.delta).collect();
        let deltas: Vec<f64> = (0..samples)
            .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
            .collect();
        let sampled: Vec<Result<(Option<f64>, f64)>> = exec::map_slice(self.exec, &deltas, |&d| {
            let rhs = 2.0 * self.model.u0 + alpha(d, self.model.gamma)?;
            let lhs = if poles.iter().any(|p| (d - p).abs() < POLE_GAP) {
                None
            } else {
                match self.evaluator.eval(d) {
                    Ok(r) => Some(r),
                    Err(Error::Pole { .. }) => None,
                    Err(e) => return Err(e),
                }
            };
            Ok((lhs, rhs))
        });
        let mut lhs = Vec::with_capacity(samples);
        let mut rhs = Vec::with_capacity(samples);
        for pair in sampled {
            let (l, r) = pair?;
            lhs.push(l);
            rhs.push(r);
        }
        Ok(GraphicalSolutionData {
            deltas,
            lhs,
            rhs,
            poles,
            intersections,
        })
    }

    fn f_value(&self, delta: f64) -> Result<f64> {
        let r = self.evaluator.eval(delta)?;
        let f = r - 2.0 * self.model.u0 - alpha(delta, self.model.gamma)?;
        if !f.is_finite() {
            return Err(Error::Convergence {
                context: "quantization",
                detail: format!("non-finite matching defect at δ = {delta}"),
            });
        }
        Ok(f)
    }

    fn roots_in(&self, delta_max: f64) -> Result<Vec<BoundState>> {
        let d_lo = self.delta_min();
        let capped =
            self.evaluator.method() == Method::AiryClosedForm && delta_max > AIRY_WINDOW_CAP;
        let d_hi = if capped { AIRY_WINDOW_CAP } else { delta_max };
        if d_hi <= d_lo {
            return Err(Error::invalid(format!(
                "empty root window: δ_min = {d_lo} ≥ δ_max = {d_hi}"
            )));
        }

        // Check the window top first: one sign tells whether a root got
        // clipped. Step off a pole if the top happens to land on one.
        let mut top = d_hi;
        let f_top = loop {
            match self.f_value(top) {
                Err(Error::Pole { lo, .. }) => top = lo,
                other => break other?,
            }
        };
        if f_top > 0.0 {
            return if capped {
                Err(Error::OutOfRange(format!(
                    "a root lies above δ = {d_hi}, beyond the Airy evaluation range; \
                     use the inward-integration evaluator for this model"
                )))
            } else {
                Err(Error::WindowTooSmall {
                    delta_max,
                    suggested: (2.0 * delta_max).max(10.0),
                })
            };
        }

        let poles = self.scan_poles(d_lo, d_hi)?;
        let inset = |p: f64| 1e-9 * p.abs().max(1.0);
        let mut cells: Vec<(f64, f64)> = Vec::with_capacity(poles.len() + 1);
        for i in 0..=poles.len() {
            let lo = if i == 0 {
                d_lo
            } else {
                poles[i - 1] + inset(poles[i - 1])
            };
            let hi = if i == poles.len() {
                d_hi
            } else {
                poles[i] - inset(poles[i])
            };
            cells.push((lo, hi));
        }

        let found = exec::map_slice(self.exec, &cells, |&(lo, hi)| self.root_in_cell(lo, hi));
        let mut roots = Vec::new();
        for r in found {
            if let Some(d) = r? {
                roots.push(d);
            }
        }

        let built = exec::map_slice(self.exec, &roots, |&d| self.make_state(d));
        let mut states = built.into_iter().collect::<Result<Vec<_>>>()?;
        // Deepest state (largest δ, smallest ε) first.
        states.reverse();
        for (i, s) in states.iter_mut().enumerate() {
            s.index = i + 1;
        }
        Ok(states)
    }

    /// The at-most-one root of the strictly decreasing `F` in a pole-free
    /// cell; present exactly when `F(lo) > 0 > F(hi)`.
    fn root_in_cell(&self, lo: f64, hi: f64) -> Result<Option<f64>> {
        if hi <= lo {
            return Ok(None);
        }
        if !(self.f_value(lo)? > 0.0 && self.f_value(hi)? < 0.0) {
            return Ok(None);
        }
        let (mut a, mut b) = (lo, hi);
        while b - a > self.root_tol * a.abs().max(b.abs()).max(1.0) {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.f_value(mid)? > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(Some(0.5 * (a + b)))
    }

    /// Poles of `R` in `[d_lo, d_hi]`, ascending. Scans for `− → +`
    /// transitions of the piecewise-decreasing `R`, then bisects on its
    /// sign.
    fn scan_poles(&self, d_lo: f64, d_hi: f64) -> Result<Vec<f64>> {
        // A node at the origin needs W(0; δ) = δ + w(0) < 0.
        let hi = d_hi.min(-self.evaluator.profile().shift(0.0));
        if hi <= d_lo {
            return Ok(Vec::new());
        }
        let step = self.scan_step.unwrap_or_else(|| {
            // Minimal pole spacing is ≥ π/√|W(0; δ_min)| for rising
            // profiles; sample 25× finer.
            let w0_abs = (d_lo + self.evaluator.profile().shift(0.0)).abs();
            (std::f64::consts::PI / (25.0 * w0_abs.sqrt().max(1.0))).min(0.05)
        });
        let n = (((hi - d_lo) / step).ceil() as usize + 1).max(2);
        let xs: Vec<f64> = (0..n)
            .map(|i| d_lo + (hi - d_lo) * i as f64 / (n - 1) as f64)
            .collect();
        // Ok(None) marks a sample that sat exactly on a pole.
        let sampled: Vec<Result<Option<f64>>> =
            exec::map_slice(self.exec, &xs, |&x| match self.evaluator.eval(x) {
                Ok(r) => Ok(Some(r)),
                Err(Error::Pole { .. }) => Ok(None),
                Err(e) => Err(e),
            });

        let mut poles = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for (&x, sample) in xs.iter().zip(sampled) {
            match sample? {
                Some(r) => {
                    if let Some((px, pr)) = prev {
                        if pr < 0.0 && r > 0.0 {
                            poles.push(self.refine_pole(px, x)?);
                        }
                    }
                    prev = Some((x, r));
                }
                None => {
                    // Direct hit: the sample is the pole to working
                    // precision; the sign transition around it is consumed.
                    poles.push(x);
                    prev = None;
                }
            }
        }
        Ok(poles)
    }

    /// Bisect `R`'s sign on `[lo, hi]` with `R(lo) < 0 < R(hi)` down to the
    /// pole position.
    fn refine_pole(&self, mut lo: f64, mut hi: f64) -> Result<f64> {
        while hi - lo > 1e-10 * lo.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match self.evaluator.eval(mid) {
                Ok(r) if r > 0.0 => hi = mid,
                Ok(_) => lo = mid,
                Err(Error::Pole { .. }) => return Ok(mid),
                Err(e) => return Err(e),
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn make_state(&self, delta: f64) -> Result<BoundState> {
        let alpha = alpha(delta, self.model.gamma)?;
        let r = self.evaluator.eval(delta)?;
        let residual = (r - 2.0 * self.model.u0 - alpha).abs();
        let (tail, i_right) = self.build_tail(delta, r)?;
        // ∫_{-∞}^0 C²e^{2αq} dq = C²/(2α);  ∫_0^∞ = C² · i_right.
        let norm_sq = 0.5 / alpha + i_right;
        Ok(BoundState {
            index: 0,
            delta,
            epsilon: self.model.epsilon_of_delta(delta),
            alpha,
            residual,
            amplitude: 1.0 / norm_sq.sqrt(),
            tail,
        })
    }

    /// Right-side tail normalized to 1 at the origin, together with
    /// `∫₀^∞ φ̂² dq`.
    fn build_tail(&self, delta: f64, r: f64) -> Result<(RightTail, f64)> {
        if self.evaluator.method() == Method::AiryClosedForm {
            let v = specfun::airy(delta)?;
            // d/dx [Ai'(x)² − x Ai(x)²] = −Ai(x)², so
            // ∫_δ^∞ Ai² = Ai'(δ)² − δ Ai(δ)², i.e. ∫₀^∞ φ̂² = R(δ)² − δ.
            return Ok((
                RightTail::Airy {
                    delta,
                    inv_ai0: 1.0 / v.ai,
                },
                r * r - delta,
            ));
        }

        let prof = self.evaluator.profile();
        let q_start = prof.suggested_start(delta);
        let w0 = prof.w(q_start, delta);
        let mut segments: Vec<QuinticSegment> = Vec::new();
        let (_, y_end) = integrate(
            |q, y: &[f64; 2]| [y[1], prof.w(q, delta) * y[0]],
            q_start,
            0.0,
            [1.0, -w0.sqrt()], // WKB-seeded decaying solution
            TAIL_RTOL,
            TAIL_ATOL,
            |st| {
                segments.push(QuinticSegment::new(
                    st.t1,
                    st.t0 - st.t1,
                    (st.y1[0], st.y1[1], st.f1[1]),
                    (st.y0[0], st.y0[1], st.f0[1]),
                ));
                StepControl::Continue
            },
        )?;
        let phi0 = y_end[0];
        if phi0 == 0.0 || !phi0.is_finite() {
            return Err(Error::Convergence {
                context: "eigenfunction tail",
                detail: format!("inward sweep reached φ(0) = {phi0} at δ = {delta}"),
            });
        }
        let inv = 1.0 / phi0;
        segments.reverse();
        for s in &mut segments {
            s.scale(inv);
        }
        let mut i_right: f64 = segments.iter().map(gauss6_squared).sum();
        // Beyond q_start the solution keeps decaying at least as fast as
        // e^{−κ_end q}; the continuation both closes the norm integral and
        // extends eigenfunction evaluation.
        let kappa_end = w0.sqrt();
        let phi_end = inv; // φ̂(q_start) = 1/φ(0)
        i_right += phi_end * phi_end / (2.0 * kappa_end);
        Ok((
            RightTail::Sampled {
                segments,
                q_end: q_start,
                phi_end,
                kappa_end,
            },
            i_right,
        ))
    }
}

/// `∫ seg(q)² dq` over the segment, exact (Gauss–Legendre 6 on a degree-10
/// integrand).
fn gauss6_squared(seg: &QuinticSegment) -> f64 {
    let mid = seg.q0 + 0.5 * seg.h;
    let half = 0.5 * seg.h;
    let mut acc = 0.0;
    for i in 0..3 {
        let a = seg.eval(mid - half * GL6_X[i]);
        let b = seg.eval(mid + half * GL6_X[i]);
        acc += GL6_W[i] * (a * a + b * b);
    }
    acc * half
}
