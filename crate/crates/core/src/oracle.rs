//! Independent finite-difference check on the quantization machinery.
//!
//! The reduced problem `−φ''/2 + u(q)φ + u₀δ(q)φ = εφ` is discretized on a
//! uniform grid with Dirichlet walls: second differences for the kinetic
//! term, the potential sampled at the nodes with the interface node taking
//! the average of its one-sided limits, and the delta spread over one cell
//! as a diagonal bump `u₀/h`. Both interface treatments keep the scheme
//! O(h²) in the eigenvalues; the eigen*vector* derivative jump converges
//! only O(h), which the tests pin as a rate.
//!
//! Eigenvalues come from Sturm-sequence bisection (robust, any index
//! isolated independently — embarrassingly parallel), eigenvectors from two
//! rounds of inverse iteration with a partially pivoted tridiagonal LU and
//! a deterministic seeded start, so repeated runs are bit-identical.
//!
//! None of this shares code with the quantization path: no special
//! functions, no adaptive integration — only linear algebra on the grid.

use crate::exec::{self, ExecPolicy};
use crate::units::DimensionlessModel;
use crate::{Error, Result};

/// Uniform grid over `[q_left, q_right]` with the interface exactly on a
/// node. Requested bounds are rounded outward to whole steps.
#[derive(Debug, Clone)]
pub struct Grid {
    pub h: f64,
    n_left: usize,
    n_right: usize,
}

impl Grid {
    pub fn new(h: f64, q_left: f64, q_right: f64) -> Result<Grid> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!(
                "grid step must be positive, got {h}"
            )));
        }
        if !(q_left < 0.0 && q_right > 0.0) {
            return Err(Error::invalid(format!(
                "grid must straddle the interface: [{q_left}, {q_right}]"
            )));
        }
        let n_left = (-q_left / h).ceil() as usize;
        let n_right = (q_right / h).ceil() as usize;
        if n_left < 2 || n_right < 2 {
            return Err(Error::invalid(format!(
                "grid too coarse: {n_left} nodes left, {n_right} right of the interface"
            )));
        }
        if n_left + n_right > 100_000_000 {
            return Err(Error::invalid(format!(
                "grid of {} nodes exceeds the sanity cap",
                n_left + n_right
            )));
        }
        Ok(Grid { h, n_left, n_right })
    }

    /// Wide enough for the model: the right wall sits where the profile has
    /// climbed 20 units above the left continuum edge (plus margin), the
    /// left wall at −15 (≫ the decay length of any comfortably bound
    /// state).
    pub fn default_for(model: &DimensionlessModel, h: f64) -> Result<Grid> {
        use crate::units::ProfileKind::*;
        let climb = 0.5 * model.gamma + 20.0; // u_R(q) − a at the wall
        let q_right = match model.kind {
            Linear => 2.0 * climb,
            Parabolic => climb.sqrt(),
            Exponential => (climb / model.b.unwrap()).max(std::f64::consts::E).ln(),
        } + 2.0;
        Grid::new(h, -15.0, q_right)
    }

    /// Total number of nodes including both Dirichlet walls.
    pub fn node_count(&self) -> usize {
        self.n_left + self.n_right + 1
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as isize - self.n_left as isize) as f64 * self.h
    }

    /// Index of the node at `q = 0`.
    pub fn interface_index(&self) -> usize {
        self.n_left
    }

    pub fn q_left(&self) -> f64 {
        -(self.n_left as f64) * self.h
    }

    pub fn q_right(&self) -> f64 {
        self.n_right as f64 * self.h
    }
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: f64,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x` (Sturm sequence with the
    /// LAPACK-style pivot floor).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * (self.off * self.off).max(1.0);
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        let mut coupling = 0.0; // first pivot has no predecessor
        for &a in &self.diag {
            d = a - x - coupling / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
            coupling = off2;
        }
        count
    }

    /// All eigenvalues below `cutoff`, ascending, each isolated by
    /// bisection to a relative width of 1e-11.
    pub fn eigenvalues_below(&self, cutoff: f64, policy: ExecPolicy) -> Vec<f64> {
        let n = self.count_below(cutoff);
        let lo0 = self.diag.iter().fold(f64::INFINITY, |m, &d| m.min(d)) - 2.0 * self.off.abs();
        exec::map_indexed(policy, n, |k| {
            let (mut lo, mut hi) = (lo0, cutoff);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= 1e-11 * mid.abs().max(1.0) || mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
    }

    /// Eigenvector for an eigenvalue already bisected to near machine
    /// precision: two rounds of inverse iteration from a deterministic
    /// pseudo-random start. Returns a unit-2-norm interior vector.
    pub fn eigenvector(&self, lambda: f64, seed: u64) -> Vec<f64> {
        let m = self.diag.len();
        let mut v: Vec<f64> = lcg_stream(seed).take(m).collect();
        for _ in 0..2 {
            self.solve_shifted(lambda, &mut v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    }

    /// Solve `(T − λI) y = rhs` in place by tridiagonal LU with partial
    /// pivoting (one fill band above the superdiagonal).
    fn solve_shifted(&self, lambda: f64, rhs: &mut [f64]) {
        let m = self.diag.len();
        let pivmin = f64::MIN_POSITIVE * (self.off * self.off).max(1.0);
        let mut d: Vec<f64> = self.diag.iter().map(|&a| a - lambda).collect();
        let mut c = vec![self.off; m.saturating_sub(1)]; // superdiagonal
        let mut e = vec![0.0; m.saturating_sub(2)]; // fill band
        let mut sub = vec![self.off; m.saturating_sub(1)];

        for i in 0..m - 1 {
            if sub[i].abs() > d[i].abs() {
                std::mem::swap(&mut d[i], &mut sub[i]);
                std::mem::swap(&mut c[i], &mut d[i + 1]);
                if i + 1 < m - 1 {
                    std::mem::swap(&mut e[i], &mut c[i + 1]);
                }
                rhs.swap(i, i + 1);
            }
            if d[i].abs() < pivmin {
                d[i] = pivmin.copysign(d[i]);
            }
            let l = sub[i] / d[i];
            d[i + 1] -= l * c[i];
            if i + 1 < m - 1 {
                c[i + 1] -= l * e[i];
            }
            rhs[i + 1] -= l * rhs[i];
        }
        if d[m - 1].abs() < pivmin {
            d[m - 1] = pivmin.copysign(d[m - 1]);
        }

        rhs[m - 1] /= d[m - 1];
        if m >= 2 {
            rhs[m - 2] = (rhs[m - 2] - c[m - 2] * rhs[m - 1]) / d[m - 2];
        }
        for i in (0..m.saturating_sub(2)).rev() {
            rhs[i] = (rhs[i] - c[i] * rhs[i + 1] - e[i] * rhs[i + 2]) / d[i];
        }
    }
}

/// Knuth's MMIX linear congruential generator mapped into [−0.5, 0.5).
fn lcg_stream(seed: u64) -> impl Iterator<Item = f64> {
    let mut state = seed ^ 0x9E37_79B9_7F4A_7C15;
    std::iter::repeat_with(move || {
        state = state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    })
}

/// Discretized Hamiltonian on the grid's interior nodes.
pub fn assemble(model: &DimensionlessModel, grid: &Grid) -> Tridiagonal {
    let h = grid.h;
    let inv_h2 = 1.0 / (h * h);
    let u_l = model.u_left();
    let m = grid.node_count() - 2;
    let interface = grid.interface_index() - 1; // interior numbering
    let diag = (0..m)
        .map(|j| {
            let q = grid.node(j + 1);
            let mut v = if j == interface {
                // One-sided limits averaged at the interface node, plus the
                // delta spread over one cell.
                0.5 * (u_l + model.u_right(0.0)) + model.u0 / h
            } else if q < 0.0 {
                u_l
            } else {
                model.u_right(q)
            };
            v += inv_h2;
            v
        })
        .collect();
    Tridiagonal {
        diag,
        off: -0.5 * inv_h2,
    }
}

/// Spectrum from the finite-difference oracle: reduced energies below the
/// left continuum edge and the matching grid eigenfunctions (boundary
/// zeros included, normalized to `h·Σφ² = 1`, largest-|component| sign
/// positive).
#[derive(Debug, Clone)]
pub struct OracleSpectrum {
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub grid: Grid,
}

pub fn solve(model: &DimensionlessModel, grid: &Grid) -> Result<OracleSpectrum> {
    solve_with(model, grid, model.u_left(), ExecPolicy::default())
}

/// As [`solve`] with an explicit spectral cutoff and execution policy. The
/// cutoff should stay at or below `u_L`: above it the walls of the finite
/// box manufacture spurious discretized-continuum states.
pub fn solve_with(
    model: &DimensionlessModel,
    grid: &Grid,
    cutoff: f64,
    policy: ExecPolicy,
) -> Result<OracleSpectrum> {
    let t = assemble(model, grid);
    let energies = t.eigenvalues_below(cutoff, policy);
    let vectors = exec::map_indexed(policy, energies.len(), |k| {
        let interior = t.eigenvector(energies[k], k as u64);
        embed(&interior, grid)
    });
    Ok(OracleSpectrum {
        energies,
        vectors,
        grid: grid.clone(),
    })
}

/// Interior vector → full-grid eigenfunction with Dirichlet zeros,
/// continuum-normalized and sign-fixed.
fn embed(interior: &[f64], grid: &Grid) -> Vec<f64> {
    let mut full = Vec::with_capacity(grid.node_count());
    full.push(0.0);
    full.extend_from_slice(interior);
    full.push(0.0);
    let norm = (grid.h * full.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let imax = full
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap();
    let scale = if full[imax] < 0.0 {
        -1.0 / norm
    } else {
        1.0 / norm
    };
    for x in &mut full {
        *x *= scale;
    }
    full
}

/// Richardson extrapolation of an O(h²) quantity from values at `h` and
/// `h/2`: `(4 e_{h/2} − e_h)/3`.
pub fn richardson(e_h: f64, e_h2: f64) -> f64 {
    (4.0 * e_h2 - e_h) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ProfileKind;

    #[test]
    fn grid_geometry() {
        let g = Grid::new(0.25, -1.0, 2.0).unwrap();
        assert_eq!(g.node_count(), 13);
        assert_eq!(g.interface_index(), 4);
        assert_eq!(g.node(4), 0.0);
        assert!((g.node(0) - (-1.0)).abs() < 1e-15);
        assert!((g.q_right() - 2.0).abs() < 1e-15);
        // Bounds round outward to whole steps.
        let g = Grid::new(0.3, -1.0, 1.0).unwrap();
        assert!(g.q_left() <= -1.0 && g.q_right() >= 1.0);
        assert_eq!(g.node(g.interface_index()), 0.0);
        assert!(Grid::new(0.0, -1.0, 1.0).is_err());
        assert!(Grid::new(0.5, 1.0, 2.0).is_err());
    }

    #[test]
    fn box_spectrum_exact_discrete_and_continuum() {
        // Zero potential on [0, W], Dirichlet: the discrete eigenvalues of
        // the second-difference matrix are (1 − cos nπh/W)/h² exactly, and
        // approach n²π²/(2W²) as h → 0.
        let w = 4.0;
        let m = 399; // h = 0.01
        let h = w / (m + 1) as f64;
        let t = Tridiagonal {
            diag: vec![1.0 / (h * h); m],
            off: -0.5 / (h * h),
        };
        let cutoff = 6.0; // admits exactly n = 1..4
        let ev = t.eigenvalues_below(cutoff, ExecPolicy::Sequential);
        assert_eq!(ev.len(), 4);
        for (n, &lambda) in ev.iter().enumerate() {
            let n1 = (n + 1) as f64;
            let x = n1 * std::f64::consts::PI * h / w;
            let exact_discrete = (1.0 - x.cos()) / (h * h);
            assert!(
                (lambda - exact_discrete).abs() < 1e-9 * exact_discrete.max(1.0),
                "n = {n1}: {lambda} vs discrete {exact_discrete}"
            );
            // Continuum limit differs by a relative x²/12; allow twice that.
            let continuum = n1 * n1 * std::f64::consts::PI.powi(2) / (2.0 * w * w);
            assert!(
                (lambda - continuum).abs() < continuum * x * x / 6.0,
                "n = {n1}: {lambda} vs continuum {continuum}"
            );
        }
        // Count consistency.
        assert_eq!(t.count_below(cutoff), ev.len());
        assert_eq!(t.count_below(ev[0] - 1e-6), 0);
        assert_eq!(t.count_below(ev[0] + 1e-6), 1);
    }

    #[test]
    fn eigenvector_residual_and_orthogonality() {
        let w = 4.0;
        let m = 199;
        let h = w / (m + 1) as f64;
        let t = Tridiagonal {
            diag: vec![1.0 / (h * h); m],
            off: -0.5 / (h * h),
        };
        let ev = t.eigenvalues_below(2.0, ExecPolicy::Sequential);
        let vecs: Vec<Vec<f64>> = ev.iter().map(|&l| t.eigenvector(l, 7)).collect();
        for (l, v) in ev.iter().zip(&vecs) {
            // ‖(T − λ)v‖ small relative to the matrix scale.
            let mut res: f64 = 0.0;
            for i in 0..m {
                let mut y = (t.diag[i] - l) * v[i];
                if i > 0 {
                    y += t.off * v[i - 1];
                }
                if i + 1 < m {
                    y += t.off * v[i + 1];
                }
                res = res.max(y.abs());
            }
            // λ is bisected to ~1e-11 and inverse iteration contributes
            // ‖T‖·ε ≈ (1/h²)·1e-16.
            assert!(res < 1e-9, "residual {res}");
        }
        let dot: f64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-8, "⟨v₁|v₂⟩ = {dot}");
    }

    #[test]
    fn lone_delta_well_energy() {
        // Nearly flat background (exponential profile with b → 0): the
        // attractive interface binds one state at ε = −u₀²/2.
        let model =
            DimensionlessModel::new(ProfileKind::Exponential, -2.0, 0.0, 0.0, Some(1e-8)).unwrap();
        let grid = Grid::new(2e-3, -12.0, 12.0).unwrap();
        let spec = solve(&model, &grid).unwrap();
        assert!(!spec.energies.is_empty());
        let e0 = spec.energies[0];
        assert!((e0 - (-2.0)).abs() < 5e-3, "ε₀ = {e0}");
        // The eigenvector is even around the interface and peaked on it.
        let v = &spec.vectors[0];
        let i0 = grid.interface_index();
        let imax = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap()
            .0;
        assert!((imax as isize - i0 as isize).abs() <= 1);
        assert!((v[i0 - 50] - v[i0 + 50]).abs() < 1e-3 * v[i0].abs());
    }

    #[test]
    fn interface_scheme_is_second_order() {
        // Eigenvalue error against the independently frozen ground state of
        // the linear model at u₀ = 1, γ = 10 must shrink ~4× per halving.
        let model = DimensionlessModel::new(ProfileKind::Linear, 1.0, 10.0, 0.0, None).unwrap();
        let exact = 2.136182405997903 / 2.0; // ε = −δ/2
        let grid_err = |h: f64| {
            let grid = Grid::new(h, -15.0, 25.0).unwrap();
            let spec = solve(&model, &grid).unwrap();
            (spec.energies[0] - exact).abs()
        };
        let (e1, e2) = (grid_err(0.02), grid_err(0.01));
        let ratio = e1 / e2;
        assert!(
            (3.3..4.7).contains(&ratio),
            "order ratio {ratio} (errors {e1}, {e2})"
        );
    }

    #[test]
    fn discrete_jump_converges_first_order() {
        // One-sided slopes of the grid eigenfunction around the interface
        // approach the delta jump 2u₀φ(0) at rate O(h).
        let model = DimensionlessModel::new(ProfileKind::Linear, 1.0, 10.0, 0.0, None).unwrap();
        let jump_err = |h: f64| {
            let grid = Grid::new(h, -15.0, 25.0).unwrap();
            let spec = solve(&model, &grid).unwrap();
            let v = &spec.vectors[0];
            let i0 = grid.interface_index();
            let right = (v[i0 + 1] - v[i0]) / h;
            let left = (v[i0] - v[i0 - 1]) / h;
            (right - left) - 2.0 * model.u0 * v[i0]
        };
        let (j1, j2) = (jump_err(0.004).abs(), jump_err(0.002).abs());
        let ratio = j1 / j2;
        assert!(
            (1.6..2.4).contains(&ratio),
            "jump error ratio {ratio} (errors {j1}, {j2})"
        );
    }

    #[test]
    fn policies_agree_bitwise() {
        let model = DimensionlessModel::new(ProfileKind::Linear, 0.0, 10.0, 0.0, None).unwrap();
        let grid = Grid::new(0.01, -10.0, 25.0).unwrap();
        let a = solve_with(&model, &grid, model.u_left(), ExecPolicy::Sequential).unwrap();
        let b = solve_with(&model, &grid, model.u_left(), ExecPolicy::Parallel).unwrap();
        assert_eq!(a.energies.len(), b.energies.len());
        for (x, y) in a.energies.iter().zip(&b.energies) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        for (vx, vy) in a.vectors.iter().zip(&b.vectors) {
            assert!(vx.iter().zip(vy).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }

    #[test]
    fn richardson_cancels_h2_term() {
        // e(h) = e* + c h²: extrapolation recovers e* exactly.
        let f = |h: f64| 1.25 + 0.7 * h * h;
        let r = richardson(f(0.1), f(0.05));
        assert!((r - 1.25).abs() < 1e-14);
    }
}
