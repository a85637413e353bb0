//! Fixed-step RK4 integration of the moving-frame ODE system and position
//! quadrature.
//!
//! The frame system is `F' = K(s) F` with the skew coefficient matrix
//! built from (k1, k2, k3); the Frenet case is k2 = 0. Gram-Schmidt
//! re-orthonormalization controls drift. Positions come from composite
//! Simpson over the tangent samples, so position accuracy is decoupled from
//! frame accuracy and testable independently.

use crate::apparatus::CurveSamples;
use crate::error::{Error, Result};
use crate::field::{Development, Grid, Interval, ScalarField};
use crate::geom::{orthonormalize, Frame, Vec3, TOL_ORTHO};

/// Default RK4 steps per unit of arclength.
pub const DEFAULT_STEPS_PER_UNIT: f64 = 10_000.0;

/// Relative inflection threshold for apparatus estimation.
pub const EPS_INFLECTION_REL: f64 = 1e-8;
/// Absolute floor for the inflection threshold.
pub const EPS_INFLECTION_FLOOR: f64 = 1e-12;

/// Fixed-step solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Total RK4 step count; `None` scales [`DEFAULT_STEPS_PER_UNIT`] by the
    /// domain length.
    pub steps: Option<usize>,
    /// Re-orthonormalize every this many steps.
    pub renormalize_every: usize,
    /// Orthonormality tolerance enforced on every output node.
    pub tol_ortho: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            steps: None,
            renormalize_every: 1,
            tol_ortho: TOL_ORTHO,
        }
    }
}

impl SolverConfig {
    pub fn with_steps(steps: usize) -> SolverConfig {
        SolverConfig { steps: Some(steps), ..Default::default() }
    }

    fn resolve_steps(&self, domain: Interval) -> Result<usize> {
        let n = match self.steps {
            Some(n) => n,
            None => (DEFAULT_STEPS_PER_UNIT * domain.len()).ceil() as usize,
        };
        if n < 16 {
            return Err(Error::InvalidConfig(format!(
                "step count {n} below the minimum of 16"
            )));
        }
        if self.renormalize_every < 1 {
            return Err(Error::InvalidConfig(
                "renormalize_every must be at least 1".to_string(),
            ));
        }
        Ok(n)
    }
}

#[derive(Clone, Copy)]
struct FrameState([Vec3; 3]);

impl FrameState {
    fn rhs(&self, k1: f64, k2: f64, k3: f64) -> FrameState {
        let [t, n, m] = self.0;
        FrameState([
            n * k1 + m * k2,
            t * (-k1) + m * k3,
            t * (-k2) + n * (-k3),
        ])
    }

    fn axpy(&self, other: &FrameState, c: f64) -> FrameState {
        FrameState([
            self.0[0] + other.0[0] * c,
            self.0[1] + other.0[1] * c,
            self.0[2] + other.0[2] * c,
        ])
    }
}

/// Solve the 9-component frame system `F' = K(s) F` with classical RK4.
///
/// Returns the grid (one node per step boundary) and the frame at every
/// node, each orthonormal within `cfg.tol_ortho`.
pub fn solve_frame_ode(
    k1: &ScalarField,
    k2: &ScalarField,
    k3: &ScalarField,
    f0: &Frame,
    domain: Interval,
    cfg: &SolverConfig,
) -> Result<(Grid, Vec<Frame>)> {
    for field in [k1, k2, k3] {
        if !field.domain().contains_interval(&domain) {
            return Err(Error::DomainMismatch(format!(
                "coefficient domain {} does not cover {domain}",
                field.domain()
            )));
        }
    }
    if !f0.is_orthonormal(cfg.tol_ortho.max(TOL_ORTHO)) {
        return Err(Error::DegenerateFrame(format!(
            "initial frame off orthonormal by {:.3e}",
            f0.ortho_defect()
        )));
    }
    let steps = cfg.resolve_steps(domain)?;
    let grid = Grid::new(domain, steps + 1)?;
    let h = grid.h();

    let coeffs = |s: f64| -> Result<(f64, f64, f64)> {
        Ok((k1.eval(s)?, k2.eval(s)?, k3.eval(s)?))
    };

    let mut frames = Vec::with_capacity(steps + 1);
    let mut state = FrameState([f0.e1, f0.e2, f0.e3]);
    frames.push(*f0);
    for i in 0..steps {
        let s = grid.s(i);
        let (a1, b1, c1) = coeffs(s)?;
        let (a2, b2, c2) = coeffs((s + 0.5 * h).min(domain.b))?;
        let (a3, b3, c3) = coeffs((s + h).min(domain.b))?;

        let q1 = state.rhs(a1, b1, c1);
        let q2 = state.axpy(&q1, 0.5 * h).rhs(a2, b2, c2);
        let q3 = state.axpy(&q2, 0.5 * h).rhs(a2, b2, c2);
        let q4 = state.axpy(&q3, h).rhs(a3, b3, c3);

        state = state
            .axpy(&q1, h / 6.0)
            .axpy(&q2, h / 3.0)
            .axpy(&q3, h / 3.0)
            .axpy(&q4, h / 6.0);

        let mut frame = Frame::new(state.0[0], state.0[1], state.0[2]);
        if (i + 1) % cfg.renormalize_every == 0 {
            frame = orthonormalize(&frame)?;
            state = FrameState([frame.e1, frame.e2, frame.e3]);
        }
        if !frame.is_orthonormal(cfg.tol_ortho) {
            return Err(Error::DegenerateFrame(format!(
                "frame drift {:.3e} exceeds tolerance at step {}",
                frame.ortho_defect(),
                i + 1
            )));
        }
        frames.push(frame);
    }
    Ok((grid, frames))
}

/// Integrate the tangent component to positions: cumulative composite
/// Simpson over the node values, with a trapezoid step to reach each odd
/// node index.
pub fn integrate_positions(grid: &Grid, frames: &[Frame], x0: Vec3) -> Vec<Vec3> {
    let h = grid.h();
    let n = frames.len();
    let mut out = Vec::with_capacity(n);
    out.push(x0);
    for i in 1..n {
        let x = if i % 2 == 0 {
            out[i - 2]
                + (frames[i - 2].e1 + frames[i - 1].e1 * 4.0 + frames[i].e1) * (h / 3.0)
        } else {
            out[i - 1] + (frames[i - 1].e1 + frames[i].e1) * (h / 2.0)
        };
        out.push(x);
    }
    out
}

/// Solve the natural equations (kappa, tau): frame ODE with k2 = 0, then
/// position quadrature. The returned samples carry the development values on
/// the grid.
pub fn solve_natural_equations(
    dev: &Development,
    f0: &Frame,
    x0: Vec3,
    cfg: &SolverConfig,
) -> Result<CurveSamples> {
    let domain = dev.domain();
    let zero = ScalarField::constant(domain, 0.0);
    let (grid, frames) = solve_frame_ode(dev.kappa(), &zero, dev.tau(), f0, domain, cfg)?;
    let positions = integrate_positions(&grid, &frames, x0);
    let kappa = dev.kappa().sample(&grid)?;
    let tau = dev.tau().sample(&grid)?;
    CurveSamples::new(grid, positions, frames, kappa, tau)
}

/// Curvature and principal normal estimated from position samples alone.
#[derive(Debug, Clone)]
pub struct ApparatusEstimate {
    pub grid: Grid,
    /// Central-difference unit tangent (interior nodes only; `None` at the
    /// two boundary nodes).
    pub tangent: Vec<Option<Vec3>>,
    /// Canonical curvature `kappa_+ = |T'|` (valid on nodes 2..n-2).
    pub kappa_plus: Vec<Option<f64>>,
    /// Canonical principal normal, absent on inflection-flagged nodes.
    pub normal: Vec<Option<Vec3>>,
    /// Nodes where `kappa_+` falls below the inflection threshold.
    pub inflection: Vec<bool>,
    /// The threshold actually used.
    pub eps_inflection: f64,
}

/// Estimate the canonical apparatus of a unit-speed curve from sampled
/// positions, by central differences.
pub fn estimate_apparatus(grid: &Grid, positions: &[Vec3]) -> Result<ApparatusEstimate> {
    let n = positions.len();
    if n < 5 {
        return Err(Error::GridTooSmall { need: 5, got: n });
    }
    if n != grid.nodes() {
        return Err(Error::GridMismatch(format!(
            "{n} positions on a {}-node grid",
            grid.nodes()
        )));
    }
    let h = grid.h();
    let mut tangent: Vec<Option<Vec3>> = vec![None; n];
    for i in 1..n - 1 {
        tangent[i] = Some((positions[i + 1] - positions[i - 1]) * (0.5 / h));
    }
    let mut kappa_plus: Vec<Option<f64>> = vec![None; n];
    let mut tprime: Vec<Option<Vec3>> = vec![None; n];
    for i in 2..n - 2 {
        let d = (tangent[i + 1].unwrap() - tangent[i - 1].unwrap()) * (0.5 / h);
        kappa_plus[i] = Some(d.norm());
        tprime[i] = Some(d);
    }
    let max_kappa = kappa_plus
        .iter()
        .flatten()
        .fold(0.0_f64, |m, &k| m.max(k));
    let eps = (EPS_INFLECTION_REL * max_kappa).max(EPS_INFLECTION_FLOOR);
    let mut inflection = vec![false; n];
    let mut normal: Vec<Option<Vec3>> = vec![None; n];
    for i in 2..n - 2 {
        let k = kappa_plus[i].unwrap();
        if k < eps {
            inflection[i] = true;
        } else {
            normal[i] = Some(tprime[i].unwrap() * (1.0 / k));
        }
    }
    Ok(ApparatusEstimate {
        grid: *grid,
        tangent,
        kappa_plus,
        normal,
        inflection,
        eps_inflection: eps,
    })
}
