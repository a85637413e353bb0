//! Natural equations of space curves: Frenet and Bishop frames, a
//! frame-ODE solver, frame transformations (Bishop, successor,
//! predecessor), and closed-form curve families (plane curves, general
//! helices, slant helices, Salkowski curves, curves of constant
//! precession), plus classification and verification utilities.
//!
//! The arclength parameter is `s` throughout; all curves are unit speed.

pub mod analysis;
pub mod apparatus;
pub mod error;
pub mod field;
pub mod geom;
pub mod io;
pub mod quadric;
pub mod solver;
pub mod transforms;
pub mod zoo;

pub use analysis::{classify, periodicity_report, run_checks, CurveClass, VerificationReport};
pub use apparatus::{
    darboux_vector, developments_equivalent, frenet_rhs, lancret_curvature, rearrange,
    total_torsion, Apparatus, BishopApparatus, CurveSamples, FrenetApparatus,
    RearrangeVariant,
};
pub use error::{Error, Result};
pub use field::{Development, Grid, Interval, ScalarField};
pub use geom::{orthonormalize, rotate_normal_plane, Frame, Vec3};
pub use quadric::{fit_quadric, QuadricFit};
pub use solver::{
    estimate_apparatus, integrate_positions, solve_frame_ode, solve_natural_equations,
    SolverConfig,
};
pub use transforms::{
    bishop_transform, inverse_bishop, polar_unwrap, predecessor_transform,
    successor_transform, PolarDevelopment,
};
pub use zoo::{
    helix_apparatus, plane_apparatus, salkowski_development, slant_helix_development,
    slant_invariant, torsion_from_curvature, total_curvature_balance, HelixParams,
    PrecessionParams, SlantHelixFrames,
};
