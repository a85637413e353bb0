//! Classification of developments, periodicity reports, and verification
//! checks over solved curves.

use std::f64::consts::PI;

use serde::Serialize;

use crate::apparatus::{total_torsion, CurveSamples, EPS_KAPPA};
use crate::error::{Error, Result};
use crate::field::{Development, Grid};
use crate::zoo::{rational_approx, slant_invariant};

/// Curve class, ordered from most to least special; classification reports
/// the first class that matches.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum CurveClass {
    Plane,
    /// General helix with slope angle `theta = arccot(tau/kappa)`.
    Helix { theta: f64 },
    /// Slant helix with slope angle recovered from the invariant.
    SlantHelix { theta: f64 },
    Generic,
}

const CLASSIFY_NODES: usize = 4001;

/// Classify a development as plane curve, general helix, slant helix, or
/// generic, testing in that order. `tol` bounds the allowed spread of the
/// respective constancy witness (relative where the witness has a scale).
pub fn classify(dev: &Development, tol: f64) -> Result<CurveClass> {
    let grid = Grid::new(dev.domain(), CLASSIFY_NODES)?;
    let ks = dev.kappa().sample(&grid)?;
    let ts = dev.tau().sample(&grid)?;
    let max_k = ks.iter().fold(0.0_f64, |m, &k| m.max(k.abs()));
    let eps = (1e-9 * max_k).max(EPS_KAPPA);
    let active: Vec<usize> = (0..grid.nodes()).filter(|&i| ks[i].abs() > eps).collect();
    if active.len() < 16 {
        return Err(Error::Inconclusive(format!(
            "only {} strongly regular nodes out of {}",
            active.len(),
            grid.nodes()
        )));
    }

    // Plane curve: torsion vanishes wherever the curve is strongly regular.
    let max_t = active
        .iter()
        .map(|&i| ts[i].abs())
        .fold(0.0_f64, f64::max);
    if max_t <= tol * max_k.max(1.0) {
        return Ok(CurveClass::Plane);
    }

    // Helix: tau/kappa constant on active nodes.
    let ratios: Vec<f64> = active.iter().map(|&i| ts[i] / ks[i]).collect();
    let (rmin, rmax) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
            (lo.min(r), hi.max(r))
        });
    let rmean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    if rmax - rmin <= tol * (1.0 + rmean.abs()) {
        return Ok(CurveClass::Helix { theta: arccot(rmean) });
    }

    // Slant helix: the curvature of the tangent image's spherical
    // development is constant.
    let inv = slant_invariant(dev, CLASSIFY_NODES)?;
    let vals: Vec<f64> = inv.values.iter().flatten().copied().collect();
    if vals.len() >= 16 {
        let (imin, imax) = vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let imean = vals.iter().sum::<f64>() / vals.len() as f64;
        if imax - imin <= tol * (1.0 + imean.abs()) && imean.abs() > tol {
            return Ok(CurveClass::SlantHelix { theta: arccot(imean) });
        }
    }

    Ok(CurveClass::Generic)
}

/// arccot with range (0, pi): the slope angle belonging to `m = cot(theta)`.
pub fn arccot(m: f64) -> f64 {
    (1.0_f64).atan2(m)
}

/// Periodicity of a development under a candidate period `p`.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityReport {
    pub period: f64,
    /// Worst deviation of kappa (resp. tau) between s and s + p.
    pub kappa_deviation: f64,
    pub tau_deviation: f64,
    pub fields_periodic: bool,
    /// Total torsion over one period, and its residue mod pi.
    pub torsion_angle: f64,
    pub torsion_angle_mod_pi: f64,
    /// Whether the torsion angle is a rational multiple of pi, i.e. whether
    /// some iterate of the period closes the frame rotation.
    pub successor_periodic: bool,
    /// The rational multiple, when found.
    pub torsion_ratio: Option<(i64, i64)>,
}

const PERIODICITY_NODES: usize = 8001;

/// Check whether the development is periodic with period `p` (which must
/// fit into the domain at least once) and report the frame rotation
/// accumulated per period.
pub fn periodicity_report(dev: &Development, p: f64, tol: f64) -> Result<PeriodicityReport> {
    let domain = dev.domain();
    if !(p.is_finite() && p > 0.0 && p <= domain.len() * (1.0 + 1e-12)) {
        return Err(Error::GridMismatch(format!(
            "period {p} does not fit into domain {domain}"
        )));
    }
    let p = p.min(domain.len());
    let grid = Grid::new(domain, PERIODICITY_NODES)?;
    let mut kdev = 0.0_f64;
    let mut tdev = 0.0_f64;
    for s in grid.iter() {
        if s + p > domain.b {
            break;
        }
        kdev = kdev.max((dev.kappa().eval(s + p)? - dev.kappa().eval(s)?).abs());
        tdev = tdev.max((dev.tau().eval(s + p)? - dev.tau().eval(s)?).abs());
    }
    let torsion_angle = total_torsion(dev.tau(), domain.a, domain.a + p)?;
    let modulus = torsion_angle.rem_euclid(PI);
    let ratio = rational_approx(torsion_angle / PI, 1_000_000, 1e-12 * (1.0 + torsion_angle.abs()));
    Ok(PeriodicityReport {
        period: p,
        kappa_deviation: kdev,
        tau_deviation: tdev,
        fields_periodic: kdev <= tol && tdev <= tol,
        torsion_angle,
        torsion_angle_mod_pi: modulus,
        successor_periodic: ratio.is_some(),
        torsion_ratio: ratio,
    })
}

/// One verification check over a solved curve.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
    /// Node where the worst violation occurred, when meaningful.
    pub worst_node: Option<usize>,
}

/// Outcomes of the requested checks; `pass` is the conjunction.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Orthonormality,
    UnitSpeed,
    FrenetConsistency,
    Closure,
}

/// Tolerances for [`run_checks`]; defaults suit the standard solver
/// resolution of 10^4 steps per unit arclength.
#[derive(Debug, Clone)]
pub struct CheckTolerances {
    pub ortho: f64,
    pub unit_speed: f64,
    pub consistency: f64,
    pub closure: f64,
}

impl Default for CheckTolerances {
    fn default() -> CheckTolerances {
        CheckTolerances {
            ortho: 1e-9,
            unit_speed: 1e-4,
            consistency: 1e-3,
            closure: 1e-5,
        }
    }
}

/// Run the requested checks against solved curve samples.
pub fn run_checks(
    samples: &CurveSamples,
    checks: &[Check],
    tol: &CheckTolerances,
) -> Result<VerificationReport> {
    let grid = samples.grid;
    let h = grid.h();
    let n = grid.nodes();
    let mut out = Vec::new();
    for &c in checks {
        let outcome = match c {
            Check::Orthonormality => {
                let (mut worst, mut at) = (0.0_f64, 0usize);
                for (i, f) in samples.frames.iter().enumerate() {
                    let d = f.ortho_defect();
                    if d > worst {
                        worst = d;
                        at = i;
                    }
                }
                CheckOutcome {
                    name: "orthonormality".to_string(),
                    pass: worst <= tol.ortho,
                    measured: worst,
                    tolerance: tol.ortho,
                    worst_node: Some(at),
                }
            }
            Check::UnitSpeed => {
                // Central-difference speed on interior nodes.
                let (mut worst, mut at) = (0.0_f64, 0usize);
                for i in 1..n - 1 {
                    let v = (samples.positions[i + 1] - samples.positions[i - 1])
                        .norm()
                        / (2.0 * h);
                    let d = (v - 1.0).abs();
                    if d > worst {
                        worst = d;
                        at = i;
                    }
                }
                CheckOutcome {
                    name: "unit_speed".to_string(),
                    pass: worst <= tol.unit_speed,
                    measured: worst,
                    tolerance: tol.unit_speed,
                    worst_node: Some(at),
                }
            }
            Check::FrenetConsistency => {
                let app = samples.apparatus()?;
                let worst = app.discrete_consistency()?;
                CheckOutcome {
                    name: "frenet_consistency".to_string(),
                    pass: worst <= tol.consistency,
                    measured: worst,
                    tolerance: tol.consistency,
                    worst_node: None,
                }
            }
            Check::Closure => {
                let gap = (samples.positions[n - 1] - samples.positions[0]).norm();
                CheckOutcome {
                    name: "closure".to_string(),
                    pass: gap <= tol.closure,
                    measured: gap,
                    tolerance: tol.closure,
                    worst_node: None,
                }
            }
        };
        out.push(outcome);
    }
    Ok(VerificationReport {
        pass: out.iter().all(|c| c.pass),
        checks: out,
    })
}
