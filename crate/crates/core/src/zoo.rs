//! Closed-form curve families: plane curves, general helices, slant
//! helices, Salkowski curves, and curves of constant precession.
//!
//! Each generator returns either a full apparatus on a grid (frames given by
//! explicit formulas, no ODE solve) or a development (natural equations) to
//! be fed to the solver.

use std::f64::consts::PI;

use crate::apparatus::{lancret_curvature, FrenetApparatus, EPS_KAPPA};
use crate::error::{Error, Result};
use crate::field::{
    cumulative_simpson, simpson, Development, Grid, Interval, ScalarField,
};
use crate::geom::{Frame, Vec3};

/// Relative margin kept away from singular domain endpoints.
pub const EPS_DOMAIN: f64 = 1e-6;

/// A plane curve with signed curvature `kappa` and vanishing torsion,
/// realized in the xy-plane with turning angle `Omega(s) = int kappa`.
pub fn plane_apparatus(kappa: &ScalarField, nodes: usize) -> Result<FrenetApparatus> {
    let grid = Grid::new(kappa.domain(), nodes)?;
    let ks = kappa.sample(&grid)?;
    let omega = cumulative_simpson(&ks, grid.h());
    let frames = omega
        .iter()
        .map(|&o| {
            Frame::new(
                Vec3::new(o.cos(), o.sin(), 0.0),
                Vec3::new(-o.sin(), o.cos(), 0.0),
                Vec3::Z,
            )
        })
        .collect();
    let tau = ScalarField::constant(kappa.domain(), 0.0);
    FrenetApparatus::new(grid, frames, kappa.clone(), tau)
}

/// Parameters of a general helix: slope angle `theta` (strictly between 0
/// and pi/2) and the signed curvature of its plane projection.
#[derive(Debug, Clone)]
pub struct HelixParams {
    theta: f64,
    kappa: ScalarField,
}

impl HelixParams {
    pub fn new(theta: f64, kappa: ScalarField) -> Result<HelixParams> {
        if !(theta.is_finite() && theta > 0.0 && theta < PI / 2.0) {
            return Err(Error::InvalidSlope(theta));
        }
        Ok(HelixParams { theta, kappa })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kappa(&self) -> &ScalarField {
        &self.kappa
    }
}

/// A general helix with axis `e_z`: curvature `sin(theta) kappa(s)`, torsion
/// exactly `cot(theta)` times the curvature, and frames
/// `T = (sin(theta) sin(Omega), -sin(theta) cos(Omega), cos(theta))` with
/// `Omega' = kappa`.
pub fn helix_apparatus(params: &HelixParams, nodes: usize) -> Result<FrenetApparatus> {
    let grid = Grid::new(params.kappa.domain(), nodes)?;
    let ks = params.kappa.sample(&grid)?;
    let omega = cumulative_simpson(&ks, grid.h());
    let (sin_t, cos_t) = params.theta.sin_cos();
    let cot_t = cos_t / sin_t;
    let frames = omega
        .iter()
        .map(|&o| {
            Frame::new(
                Vec3::new(sin_t * o.sin(), -sin_t * o.cos(), cos_t),
                Vec3::new(o.cos(), o.sin(), 0.0),
                Vec3::new(-cos_t * o.sin(), cos_t * o.cos(), sin_t),
            )
        })
        .collect();
    let kappa_h = params.kappa.map(move |k| sin_t * k);
    // Torsion is cot(theta) times the curvature, applied to the identical
    // curvature values so the ratio is bit-exact wherever kappa != 0.
    let tau_h = kappa_h.map(move |kh| cot_t * kh);
    FrenetApparatus::new(grid, frames, kappa_h, tau_h)
}

/// Natural equations of a slant helix with slope parameter `m = cot(theta)`
/// and principal-normal turning angle `phi(s)`:
/// `kappa = phi' cos(phi) / m`, `tau = phi' sin(phi) / m`.
///
/// Rule-backed `phi` with a derivative rule yields rule-backed output;
/// otherwise the fields are tables on a `nodes`-point grid.
pub fn slant_helix_development(
    phi: &ScalarField,
    m: f64,
    nodes: usize,
) -> Result<Development> {
    if !(m.is_finite() && m != 0.0) {
        return Err(Error::ZeroSlopeParameter);
    }
    let domain = phi.domain();
    if phi.is_rule() && phi.has_derivative_rule() {
        let (pk, pt) = (phi.clone(), phi.clone());
        let kappa = ScalarField::from_fn(domain, move |s| {
            pk.eval_derivative(s).unwrap() * pk.eval(s).unwrap().cos() / m
        });
        let tau = ScalarField::from_fn(domain, move |s| {
            pt.eval_derivative(s).unwrap() * pt.eval(s).unwrap().sin() / m
        });
        return Development::new(kappa, tau);
    }
    let grid = Grid::new(domain, nodes)?;
    let ps = phi.sample(&grid)?;
    let dps = crate::field::difference_quotients(&ps, grid.h());
    let kappa: Vec<f64> = ps
        .iter()
        .zip(&dps)
        .map(|(&p, &dp)| dp * p.cos() / m)
        .collect();
    let tau: Vec<f64> = ps
        .iter()
        .zip(&dps)
        .map(|(&p, &dp)| dp * p.sin() / m)
        .collect();
    Development::new(
        ScalarField::from_samples(grid, kappa)?,
        ScalarField::from_samples(grid, tau)?,
    )
}

/// Closed-form unit tangent (and frame) of a slant helix with slope angle
/// `theta` and turning angle `phi(s)`.
///
/// The frames come from the successor construction over a general helix:
/// take the helix frame at turning angle `Omega = phi / cos(theta)`, rotate
/// `(N, B)` by `phi`, and apply a half-turn about the z-axis. The tangent's
/// first two components then match
/// `( (1-n)/2 cos((1+n)Omega) + (1+n)/2 cos((1-n)Omega), ... )` with
/// `n = cos(theta)`.
#[derive(Debug, Clone)]
pub struct SlantHelixFrames {
    phi: ScalarField,
    theta: f64,
    /// Apply the half-turn about e_z (the printed convention). Disable to
    /// get the raw successor frames.
    pub reflect: bool,
}

impl SlantHelixFrames {
    pub fn new(phi: ScalarField, theta: f64) -> Result<SlantHelixFrames> {
        if !(theta.is_finite() && theta > 0.0 && theta < PI / 2.0) {
            return Err(Error::InvalidSlope(theta));
        }
        Ok(SlantHelixFrames { phi, theta, reflect: true })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The full Frenet frame at arclength `s`.
    pub fn frame(&self, s: f64) -> Result<Frame> {
        let p = self.phi.eval(s)?;
        let n = self.theta.cos();
        let sin_t = self.theta.sin();
        let o = p / n;
        // Helix frame at turning angle o.
        let t_h = Vec3::new(sin_t * o.sin(), -sin_t * o.cos(), n);
        let n_h = Vec3::new(o.cos(), o.sin(), 0.0);
        let b_h = Vec3::new(-n * o.sin(), n * o.cos(), sin_t);
        // Successor frame: T1 = -cos(phi) N + sin(phi) B, N1 = T,
        // B1 = sin(phi) N + cos(phi) B.
        let (sp, cp) = p.sin_cos();
        let mut f = Frame::new(
            n_h * (-cp) + b_h * sp,
            t_h,
            n_h * sp + b_h * cp,
        );
        if self.reflect {
            for v in [&mut f.e1, &mut f.e2, &mut f.e3] {
                v.x = -v.x;
                v.y = -v.y;
            }
        }
        Ok(f)
    }

    /// The unit tangent at arclength `s`.
    pub fn tangent(&self, s: f64) -> Result<Vec3> {
        Ok(self.frame(s)?.e1)
    }
}

/// Pointwise samples of the slant-helix invariant
/// `(kappa tau' - kappa' tau) / (kappa^2 + tau^2)^(3/2)`, equal to
/// `kappa^2 / omega^3 (tau/kappa)'` wherever `kappa != 0` but free of the
/// pole at inflections.
#[derive(Debug, Clone)]
pub struct InvariantSamples {
    pub grid: Grid,
    /// `None` marks nodes excluded by the division-near-zero guard.
    pub values: Vec<Option<f64>>,
}

pub fn slant_invariant(dev: &Development, nodes: usize) -> Result<InvariantSamples> {
    let grid = Grid::new(dev.domain(), nodes.max(5))?;
    let ks = dev.kappa().sample(&grid)?;
    let ts = dev.tau().sample(&grid)?;
    let dks = crate::field::difference_quotients(&ks, grid.h());
    let dts = crate::field::difference_quotients(&ts, grid.h());
    let max_w = ks
        .iter()
        .zip(&ts)
        .map(|(&k, &t)| lancret_curvature(k, t))
        .fold(0.0_f64, f64::max);
    let eps_w = (1e-9 * max_w).max(EPS_KAPPA);
    let values = (0..grid.nodes())
        .map(|i| {
            let w = lancret_curvature(ks[i], ts[i]);
            if w <= eps_w || ks[i].abs() <= EPS_KAPPA {
                None
            } else {
                Some((ks[i] * dts[i] - dks[i] * ts[i]) / (w * w * w))
            }
        })
        .collect();
    Ok(InvariantSamples { grid, values })
}

/// Torsion of the slant helix determined by a given curvature: with
/// `K(s) = int_a^s kappa`, the torsion is `kappa m K / sqrt(1 - m^2 K^2)`,
/// valid where `m^2 K^2 < 1 - EPS_DOMAIN`. Returns the torsion as a table
/// field on the maximal admissible subinterval starting at the left domain
/// endpoint, along with that subinterval.
pub fn torsion_from_curvature(
    kappa: &ScalarField,
    m: f64,
    nodes: usize,
) -> Result<(ScalarField, Interval)> {
    if !(m.is_finite() && m != 0.0) {
        return Err(Error::ZeroSlopeParameter);
    }
    let grid = Grid::new(kappa.domain(), nodes.max(5))?;
    let ks = kappa.sample(&grid)?;
    let big_k = cumulative_simpson(&ks, grid.h());
    let mut last = 0usize;
    for (i, &k) in big_k.iter().enumerate() {
        if m * m * k * k < 1.0 - EPS_DOMAIN {
            last = i;
        } else {
            break;
        }
    }
    if last == 0 {
        return Err(Error::EmptyDomain);
    }
    let sub = Interval::new(grid.s(0), grid.s(last))?;
    let subgrid = Grid::new(sub, last + 1)?;
    let tau: Vec<f64> = (0..=last)
        .map(|i| ks[i] * m * big_k[i] / (1.0 - m * m * big_k[i] * big_k[i]).sqrt())
        .collect();
    Ok((ScalarField::from_samples(subgrid, tau)?, sub))
}

/// Natural equations of a Salkowski curve with parameter `m != 0`:
/// `kappa = 1`, `tau = m s / sqrt(1 - m^2 s^2)` on
/// `(-1/|m|, 1/|m|)` shrunk by the domain margin. Also returns the
/// development of its helix predecessor,
/// `kappa_H = 1 / sqrt(1 - m^2 s^2)`, `tau_H = m kappa_H`.
pub fn salkowski_development(m: f64) -> Result<(Development, Development)> {
    if !(m.is_finite() && m != 0.0) {
        return Err(Error::ZeroSlopeParameter);
    }
    let half = (1.0 - EPS_DOMAIN) / m.abs();
    let domain = Interval::new(-half, half)?;
    let kappa = ScalarField::constant(domain, 1.0);
    let tau = ScalarField::from_fn_with_derivative(
        domain,
        move |s| m * s / (1.0 - m * m * s * s).sqrt(),
        move |s| m / (1.0 - m * m * s * s).powf(1.5),
    );
    let kappa_h = ScalarField::from_fn_with_derivative(
        domain,
        move |s| 1.0 / (1.0 - m * m * s * s).sqrt(),
        move |s| m * m * s / (1.0 - m * m * s * s).powf(1.5),
    );
    let tau_h = ScalarField::from_fn_with_derivative(
        domain,
        move |s| m / (1.0 - m * m * s * s).sqrt(),
        move |s| m * m * m * s / (1.0 - m * m * s * s).powf(1.5),
    );
    Ok((
        Development::new(kappa, tau)?,
        Development::new(kappa_h, tau_h)?,
    ))
}

/// Whether a curve of constant precession closes up, and if so its period.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureVerdict {
    pub closed: bool,
    /// `mu / alpha` as a reduced fraction, when rational.
    pub ratio: Option<(i64, i64)>,
    /// Arclength period of the closed curve.
    pub period: Option<f64>,
}

/// Best rational approximation `p/q` of `x` with `q <= max_den`, by
/// continued fractions; `None` unless it lands within `tol`.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if (x - p1 as f64 / q1 as f64).abs() <= tol {
            let g = gcd(p1.abs(), q1);
            return Some((p1 / g.max(1), q1 / g.max(1)));
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        frac = r - a;
        let a = a as i64;
        let (p2, q2) = (
            a.checked_mul(p1)?.checked_add(p0)?,
            a.checked_mul(q1)?.checked_add(q0)?,
        );
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// A curve of constant precession: `kappa = omega cos(mu s)`,
/// `tau = omega sin(mu s)`, with Lancret curvature `omega` and precession
/// rate `mu`; `alpha = sqrt(omega^2 + mu^2)`.
#[derive(Debug, Clone)]
pub struct PrecessionParams {
    omega: f64,
    mu: f64,
}

impl PrecessionParams {
    pub fn new(omega: f64, mu: f64) -> Result<PrecessionParams> {
        if !(omega.is_finite() && mu.is_finite() && omega != 0.0 && mu != 0.0) {
            return Err(Error::InvalidConfig(
                "constant precession needs nonzero omega and mu".to_string(),
            ));
        }
        Ok(PrecessionParams { omega, mu })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha(&self) -> f64 {
        self.omega.hypot(self.mu)
    }

    /// The natural equations over `domain`, rule-backed with exact
    /// derivatives.
    pub fn development(&self, domain: Interval) -> Result<Development> {
        let (w, u) = (self.omega, self.mu);
        let kappa = ScalarField::from_fn_with_derivative(
            domain,
            move |s| w * (u * s).cos(),
            move |s| -w * u * (u * s).sin(),
        );
        let tau = ScalarField::from_fn_with_derivative(
            domain,
            move |s| w * (u * s).sin(),
            move |s| w * u * (u * s).cos(),
        );
        Development::new(kappa, tau)
    }

    /// Closed-form unit tangent with the axis along `e_z`; at `s = 0` this
    /// is `(1, 0, 0)`.
    pub fn tangent(&self, s: f64) -> Vec3 {
        let a = self.alpha();
        let u = self.mu;
        let (l1, l2) = (1.0 - u / a, 1.0 + u / a);
        let (sin_p, cos_p) = ((a + u) * s).sin_cos();
        let (sin_m, cos_m) = ((a - u) * s).sin_cos();
        Vec3::new(
            0.5 * (l1 * cos_p + l2 * cos_m),
            0.5 * (l1 * sin_p + l2 * sin_m),
            self.omega / a * (u * s).sin(),
        )
    }

    /// The Frenet frame of the closed-form curve at `s = 0`, for seeding the
    /// solver so its output matches `tangent` exactly.
    pub fn initial_frame(&self) -> Frame {
        let a = self.alpha();
        let (cos_t, sin_t) = (self.mu / a, self.omega / a);
        Frame::new(
            Vec3::X,
            Vec3::new(0.0, sin_t, cos_t),
            Vec3::new(0.0, -cos_t, sin_t),
        )
    }

    /// Decide closure: the tangent is periodic with commensurate
    /// frequencies iff `mu / alpha` is rational, which (for rational
    /// recovery of omega and mu) happens iff `omega^2 + mu^2` is a perfect
    /// square of rationals.
    pub fn closure(&self) -> ClosureVerdict {
        let not_closed = ClosureVerdict { closed: false, ratio: None, period: None };
        // Recover omega and mu as exact rationals; a float window test on
        // mu/alpha alone would misclassify irrationals with very good
        // convergents (e.g. 1/sqrt(2)).
        let scale = self.omega.abs().max(self.mu.abs());
        let tol = 1e-12 * scale;
        let (Some((pw, qw)), Some((pu, qu))) = (
            rational_approx(self.omega, 1_000_000, tol),
            rational_approx(self.mu, 1_000_000, tol),
        ) else {
            return not_closed;
        };
        // Over the common denominator qw*qu: omega = A/D, mu = B/D.
        let a = pw as i128 * qu as i128;
        let b = pu as i128 * qw as i128;
        let sq = a * a + b * b;
        let root = isqrt(sq);
        if root * root != sq {
            return not_closed;
        }
        // mu / alpha = |B| / root, reduced.
        let g = gcd(b.unsigned_abs() as i64, root as i64).max(1);
        let (p, q) = ((b.abs() / g as i128) as i64, (root / g as i128) as i64);
        // Tangent frequencies are mu (q +- p) / p and mu; the curve closes
        // after 2 pi p / (|mu| g2) with g2 = gcd(q+p, q-p, p).
        let g2 = gcd(gcd(q + p, q - p), p).max(1);
        let period = 2.0 * PI * p as f64 / (self.mu.abs() * g2 as f64);
        ClosureVerdict {
            closed: true,
            ratio: Some((p, q)),
            period: Some(period),
        }
    }
}

/// Signed and unsigned curvature totals of a closed curve, split into arcs
/// between sign changes of the curvature, each paired with the length of
/// the tangent image (chord sum of consecutive tangents).
#[derive(Debug, Clone)]
pub struct CurvatureBalance {
    pub total_curvature: f64,
    pub total_torsion: f64,
    pub arcs: Vec<ArcSegment>,
}

#[derive(Debug, Clone)]
pub struct ArcSegment {
    pub start_node: usize,
    pub end_node: usize,
    /// Integral of |kappa| over the arc.
    pub unsigned_curvature: f64,
    /// Polyline length of the tangent image over the arc.
    pub tangent_image_length: f64,
}

/// Curvature balance over one period of a closed curve. `closure_tol` is
/// applied to the endpoint gap of the tangent (the apparatus carries no
/// positions).
pub fn total_curvature_balance(
    app: &FrenetApparatus,
    closure_tol: f64,
) -> Result<CurvatureBalance> {
    let grid = *app.grid();
    let frames = app.frames();
    let gap = (frames[frames.len() - 1].e1 - frames[0].e1).norm();
    if gap > closure_tol {
        return Err(Error::NotClosed);
    }
    let h = grid.h();
    let ks = app.kappa().sample(&grid)?;
    let ts = app.tau().sample(&grid)?;
    let total_curvature = simpson(&ks, h);
    let total_torsion = simpson(&ts, h);

    let mut arcs = Vec::new();
    let mut start = 0usize;
    let max_k = ks.iter().fold(0.0_f64, |m, &k| m.max(k.abs()));
    let eps = (1e-9 * max_k).max(EPS_KAPPA);
    let sign = |k: f64| {
        if k > eps {
            1
        } else if k < -eps {
            -1
        } else {
            0
        }
    };
    let mut cur = sign(ks[0]);
    for i in 1..ks.len() {
        let s = sign(ks[i]);
        if s != 0 && cur != 0 && s != cur {
            arcs.push(make_arc(start, i, &ks, frames, h));
            start = i;
        }
        if s != 0 {
            cur = s;
        }
    }
    arcs.push(make_arc(start, ks.len() - 1, &ks, frames, h));
    Ok(CurvatureBalance { total_curvature, total_torsion, arcs })
}

fn make_arc(start: usize, end: usize, ks: &[f64], frames: &[Frame], h: f64) -> ArcSegment {
    let unsigned: f64 = (start..end)
        .map(|i| 0.5 * h * (ks[i].abs() + ks[i + 1].abs()))
        .sum();
    let chord: f64 = (start..end)
        .map(|i| (frames[i + 1].e1 - frames[i].e1).norm())
        .sum();
    ArcSegment {
        start_node: start,
        end_node: end,
        unsigned_curvature: unsigned,
        tangent_image_length: chord,
    }
}
