//! Bishop, successor and predecessor transformations of moving-frame
//! systems.
//!
//! All three hinge on the normal-plane rotation angle `phi = phi0 + int tau`
//! (cumulative Simpson on the apparatus grid). The integration constant
//! `phi0` is left free by the theory, so it is a required parameter.

use std::f64::consts::PI;

use crate::apparatus::{BishopApparatus, FrenetApparatus};
use crate::error::{Error, Result};
use crate::field::{cumulative_simpson, difference_quotients, Grid, ScalarField};
use crate::geom::Frame;

/// Relative threshold (against the max sampled radius) below which the
/// Lancret curvature counts as vanishing.
pub const EPS_RADIUS_REL: f64 = 1e-10;

/// A Bishop development in polar coordinates: signed radius and continuous
/// angle.
#[derive(Debug, Clone)]
pub struct PolarDevelopment {
    pub omega: ScalarField,
    pub phi: ScalarField,
}

/// Convert a Frenet apparatus to an equivalent Bishop apparatus.
///
/// `phi(s) = phi0 + int tau`; (N1, N2) is (N, B) rotated by phi and
/// `(k1, k2) = kappa (cos phi, sin phi)`.
pub fn bishop_transform(app: &FrenetApparatus, phi0: f64) -> Result<BishopApparatus> {
    let grid = *app.grid();
    let tau = app.tau().sample(&grid)?;
    let kappa = app.kappa().sample(&grid)?;
    let mut phi = cumulative_simpson(&tau, grid.h());
    for p in &mut phi {
        *p += phi0;
    }
    let mut frames = Vec::with_capacity(grid.nodes());
    let mut k1 = Vec::with_capacity(grid.nodes());
    let mut k2 = Vec::with_capacity(grid.nodes());
    for (i, f) in app.frames().iter().enumerate() {
        let (sp, cp) = phi[i].sin_cos();
        let n1 = f.e2 * cp - f.e3 * sp;
        let n2 = f.e2 * sp + f.e3 * cp;
        frames.push(Frame::new(f.e1, n1, n2));
        k1.push(kappa[i] * cp);
        k2.push(kappa[i] * sp);
    }
    BishopApparatus::new(
        grid,
        frames,
        ScalarField::from_samples(grid, k1)?,
        ScalarField::from_samples(grid, k2)?,
    )
}

/// Lift a Bishop development to polar coordinates with continuous angle.
///
/// The radius is signed: when the development crosses the origin along a
/// line, omega changes sign instead of the angle jumping by pi. Across
/// sub-threshold intervals the angle is held at its last value. The sign
/// convention prefers omega >= 0 at the left domain endpoint (ties resolved
/// at the first node with nonzero radius).
pub fn polar_unwrap(k1: &ScalarField, k2: &ScalarField) -> Result<PolarDevelopment> {
    let grid = match (k1.table_grid(), k2.table_grid()) {
        (Some(g), _) | (None, Some(g)) => g,
        (None, None) => {
            let dom = k1.domain();
            Grid::new(dom, ((2000.0 * dom.len()).ceil() as usize).max(2000) + 1)?
        }
    };
    polar_unwrap_on(k1, k2, &grid)
}

/// [`polar_unwrap`] on an explicit grid.
pub fn polar_unwrap_on(
    k1: &ScalarField,
    k2: &ScalarField,
    grid: &Grid,
) -> Result<PolarDevelopment> {
    let a = k1.sample(grid)?;
    let b = k2.sample(grid)?;
    let n = grid.nodes();
    let radius: Vec<f64> = (0..n).map(|i| a[i].hypot(b[i])).collect();
    let max_r = radius.iter().fold(0.0_f64, |m, &r| m.max(r));
    let eps = EPS_RADIUS_REL * max_r;

    let mut phi = vec![0.0; n];
    let mut omega = vec![0.0; n];

    let Some(first) = radius.iter().position(|&r| r > eps) else {
        // Development never leaves the origin: straight line, angle zero.
        return Ok(PolarDevelopment {
            omega: ScalarField::from_samples(*grid, omega)?,
            phi: ScalarField::from_samples(*grid, phi)?,
        });
    };

    // Angle at the first usable node, chosen so omega >= 0 there.
    let mut cur = b[first].atan2(a[first]);
    for i in 0..=first {
        phi[i] = cur;
        omega[i] = a[i] * cur.cos() + b[i] * cur.sin();
    }
    for i in first + 1..n {
        if radius[i] > eps {
            let raw = b[i].atan2(a[i]);
            // Candidates raw + k*pi; the closest to the running angle keeps
            // phi continuous, flipping the sign of omega when needed.
            let mut delta = (raw - cur).rem_euclid(PI);
            if delta > PI / 2.0 {
                delta -= PI;
            }
            // A forced jump of ~pi/2 means the development turned a corner
            // at the origin: no continuous lift exists.
            if delta.abs() > PI / 2.0 - 1e-9 {
                return Err(Error::UnliftablePath { s: grid.s(i), jump: delta.abs() });
            }
            cur += delta;
        }
        phi[i] = cur;
        omega[i] = a[i] * cur.cos() + b[i] * cur.sin();
    }
    Ok(PolarDevelopment {
        omega: ScalarField::from_samples(*grid, omega)?,
        phi: ScalarField::from_samples(*grid, phi)?,
    })
}

/// Reconstruct a Frenet apparatus from a Bishop apparatus: rotate the
/// normal plane back by the unwrapped polar angle; `kappa = omega`,
/// `tau = phi'` by central differences.
pub fn inverse_bishop(app: &BishopApparatus) -> Result<FrenetApparatus> {
    let grid = *app.grid();
    let polar = polar_unwrap_on(app.k1(), app.k2(), &grid)?;
    let phi = polar.phi.sample(&grid)?;
    let tau = difference_quotients(&phi, grid.h());
    let mut frames = Vec::with_capacity(grid.nodes());
    for (i, f) in app.frames().iter().enumerate() {
        let (sp, cp) = phi[i].sin_cos();
        let nn = f.e2 * cp + f.e3 * sp;
        let bb = f.e2 * (-sp) + f.e3 * cp;
        frames.push(Frame::new(f.e1, nn, bb));
    }
    FrenetApparatus::new(
        grid,
        frames,
        polar.omega,
        ScalarField::from_samples(grid, tau)?,
    )
}

/// The successor transformation: build a Frenet apparatus whose principal
/// normal is the input's tangent.
///
/// `phi = phi0 + int tau`; `T1 = -cos(phi) N + sin(phi) B`, `N1 = T`,
/// `B1 = sin(phi) N + cos(phi) B`; `kappa1 = kappa cos(phi)`,
/// `tau1 = kappa sin(phi)`.
pub fn successor_transform(app: &FrenetApparatus, phi0: f64) -> Result<FrenetApparatus> {
    let grid = *app.grid();
    let tau = app.tau().sample(&grid)?;
    let kappa = app.kappa().sample(&grid)?;
    let mut phi = cumulative_simpson(&tau, grid.h());
    for p in &mut phi {
        *p += phi0;
    }
    let mut frames = Vec::with_capacity(grid.nodes());
    let mut kappa1 = Vec::with_capacity(grid.nodes());
    let mut tau1 = Vec::with_capacity(grid.nodes());
    for (i, f) in app.frames().iter().enumerate() {
        let (sp, cp) = phi[i].sin_cos();
        let t1 = f.e2 * (-cp) + f.e3 * sp;
        let b1 = f.e2 * sp + f.e3 * cp;
        frames.push(Frame::new(t1, f.e1, b1));
        kappa1.push(kappa[i] * cp);
        tau1.push(kappa[i] * sp);
    }
    FrenetApparatus::new(
        grid,
        frames,
        ScalarField::from_samples(grid, kappa1)?,
        ScalarField::from_samples(grid, tau1)?,
    )
}

/// The strongly regular predecessor transformation (inverse of the
/// successor): requires the Lancret curvature of the input to stay above
/// the vanishing threshold on the whole domain.
///
/// `T = N1`, `N = (-kappa1 T1 + tau1 B1)/omega`,
/// `B = (tau1 T1 + kappa1 B1)/omega` (the input's unit Darboux vector);
/// `kappa = omega`, `tau = (kappa1 tau1' - kappa1' tau1)/omega^2` with
/// central differences.
pub fn predecessor_transform(app: &FrenetApparatus) -> Result<FrenetApparatus> {
    let grid = *app.grid();
    let k1 = app.kappa().sample(&grid)?;
    let t1 = app.tau().sample(&grid)?;
    let omega: Vec<f64> = k1.iter().zip(&t1).map(|(&k, &t)| k.hypot(t)).collect();
    let max_w = omega.iter().fold(0.0_f64, |m, &w| m.max(w));
    let eps = EPS_RADIUS_REL * max_w;
    if let Some(i) = omega.iter().position(|&w| w <= eps) {
        return Err(Error::VanishingLancret { s: grid.s(i) });
    }
    let dk = difference_quotients(&k1, grid.h());
    let dt = difference_quotients(&t1, grid.h());
    let tau: Vec<f64> = (0..grid.nodes())
        .map(|i| (k1[i] * dt[i] - dk[i] * t1[i]) / (omega[i] * omega[i]))
        .collect();
    predecessor_frames(app, &grid, &omega, &k1, &t1, tau)
}

/// Predecessor with a caller-supplied polar form of (kappa1, tau1): the
/// closed-form fast path, `kappa = omega` and `tau = phi'` from the polar
/// angle's derivative rule when available.
pub fn predecessor_transform_with_polar(
    app: &FrenetApparatus,
    polar: &PolarDevelopment,
) -> Result<FrenetApparatus> {
    let grid = *app.grid();
    let k1 = app.kappa().sample(&grid)?;
    let t1 = app.tau().sample(&grid)?;
    let omega = polar.omega.sample(&grid)?;
    let tau: Vec<f64> = grid
        .iter()
        .map(|s| polar.phi.eval_derivative(s))
        .collect::<Result<_>>()?;
    predecessor_frames(app, &grid, &omega, &k1, &t1, tau)
}

fn predecessor_frames(
    app: &FrenetApparatus,
    grid: &Grid,
    omega: &[f64],
    k1: &[f64],
    t1: &[f64],
    tau: Vec<f64>,
) -> Result<FrenetApparatus> {
    let mut frames = Vec::with_capacity(grid.nodes());
    for (i, f) in app.frames().iter().enumerate() {
        let w = omega[i];
        if w.abs() < f64::MIN_POSITIVE {
            return Err(Error::VanishingLancret { s: grid.s(i) });
        }
        let n = (f.e1 * (-k1[i]) + f.e3 * t1[i]) * (1.0 / w);
        let b = (f.e1 * t1[i] + f.e3 * k1[i]) * (1.0 / w);
        frames.push(Frame::new(f.e2, n, b));
    }
    FrenetApparatus::new(
        *grid,
        frames,
        ScalarField::from_samples(*grid, omega.to_vec())?,
        ScalarField::from_samples(*grid, tau)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apparatus::developments_equivalent;
    use crate::field::{Development, Interval};
    use crate::geom::Vec3;

    fn circular_helix(a: f64, b: f64, len: f64, nodes: usize) -> FrenetApparatus {
        let interval = Interval::new(0.0, len).unwrap();
        let grid = Grid::new(interval, nodes).unwrap();
        let w = a.hypot(b);
        let frames: Vec<Frame> = grid
            .iter()
            .map(|s| {
                let (sw, cw) = (w * s).sin_cos();
                let t = Vec3::new(a / w * cw, a / w * sw, b / w);
                let n = Vec3::new(-sw, cw, 0.0);
                Frame::new(t, n, t.cross(n))
            })
            .collect();
        FrenetApparatus::new(
            grid,
            frames,
            ScalarField::constant(interval, a),
            ScalarField::constant(interval, b),
        )
        .unwrap()
    }

    #[test]
    fn bishop_of_torsion_free_apparatus_is_identity() {
        let app = circular_helix(1.0, 0.0, 2.0, 201);
        let bishop = bishop_transform(&app, 0.0).unwrap();
        for (f, g) in bishop.frames().iter().zip(app.frames()) {
            assert!((f.e2 - g.e2).norm() < 1e-14);
            assert!((f.e3 - g.e3).norm() < 1e-14);
        }
        let g = Grid::new(Interval::new(0.0, 2.0).unwrap(), 5).unwrap();
        assert_eq!(bishop.k1().sample(&g).unwrap(), vec![1.0; 5]);
        assert_eq!(bishop.k2().sample(&g).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn circular_helix_bishop_development_is_a_circle() {
        let (a, b) = (1.5, 0.8);
        let app = circular_helix(a, b, 4.0, 2001);
        let bishop = bishop_transform(&app, 0.0).unwrap();
        let grid = *bishop.grid();
        let k1 = bishop.k1().sample(&grid).unwrap();
        let k2 = bishop.k2().sample(&grid).unwrap();
        for (i, s) in grid.iter().enumerate() {
            assert!((k1[i] - a * (b * s).cos()).abs() < 1e-8);
            assert!((k2[i] - a * (b * s).sin()).abs() < 1e-8);
        }
        assert!(bishop.discrete_parallelism() < 1e-4);
    }

    #[test]
    fn bishop_phase_offsets_differ_by_constant_rotation() {
        let app = circular_helix(1.0, 0.5, 3.0, 501);
        let b0 = bishop_transform(&app, 0.2).unwrap();
        let b1 = bishop_transform(&app, 0.9).unwrap();
        let d: f64 = 0.9 - 0.2;
        for (f, g) in b1.frames().iter().zip(b0.frames()) {
            let n1 = g.e2 * d.cos() - g.e3 * d.sin();
            assert!((f.e2 - n1).norm() < 1e-13);
        }
    }

    #[test]
    fn polar_unwrap_circle() {
        let dom = Interval::new(0.0, 4.0).unwrap();
        let (a, b) = (2.0, 1.3);
        let k1 = ScalarField::from_fn(dom, move |s| a * (b * s).cos());
        let k2 = ScalarField::from_fn(dom, move |s| a * (b * s).sin());
        let polar = polar_unwrap(&k1, &k2).unwrap();
        let g = Grid::new(dom, 41).unwrap();
        for s in g.iter() {
            assert!((polar.omega.eval(s).unwrap() - a).abs() < 1e-12);
            assert!((polar.phi.eval(s).unwrap() - b * s).abs() < 1e-9);
        }
    }

    #[test]
    fn polar_unwrap_positive_radius_is_trivial() {
        let dom = Interval::new(0.0, 1.0).unwrap();
        let k1 = ScalarField::from_fn(dom, |s| 1.0 + s);
        let k2 = ScalarField::constant(dom, 0.0);
        let polar = polar_unwrap(&k1, &k2).unwrap();
        assert!(polar.phi.eval(0.5).unwrap().abs() < 1e-12);
        assert!((polar.omega.eval(0.5).unwrap() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn polar_unwrap_signed_radius_through_origin() {
        // Development (s, 0) on [-1, 1] crosses the origin along a line:
        // the angle must not jump and the radius changes sign.
        let dom = Interval::new(-1.0, 1.0).unwrap();
        let k1 = ScalarField::from_fn(dom, |s| s);
        let k2 = ScalarField::constant(dom, 0.0);
        let polar = polar_unwrap(&k1, &k2).unwrap();
        let g = Grid::new(dom, 101).unwrap();
        let phi0 = polar.phi.eval(-1.0).unwrap();
        for s in g.iter() {
            let w = polar.omega.eval(s).unwrap();
            let p = polar.phi.eval(s).unwrap();
            assert!((p - phi0).abs() < 1e-9, "angle jumped at {s}");
            // Reconstruction reproduces the input.
            assert!((w * p.cos() - s).abs() < 1e-9);
            assert!((w * p.sin()).abs() < 1e-9);
        }
        // Radius is signed and linear through zero.
        assert!(
            polar.omega.eval(-1.0).unwrap() * polar.omega.eval(1.0).unwrap() < 0.0,
            "radius must change sign"
        );
    }

    #[test]
    fn polar_unwrap_corner_is_unliftable() {
        // (k1, k2) = (s, |s|) turns a corner at the origin.
        let dom = Interval::new(-1.0, 1.0).unwrap();
        let k1 = ScalarField::from_fn(dom, |s| s);
        let k2 = ScalarField::from_fn(dom, |s| s.abs());
        assert!(matches!(
            polar_unwrap(&k1, &k2),
            Err(Error::UnliftablePath { .. })
        ));
    }

    #[test]
    fn inverse_bishop_recovers_circular_helix() {
        let (a, b) = (1.2, 0.7);
        let app = circular_helix(a, b, 4.0, 4001);
        let bishop = bishop_transform(&app, 0.3).unwrap();
        let rec = inverse_bishop(&bishop).unwrap();
        let g = Grid::new(Interval::new(0.1, 3.9).unwrap(), 101).unwrap();
        for s in g.iter() {
            assert!((rec.kappa().eval(s).unwrap() - a).abs() < 1e-8);
            assert!((rec.tau().eval(s).unwrap() - b).abs() < 1e-8);
        }
    }

    #[test]
    fn inverse_bishop_round_trip_is_equivalent() {
        let app = circular_helix(1.2, 0.7, 4.0, 4001);
        let rec = inverse_bishop(&bishop_transform(&app, 0.3).unwrap()).unwrap();
        let eq = developments_equivalent(
            &Development::new(rec.kappa().clone(), rec.tau().clone()).unwrap(),
            &Development::new(
                ScalarField::constant(Interval::new(0.0, 4.0).unwrap(), 1.2),
                ScalarField::constant(Interval::new(0.0, 4.0).unwrap(), 0.7),
            )
            .unwrap(),
            1e-7,
        )
        .unwrap();
        assert!(eq.equivalent);
    }

    #[test]
    fn successor_of_plane_circle_is_circular_helix() {
        let app = circular_helix(1.0, 0.0, 4.0, 1001);
        let theta = 0.6_f64;
        let suc = successor_transform(&app, theta).unwrap();
        let g = Grid::new(Interval::new(0.0, 4.0).unwrap(), 11).unwrap();
        for s in g.iter() {
            assert!((suc.kappa().eval(s).unwrap() - theta.cos()).abs() < 1e-12);
            assert!((suc.tau().eval(s).unwrap() - theta.sin()).abs() < 1e-12);
        }
        // N1 = T exactly, by construction.
        for (f, g) in suc.frames().iter().zip(app.frames()) {
            assert_eq!(f.e2, g.e1);
        }
    }

    #[test]
    fn successor_darboux_is_kappa_times_binormal() {
        let app = circular_helix(1.3, 0.0, 2.0, 501);
        let suc = successor_transform(&app, 0.0).unwrap();
        let grid = *suc.grid();
        let k1 = suc.kappa().sample(&grid).unwrap();
        let t1 = suc.tau().sample(&grid).unwrap();
        for (i, f1) in suc.frames().iter().enumerate() {
            let d = crate::apparatus::darboux_vector(f1, k1[i], t1[i]);
            let expected = app.frames()[i].e3 * 1.3;
            assert!((d - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn successor_of_circular_helix_is_constant_precession() {
        let (w, mu) = (4.0, 3.0);
        let app = circular_helix(w, mu, 2.0 * PI, 8001);
        let suc = successor_transform(&app, 0.0).unwrap();
        let g = Grid::new(Interval::new(0.0, 2.0 * PI).unwrap(), 101).unwrap();
        for s in g.iter() {
            assert!((suc.kappa().eval(s).unwrap() - w * (mu * s).cos()).abs() < 1e-7);
            assert!((suc.tau().eval(s).unwrap() - w * (mu * s).sin()).abs() < 1e-7);
        }
    }

    #[test]
    fn predecessor_of_constant_precession_is_circular_helix() {
        let (w, mu) = (4.0, 3.0);
        let app = circular_helix(w, mu, 2.0 * PI, 80_001);
        let suc = successor_transform(&app, 0.0).unwrap();
        let pre = predecessor_transform(&suc).unwrap();
        let g = Grid::new(Interval::new(0.1, 6.1).unwrap(), 101).unwrap();
        for s in g.iter() {
            assert!((pre.kappa().eval(s).unwrap() - w).abs() < 1e-7);
            assert!((pre.tau().eval(s).unwrap() - mu).abs() < 1e-7);
        }
        // T = N1 and B equals the input's unit Darboux vector.
        let grid = *suc.grid();
        let k1 = suc.kappa().sample(&grid).unwrap();
        let t1 = suc.tau().sample(&grid).unwrap();
        for (i, f) in pre.frames().iter().enumerate() {
            assert_eq!(f.e1, suc.frames()[i].e2);
            let d = crate::apparatus::darboux_vector(&suc.frames()[i], k1[i], t1[i]);
            let unit = d * (1.0 / d.norm());
            assert!((f.e3 - unit).norm() < 1e-10);
        }
    }

    #[test]
    fn predecessor_of_plane_apparatus_is_plane() {
        let app = circular_helix(1.0, 0.0, 2.0, 2001);
        // kappa1 = c > 0, tau1 = 0.
        let pre = predecessor_transform(&app).unwrap();
        let g = Grid::new(Interval::new(0.0, 2.0).unwrap(), 9).unwrap();
        for s in g.iter() {
            assert!((pre.kappa().eval(s).unwrap() - 1.0).abs() < 1e-12);
            assert!(pre.tau().eval(s).unwrap().abs() < 1e-10);
        }
        for (f, g) in pre.frames().iter().zip(app.frames()) {
            assert_eq!(f.e1, g.e2);
        }
    }

    #[test]
    fn predecessor_requires_nonvanishing_lancret() {
        // kappa1 = s crosses zero at the left endpoint region.
        let dom = Interval::new(-1.0, 1.0).unwrap();
        let grid = Grid::new(dom, 201).unwrap();
        let frames = vec![Frame::IDENTITY; 201];
        let app = FrenetApparatus::new(
            grid,
            frames,
            ScalarField::from_fn(dom, |s| s),
            ScalarField::constant(dom, 0.0),
        )
        .unwrap();
        assert!(matches!(
            predecessor_transform(&app),
            Err(Error::VanishingLancret { .. })
        ));
    }

    use std::f64::consts::PI;
}
