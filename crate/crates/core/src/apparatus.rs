//! Frenet and Bishop apparatus types and their derived quantities.
//!
//! An apparatus couples a frame field on a uniform grid with its coefficient
//! functions: (kappa, tau) for Frenet frames, (k1, k2) for Bishop frames.

use crate::error::{Error, Result};
use crate::field::{
    cumulative_simpson, integrate_field, Development, Grid, ScalarField,
};
use crate::geom::{Frame, Vec3, TOL_ORTHO};

/// Threshold below which curvature counts as vanishing in the equivalence
/// witness search.
pub const EPS_KAPPA: f64 = 1e-12;

/// Frenet frame field with curvature and torsion.
#[derive(Debug, Clone)]
pub struct FrenetApparatus {
    grid: Grid,
    frames: Vec<Frame>,
    kappa: ScalarField,
    tau: ScalarField,
}

impl FrenetApparatus {
    pub fn new(
        grid: Grid,
        frames: Vec<Frame>,
        kappa: ScalarField,
        tau: ScalarField,
    ) -> Result<FrenetApparatus> {
        validate_frame_field(&grid, &frames, &[&kappa, &tau])?;
        Ok(FrenetApparatus { grid, frames, kappa, tau })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn kappa(&self) -> &ScalarField {
        &self.kappa
    }

    pub fn tau(&self) -> &ScalarField {
        &self.tau
    }

    pub fn development(&self) -> Development {
        Development::new(self.kappa.clone(), self.tau.clone())
            .expect("apparatus fields share a domain")
    }

    /// Worst deviation of the sampled frames from the Frenet equations,
    /// measured with central differences on interior nodes:
    /// `<dT/ds, N> - kappa` and `<dN/ds, B> - tau`.
    pub fn discrete_consistency(&self) -> Result<f64> {
        let h = self.grid.h();
        let kv = self.kappa.sample(&self.grid)?;
        let tv = self.tau.sample(&self.grid)?;
        let mut worst: f64 = 0.0;
        for i in 1..self.frames.len() - 1 {
            let f = &self.frames[i];
            let dt = (self.frames[i + 1].e1 - self.frames[i - 1].e1) * (0.5 / h);
            let dn = (self.frames[i + 1].e2 - self.frames[i - 1].e2) * (0.5 / h);
            worst = worst.max((dt.dot(f.e2) - kv[i]).abs());
            worst = worst.max((dn.dot(f.e3) - tv[i]).abs());
        }
        Ok(worst)
    }
}

/// Bishop (parallel transport) frame field with normal development (k1, k2).
#[derive(Debug, Clone)]
pub struct BishopApparatus {
    grid: Grid,
    frames: Vec<Frame>,
    k1: ScalarField,
    k2: ScalarField,
}

impl BishopApparatus {
    pub fn new(
        grid: Grid,
        frames: Vec<Frame>,
        k1: ScalarField,
        k2: ScalarField,
    ) -> Result<BishopApparatus> {
        validate_frame_field(&grid, &frames, &[&k1, &k2])?;
        Ok(BishopApparatus { grid, frames, k1, k2 })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn k1(&self) -> &ScalarField {
        &self.k1
    }

    pub fn k2(&self) -> &ScalarField {
        &self.k2
    }

    /// Worst violation of normal parallelism, `<dN1/ds, N2>`, on interior
    /// nodes.
    pub fn discrete_parallelism(&self) -> f64 {
        let h = self.grid.h();
        let mut worst: f64 = 0.0;
        for i in 1..self.frames.len() - 1 {
            let dn1 = (self.frames[i + 1].e2 - self.frames[i - 1].e2) * (0.5 / h);
            worst = worst.max(dn1.dot(self.frames[i].e3).abs());
        }
        worst
    }
}

fn validate_frame_field(grid: &Grid, frames: &[Frame], fields: &[&ScalarField]) -> Result<()> {
    if frames.len() != grid.nodes() {
        return Err(Error::GridMismatch(format!(
            "{} frames on a {}-node grid",
            frames.len(),
            grid.nodes()
        )));
    }
    for (i, f) in frames.iter().enumerate() {
        if !f.is_orthonormal(TOL_ORTHO) {
            return Err(Error::DegenerateFrame(format!(
                "frame at node {i} off orthonormal by {:.3e}",
                f.ortho_defect()
            )));
        }
    }
    for field in fields {
        if !field.domain().contains_interval(&grid.interval()) {
            return Err(Error::DomainMismatch(format!(
                "field domain {} does not cover grid {}",
                field.domain(),
                grid.interval()
            )));
        }
    }
    Ok(())
}

/// Arclength grid with positions, frames and coefficient values per node:
/// the solver's output and the I/O unit.
#[derive(Debug, Clone)]
pub struct CurveSamples {
    pub grid: Grid,
    pub positions: Vec<Vec3>,
    pub frames: Vec<Frame>,
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
}

impl CurveSamples {
    pub fn new(
        grid: Grid,
        positions: Vec<Vec3>,
        frames: Vec<Frame>,
        kappa: Vec<f64>,
        tau: Vec<f64>,
    ) -> Result<CurveSamples> {
        let n = grid.nodes();
        if positions.len() != n || frames.len() != n || kappa.len() != n || tau.len() != n {
            return Err(Error::GridMismatch(format!(
                "column lengths {}/{}/{}/{} on a {n}-node grid",
                positions.len(),
                frames.len(),
                kappa.len(),
                tau.len()
            )));
        }
        for (i, f) in frames.iter().enumerate() {
            if !f.is_orthonormal(TOL_ORTHO) {
                return Err(Error::DegenerateFrame(format!(
                    "frame at node {i} off orthonormal by {:.3e}",
                    f.ortho_defect()
                )));
            }
        }
        Ok(CurveSamples { grid, positions, frames, kappa, tau })
    }

    pub fn apparatus(&self) -> Result<FrenetApparatus> {
        FrenetApparatus::new(
            self.grid,
            self.frames.clone(),
            ScalarField::from_samples(self.grid, self.kappa.clone())?,
            ScalarField::from_samples(self.grid, self.tau.clone())?,
        )
    }
}

/// Right-hand side of the Frenet equations:
/// `T' = kappa N`, `N' = -kappa T + tau B`, `B' = -tau N`.
pub fn frenet_rhs(frame: &Frame, kappa: f64, tau: f64) -> (Vec3, Vec3, Vec3) {
    (
        frame.e2 * kappa,
        frame.e1 * (-kappa) + frame.e3 * tau,
        frame.e2 * (-tau),
    )
}

/// The Darboux rotation vector `tau T + kappa B`; its norm is the Lancret
/// curvature.
pub fn darboux_vector(frame: &Frame, kappa: f64, tau: f64) -> Vec3 {
    frame.e1 * tau + frame.e3 * kappa
}

/// `sqrt(kappa^2 + tau^2)`, the angular speed of the frame.
pub fn lancret_curvature(kappa: f64, tau: f64) -> f64 {
    kappa.hypot(tau)
}

/// Either kind of apparatus, for rearrangements that change the kind.
#[derive(Debug, Clone)]
pub enum Apparatus {
    Frenet(FrenetApparatus),
    Bishop(BishopApparatus),
}

impl Apparatus {
    pub fn as_frenet(&self) -> Result<&FrenetApparatus> {
        match self {
            Apparatus::Frenet(a) => Ok(a),
            Apparatus::Bishop(_) => Err(Error::WrongApparatusKind(
                "expected a Frenet apparatus".to_string(),
            )),
        }
    }

    pub fn as_bishop(&self) -> Result<&BishopApparatus> {
        match self {
            Apparatus::Bishop(a) => Ok(a),
            Apparatus::Frenet(_) => Err(Error::WrongApparatusKind(
                "expected a Bishop apparatus".to_string(),
            )),
        }
    }
}

/// The five rearrangement variants of a moving frame system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RearrangeVariant {
    /// (T, -N, -B, -kappa, tau): equivalent Frenet system.
    A,
    /// (-T, -N, B, kappa, -tau): Frenet system with reversed orientation.
    B,
    /// (B, -N, T, tau, kappa): Frenet system with B as unit tangent.
    C,
    /// (N, -T, B, kappa, tau): Bishop system with N as unit tangent.
    D,
    /// Bishop (T, N1, N2, k1, k2) -> Frenet (-N1, T, N2, k1, k2).
    E,
}

/// Rearrange a moving-frame system into another Frenet or Bishop system.
///
/// Variants A-D take a Frenet apparatus; variant E takes a Bishop apparatus.
pub fn rearrange(app: &Apparatus, variant: RearrangeVariant) -> Result<Apparatus> {
    use RearrangeVariant::*;
    match variant {
        A | B | C | D => {
            let a = app.as_frenet()?;
            let grid = *a.grid();
            let (kappa, tau) = (a.kappa().clone(), a.tau().clone());
            match variant {
                A => {
                    let frames = a
                        .frames()
                        .iter()
                        .map(|f| Frame::new(f.e1, -f.e2, -f.e3))
                        .collect();
                    Ok(Apparatus::Frenet(FrenetApparatus::new(
                        grid,
                        frames,
                        kappa.neg(),
                        tau,
                    )?))
                }
                B => {
                    let frames = a
                        .frames()
                        .iter()
                        .map(|f| Frame::new(-f.e1, -f.e2, f.e3))
                        .collect();
                    Ok(Apparatus::Frenet(FrenetApparatus::new(
                        grid,
                        frames,
                        kappa,
                        tau.neg(),
                    )?))
                }
                C => {
                    let frames = a
                        .frames()
                        .iter()
                        .map(|f| Frame::new(f.e3, -f.e2, f.e1))
                        .collect();
                    Ok(Apparatus::Frenet(FrenetApparatus::new(
                        grid, frames, tau, kappa,
                    )?))
                }
                D => {
                    let frames = a
                        .frames()
                        .iter()
                        .map(|f| Frame::new(f.e2, -f.e1, f.e3))
                        .collect();
                    Ok(Apparatus::Bishop(BishopApparatus::new(
                        grid, frames, kappa, tau,
                    )?))
                }
                E => unreachable!(),
            }
        }
        E => {
            let a = app.as_bishop()?;
            let frames = a
                .frames()
                .iter()
                .map(|f| Frame::new(-f.e2, f.e1, f.e3))
                .collect();
            Ok(Apparatus::Frenet(FrenetApparatus::new(
                *a.grid(),
                frames,
                a.k1().clone(),
                a.k2().clone(),
            )?))
        }
    }
}

/// Total torsion of a segment: the integral of tau over [a, b] by composite
/// Simpson.
pub fn total_torsion(tau: &ScalarField, a: f64, b: f64) -> Result<f64> {
    let table_nodes = tau
        .table_grid()
        .map(|g| (((b - a) / g.h()).ceil() as usize) + 1)
        .unwrap_or(0);
    integrate_field(tau, a, b, table_nodes.max(4097))
}

/// Distance between two angles modulo pi.
pub fn mod_pi_distance(a: f64, b: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let d = (a - b).rem_euclid(pi);
    d.min(pi - d)
}

/// Outcome of a development-equivalence test, with the rotation witness when
/// the developments match.
#[derive(Debug, Clone)]
pub struct Equivalence {
    pub equivalent: bool,
    /// The C1 angle function phi with kappa cos(phi) = kappa_bar,
    /// kappa sin(phi) = 0 and phi' = tau - tau_bar, when one exists.
    pub witness: Option<ScalarField>,
}

/// Decide whether two developments characterize the same Frenet curve.
///
/// Where the curvature is nonzero the witness angle is forced to a multiple
/// of pi per node; across near-zero curvature gaps it is integrated from
/// `phi' = tau - tau_bar` and matched at the gap ends.
pub fn developments_equivalent(
    d1: &Development,
    d2: &Development,
    tol: f64,
) -> Result<Equivalence> {
    let dom1 = d1.domain();
    let dom2 = d2.domain();
    if !(dom1.contains_interval(&dom2) && dom2.contains_interval(&dom1)) {
        return Err(Error::DomainMismatch(format!(
            "development domains {dom1} and {dom2} differ"
        )));
    }
    let nodes = [d1.kappa(), d1.tau(), d2.kappa(), d2.tau()]
        .iter()
        .filter_map(|f| f.table_grid().map(|g| g.nodes()))
        .max()
        .unwrap_or(0)
        .max(2001);
    let grid = Grid::new(dom1, nodes)?;
    let h = grid.h();
    let k1 = d1.kappa().sample(&grid)?;
    let t1 = d1.tau().sample(&grid)?;
    let k2 = d2.kappa().sample(&grid)?;
    let t2 = d2.tau().sample(&grid)?;

    let no_witness = Ok(Equivalence { equivalent: false, witness: None });

    // |kappa_bar| must equal |kappa| everywhere.
    for i in 0..nodes {
        if (k1[i].abs() - k2[i].abs()).abs() > tol {
            return no_witness;
        }
    }

    let active: Vec<bool> = (0..nodes)
        .map(|i| k1[i].abs() > EPS_KAPPA && k2[i].abs() > EPS_KAPPA)
        .collect();
    let dtau: Vec<f64> = (0..nodes).map(|i| t1[i] - t2[i]).collect();

    // Parity per active node: phi = 0 mod 2pi if signs agree, pi otherwise.
    let parity = |i: usize| -> f64 {
        if k1[i] * k2[i] > 0.0 {
            0.0
        } else {
            std::f64::consts::PI
        }
    };

    let first_active = active.iter().position(|&a| a);
    let mut phi = vec![0.0; nodes];

    let Some(first) = first_active else {
        // Both curvatures vanish everywhere: any phi with phi' = dtau works.
        let cum = cumulative_simpson(&dtau, h);
        let witness = ScalarField::from_samples(grid, cum)?;
        return Ok(Equivalence { equivalent: true, witness: Some(witness) });
    };

    // Leading gap: integrate backward from the first active node.
    phi[first] = parity(first);
    for i in (0..first).rev() {
        phi[i] = phi[i + 1] - 0.5 * h * (dtau[i] + dtau[i + 1]);
    }

    let two_pi = 2.0 * std::f64::consts::PI;
    let mut i = first;
    while i + 1 < nodes {
        let j = i + 1;
        if active[j] {
            // Inside an active run phi stays constant, which requires the
            // torsions to agree and the parity not to flip abruptly.
            if dtau[j].abs() > tol {
                return no_witness;
            }
            let target = parity(j);
            let delta = (target - phi[i]).rem_euclid(two_pi);
            let delta = if delta > std::f64::consts::PI { delta - two_pi } else { delta };
            if active[i] && delta.abs() > 1e-9 {
                // Parity flip without an intervening gap: curvature sign
                // changed through a value above EPS_KAPPA.
                return no_witness;
            }
            phi[j] = phi[i] + if active[i] { 0.0 } else { delta };
            i = j;
        } else {
            // Walk the gap, integrating phi' = dtau with trapezoids.
            let gap_start = i;
            let mut acc = phi[i];
            let mut jj = j;
            while jj < nodes && !active[jj] {
                acc += 0.5 * h * (dtau[jj - 1] + dtau[jj]);
                phi[jj] = acc;
                jj += 1;
            }
            if jj == nodes {
                break; // trailing gap, unconstrained
            }
            // Gap exit must land on the required parity modulo 2pi.
            let landing = acc + 0.5 * h * (dtau[jj - 1] + dtau[jj]);
            let target = parity(jj);
            let gap_len = (jj - gap_start) as f64 * h;
            let tol_angle = tol * (10.0 + gap_len);
            let miss = {
                let d = (landing - target).rem_euclid(two_pi);
                d.min(two_pi - d)
            };
            if miss > tol_angle {
                return no_witness;
            }
            // Snap onto the exact multiple for the continuation.
            let snapped = landing - {
                let d = (landing - target).rem_euclid(two_pi);
                if d > std::f64::consts::PI { d - two_pi } else { d }
            };
            phi[jj] = snapped;
            i = jj;
        }
    }

    let witness = ScalarField::from_samples(grid, phi)?;
    Ok(Equivalence { equivalent: true, witness: Some(witness) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Interval;

    fn helix_apparatus_sampled(a: f64, b: f64, nodes: usize) -> FrenetApparatus {
        // Circular helix frames from the closed form of the frame ODE.
        let interval = Interval::new(0.0, 2.0 * std::f64::consts::PI).unwrap();
        let grid = Grid::new(interval, nodes).unwrap();
        let w = a.hypot(b);
        let frames: Vec<Frame> = grid
            .iter()
            .map(|s| {
                let (sw, cw) = (w * s).sin_cos();
                let t = Vec3::new(a / w * cw, a / w * sw, b / w);
                let n = Vec3::new(-sw, cw, 0.0);
                let bb = t.cross(n);
                Frame::new(t, n, bb)
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
    fn frenet_rhs_matches_equations() {
        let (dt, dn, db) = frenet_rhs(&Frame::IDENTITY, 1.0, 0.0);
        assert_eq!(dt, Vec3::Y);
        assert_eq!(dn, -Vec3::X);
        assert_eq!(db, Vec3::ZERO);

        let (_, dn, _) = frenet_rhs(&Frame::IDENTITY, 3.0, 4.0);
        assert_eq!(dn, Vec3::new(-3.0, 0.0, 4.0));

        let (dt, dn, db) = frenet_rhs(&Frame::IDENTITY, 0.0, 0.0);
        assert_eq!(dt, Vec3::ZERO);
        assert_eq!(dn, Vec3::ZERO);
        assert_eq!(db, Vec3::ZERO);
    }

    #[test]
    fn darboux_vector_and_lancret() {
        assert_eq!(darboux_vector(&Frame::IDENTITY, 1.0, 0.0), Vec3::Z);
        let d = darboux_vector(&Frame::IDENTITY, 3.0, 4.0);
        assert_eq!(d, Vec3::new(4.0, 0.0, 3.0));
        assert!((d.norm() - 5.0).abs() < 1e-15);
        assert_eq!(lancret_curvature(3.0, 4.0), 5.0);
        assert_eq!(lancret_curvature(0.0, 0.0), 0.0);
        assert_eq!(lancret_curvature(-2.5, 0.0), 2.5);
    }

    #[test]
    fn frenet_rhs_is_darboux_cross() {
        let f = crate::geom::orthonormalize(&Frame::new(
            Vec3::new(0.9, 0.2, -0.1),
            Vec3::new(-0.2, 1.0, 0.3),
            Vec3::new(0.1, 0.0, 1.1),
        ))
        .unwrap();
        let (kappa, tau) = (1.7, -0.6);
        let d = darboux_vector(&f, kappa, tau);
        let (dt, dn, db) = frenet_rhs(&f, kappa, tau);
        assert!((dt - d.cross(f.e1)).norm() < 1e-14);
        assert!((dn - d.cross(f.e2)).norm() < 1e-14);
        assert!((db - d.cross(f.e3)).norm() < 1e-14);
    }

    #[test]
    fn rearrange_a_is_involution_and_flips_kappa() {
        let app = Apparatus::Frenet(helix_apparatus_sampled(1.0, 0.5, 201));
        let once = rearrange(&app, RearrangeVariant::A).unwrap();
        let a1 = once.as_frenet().unwrap();
        let g = Grid::new(a1.kappa().domain(), 7).unwrap();
        assert_eq!(a1.kappa().sample(&g).unwrap(), vec![-1.0; 7]);
        assert_eq!(a1.tau().sample(&g).unwrap(), vec![0.5; 7]);
        let twice = rearrange(&once, RearrangeVariant::A).unwrap();
        let a2 = twice.as_frenet().unwrap();
        let orig = app.as_frenet().unwrap();
        for (f, g) in a2.frames().iter().zip(orig.frames()) {
            assert_eq!(f, g);
        }
    }

    #[test]
    fn rearrange_d_then_e_is_consistent() {
        let app = Apparatus::Frenet(helix_apparatus_sampled(1.0, 0.5, 2001));
        let bishop = rearrange(&app, RearrangeVariant::D).unwrap();
        let frenet = rearrange(&bishop, RearrangeVariant::E).unwrap();
        let f = frenet.as_frenet().unwrap();
        // Tangent of the result is -(-T) ... = T of the Bishop system's N1,
        // i.e. the original tangent: (-N1, T, N2) with N1 = -T.
        let orig = app.as_frenet().unwrap();
        for (a, b) in f.frames().iter().zip(orig.frames()) {
            assert!((a.e1 - b.e1).norm() < 1e-14);
        }
        assert!(f.discrete_consistency().unwrap() < 1e-4);
    }

    #[test]
    fn rearrange_kind_mismatch_is_an_error() {
        let app = Apparatus::Frenet(helix_apparatus_sampled(1.0, 0.5, 101));
        assert!(matches!(
            rearrange(&app, RearrangeVariant::E),
            Err(Error::WrongApparatusKind(_))
        ));
        let bishop = rearrange(&app, RearrangeVariant::D).unwrap();
        assert!(matches!(
            rearrange(&bishop, RearrangeVariant::A),
            Err(Error::WrongApparatusKind(_))
        ));
    }

    #[test]
    fn rearrange_c_is_an_involution() {
        let app = Apparatus::Frenet(helix_apparatus_sampled(1.0, 0.5, 201));
        let cc = rearrange(&rearrange(&app, RearrangeVariant::C).unwrap(), RearrangeVariant::C)
            .unwrap();
        let orig = app.as_frenet().unwrap();
        let back = cc.as_frenet().unwrap();
        for (x, y) in back.frames().iter().zip(orig.frames()) {
            assert_eq!(x, y);
        }
        for s in orig.grid().iter().step_by(20) {
            assert_eq!(
                back.kappa().eval(s).unwrap(),
                orig.kappa().eval(s).unwrap()
            );
            assert_eq!(back.tau().eval(s).unwrap(), orig.tau().eval(s).unwrap());
        }
    }

    #[test]
    fn total_torsion_constant() {
        let dom = Interval::new(0.0, 3.0).unwrap();
        let tau = ScalarField::constant(dom, 0.7);
        assert!((total_torsion(&tau, 0.0, 3.0).unwrap() - 2.1).abs() < 1e-12);
    }

    #[test]
    fn total_torsion_of_constant_precession_period_vanishes() {
        // tau = omega sin(mu s) over one full period 2pi/mu.
        let (omega, mu) = (4.0, 3.0);
        let period = 2.0 * std::f64::consts::PI / mu;
        let dom = Interval::new(0.0, period).unwrap();
        let tau = ScalarField::from_fn(dom, move |s| omega * (mu * s).sin());
        assert!(total_torsion(&tau, 0.0, period).unwrap().abs() < 1e-10);
    }

    #[test]
    fn equivalent_developments_identity_and_sign_flip() {
        let dom = Interval::new(0.0, 2.0).unwrap();
        let kappa = ScalarField::from_fn(dom, |s| 1.0 + s);
        let tau = ScalarField::from_fn(dom, |s| 0.3 * s);
        let d = Development::new(kappa.clone(), tau.clone()).unwrap();
        let same = developments_equivalent(&d, &d, 1e-9).unwrap();
        assert!(same.equivalent);
        let phi = same.witness.unwrap();
        assert!(phi.eval(1.0).unwrap().abs() < 1e-9);

        let flipped = Development::new(kappa.neg(), tau.clone()).unwrap();
        let eq = developments_equivalent(&d, &flipped, 1e-9).unwrap();
        assert!(eq.equivalent);
        let phi = eq.witness.unwrap();
        assert!(mod_pi_distance(phi.eval(1.0).unwrap(), std::f64::consts::PI) < 1e-9);
    }

    #[test]
    fn shifted_torsion_is_not_equivalent() {
        let dom = Interval::new(0.0, 2.0).unwrap();
        let kappa = ScalarField::constant(dom, 1.0);
        let tau = ScalarField::constant(dom, 0.0);
        let d1 = Development::new(kappa.clone(), tau).unwrap();
        let d2 = Development::new(kappa, ScalarField::constant(dom, 1.0)).unwrap();
        assert!(!developments_equivalent(&d1, &d2, 1e-9).unwrap().equivalent);
    }

    #[test]
    fn equivalence_is_symmetric_across_a_line_gap() {
        // kappa vanishes on the middle third; the torsions may differ there
        // as long as the angle returns to a multiple of pi.
        let dom = Interval::new(0.0, 3.0).unwrap();
        let bump = |s: f64| {
            if !(1.0..=2.0).contains(&s) {
                1.0
            } else {
                0.0
            }
        };
        let kappa = ScalarField::from_fn(dom, bump);
        // tau and tau_bar differ by 2pi over the gap [1, 2], via a smooth
        // bump (30 u^2 (1-u)^2 integrates to 1) so quadrature converges.
        let window = |s: f64| {
            if !(1.0..=2.0).contains(&s) {
                return 0.0;
            }
            let u = s - 1.0;
            30.0 * u * u * (1.0 - u) * (1.0 - u)
        };
        let tau1 = ScalarField::from_fn(dom, move |s| {
            0.5 * bump(s) + 2.0 * std::f64::consts::PI * window(s)
        });
        let tau2 = ScalarField::from_fn(dom, move |s| 0.5 * bump(s));
        let d1 = Development::new(kappa.clone(), tau1).unwrap();
        let d2 = Development::new(kappa, tau2).unwrap();
        let fwd = developments_equivalent(&d1, &d2, 1e-4).unwrap();
        let bwd = developments_equivalent(&d2, &d1, 1e-4).unwrap();
        assert!(fwd.equivalent);
        assert!(bwd.equivalent);
    }

    #[test]
    fn total_torsion_invariant_mod_pi_for_equivalent_pairs() {
        let dom = Interval::new(0.0, 2.0).unwrap();
        let kappa = ScalarField::from_fn(dom, |s| 1.0 + 0.5 * (2.0 * s).sin());
        let tau = ScalarField::from_fn(dom, |s| 0.7 * s.cos());
        let d1 = Development::new(kappa.clone(), tau.clone()).unwrap();
        let d2 = Development::new(kappa.neg(), tau).unwrap();
        assert!(developments_equivalent(&d1, &d2, 1e-9).unwrap().equivalent);
        let t1 = total_torsion(d1.tau(), 0.0, 2.0).unwrap();
        let t2 = total_torsion(d2.tau(), 0.0, 2.0).unwrap();
        assert!(mod_pi_distance(t1, t2) < 1e-10);
    }
}
