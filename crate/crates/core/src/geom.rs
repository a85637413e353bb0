//! 3D vector and orthonormal-frame primitives.
//!
//! Everything else in the crate is built on [`Vec3`] and [`Frame`]. Frames
//! are positively oriented orthonormal triples; handedness is repaired
//! rather than rejected (`e3` is always rebuilt as `e1 x e2`).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default orthonormality tolerance for frames.
pub const TOL_ORTHO: f64 = 1e-9;

/// A 3-vector with f64 components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Result<Vec3> {
        let n = self.norm();
        if n < 0.5 {
            return Err(Error::DegenerateFrame(format!(
                "vector norm {n:.3e} below 0.5"
            )));
        }
        Ok(self * (1.0 / n))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Vec3 {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, c: f64) -> Vec3 {
        Vec3::new(self.x * c, self.y * c, self.z * c)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A positively oriented orthonormal triple attached to a curve point.
///
/// For Frenet use the components are (T, N, B); for Bishop use (T, N1, N2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        e1: Vec3::X,
        e2: Vec3::Y,
        e3: Vec3::Z,
    };

    pub const fn new(e1: Vec3, e2: Vec3, e3: Vec3) -> Frame {
        Frame { e1, e2, e3 }
    }

    /// Maximum deviation from orthonormality (unit norms, orthogonality,
    /// and right-handedness) in max-norm.
    pub fn ortho_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        d = d.max((self.e1.dot(self.e1) - 1.0).abs());
        d = d.max((self.e2.dot(self.e2) - 1.0).abs());
        d = d.max((self.e3.dot(self.e3) - 1.0).abs());
        d = d.max(self.e1.dot(self.e2).abs());
        d = d.max(self.e1.dot(self.e3).abs());
        d = d.max(self.e2.dot(self.e3).abs());
        d = d.max((self.e1.cross(self.e2).dot(self.e3) - 1.0).abs());
        d
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.ortho_defect() <= tol
    }

    /// Row-major 9-array (e1, e2, e3).
    pub fn to_array(&self) -> [f64; 9] {
        let [a, b, c] = self.e1.to_array();
        let [d, e, f] = self.e2.to_array();
        let [g, h, i] = self.e3.to_array();
        [a, b, c, d, e, f, g, h, i]
    }

    pub fn from_array(a: [f64; 9]) -> Frame {
        Frame::new(
            Vec3::new(a[0], a[1], a[2]),
            Vec3::new(a[3], a[4], a[5]),
            Vec3::new(a[6], a[7], a[8]),
        )
    }
}

/// Gram-Schmidt in the order e1, e2, e3, with e3 rebuilt as e1 x e2 so the
/// result is always right-handed.
pub fn orthonormalize(f: &Frame) -> Result<Frame> {
    let e1 = f.e1.normalized()?;
    let raw2 = f.e2 - e1 * e1.dot(f.e2);
    if f.e2.norm() < 0.5 {
        return Err(Error::DegenerateFrame(format!(
            "vector norm {:.3e} below 0.5",
            f.e2.norm()
        )));
    }
    let e2 = raw2.normalized().map_err(|_| {
        Error::DegenerateFrame("e2 nearly parallel to e1".to_string())
    })?;
    if f.e3.norm() < 0.5 {
        return Err(Error::DegenerateFrame(format!(
            "vector norm {:.3e} below 0.5",
            f.e3.norm()
        )));
    }
    let e3 = e1.cross(e2);
    Ok(Frame::new(e1, e2, e3))
}

/// Rotate the normal plane (e2, e3) by `phi` radians, leaving e1 fixed.
///
/// Uses the convention e2_new = cos(phi) e2 - sin(phi) e3,
/// e3_new = sin(phi) e2 + cos(phi) e3.
pub fn rotate_normal_plane(f: &Frame, phi: f64) -> Frame {
    let (s, c) = phi.sin_cos();
    Frame::new(f.e1, f.e2 * c - f.e3 * s, f.e2 * s + f.e3 * c)
}
