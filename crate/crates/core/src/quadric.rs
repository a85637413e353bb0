//! Least-squares quadric fitting for containment checks.
//!
//! Fits a general quadric Q(x) = 0 (10 coefficients, unit-norm constraint)
//! to a point cloud and classifies the quadratic part's eigenvalue
//! signature after centering.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Outcome of a quadric fit.
#[derive(Debug, Clone)]
pub struct QuadricFit {
    /// max |Q(x_i)| over the (centered, scaled) input points, with the
    /// coefficient vector at unit norm.
    pub residual: f64,
    /// Eigenvalues of the quadratic part, normalized so the centered
    /// constant term is -1 (when centering is possible).
    pub eigenvalues: [f64; 3],
    /// Count of positive / negative normalized eigenvalues.
    pub positive: usize,
    pub negative: usize,
    /// True when the signature is (+, +, -): a hyperboloid of one sheet.
    pub one_sheet: bool,
}

/// Fit a quadric surface to the points by minimizing `|A c|` over unit-norm
/// coefficient vectors (smallest eigenvector of the normal matrix).
pub fn fit_quadric(points: &[Vec3]) -> Result<QuadricFit> {
    if points.len() < 100 {
        return Err(Error::GridTooSmall { need: 100, got: points.len() });
    }
    // Center and scale for conditioning; signature and relative residual
    // are unaffected.
    let n = points.len() as f64;
    let centroid = points.iter().fold(Vec3::ZERO, |a, &p| a + p) * (1.0 / n);
    let rms = (points
        .iter()
        .map(|&p| (p - centroid).dot(p - centroid))
        .sum::<f64>()
        / n)
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let scaled: Vec<Vec3> = points.iter().map(|&p| (p - centroid) * (1.0 / rms)).collect();

    let monomials = |p: Vec3| -> [f64; 10] {
        [
            p.x * p.x,
            p.y * p.y,
            p.z * p.z,
            p.x * p.y,
            p.x * p.z,
            p.y * p.z,
            p.x,
            p.y,
            p.z,
            1.0,
        ]
    };

    let mut normal = DMatrix::<f64>::zeros(10, 10);
    for &p in &scaled {
        let r = monomials(p);
        for i in 0..10 {
            for j in i..10 {
                normal[(i, j)] += r[i] * r[j];
            }
        }
    }
    for i in 0..10 {
        for j in 0..i {
            normal[(i, j)] = normal[(j, i)];
        }
    }
    if normal.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite design matrix".to_string()));
    }

    let eig = nalgebra::SymmetricEigen::new(normal);
    let (mut best, mut best_val) = (0, f64::INFINITY);
    for i in 0..10 {
        if eig.eigenvalues[i] < best_val {
            best_val = eig.eigenvalues[i];
            best = i;
        }
    }
    let c = eig.eigenvectors.column(best).into_owned();
    let c = &c / c.norm();

    let residual = scaled
        .iter()
        .map(|&p| {
            let r = monomials(p);
            (0..10).map(|i| c[i] * r[i]).sum::<f64>().abs()
        })
        .fold(0.0_f64, f64::max);

    // Quadratic part, linear part, constant.
    let m = Matrix3::new(
        c[0],
        c[3] / 2.0,
        c[4] / 2.0,
        c[3] / 2.0,
        c[1],
        c[5] / 2.0,
        c[4] / 2.0,
        c[5] / 2.0,
        c[2],
    );
    let b = Vector3::new(c[6], c[7], c[8]);
    let c0 = c[9];

    let meig = m.symmetric_eigen();
    let max_eig = meig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |a, &e| a.max(e.abs()));
    if max_eig < 1e-12 {
        return Err(Error::DegenerateFit(
            "quadratic part vanishes (plane fit)".to_string(),
        ));
    }

    // Centered constant k = c0 - b^T M^{-1} b / 4 when M is invertible.
    let (one_sheet_possible, k) = match m.lu().solve(&(-b / 2.0)) {
        Some(x0) => (true, c0 + b.dot(&x0) / 2.0),
        None => (false, c0),
    };

    // Normalize so the centered equation reads y^T (M / -k) y = 1.
    let scale = if k.abs() > 1e-9 * max_eig { -1.0 / k } else { 0.0 };
    let mut eigs = [0.0; 3];
    let mut pos = 0;
    let mut neg = 0;
    for i in 0..3 {
        let e = if scale != 0.0 {
            meig.eigenvalues[i] * scale
        } else {
            meig.eigenvalues[i]
        };
        eigs[i] = e;
        if e > 1e-9 * max_eig * scale.abs().max(1.0) {
            pos += 1;
        } else if e < -1e-9 * max_eig * scale.abs().max(1.0) {
            neg += 1;
        }
    }
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let one_sheet = one_sheet_possible && scale != 0.0 && pos == 2 && neg == 1;

    Ok(QuadricFit {
        residual,
        eigenvalues: eigs,
        positive: pos,
        negative: neg,
        one_sheet,
    })
}
