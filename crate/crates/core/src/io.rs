//! File formats: CSV for bulk curve samples, JSON for curve and
//! development specs.
//!
//! CSV columns are fixed (`s,x,y,z,Tx,...,kappa,tau`) and values are written
//! with 17 significant digits, so a write/read/write round trip is
//! bit-identical.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write as IoWrite};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::apparatus::CurveSamples;
use crate::error::{Error, Result};
use crate::field::{Development, Grid, Interval, ScalarField};
use crate::geom::{orthonormalize, Frame, Vec3};
use crate::solver::{solve_natural_equations, SolverConfig};
use crate::zoo;

pub const CSV_HEADER: &str = "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau";

fn fmt(v: f64) -> String {
    // 17 significant digits: enough to reproduce any binary64 exactly.
    format!("{v:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write samples as CSV to any writer.
pub fn write_csv<W: IoWrite>(samples: &CurveSamples, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (i, s) in samples.grid.iter().enumerate() {
        let p = samples.positions[i];
        let f = samples.frames[i];
        let row = [
            s, p.x, p.y, p.z, f.e1.x, f.e1.y, f.e1.z, f.e2.x, f.e2.y, f.e2.z,
            f.e3.x, f.e3.y, f.e3.z, samples.kappa[i], samples.tau[i],
        ];
        let line: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Write samples as CSV to a file.
pub fn export_csv(samples: &CurveSamples, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_csv(samples, &mut w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Read samples back from CSV produced by [`export_csv`].
pub fn import_csv(path: &Path) -> Result<CurveSamples> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_csv(BufReader::new(file))
}

/// Parse CSV curve samples from any reader.
pub fn parse_csv<R: BufRead>(r: R) -> Result<CurveSamples> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty CSV input".to_string()))?
        .map_err(|e| Error::Malformed(format!("unreadable CSV input: {e}")))?;
    if header.trim_end() != CSV_HEADER {
        return Err(Error::Malformed(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    let mut s = Vec::new();
    let mut positions = Vec::new();
    let mut frames = Vec::new();
    let mut kappa = Vec::new();
    let mut tau = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Malformed(format!("unreadable CSV input: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut vals = [0.0_f64; 15];
        let mut count = 0;
        for (i, tok) in line.split(',').enumerate() {
            if i >= 15 {
                count = i + 1;
                continue;
            }
            vals[i] = tok.trim().parse::<f64>().map_err(|e| {
                Error::Malformed(format!("row {}: column {}: {e}", lineno + 2, i + 1))
            })?;
            count = i + 1;
        }
        if count != 15 {
            return Err(Error::Malformed(format!(
                "row {}: expected 15 columns, got {count}",
                lineno + 2
            )));
        }
        s.push(vals[0]);
        positions.push(Vec3::new(vals[1], vals[2], vals[3]));
        frames.push(Frame::new(
            Vec3::new(vals[4], vals[5], vals[6]),
            Vec3::new(vals[7], vals[8], vals[9]),
            Vec3::new(vals[10], vals[11], vals[12]),
        ));
        kappa.push(vals[13]);
        tau.push(vals[14]);
    }
    if s.len() < 2 {
        return Err(Error::Malformed(format!(
            "need at least 2 sample rows, got {}",
            s.len()
        )));
    }
    let grid = Grid::new(Interval::new(s[0], s[s.len() - 1])?, s.len())?;
    // The s column must actually be the uniform grid it claims to be.
    for (i, &si) in s.iter().enumerate() {
        if (si - grid.s(i)).abs() > 1e-9 * (1.0 + si.abs()) {
            return Err(Error::Malformed(format!(
                "row {}: s = {si} is not on a uniform grid (expected {})",
                i + 2,
                grid.s(i)
            )));
        }
    }
    CurveSamples::new(grid, positions, frames, kappa, tau)
}

/// A scalar-function rule in a JSON spec: a constant, a polynomial in `s`
/// (coefficients in ascending order), or a uniform table over the domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum RuleSpec {
    Const(f64),
    Poly(Vec<f64>),
    Table(Vec<f64>),
}

impl RuleSpec {
    /// Realize the rule over `domain`. Polynomials carry their exact
    /// derivative.
    pub fn to_field(&self, domain: Interval) -> Result<ScalarField> {
        match self {
            RuleSpec::Const(c) => Ok(ScalarField::constant(domain, *c)),
            RuleSpec::Poly(coeffs) => {
                if coeffs.is_empty() {
                    return Err(Error::Malformed(
                        "params: poly needs at least one coefficient".to_string(),
                    ));
                }
                let c = coeffs.clone();
                let d = c.clone();
                Ok(ScalarField::from_fn_with_derivative(
                    domain,
                    move |s| horner(&c, s),
                    move |s| horner_derivative(&d, s),
                ))
            }
            RuleSpec::Table(values) => {
                if values.len() < 2 {
                    return Err(Error::Malformed(
                        "params: table needs at least two values".to_string(),
                    ));
                }
                let grid = Grid::new(domain, values.len())?;
                ScalarField::from_samples(grid, values.clone())
            }
        }
    }
}

fn horner(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

fn horner_derivative(coeffs: &[f64], s: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * s + k as f64 * c)
}

/// Per-family parameters of a [`CurveSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneParams {
    pub kappa: RuleSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelixSpecParams {
    pub theta: f64,
    pub kappa: RuleSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlantHelixParams {
    pub m: f64,
    pub phi: RuleSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SalkowskiParams {
    pub m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecessionSpecParams {
    pub omega: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomParams {
    pub kappa: RuleSpec,
    pub tau: RuleSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Plane,
    Helix,
    SlantHelix,
    Salkowski,
    ConstantPrecession,
    CustomDevelopment,
}

/// Solver overrides accepted in a spec.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    pub renormalize_every: Option<usize>,
    pub tol_ortho: Option<f64>,
}

/// A curve generation request: family, parameters, domain, resolution, and
/// initial conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub family: Family,
    pub params: serde_json::Value,
    /// [s_min, s_max]
    pub domain: [f64; 2],
    /// Number of sample nodes in the output (>= 17).
    pub samples: usize,
    /// Row-major T, N, B.
    pub initial_frame: [f64; 9],
    pub initial_position: [f64; 3],
    #[serde(default)]
    pub solver: Option<SolverOverrides>,
}

fn family_params<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    serde_json::from_value(v.clone())
        .map_err(|e| Error::Malformed(format!("params: {e}")))
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<CurveSpec> {
        let spec: CurveSpec = serde_json::from_str(text)
            .map_err(|e| Error::Malformed(format!("spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.samples < 17 {
            return Err(Error::Malformed(format!(
                "samples: need at least 17 nodes, got {}",
                self.samples
            )));
        }
        Interval::new(self.domain[0], self.domain[1]).map_err(|e| {
            Error::Malformed(format!("domain: {e}"))
        })?;
        Ok(())
    }

    pub fn domain(&self) -> Result<Interval> {
        Interval::new(self.domain[0], self.domain[1])
    }

    /// The development (natural equations) this spec describes.
    pub fn development(&self) -> Result<Development> {
        let domain = self.domain()?;
        match self.family {
            Family::Plane => {
                let p: PlaneParams = family_params(&self.params)?;
                Development::new(
                    p.kappa.to_field(domain)?,
                    ScalarField::constant(domain, 0.0),
                )
            }
            Family::Helix => {
                let p: HelixSpecParams = family_params(&self.params)?;
                let hp = zoo::HelixParams::new(p.theta, p.kappa.to_field(domain)?)?;
                let app = zoo::helix_apparatus(&hp, self.samples)?;
                Development::new(app.kappa().clone(), app.tau().clone())
            }
            Family::SlantHelix => {
                let p: SlantHelixParams = family_params(&self.params)?;
                zoo::slant_helix_development(&p.phi.to_field(domain)?, p.m, self.samples)
            }
            Family::Salkowski => {
                let p: SalkowskiParams = family_params(&self.params)?;
                let (dev, _) = zoo::salkowski_development(p.m)?;
                if !dev.domain().contains_interval(&domain) {
                    return Err(Error::Malformed(format!(
                        "domain: {domain} exceeds the admissible Salkowski domain {}",
                        dev.domain()
                    )));
                }
                // Restrict the rule-backed fields to the requested window.
                let (k, t) = (dev.kappa().clone(), dev.tau().clone());
                Development::new(
                    ScalarField::from_fn(domain, move |s| k.eval(s).unwrap()),
                    ScalarField::from_fn(domain, move |s| t.eval(s).unwrap()),
                )
            }
            Family::ConstantPrecession => {
                let p: PrecessionSpecParams = family_params(&self.params)?;
                zoo::PrecessionParams::new(p.omega, p.mu)?.development(domain)
            }
            Family::CustomDevelopment => {
                let p: CustomParams = family_params(&self.params)?;
                Development::new(p.kappa.to_field(domain)?, p.tau.to_field(domain)?)
            }
        }
    }

    pub fn initial_frame(&self) -> Result<Frame> {
        orthonormalize(&Frame::from_array(self.initial_frame))
    }

    pub fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::with_steps(self.samples - 1);
        if let Some(o) = &self.solver {
            if let Some(r) = o.renormalize_every {
                cfg.renormalize_every = r.max(1);
            }
            if let Some(t) = o.tol_ortho {
                cfg.tol_ortho = t;
            }
        }
        cfg
    }

    /// Generate the curve: build the development and run the solver.
    pub fn build(&self) -> Result<CurveSamples> {
        let dev = self.development()?;
        let f0 = self.initial_frame()?;
        let x0 = Vec3::from_array(self.initial_position);
        solve_natural_equations(&dev, &f0, x0, &self.solver_config())
    }
}

/// A raw natural-equations request for `solve` and `classify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DevSpec {
    pub kappa: RuleSpec,
    pub tau: RuleSpec,
    pub domain: [f64; 2],
    pub samples: usize,
    #[serde(default)]
    pub initial_frame: Option<[f64; 9]>,
    #[serde(default)]
    pub initial_position: Option<[f64; 3]>,
    #[serde(default)]
    pub solver: Option<SolverOverrides>,
}

impl DevSpec {
    pub fn from_json(text: &str) -> Result<DevSpec> {
        let spec: DevSpec = serde_json::from_str(text)
            .map_err(|e| Error::Malformed(format!("spec: {e}")))?;
        if spec.samples < 17 {
            return Err(Error::Malformed(format!(
                "samples: need at least 17 nodes, got {}",
                spec.samples
            )));
        }
        Ok(spec)
    }

    pub fn development(&self) -> Result<Development> {
        let domain = Interval::new(self.domain[0], self.domain[1])
            .map_err(|e| Error::Malformed(format!("domain: {e}")))?;
        Development::new(
            self.kappa.to_field(domain)?,
            self.tau.to_field(domain)?,
        )
    }

    pub fn build(&self) -> Result<CurveSamples> {
        let dev = self.development()?;
        let f0 = match self.initial_frame {
            Some(a) => orthonormalize(&Frame::from_array(a))?,
            None => Frame::IDENTITY,
        };
        let x0 = Vec3::from_array(self.initial_position.unwrap_or([0.0; 3]));
        let mut cfg = SolverConfig::with_steps(self.samples - 1);
        if let Some(o) = &self.solver {
            if let Some(r) = o.renormalize_every {
                cfg.renormalize_every = r.max(1);
            }
            if let Some(t) = o.tol_ortho {
                cfg.tol_ortho = t;
            }
        }
        solve_natural_equations(&dev, &f0, x0, &cfg)
    }
}
