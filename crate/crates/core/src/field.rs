//! Scalar functions of arclength, uniform grids, and quadrature.
//!
//! A [`ScalarField`] is either a closed-form rule (optionally carrying its
//! derivative) or a uniform sample table with linear interpolation. No
//! extrapolation: evaluation outside the domain is an error.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A closed interval [a, b] of arclength values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Interval> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidConfig(format!(
                "interval [{a}, {b}] must be finite and increasing"
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    /// Slack used when checking containment, to absorb roundoff at the
    /// endpoints of grids built over the same interval.
    fn slack(&self) -> f64 {
        1e-12 * (1.0 + self.len() + self.a.abs() + self.b.abs())
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.a - self.slack() && s <= self.b + self.slack()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.contains(other.a) && self.contains(other.b)
    }

    /// Clamp a value that is within slack of the interval onto it.
    pub fn clamp(&self, s: f64) -> f64 {
        s.clamp(self.a, self.b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// A uniform grid of `nodes >= 2` arclength values spanning an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    interval: Interval,
    nodes: usize,
}

impl Grid {
    pub fn new(interval: Interval, nodes: usize) -> Result<Grid> {
        if nodes < 2 {
            return Err(Error::GridTooSmall { need: 2, got: nodes });
        }
        Ok(Grid { interval, nodes })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Grid spacing.
    pub fn h(&self) -> f64 {
        self.interval.len() / (self.nodes - 1) as f64
    }

    /// Arclength at node `i`.
    pub fn s(&self, i: usize) -> f64 {
        if i + 1 == self.nodes {
            self.interval.b
        } else {
            self.interval.a + self.h() * i as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(move |i| self.s(i))
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.nodes == other.nodes
            && (self.interval.a - other.interval.a).abs() <= self.interval.slack()
            && (self.interval.b - other.interval.b).abs() <= self.interval.slack()
    }
}

type Rule = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Rule { f: Rule, df: Option<Rule> },
    Table { values: Arc<Vec<f64>> },
}

/// A scalar function of arclength: closed-form rule or uniform sample table
/// with linear interpolation.
#[derive(Clone)]
pub struct ScalarField {
    repr: Repr,
    domain: Interval,
    /// Grid the table lives on (for table fields; also the preferred
    /// sampling resolution for rule fields when one was recorded).
    grid: Option<Grid>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rule { .. } => write!(f, "ScalarField::Rule({})", self.domain),
            Repr::Table { values } => write!(
                f,
                "ScalarField::Table({}, {} nodes)",
                self.domain,
                values.len()
            ),
        }
    }
}

impl ScalarField {
    pub fn from_fn<F>(domain: Interval, f: F) -> ScalarField
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            repr: Repr::Rule { f: Arc::new(f), df: None },
            domain,
            grid: None,
        }
    }

    /// Closed-form rule together with its exact derivative.
    pub fn from_fn_with_derivative<F, G>(domain: Interval, f: F, df: G) -> ScalarField
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            repr: Repr::Rule {
                f: Arc::new(f),
                df: Some(Arc::new(df)),
            },
            domain,
            grid: None,
        }
    }

    pub fn constant(domain: Interval, c: f64) -> ScalarField {
        ScalarField::from_fn_with_derivative(domain, move |_| c, |_| 0.0)
    }

    /// Table field on a uniform grid; `values.len()` must match the grid.
    pub fn from_samples(grid: Grid, values: Vec<f64>) -> Result<ScalarField> {
        if values.len() != grid.nodes() {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-node grid",
                values.len(),
                grid.nodes()
            )));
        }
        Ok(ScalarField {
            repr: Repr::Table { values: Arc::new(values) },
            domain: grid.interval(),
            grid: Some(grid),
        })
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Table grid, if this is a table field.
    pub fn table_grid(&self) -> Option<Grid> {
        match self.repr {
            Repr::Table { .. } => self.grid,
            Repr::Rule { .. } => None,
        }
    }

    pub fn is_rule(&self) -> bool {
        matches!(self.repr, Repr::Rule { .. })
    }

    pub fn has_derivative_rule(&self) -> bool {
        matches!(&self.repr, Repr::Rule { df: Some(_), .. })
    }

    /// Evaluate at `s`. Outside the domain this is an error.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !self.domain.contains(s) {
            return Err(Error::DomainMismatch(format!(
                "s = {s} outside field domain {}",
                self.domain
            )));
        }
        let s = self.domain.clamp(s);
        match &self.repr {
            Repr::Rule { f, .. } => Ok(f(s)),
            Repr::Table { values } => {
                let grid = self.grid.expect("table field carries its grid");
                let h = grid.h();
                let t = (s - self.domain.a) / h;
                let i = (t.floor() as usize).min(grid.nodes() - 2);
                let w = t - i as f64;
                Ok(values[i] * (1.0 - w) + values[i + 1] * w)
            }
        }
    }

    /// Evaluate the derivative at `s`: exact rule if recorded, otherwise a
    /// central difference quotient.
    pub fn eval_derivative(&self, s: f64) -> Result<f64> {
        match &self.repr {
            Repr::Rule { df: Some(df), .. } => {
                if !self.domain.contains(s) {
                    return Err(Error::DomainMismatch(format!(
                        "s = {s} outside field domain {}",
                        self.domain
                    )));
                }
                Ok(df(self.domain.clamp(s)))
            }
            _ => {
                let h = self
                    .grid
                    .map(|g| g.h())
                    .unwrap_or(self.domain.len() * 1e-6);
                let lo = (s - h).max(self.domain.a);
                let hi = (s + h).min(self.domain.b);
                Ok((self.eval(hi)? - self.eval(lo)?) / (hi - lo))
            }
        }
    }

    /// Values at every node of `grid` (which must lie inside the domain).
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        if !self.domain.contains_interval(&grid.interval()) {
            return Err(Error::DomainMismatch(format!(
                "grid {} outside field domain {}",
                grid.interval(),
                self.domain
            )));
        }
        grid.iter().map(|s| self.eval(s)).collect()
    }

    /// Pointwise map; rule fields stay rules (derivative rule is dropped),
    /// table fields stay tables.
    pub fn map<F>(&self, op: F) -> ScalarField
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        match &self.repr {
            Repr::Rule { f, .. } => {
                let f = f.clone();
                ScalarField {
                    repr: Repr::Rule {
                        f: Arc::new(move |s| op(f(s))),
                        df: None,
                    },
                    domain: self.domain,
                    grid: self.grid,
                }
            }
            Repr::Table { values } => ScalarField {
                repr: Repr::Table {
                    values: Arc::new(values.iter().map(|&v| op(v)).collect()),
                },
                domain: self.domain,
                grid: self.grid,
            },
        }
    }

    pub fn neg(&self) -> ScalarField {
        match &self.repr {
            Repr::Rule { f, df } => {
                let f = f.clone();
                let df = df.clone();
                ScalarField {
                    repr: Repr::Rule {
                        f: Arc::new(move |s| -f(s)),
                        df: df.map(|d| {
                            Arc::new(move |s| -d(s)) as Rule
                        }),
                    },
                    domain: self.domain,
                    grid: self.grid,
                }
            }
            Repr::Table { .. } => self.map(|v| -v),
        }
    }
}

/// Composite Simpson over uniformly spaced node values; an odd interval
/// count is finished with one trapezoid step.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 2, "need at least two nodes");
    let intervals = n - 1;
    let even = intervals - intervals % 2;
    let mut acc = 0.0;
    let mut i = 0;
    while i < even {
        acc += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
        i += 2;
    }
    if intervals % 2 == 1 {
        acc += h / 2.0 * (values[n - 2] + values[n - 1]);
    }
    acc
}

/// Cumulative integral at every node: composite Simpson at even node
/// indices, one trapezoid step to reach each odd index.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 2, "need at least two nodes");
    let mut out = vec![0.0; n];
    for i in 1..n {
        if i % 2 == 0 {
            out[i] = out[i - 2] + h / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
        } else {
            out[i] = out[i - 1] + h / 2.0 * (values[i - 1] + values[i]);
        }
    }
    out
}

/// Integrate a field over [a, b] with composite Simpson on a fresh grid of
/// at least `min_nodes` nodes (rounded so the interval count is even).
pub fn integrate_field(field: &ScalarField, a: f64, b: f64, min_nodes: usize) -> Result<f64> {
    if !(field.domain().contains(a) && field.domain().contains(b) && a < b) {
        return Err(Error::DomainMismatch(format!(
            "[{a}, {b}] not inside field domain {}",
            field.domain()
        )));
    }
    let mut nodes = min_nodes.max(3);
    if nodes % 2 == 0 {
        nodes += 1; // odd node count -> even interval count
    }
    let grid = Grid::new(Interval::new(a, b)?, nodes)?;
    let vals = field.sample(&grid)?;
    Ok(simpson(&vals, grid.h()))
}

/// Second-order finite differences on uniformly spaced samples: central on
/// interior nodes, one-sided three-point stencils at the ends.
pub fn difference_quotients(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "need at least three nodes");
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    out
}

/// The natural equations of a curve: a curvature and a torsion field over a
/// shared domain.
#[derive(Debug, Clone)]
pub struct Development {
    kappa: ScalarField,
    tau: ScalarField,
}

impl Development {
    pub fn new(kappa: ScalarField, tau: ScalarField) -> Result<Development> {
        let (dk, dt) = (kappa.domain(), tau.domain());
        if !(dk.contains_interval(&dt) && dt.contains_interval(&dk)) {
            return Err(Error::DomainMismatch(format!(
                "kappa domain {dk} and tau domain {dt} differ"
            )));
        }
        Ok(Development { kappa, tau })
    }

    pub fn kappa(&self) -> &ScalarField {
        &self.kappa
    }

    pub fn tau(&self) -> &ScalarField {
        &self.tau
    }

    pub fn domain(&self) -> Interval {
        self.kappa.domain()
    }
}
