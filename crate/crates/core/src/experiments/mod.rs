//! Validation experiments with structured results.
//!
//! Each experiment returns a [`Report`]: named checks against tolerances,
//! plot-ready tables and the slope fits behind any scaling claim. The
//! acceptance suite and the `adpt` runner both consume these.

pub mod crosscheck;
pub mod grid;
pub mod symbolic;

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::scaling::{fit_slope, SlopeFit};
use crate::symbol::PhasePoint;

pub use crosscheck::{
    bmt, bo_crosscheck, dirac_crosscheck, time_adiabatic, BmtParams, BoParams, DiracCheckParams, TimeAdiabaticParams,
};
pub use grid::{
    adiabatic_sweep, egorov_scaling, leakage_scaling, wigner_snapshot, EgorovParams, LeakageParams, SweepParams,
    WignerParams,
};
pub use symbolic::{moyal_algebra, projector_defect, unitary_defect, ExpansionParams};

/// Default ε sweep.
pub const EPS_SWEEP: [f64; 4] = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];

/// Tolerance on fitted slopes.
pub const SLOPE_TOL: f64 = 0.3;

/// RMS log-residual above which the largest-ε point is dropped from a fit.
pub const CURVATURE_RESIDUAL: f64 = 0.1;

/// One pass/fail comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    /// Target slope; `None` for upper-bound checks.
    pub target: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ tol`. NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, target: None, pass: value <= tol }
    }

    /// Passes when the fitted slope is within `tol` of `target`.
    pub fn slope(name: impl Into<String>, fit: &SlopeFit, target: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value: fit.slope,
            tol,
            target: Some(target),
            pass: (fit.slope - target).abs() <= tol,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        match self.target {
            Some(t) => write!(f, "{tag} {}: slope {:.3} (target {t} ± {})", self.name, self.value, self.tol),
            None => write!(f, "{tag} {}: {:.3e} (tol {:.1e})", self.name, self.value, self.tol),
        }
    }
}

/// A named log-log fit.
#[derive(Debug, Clone, Serialize)]
pub struct Fit {
    pub name: String,
    #[serde(flatten)]
    pub fit: SlopeFit,
    /// Whether the largest-ε point was left out because of curvature.
    pub dropped_largest: bool,
}

/// Columns of numbers with a header.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// CSV with a header row. Floats use Rust's shortest round-trip form, so
    /// equal values always print identically.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub checks: Vec<Check>,
    pub fits: Vec<Fit>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.into(), checks: Vec::new(), fits: Vec::new(), tables: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Fits `ys` against `eps`, records the fit and adds a slope check.
    pub fn slope_check(&mut self, name: &str, eps: &[f64], ys: &[f64], target: f64) -> Result<()> {
        let (fit, dropped) = fit_sweep(eps, ys)?;
        self.checks.push(Check::slope(name, &fit, target, SLOPE_TOL));
        self.fits.push(Fit { name: name.into(), fit, dropped_largest: dropped });
        Ok(())
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.fits.extend(other.fits);
        self.tables.extend(other.tables);
    }
}

/// Log-log fit over an ε sweep. With four or more points and a curved
/// profile (RMS residual above [`CURVATURE_RESIDUAL`]) the largest ε is
/// dropped.
pub fn fit_sweep(eps: &[f64], ys: &[f64]) -> Result<(SlopeFit, bool)> {
    let full = fit_slope(eps, ys)?;
    if eps.len() < 4 || full.residual <= CURVATURE_RESIDUAL {
        return Ok((full, false));
    }
    let imax = (0..eps.len()).max_by(|&a, &b| eps[a].total_cmp(&eps[b])).expect("nonempty");
    let (xs, zs): (Vec<f64>, Vec<f64>) =
        eps.iter().zip(ys).enumerate().filter(|(i, _)| *i != imax).map(|(_, (&x, &y))| (x, y)).unzip();
    Ok((fit_slope(&xs, &zs)?, true))
}

/// Uniform random phase-space points in a box, reproducible from `seed`.
pub fn sample_points(seed: u64, count: usize, q: (f64, f64), p: (f64, f64), d: usize) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let qs = (0..d).map(|_| rng.gen_range(q.0..q.1)).collect();
            let ps = (0..d).map(|_| rng.gen_range(p.0..p.1)).collect();
            PhasePoint::new(qs, ps).expect("matching dimensions")
        })
        .collect()
}

#[cfg(test)]
mod tests;
