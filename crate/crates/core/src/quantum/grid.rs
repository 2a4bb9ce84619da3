use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{AdptError, Result};

/// Periodic position grid on [−L/2, L/2) with an m-dimensional fiber.
///
/// Vectors are laid out position-major: component `a` at site `j` lives at
/// index `j·m + a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub n_points: usize,
    pub l: f64,
    pub m_fiber: usize,
    pub eps: f64,
}

pub const MAX_POINTS: usize = 512;

impl Grid1D {
    pub fn new(n_points: usize, l: f64, m_fiber: usize, eps: f64) -> Result<Self> {
        if !n_points.is_power_of_two() || !(4..=MAX_POINTS).contains(&n_points) {
            return Err(AdptError::Invalid(format!(
                "n_points must be a power of two in [4, {MAX_POINTS}], got {n_points}"
            )));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(AdptError::Invalid(format!("domain length must be positive, got {l}")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(AdptError::Invalid(format!("eps must be positive, got {eps}")));
        }
        if m_fiber == 0 {
            return Err(AdptError::Invalid("fiber dimension must be at least 1".into()));
        }
        Ok(Self { n_points, l, m_fiber, eps })
    }

    /// Total vector dimension n·m.
    pub fn dim(&self) -> usize {
        self.n_points * self.m_fiber
    }

    pub fn dx(&self) -> f64 {
        self.l / self.n_points as f64
    }

    pub fn dp(&self) -> f64 {
        2.0 * PI * self.eps / self.l
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.l + j as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Momentum p_k = 2πεk/L for k ∈ [−n/2, n/2).
    pub fn p(&self, k: i64) -> f64 {
        k as f64 * self.dp()
    }

    pub fn momenta(&self) -> Vec<f64> {
        let h = (self.n_points / 2) as i64;
        (-h..h).map(|k| self.p(k)).collect()
    }

    /// Largest representable |p|, attained at k = −n/2.
    pub fn p_nyquist(&self) -> f64 {
        self.p((self.n_points / 2) as i64)
    }

    /// Momentum midpoint ν·Δp/2 for ν ∈ [−n, n).
    pub fn p_mid(&self, nu: i64) -> f64 {
        0.5 * nu as f64 * self.dp()
    }

    /// Signed index difference wrapped into [−n/2, n/2).
    pub fn wrap(&self, r: i64) -> i64 {
        let n = self.n_points as i64;
        (r + n / 2).rem_euclid(n) - n / 2
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.n_points, self.l, self.m_fiber, eps)
    }
}
