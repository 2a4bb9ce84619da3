use crate::error::{AdptError, Result};
use serde::{Deserialize, Serialize};

/// A point z = (q, p) of the classical phase space ℝ^{2d}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.is_empty() || q.len() != p.len() {
            return Err(AdptError::Dimension(format!(
                "phase point needs equal non-empty q and p, got {} and {}",
                q.len(),
                p.len()
            )));
        }
        if !q.iter().chain(p.iter()).all(|x| x.is_finite()) {
            return Err(AdptError::NonFinite("phase point".into()));
        }
        Ok(Self { q, p })
    }

    /// Shorthand for d = 1.
    pub fn new1(q: f64, p: f64) -> Self {
        Self { q: vec![q], p: vec![p] }
    }

    /// Builds a point from the stacked coordinates (q₁..q_d, p₁..p_d).
    pub fn from_coords(x: &[f64]) -> Self {
        let d = x.len() / 2;
        Self {
            q: x[..d].to_vec(),
            p: x[d..].to_vec(),
        }
    }

    pub fn d(&self) -> usize {
        self.q.len()
    }

    pub fn nv(&self) -> usize {
        2 * self.q.len()
    }

    /// Coordinate v of the stacked vector (q₁..q_d, p₁..p_d).
    pub fn coord(&self, v: usize) -> f64 {
        let d = self.d();
        if v < d {
            self.q[v]
        } else {
            self.p[v - d]
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        self.q.iter().chain(self.p.iter()).copied().collect()
    }

    pub fn shifted(&self, delta: &[f64]) -> Self {
        let d = self.d();
        Self {
            q: (0..d).map(|i| self.q[i] + delta[i]).collect(),
            p: (0..d).map(|i| self.p[i] + delta[d + i]).collect(),
        }
    }

    /// Exact bit pattern, used as a cache key.
    pub fn key(&self) -> Vec<u64> {
        self.q.iter().chain(self.p.iter()).map(|x| x.to_bits()).collect()
    }
}

impl std::fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(q={:?}, p={:?})", self.q, self.p)
    }
}
