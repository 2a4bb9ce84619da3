use faer::complex_native::c64;
use faer::Mat;
use serde::{Deserialize, Serialize};

use super::op::{spectral_sum, DenseOp, WaveFn};
use crate::error::{AdptError, Result};
use crate::linalg::C64;

/// Whether a time is measured in microscopic units s (evolution e^{−iĤs}) or
/// macroscopic units t = εs (evolution e^{−iĤt/ε}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeMode {
    Microscopic,
    Macroscopic,
}

impl TimeMode {
    /// The exponent τ in e^{−iĤτ}.
    pub fn tau(self, time: f64, eps: f64) -> f64 {
        match self {
            TimeMode::Microscopic => time,
            TimeMode::Macroscopic => time / eps,
        }
    }
}

impl std::str::FromStr for TimeMode {
    type Err = AdptError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "microscopic" => Ok(Self::Microscopic),
            "macroscopic" => Ok(Self::Macroscopic),
            _ => Err(AdptError::Invalid(format!("time mode must be microscopic or macroscopic, got {s:?}"))),
        }
    }
}

/// Reusable eigendecomposition of a hermitian Ĥ for exact propagation.
#[derive(Clone)]
pub struct Propagator {
    vals: Vec<f64>,
    vecs: Mat<c64>,
}

impl Propagator {
    pub fn new(h: &DenseOp) -> Result<Self> {
        let (vals, vecs) = h.eigh()?;
        Ok(Self { vals, vecs })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.vals
    }

    /// e^{−iĤτ}.
    pub fn evolution(&self, tau: f64) -> DenseOp {
        let ph: Vec<C64> = self.vals.iter().map(|&l| C64::from_polar(1.0, -l * tau)).collect();
        DenseOp::with_flag(spectral_sum(&self.vecs, &ph), tau == 0.0)
    }

    pub fn apply(&self, psi: &WaveFn, tau: f64) -> WaveFn {
        WaveFn::from_raw(psi.grid(), self.evolution(tau).apply(psi.values()))
    }

    /// ‖(1 − P) e^{−iĤτ} P‖, optionally restricted to W·…·W.
    pub fn leakage(&self, proj: &DenseOp, tau: f64, window: Option<&DenseOp>) -> f64 {
        let x = proj.complement().mul(&self.evolution(tau)).mul(proj);
        restricted_norm(&x, window)
    }

    /// ‖e^{iĤτ} Â₀ e^{−iĤτ} − Â_τ‖, optionally restricted to W·…·W.
    pub fn heisenberg_error(&self, a0: &DenseOp, a_t: &DenseOp, tau: f64, window: Option<&DenseOp>) -> f64 {
        let u = self.evolution(tau);
        let x = u.adjoint().mul(a0).mul(&u).sub(a_t);
        restricted_norm(&x, window)
    }
}

pub fn restricted_norm(x: &DenseOp, window: Option<&DenseOp>) -> f64 {
    match window {
        Some(w) => x.sandwich(w).op_norm(),
        None => x.op_norm(),
    }
}

/// ψ_τ = e^{−iĤτ}ψ with τ from the time mode.
pub fn propagate(h: &DenseOp, psi: &WaveFn, time: f64, mode: TimeMode) -> Result<WaveFn> {
    if h.dim() != psi.values().len() {
        return Err(AdptError::Dimension("operator and wavefunction sizes differ".into()));
    }
    let tau = mode.tau(time, psi.grid().eps);
    Ok(Propagator::new(h)?.apply(psi, tau))
}

/// ‖(1 − P) e^{−iĤτ} P‖ over the full grid space.
pub fn leakage(h: &DenseOp, proj: &DenseOp, time: f64, mode: TimeMode, eps: f64) -> Result<f64> {
    Ok(Propagator::new(h)?.leakage(proj, mode.tau(time, eps), None))
}

/// ‖e^{iĥt/ε} Ŵ(a₀) e^{−iĥt/ε} − Ŵ(a(t))‖ at macroscopic time t.
pub fn egorov_error(h: &DenseOp, a0: &DenseOp, a_t: &DenseOp, t: f64, eps: f64, window: Option<&DenseOp>) -> Result<f64> {
    Ok(Propagator::new(h)?.heisenberg_error(a0, a_t, t / eps, window))
}

/// ‖(e^{−iĤs} − û* e^{−iĥs} û) Π‖ for the effective dynamics at microscopic s.
pub fn effective_dynamics_error(
    full: &Propagator,
    effective: &Propagator,
    u: &DenseOp,
    pi: &DenseOp,
    s: f64,
    window: Option<&DenseOp>,
) -> f64 {
    let approx = u.adjoint().mul(&effective.evolution(s)).mul(u);
    let x = full.evolution(s).sub(&approx).mul(pi);
    restricted_norm(&x, window)
}
