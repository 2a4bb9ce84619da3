use super::op::{spectral_sum, DenseOp};
use crate::error::{AdptError, Result};
use crate::linalg::C64;

/// A true projector obtained from an almost-projector.
#[derive(Debug, Clone)]
pub struct SpectralProjection {
    pub op: DenseOp,
    pub rank: usize,
    /// ‖Π − π̂‖.
    pub distance: f64,
}

/// Sum of the eigenprojections of π̂ with eigenvalue above 1/2.
///
/// Fails with [`AdptError::Cluster`] when an eigenvalue lies in [1/4, 3/4],
/// which means ε is too large or the order too low for the spectrum to split.
pub fn project_spectral(pi_hat: &DenseOp) -> Result<SpectralProjection> {
    let (vals, v) = pi_hat.eigh()?;
    if let Some(&bad) = vals.iter().find(|&&x| (0.25..=0.75).contains(&x)) {
        return Err(AdptError::Cluster(bad));
    }
    let mut distance = 0.0f64;
    let ind: Vec<C64> = vals
        .iter()
        .map(|&x| {
            let keep = x > 0.5;
            distance = distance.max((f64::from(u8::from(keep)) - x).abs());
            C64::new(if keep { 1.0 } else { 0.0 }, 0.0)
        })
        .collect();
    let rank = vals.iter().filter(|&&x| x > 0.5).count();
    let op = DenseOp::hermitian(spectral_sum(&v, &ind))?;
    Ok(SpectralProjection { op, rank, distance })
}

/// A unitary built from an almost-unitary û.
#[derive(Debug, Clone)]
pub struct Unitarized {
    pub op: DenseOp,
    /// ‖U − û‖.
    pub distance: f64,
    /// ‖UΠU* − Π_r‖.
    pub intertwining_defect: f64,
}

/// Ũ = û(û*û)^{−1/2}, then U = WŨ with the Nagy unitary W carrying ŨΠŨ*
/// onto Π_r, so that UΠU* = Π_r.
pub fn unitarize(u_hat: &DenseOp, pi: &DenseOp, pi_r: &DenseOp) -> Result<Unitarized> {
    let dim = u_hat.dim();
    if pi.dim() != dim || pi_r.dim() != dim {
        return Err(AdptError::Dimension("unitarize: operator sizes differ".into()));
    }
    let gram = DenseOp::hermitian(u_hat.adjoint().mul(u_hat).into_matrix())?;
    let (gv, _) = gram.eigh()?;
    let gdef = gv.iter().fold(0.0f64, |m, &x| m.max((x - 1.0).abs()));
    if gdef >= 1.0 {
        return Err(AdptError::Precondition(format!("‖û*û − 1‖ = {gdef:.3e} is not below 1")));
    }
    let u_tilde = u_hat.mul(&gram.herm_fn(|x| C64::new(1.0 / x.sqrt(), 0.0))?);
    let q = DenseOp::hermitian(u_tilde.mul(pi).mul(&u_tilde.adjoint()).into_matrix())?;
    let diff = pi_r.sub(&q);
    let dist = diff.op_norm();
    if dist >= 1.0 {
        return Err(AdptError::Transport(dist));
    }
    let id = DenseOp::identity(dim);
    let m = DenseOp::hermitian(id.sub(&diff.mul(&diff)).into_matrix())?;
    let inv_sqrt = m.herm_fn(|x| C64::new(1.0 / x.sqrt(), 0.0))?;
    let w = inv_sqrt.mul(&pi_r.mul(&q).add(&pi_r.complement().mul(&q.complement())));
    let u = w.mul(&u_tilde);
    let intertwining_defect = u.mul(pi).mul(&u.adjoint()).sub(pi_r).op_norm();
    let distance = u.sub(u_hat).op_norm();
    Ok(Unitarized { op: u, distance, intertwining_defect })
}
