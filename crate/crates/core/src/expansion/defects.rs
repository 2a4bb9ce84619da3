//! Per-order defect norms of the constructed series.

use super::context::ExpansionContext;
use crate::error::Result;
use crate::linalg::{op_norm, CMat};
use crate::symbol::moyal::moyal_term;
use crate::symbol::{FormalSymbol, MatrixSymbol, PhasePoint};
use serde::Serialize;

/// Defects of the projector series at one point, by order.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectorDefects {
    pub idempotency: Vec<f64>,
    pub hermiticity: Vec<f64>,
    pub commutation: Vec<f64>,
}

impl ProjectorDefects {
    pub fn max(&self) -> f64 {
        self.idempotency
            .iter()
            .chain(&self.hermiticity)
            .chain(&self.commutation)
            .copied()
            .fold(0.0, f64::max)
    }
}

/// Orders 0..=N of π#π − π, π − π* and [H, π]_#.
pub fn projector_defects(h: &FormalSymbol, pi: &FormalSymbol, z: &PhasePoint) -> Result<ProjectorDefects> {
    let n = pi.order();
    let mut out = ProjectorDefects {
        idempotency: Vec::new(),
        hermiticity: Vec::new(),
        commutation: Vec::new(),
    };
    for k in 0..=n {
        let pk = pi.term(k).eval(z)?;
        let sq = moyal_term(pi, pi, k, z)?;
        out.idempotency.push(op_norm(&(sq - &pk)));
        out.hermiticity.push(op_norm(&(&pk - pk.adjoint())));
        let cm = moyal_term(h, pi, k, z)? - moyal_term(pi, h, k, z)?;
        out.commutation.push(op_norm(&cm));
    }
    Ok(out)
}

/// Defects of the unitary series at one point, by order.
#[derive(Debug, Clone, Serialize)]
pub struct UnitaryDefects {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub intertwining: Vec<f64>,
}

impl UnitaryDefects {
    pub fn max(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .chain(&self.intertwining)
            .copied()
            .fold(0.0, f64::max)
    }
}

/// Orders 0..=N of u*#u − 1, u#u* − 1 and u#π#u* − π_r.
pub fn unitary_defects(
    ctx: &ExpansionContext,
    u: &FormalSymbol,
    pi: &FormalSymbol,
    z: &PhasePoint,
) -> Result<UnitaryDefects> {
    let n = u.order();
    let nn = ctx.n();
    let us = u.adjoint();
    let up = crate::symbol::moyal_mul(u, &pi.truncated(n), n)?;
    let mut out = UnitaryDefects {
        left: Vec::new(),
        right: Vec::new(),
        intertwining: Vec::new(),
    };
    for k in 0..=n {
        let (id, pr) = if k == 0 {
            (CMat::identity(nn, nn), ctx.pi_r().clone())
        } else {
            (CMat::zeros(nn, nn), CMat::zeros(nn, nn))
        };
        out.left.push(op_norm(&(moyal_term(&us, u, k, z)? - &id)));
        out.right.push(op_norm(&(moyal_term(u, &us, k, z)? - &id)));
        out.intertwining.push(op_norm(&(moyal_term(&up, &us, k, z)? - pr)));
    }
    Ok(out)
}

/// Largest ‖[h_j, π_r]‖ and hermiticity defect over orders of h at z.
pub fn block_diagonality(h: &FormalSymbol, pi_r: &CMat, z: &PhasePoint) -> Result<(f64, f64)> {
    let mut comm: f64 = 0.0;
    let mut herm: f64 = 0.0;
    for t in h.terms() {
        let m = t.eval(z)?;
        comm = comm.max(op_norm(&(&m * pi_r - pi_r * &m)));
        herm = herm.max(op_norm(&(&m - m.adjoint())));
    }
    Ok((comm, herm))
}

/// Band block χ*Mχ of an n×n matrix.
pub fn band_block(ctx: &ExpansionContext, m: &CMat) -> CMat {
    let chi = ctx.chi();
    chi.adjoint() * m * chi
}

/// Band block of the symbol's value at z.
pub fn band_block_at(ctx: &ExpansionContext, s: &MatrixSymbol, z: &PhasePoint) -> Result<CMat> {
    Ok(band_block(ctx, &s.eval(z)?))
}
