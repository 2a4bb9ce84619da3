use super::context::ExpansionContext;
use crate::error::{AdptError, Result};
use crate::linalg::{c, CMat};
use crate::symbol::moyal::moyal_term_symbol;
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint};

/// Super-adiabatic projector π⁽ᴺ⁾ = π₀ + επ₁ + … + ε^Nπ_N.
///
/// At each order, with G = (π⁽ⁿ⁾#π⁽ⁿ⁾)_{n+1}:
/// πᴰ = −π₀Gπ₀ + (1−π₀)G(1−π₀), F = ([H, π⁽ⁿ⁾ + ε^{n+1}πᴰ]_#)_{n+1},
/// π_{n+1} = πᴰ + π₀FR₀ − R₀Fπ₀.
pub fn moyal_projector(ctx: &ExpansionContext) -> Result<FormalSymbol> {
    moyal_projector_to(ctx, ctx.order())
}

pub fn moyal_projector_to(ctx: &ExpansionContext, order: usize) -> Result<FormalSymbol> {
    let model = ctx.model();
    let (d, n) = (ctx.d(), ctx.n());
    let pi0 = model.projector();
    let r0 = model.resolvent();
    let mut pi = FormalSymbol::single(pi0.clone());
    for m in 1..=order {
        let g = moyal_term_symbol(&pi, &pi, m);
        let pd = {
            let (pi0, g) = (pi0.clone(), g.clone());
            let max = pi0.max_jet_order().min(g.max_jet_order());
            MatrixSymbol::from_jet_fn(&format!("piD{m}"), d, n, n, max, move |z, k| {
                let p = pi0.jet(z, k)?;
                let q = p.scale_re(-1.0).add_const(&CMat::identity(n, n));
                let g = g.jet(z, k)?;
                Ok(q.mul(&g).mul(&q).sub(&p.mul(&g).mul(&p)))
            })
        };
        let mut omega = pi.clone();
        omega.push(pd.clone())?;
        let f = moyal_term_symbol(ctx.h(), &omega, m).sub(&moyal_term_symbol(&omega, ctx.h(), m));
        let max = [pi0.max_jet_order(), r0.max_jet_order(), f.max_jet_order(), pd.max_jet_order()]
            .into_iter()
            .min()
            .unwrap();
        let (pi0c, r0c) = (pi0.clone(), r0.clone());
        let pm = MatrixSymbol::from_jet_fn(&format!("pi{m}"), d, n, n, max, move |z, k| {
            let p = pi0c.jet(z, k)?;
            let r = r0c.jet(z, k)?;
            let f = f.jet(z, k)?;
            Ok(pd.jet(z, k)?.add(&p.mul(&f).mul(&r)).sub(&r.mul(&f).mul(&p)))
        })
        .with_hermitian(true);
        pi.push(pm)?;
    }
    Ok(pi)
}

/// Jet of the closed-form π₁ᴼᴰ:
/// (i/2)(R₀{H₀+E, π₀}π₀ + π₀{π₀, H₀+E}R₀) + π₀H₁R₀ + R₀H₁π₀.
pub fn pi1_od_jet(ctx: &ExpansionContext, z: &PhasePoint, k: usize) -> Result<Jet> {
    let model = ctx.model();
    let p = model.projector().jet(z, k + 1)?;
    let r = model.resolvent().jet(z, k + 1)?;
    let h0e = ctx.h().term(0).jet(z, k + 1)?.add(&model.energy().jet(z, k + 1)?);
    let h1 = ctx.h().term(1).jet(z, k)?;
    let (p0, r0) = (p.truncate(k), r.truncate(k));
    let br = r0
        .mul(&h0e.poisson(&p))
        .mul(&p0)
        .add(&p0.mul(&p.poisson(&h0e)).mul(&r0));
    Ok(br
        .scale(c(0.0, 0.5))
        .add(&p0.mul(&h1).mul(&r0))
        .add(&r0.mul(&h1).mul(&p0)))
}

/// Jet of the diagonal part of π₁ forced by (π#π)₁ = π₁:
/// (i/2)(π₀{π₀,π₀}π₀ − (1−π₀){π₀,π₀}(1−π₀)).
pub fn pi1_diag_jet(ctx: &ExpansionContext, z: &PhasePoint, k: usize) -> Result<Jet> {
    let n = ctx.n();
    let p = ctx.model().projector().jet(z, k + 1)?;
    let pp = p.poisson(&p);
    let p0 = p.truncate(k);
    let q0 = p0.scale_re(-1.0).add_const(&CMat::identity(n, n));
    Ok(p0.mul(&pp).mul(&p0).sub(&q0.mul(&pp).mul(&q0)).scale(c(0.0, 0.5)))
}

/// Closed-form π₁ at z: π₁ᴼᴰ plus the diagonal part.
pub fn pi1_closed(ctx: &ExpansionContext, z: &PhasePoint) -> Result<CMat> {
    let od = pi1_od_jet(ctx, z, 0)?;
    let dg = pi1_diag_jet(ctx, z, 0)?;
    let v = od.add(&dg).value().clone();
    if !crate::linalg::is_finite(&v) {
        return Err(AdptError::NonFinite(format!("π₁ at {z}")));
    }
    Ok(v)
}

/// (i/2){π₀, π₀} at z, the diagonal term as printed next to π₁ᴼᴰ.
pub fn pi1_diag_printed(ctx: &ExpansionContext, z: &PhasePoint) -> Result<CMat> {
    let p = ctx.model().projector().jet(z, 1)?;
    Ok(p.poisson(&p).scale(c(0.0, 0.5)).value().clone())
}
