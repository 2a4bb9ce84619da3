use super::context::ExpansionContext;
use super::moyal_jet;
use super::unitary::{u1_jet, U1Form};
use crate::error::{AdptError, Result};
use crate::linalg::{c, hermitian_defect, CMat};
use crate::symbol::moyal::moyal_mul;
use crate::symbol::{FormalSymbol, Jet, PhasePoint};

/// h = u#H#u* through the context order.
pub fn effective_symbol(ctx: &ExpansionContext, u: &FormalSymbol) -> Result<FormalSymbol> {
    let n = ctx.order();
    if u.order() < n {
        return Err(AdptError::Precondition("unitary series too short".into()));
    }
    moyal_mul(&moyal_mul(u, ctx.h(), n)?, &u.adjoint(), n)
}

/// Jet of the band block of h₁ in the ψ-basis,
/// ⟨ψ_α,H₁ψ_β⟩ − i⟨ψ_α,{E,ψ_β}⟩ − (i/2)⟨ψ_α,{H₀−E,ψ_β}⟩.
pub fn h1_block_jet(ctx: &ExpansionContext, z: &PhasePoint, k: usize) -> Result<Jet> {
    let psi = ctx.psi_jet(z, k + 1)?;
    let e = ctx.model().energy().jet(z, k + 1)?;
    let h0e = ctx.h().term(0).jet(z, k + 1)?.sub(&e);
    let h1 = ctx.h().term(1).jet(z, k)?;
    let ps = psi.adjoint().truncate(k);
    let p0 = psi.truncate(k);
    let inner = h1
        .mul(&p0)
        .sub(&e.poisson(&psi).scale(c(0.0, 1.0)))
        .sub(&h0e.poisson(&psi).scale(c(0.0, 0.5)));
    Ok(ps.mul(&inner))
}

/// ℓ×ℓ block of h₁ at z.
pub fn h1_block(ctx: &ExpansionContext, z: &PhasePoint) -> Result<CMat> {
    Ok(h1_block_jet(ctx, z, 0)?.value().clone())
}

/// ℓ×ℓ block of h₂ at z from the nine-term formula with the closed-form u₁
/// (in its unitarity-consistent form, see [`U1Form`]):
/// π_r(u₀H₂ + u₁H₁ − h₁u₁ + (u₁#H₀)₁ + (u₀#H₁)₁ − (E#u₁)₁ − (h₁#u₀)₁
///      + (u₀#H₀)₂ − (E#u₀)₂)u₀*π_r.
pub fn h2_block(ctx: &ExpansionContext, z: &PhasePoint) -> Result<CMat> {
    h2_block_with(ctx, z, U1Form::Unitary)
}

pub fn h2_block_with(ctx: &ExpansionContext, z: &PhasePoint, form: U1Form) -> Result<CMat> {
    let chi = ctx.chi();
    let h = ctx.h();
    let u0 = ctx.u0().jet(z, 2)?;
    let u1 = u1_jet(ctx, z, 1, form)?;
    let e = ctx.model().energy().jet(z, 2)?;
    let h0 = h.term(0).jet(z, 2)?;
    let h1 = h.term(1).jet(z, 1)?;
    let h2 = h.term(2).eval(z)?;
    let h1b = h1_block_jet(ctx, z, 1)?;
    let h1r = h1b.left_mul_const(&chi).right_mul_const(&chi.adjoint());
    let v = |j: &Jet| j.value().clone();
    let mut acc = v(&u0) * &h2 + v(&u1) * v(&h1) - v(&h1r) * v(&u1);
    acc += v(&moyal_jet(&u1, &h0, 1, 0)?);
    acc += v(&moyal_jet(&u0, &h1, 1, 0)?);
    acc -= v(&moyal_jet(&e, &u1, 1, 0)?);
    acc -= v(&moyal_jet(&h1r, &u0, 1, 0)?);
    acc += v(&moyal_jet(&u0, &h0, 2, 0)?);
    acc -= v(&moyal_jet(&e, &u0, 2, 0)?);
    Ok(chi.adjoint() * acc * v(&u0).adjoint() * chi)
}

/// Hermiticity defect of a block.
pub fn block_hermitian_defect(m: &CMat) -> f64 {
    hermitian_defect(m)
}
