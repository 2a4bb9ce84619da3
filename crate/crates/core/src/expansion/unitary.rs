use super::context::ExpansionContext;
use super::projector::pi1_od_jet;
use crate::error::{AdptError, Result};
use crate::linalg::{c, CMat};
use crate::symbol::moyal::{moyal_mul, moyal_term_symbol};
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint};

/// Moyal-unitary u⁽ᴺ⁾ with u#π#u* = π_r through order N.
///
/// At each order, A = (u⁽ⁿ⁾#u⁽ⁿ⁾*)_{n+1} and a = −A/2 restore unitarity;
/// with w = u⁽ⁿ⁾ + ε^{n+1}au₀ and B = (w#π#w*)_{n+1}, b = [π_r, B] removes
/// the off-diagonal intertwining defect. The free diagonal antihermitian part
/// is set to zero, so u_{n+1} = (a + b)u₀.
pub fn moyal_unitary(ctx: &ExpansionContext, pi: &FormalSymbol) -> Result<FormalSymbol> {
    let order = ctx.order();
    if pi.order() < order {
        return Err(AdptError::Precondition(format!(
            "projector series of order {} cannot build u of order {order}",
            pi.order()
        )));
    }
    let (d, n) = (ctx.d(), ctx.n());
    let u0 = ctx.u0().clone();
    let pi_r = ctx.pi_r().clone();
    let mut u = FormalSymbol::single(u0.clone());
    for m in 1..=order {
        let big_a = moyal_term_symbol(&u, &u.adjoint(), m);
        let au0 = {
            let (a, u0) = (big_a.clone(), u0.clone());
            let max = a.max_jet_order().min(u0.max_jet_order());
            MatrixSymbol::from_jet_fn(&format!("a{m}u0"), d, n, n, max, move |z, k| {
                Ok(a.jet(z, k)?.scale_re(-0.5).mul(&u0.jet(z, k)?))
            })
        };
        let mut w = u.clone();
        w.push(au0.clone())?;
        let wp = moyal_mul(&w, &pi.truncated(m), m)?;
        let big_b = moyal_term_symbol(&wp, &w.adjoint(), m);
        let max = [au0.max_jet_order(), big_b.max_jet_order(), u0.max_jet_order()]
            .into_iter()
            .min()
            .unwrap();
        let (u0c, pr) = (u0.clone(), pi_r.clone());
        let um = MatrixSymbol::from_jet_fn(&format!("u{m}"), d, n, n, max, move |z, k| {
            let b = big_b.jet(z, k)?;
            let comm = b.left_mul_const(&pr).sub(&b.right_mul_const(&pr));
            Ok(au0.jet(z, k)?.add(&comm.mul(&u0c.jet(z, k)?)))
        });
        u.push(um)?;
    }
    Ok(u)
}

/// Sign convention for the hermitian part of u₁*u₀ in the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum U1Form {
    /// The coefficient −i/4 of {u₀, u₀*} as printed.
    Printed,
    /// +i/4, the value forced by (u#u*)₁ = 0.
    Unitary,
}

/// Jet of the closed form
/// u₁* = u₀*(∓(i/4){u₀,u₀*} + [u₀π₁ᴼᴰu₀*, π_r] + (i/4)[{u₀,π₀}u₀* + u₀{π₀,u₀*}, π_r]),
/// returned as u₁.
pub fn u1_jet(ctx: &ExpansionContext, z: &PhasePoint, k: usize, form: U1Form) -> Result<Jet> {
    let u = ctx.u0().jet(z, k + 1)?;
    let us = u.adjoint();
    let p = ctx.model().projector().jet(z, k + 1)?;
    let od = pi1_od_jet(ctx, z, k)?;
    let (u0, us0) = (u.truncate(k), us.truncate(k));
    let pr = ctx.pi_r();
    let comm = |x: &Jet| x.right_mul_const(pr).sub(&x.left_mul_const(pr));
    let sign = match form {
        U1Form::Printed => -1.0,
        U1Form::Unitary => 1.0,
    };
    let herm = u.poisson(&us).scale(c(0.0, 0.25 * sign));
    let mid = comm(&u0.mul(&od).mul(&us0));
    let third = u.poisson(&p).mul(&us0).add(&u0.mul(&p.poisson(&us)));
    let x = herm.add(&mid).add(&comm(&third).scale(c(0.0, 0.25)));
    Ok(us0.mul(&x).adjoint())
}

/// u₁ at z from the closed form as printed.
pub fn u1_closed(ctx: &ExpansionContext, z: &PhasePoint) -> Result<CMat> {
    Ok(u1_jet(ctx, z, 0, U1Form::Printed)?.value().clone())
}
