use super::*;
use crate::linalg::{max_abs, CMat};
use crate::models::{TwoLevel, TwoLevelParams};
use crate::symbol::{FormalSymbol, PhasePoint};

fn twisted() -> TwoLevel {
    TwoLevel::new(TwoLevelParams {
        twist: 0.7,
        ..Default::default()
    })
}

fn points() -> Vec<PhasePoint> {
    vec![
        PhasePoint::new1(0.3, -0.8),
        PhasePoint::new1(-2.1, 0.4),
        PhasePoint::new1(1.7, 1.3),
    ]
}

fn ctx_local(m: &TwoLevel, n: usize) -> ExpansionContext {
    ExpansionContext::new(m.hamiltonian(), m.band(), n).unwrap()
}

fn ctx_global(m: &TwoLevel, n: usize) -> ExpansionContext {
    ctx_local(m, n).with_u0(m.u0()).unwrap()
}

#[test]
fn projector_defects_vanish_through_order_two() {
    let m = twisted();
    let ctx = ctx_local(&m, 2);
    let pi = moyal_projector(&ctx).unwrap();
    for z in points() {
        let d = projector_defects(ctx.h(), &pi, &z).unwrap();
        assert!(d.max() < 1e-9, "{d:?}");
    }
}

#[test]
fn pi1_matches_closed_form() {
    let m = twisted();
    let ctx = ctx_local(&m, 1);
    let pi = moyal_projector(&ctx).unwrap();
    for z in points() {
        let g = pi.term(1).eval(&z).unwrap();
        let cl = pi1_closed(&ctx, &z).unwrap();
        assert!(max_abs(&(&g - &cl)) < 1e-9, "{}", max_abs(&(&g - &cl)));
    }
}

#[test]
fn printed_pi1_diagonal_fails_with_phase_space_curvature() {
    let m = twisted();
    let ctx = ctx_local(&m, 1);
    let pi = moyal_projector(&ctx).unwrap();
    let z = PhasePoint::new1(0.3, -0.8);
    let g = pi.term(1).eval(&z).unwrap();
    let printed = pi1_od_jet(&ctx, &z, 0).unwrap().value() + pi1_diag_printed(&ctx, &z).unwrap();
    assert!(max_abs(&(g - printed)) > 1e-3);
}

#[test]
fn unitary_defects_vanish_in_both_gauges() {
    let m = twisted();
    for ctx in [ctx_local(&m, 2), ctx_global(&m, 2)] {
        let pi = moyal_projector(&ctx).unwrap();
        let u = moyal_unitary(&ctx, &pi).unwrap();
        for z in points() {
            let d = unitary_defects(&ctx, &u, &pi, &z).unwrap();
            assert!(d.max() < 1e-9, "{d:?}");
        }
    }
}

#[test]
fn u1_matches_unitary_closed_form() {
    let m = twisted();
    let ctx = ctx_global(&m, 1);
    let pi = moyal_projector(&ctx).unwrap();
    let u = moyal_unitary(&ctx, &pi).unwrap();
    for z in points() {
        let g = u.term(1).eval(&z).unwrap();
        let cl = u1_jet(&ctx, &z, 0, U1Form::Unitary).unwrap();
        assert!(max_abs(&(&g - cl.value())) < 1e-9, "{}", max_abs(&(&g - cl.value())));
    }
}

#[test]
fn h1_block_matches_generic_and_oracle() {
    let m = twisted();
    let ctx = ctx_global(&m, 1);
    let pi = moyal_projector(&ctx).unwrap();
    let u = moyal_unitary(&ctx, &pi).unwrap();
    let h = effective_symbol(&ctx, &u).unwrap();
    for z in points() {
        let gen = defects::band_block_at(&ctx, &h.term(1), &z).unwrap();
        let cl = h1_block(&ctx, &z).unwrap();
        assert!(max_abs(&(&gen - &cl)) < 1e-9);
        assert!((cl[(0, 0)].re - m.h1(&z)).abs() < 1e-10);
        assert!(cl[(0, 0)].im.abs() < 1e-12);
        let (comm, herm) = block_diagonality(&h, ctx.pi_r(), &z).unwrap();
        assert!(comm < 1e-9 && herm < 1e-9);
    }
}

#[test]
fn h2_block_matches_generic() {
    let m = twisted();
    for ctx in [ctx_local(&m, 2), ctx_global(&m, 2)] {
        let pi = moyal_projector(&ctx).unwrap();
        let u = moyal_unitary(&ctx, &pi).unwrap();
        let h = effective_symbol(&ctx, &u).unwrap();
        for z in points() {
            let gen = defects::band_block_at(&ctx, &h.term(2), &z).unwrap();
            let cl = h2_block_with(&ctx, &z, U1Form::Unitary).unwrap();
            assert!(max_abs(&(&gen - &cl)) < 1e-8, "{gen} {cl}");
        }
    }
}

#[test]
fn constant_hamiltonian_has_no_corrections() {
    let s = crate::linalg::pauli();
    let h0 = crate::symbol::MatrixSymbol::constant(1, &s[0] + &s[2]);
    let ctx = ExpansionContext::new(
        FormalSymbol::single(h0),
        crate::spectral::BandSpec::index(0, 1, 0.5),
        2,
    )
    .unwrap();
    let pi = moyal_projector(&ctx).unwrap();
    let u = moyal_unitary(&ctx, &pi).unwrap();
    let z = PhasePoint::new1(0.2, 0.1);
    for j in 1..=2 {
        assert!(max_abs(&pi.term(j).eval(&z).unwrap()) < 1e-14);
        assert!(max_abs(&u.term(j).eval(&z).unwrap()) < 1e-14);
    }
    let _ = CMat::zeros(1, 1);
}

#[test]
fn printed_u1_sign_only_matters_with_nonzero_bracket() {
    let z = PhasePoint::new1(0.3, -0.8);
    for (m, agree) in [(TwoLevel::new(Default::default()), true), (twisted(), false)] {
        let ctx = ctx_global(&m, 1);
        let pi = moyal_projector(&ctx).unwrap();
        let u = moyal_unitary(&ctx, &pi).unwrap();
        let g = u.term(1).eval(&z).unwrap();
        let diff = max_abs(&(g - u1_closed(&ctx, &z).unwrap()));
        assert_eq!(diff < 1e-9, agree, "{diff}");
    }
}

#[test]
fn local_and_global_frames_give_same_spectra() {
    let m = twisted();
    let z = PhasePoint::new1(-0.6, 0.5);
    let pl = moyal_projector(&ctx_local(&m, 2)).unwrap();
    let pg = moyal_projector(&ctx_global(&m, 2)).unwrap();
    for j in 0..=2 {
        let d = max_abs(&(pl.term(j).eval(&z).unwrap() - pg.term(j).eval(&z).unwrap()));
        assert!(d < 1e-12);
    }
}
