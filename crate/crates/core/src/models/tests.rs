use super::*;
use crate::expansion::*;
use crate::linalg::{max_abs, CMat};
use crate::symbol::PhasePoint;

fn bo_points() -> Vec<PhasePoint> {
    vec![
        PhasePoint::new(vec![0.3, -0.7], vec![0.8, -0.4]).unwrap(),
        PhasePoint::new(vec![1.4, 0.9], vec![-1.1, 0.6]).unwrap(),
        PhasePoint::new(vec![-2.0, 2.5], vec![0.2, 1.3]).unwrap(),
    ]
}

fn bo_ctx(m: &BornOppenheimer, n: usize) -> ExpansionContext {
    ExpansionContext::from_model(m.hamiltonian(), m.band_model().clone(), n)
        .unwrap()
        .with_u0(m.u0())
        .unwrap()
}

#[test]
fn bo_berry_connection_is_nonzero_and_h1_matches() {
    let m = BornOppenheimer::standard(Kinetic::Raw);
    let ctx = bo_ctx(&m, 1);
    for z in bo_points() {
        let a = m.berry_connection(&z).unwrap();
        assert!(a.iter().any(|x| max_abs(x) > 1e-3));
        assert!(a.iter().all(|x| x[(0, 0)].im.abs() < 1e-12));
        let cl = h1_block(&ctx, &z).unwrap();
        assert!(max_abs(&(cl - m.h1_oracle(&z).unwrap())) < 1e-10);
    }
}

#[test]
fn bo_h2_matches_generic_and_closed_form() {
    for kin in [Kinetic::Raw, Kinetic::Mollified { eta: 0.2 }] {
        let m = BornOppenheimer::standard(kin);
        let ctx = bo_ctx(&m, 2);
        let pi = moyal_projector(&ctx).unwrap();
        let u = moyal_unitary(&ctx, &pi).unwrap();
        let h = effective_symbol(&ctx, &u).unwrap();
        for z in bo_points() {
            let gen = defects::band_block_at(&ctx, &h.term(2), &z).unwrap();
            let or = m.h2_oracle(&z).unwrap();
            let cl = h2_block(&ctx, &z).unwrap();
            let printed = h2_block_with(&ctx, &z, U1Form::Printed).unwrap();
            assert!(max_abs(&(&gen - &or)) < 1e-9, "{kin:?} {gen} {or}");
            assert!(max_abs(&(&cl - &or)) < 1e-9);
            assert!(max_abs(&(&printed - &or)) < 1e-9);
        }
    }
}

#[test]
fn bo_u1_printed_form_holds_for_q_only_frames() {
    let m = BornOppenheimer::standard(Kinetic::Raw);
    let ctx = bo_ctx(&m, 1);
    let pi = moyal_projector(&ctx).unwrap();
    let u = moyal_unitary(&ctx, &pi).unwrap();
    for z in bo_points() {
        let g = u.term(1).eval(&z).unwrap();
        assert!(max_abs(&(g - u1_closed(&ctx, &z).unwrap())) < 1e-9);
    }
}

#[test]
fn bo_assembled_symbol_completes_the_square() {
    let m = BornOppenheimer::standard(Kinetic::Raw);
    let ctx = bo_ctx(&m, 2);
    for z in bo_points() {
        let e = m.band_model().jets(&z, 0).unwrap().energy.value();
        let h1 = h1_block(&ctx, &z).unwrap();
        let h2 = h2_block(&ctx, &z).unwrap();
        for eps in [0.1, 0.03] {
            let asm = CMat::identity(1, 1) * crate::linalg::r(e) + h1.clone() * crate::linalg::r(eps) + h2.clone() * crate::linalg::r(eps * eps);
            let or = m.h3_oracle(&z, eps).unwrap();
            assert!(max_abs(&(asm - or)) < 1e-10);
        }
    }
}

fn dirac_points(n: usize) -> Vec<PhasePoint> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    (0..n)
        .map(|_| {
            let q = (0..3).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let p = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            PhasePoint::new(q, p).unwrap()
        })
        .collect()
}

#[test]
fn dirac_fw_frame_intertwines() {
    let m = Dirac::new(DiracParams { c: 2.0, m: 0.7, ..Default::default() });
    let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), 1).unwrap().with_u0(m.u0()).unwrap();
    for z in dirac_points(5) {
        let (unit, inter) = ctx.u0_defects(&z).unwrap();
        assert!(unit < 1e-12 && inter < 1e-12);
        let p = ctx.model().projector().eval(&z).unwrap();
        assert!(max_abs(&(p - m.projector(&z))) < 1e-12);
    }
}

#[test]
fn dirac_omega_forms_agree() {
    let m = Dirac::new(DiracParams { c: 1.7, m: 0.8, e: 1.3, ..Default::default() });
    for z in dirac_points(20) {
        let (a, b) = (m.omega(&z), m.omega_p0_form(&z));
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-13);
        }
    }
}

#[test]
fn dirac_h1_is_spin_precession() {
    for params in [
        DiracParams::default(),
        DiracParams { hbar: 0.5, c: 2.0, m: 0.7, e: 1.3, ..Default::default() },
    ] {
        let m = Dirac::new(params.clone());
        let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), 1).unwrap().with_u0(m.u0()).unwrap();
        for z in dirac_points(20) {
            let gen = h1_block(&ctx, &z).unwrap() * crate::linalg::r(params.hbar);
            let or = m.h1_oracle(&z);
            let rel = max_abs(&(&gen - &or)) / max_abs(&or);
            assert!(rel < 1e-9, "{rel} {gen} {or}");
        }
    }
}

#[test]
fn free_dirac_has_no_corrections() {
    let m = Dirac::new(DiracParams { fields: DiracFields::none(), ..Default::default() });
    let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), 2).unwrap().with_u0(m.u0()).unwrap();
    let pi = moyal_projector(&ctx).unwrap();
    let z = dirac_points(1).remove(0);
    assert!(max_abs(&pi.term(1).eval(&z).unwrap()) < 1e-13);
    assert!(max_abs(&pi.term(2).eval(&z).unwrap()) < 1e-13);
    assert!(max_abs(&h1_block(&ctx, &z).unwrap()) < 1e-13);
    assert!(max_abs(&u1_closed(&ctx, &z).unwrap()) < 1e-13);
}

#[test]
fn dirac_1d_frame_intertwines() {
    let m = Dirac1d::new(Default::default());
    let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), 1).unwrap().with_u0(m.u0()).unwrap();
    for k in 0..10 {
        let z = PhasePoint::new1(-4.0 + 0.8 * k as f64, 1.5 - 0.3 * k as f64);
        let (unit, inter) = ctx.u0_defects(&z).unwrap();
        assert!(unit < 1e-12 && inter < 1e-12, "{unit} {inter}");
    }
}

#[test]
fn dirac_omega_small_velocity_limit() {
    let m = Dirac::new(DiracParams { c: 3.0, e: 1.2, ..Default::default() });
    let q = [0.4, -1.1, 2.0];
    let a = m.params.fields.vector_jet(&PhasePoint::new(q.to_vec(), vec![0.0; 3]).unwrap(), 0);
    // p = (e/c)A(q) makes k = 0
    let p: Vec<f64> = (0..3).map(|i| m.params.e / m.params.c * a[i].value()).collect();
    let z = PhasePoint::new(q.to_vec(), p).unwrap();
    let b = m.params.fields.magnetic(&z);
    let om = m.omega(&z);
    let f = m.params.e / (m.params.m * m.params.c);
    for i in 0..3 {
        assert!((om[i] - f * b[i]).abs() < 1e-14);
    }
}

fn crossing_frame(alpha: f64) -> KatoFrame {
    KatoFrame::new(TimeDepHamiltonian::avoided_crossing(0.6, 1.3).unwrap())
        .unwrap()
        .with_gauge_rate(alpha)
}

#[test]
fn kato_frame_is_unitary_and_intertwines() {
    let f = crossing_frame(0.0);
    let ctx = ExpansionContext::new(f.hamiltonian().howland(), f.hamiltonian().band().clone(), 1)
        .unwrap()
        .with_u0(f.u0())
        .unwrap();
    for t in [-2.0, -0.4, 0.0, 0.9, 2.5] {
        let (unit, inter) = ctx.u0_defects(&PhasePoint::new1(t, 0.3)).unwrap();
        assert!(unit < 1e-8 && inter < 1e-8, "{t}: {unit} {inter}");
    }
}

#[test]
fn howland_matches_explicit_time_adiabatic_h() {
    for alpha in [0.0, 0.4] {
        let f = crossing_frame(alpha);
        for t in [-1.5, -0.3, 0.0, 0.7, 2.0] {
            let gen = howland_effective(&f, t, 0.8).unwrap();
            let exp = time_adiabatic_h(&f, t, 2).unwrap();
            for j in 0..3 {
                let d = max_abs(&(&gen.terms[j] - &exp.terms[j]));
                assert!(d < 1e-6, "α={alpha} t={t} order {j}: {d} {} {}", gen.terms[j], exp.terms[j]);
            }
            if alpha == 0.0 {
                assert!(max_abs(&exp.terms[1]) < 1e-12);
            }
            assert!(max_abs(&exp.terms[2]) > 1e-3);
        }
    }
}

#[test]
fn howland_constant_h_has_no_corrections() {
    let s = crate::linalg::pauli();
    let h = &s[0] * crate::linalg::r(0.4) + &s[2] * crate::linalg::r(0.9);
    let f = KatoFrame::new(TimeDepHamiltonian::constant(h, crate::spectral::BandSpec::index(1, 2, 0.5)).unwrap())
        .unwrap();
    for t in [-1.0, 0.5] {
        let gen = howland_effective(&f, t, 0.2).unwrap();
        let exp = time_adiabatic_h(&f, t, 2).unwrap();
        for j in 1..3 {
            assert_eq!(max_abs(&gen.terms[j]), 0.0, "order {j}");
            assert_eq!(max_abs(&exp.terms[j]), 0.0);
        }
    }
}

#[test]
fn howland_projector_is_eta_independent() {
    let f = crossing_frame(0.0);
    let ham = f.hamiltonian();
    let ctx = ExpansionContext::new(ham.howland(), ham.band().clone(), 2).unwrap();
    let pi = moyal_projector(&ctx).unwrap();
    let z = PhasePoint::new1(0.4, -0.6);
    for j in 0..=2 {
        let d = pi.term(j).jet(&z, 1).unwrap().d1(1);
        assert!(max_abs(&d) < 1e-12, "π_{j}: {d}");
    }
}

#[test]
fn rotating_field_second_order_matches_exact_quasienergy() {
    let (b, w) = (0.8, 1.7);
    let f = KatoFrame::new(TimeDepHamiltonian::rotating(b, w).unwrap()).unwrap();
    let exact = w * w / (8.0 * b);
    for t in [0.0, 0.6, 1.9] {
        let h = time_adiabatic_h(&f, t, 2).unwrap();
        let gen = howland_effective(&f, t, 0.0).unwrap();
        assert!(max_abs(&h.terms[1]) < 1e-10);
        assert!((h.terms[2][(0, 0)].re - exact).abs() < 1e-9);
        assert!((gen.terms[2][(0, 0)].re - exact).abs() < 1e-6);
        let half = time_adiabatic_h2_half(&f, t).unwrap()[(0, 0)].re;
        assert!((half + exact / 2.0).abs() < 1e-9);
    }
}
