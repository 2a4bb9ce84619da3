use super::*;
use crate::linalg::{max_abs, op_norm, pauli, r, CMat};
use crate::symbol::{FdConfig, Jet, MatrixSymbol, PhasePoint, SJet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// H = e + n·σ with n = (sin q + 0.3p, cos(p)·0.7, 1 + 0.2q²), e = 0.4q p.
fn vec_field(v: &[SJet]) -> (SJet, [SJet; 3]) {
    let (q, p) = (&v[0], &v[1]);
    let e = (q * p) * 0.4;
    let n1 = q.sin() + p * 0.3;
    let n2 = p.cos() * 0.7;
    let n3 = q.sq() * 0.2 + 1.0;
    (e, [n1, n2, n3])
}

fn two_level() -> MatrixSymbol {
    MatrixSymbol::analytic("tl", 1, 2, 2, |z, k| {
        let v = SJet::vars(z, k);
        let (e, n) = vec_field(&v);
        let s = pauli();
        let id = CMat::identity(2, 2);
        Ok(Jet::from_scalars(z, &[(&e, &id), (&n[0], &s[0]), (&n[1], &s[1]), (&n[2], &s[2])]))
    })
    .with_hermitian(true)
}

fn oracle(z: &PhasePoint, k: usize) -> (Jet, SJet) {
    let v = SJet::vars(z, k);
    let (e, n) = vec_field(&v);
    let norm = (n[0].sq() + n[1].sq() + n[2].sq()).sqrt();
    let inv = norm.recip();
    let s = pauli();
    let id = CMat::identity(2, 2) * r(0.5);
    let h = [&n[0] * &inv * 0.5, &n[1] * &inv * 0.5, &n[2] * &inv * 0.5];
    let one = SJet::constant(z.nv(), k, 1.0);
    let p = Jet::from_scalars(z, &[(&one, &id), (&h[0], &s[0]), (&h[1], &s[1]), (&h[2], &s[2])]);
    (p, e + norm)
}

fn jet_diff(a: &Jet, b: &Jet) -> f64 {
    a.sub(b).max_abs()
}

#[test]
fn two_level_projector_is_half_one_plus_unit_vector() {
    let h = two_level();
    let band = BandSpec::index(1, 2, 0.1);
    let z = PhasePoint::new1(0.3, -0.8);
    let p = spectral_projector(&h, &z, &band).unwrap();
    let (po, eo) = oracle(&z, 0);
    assert!(max_abs(&(p - po.value())) < 1e-13);
    assert!((band_energy(&h, &z, &band).unwrap() - eo.value()).abs() < 1e-13);
}

#[test]
fn sigma3_reduced_resolvent() {
    let h = MatrixSymbol::constant(1, pauli()[2].clone());
    let rr = reduced_resolvent(&h, &PhasePoint::new1(0.0, 0.0), &BandSpec::index(1, 2, 0.5)).unwrap();
    let mut want = CMat::zeros(2, 2);
    want[(1, 1)] = r(-0.5);
    assert!(max_abs(&(rr - want)) < 1e-15);
}

#[test]
fn energy_window_selection() {
    let h = MatrixSymbol::constant(1, pauli()[2].clone());
    let z = PhasePoint::new1(0.0, 0.0);
    let e = band_energy(&h, &z, &BandSpec::energy(-2.0, 0.0, 1, 0.5)).unwrap();
    assert_eq!(e, -1.0);
    assert!(band_energy(&h, &z, &BandSpec::energy(-2.0, 2.0, 1, 0.5)).is_err());
}

#[test]
fn gap_violation_is_reported() {
    let s3 = pauli()[2].clone();
    let h = MatrixSymbol::from_fn("tanh", 1, 2, move |z| &s3 * r(z.q[0].tanh()));
    let band = BandSpec::index(1, 2, 0.1);
    let samples: Vec<_> = (-10..=10).map(|k| PhasePoint::new1(k as f64 * 0.5, 0.0)).collect();
    let rep = gap_check(&h, &band, &samples);
    assert_eq!(rep.min_gap, 0.0);
    assert_eq!(rep.argmin.unwrap().q[0], 0.0);
    assert!(!rep.violations.is_empty());
    assert!(matches!(
        spectral_projector(&h, &PhasePoint::new1(0.0, 0.0), &band),
        Err(crate::AdptError::GapViolation { .. })
    ));
}

#[test]
fn perturbative_jets_match_closed_form() {
    let h = two_level();
    let band = BandSpec::index(1, 2, 0.1);
    for &(q, p) in &[(0.3, -0.8), (-1.2, 0.4), (2.0, 1.5)] {
        let z = PhasePoint::new1(q, p);
        let sj = spectral_jets(&h.jet(&z, 5).unwrap(), &band).unwrap();
        let (po, eo) = oracle(&z, 5);
        assert!(jet_diff(&sj.projector, &po) < 1e-10, "{}", jet_diff(&sj.projector, &po));
        let de = sj.energy.coeffs().iter().zip(eo.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(de < 1e-10);
    }
}

#[test]
fn fd_jets_agree_with_perturbative() {
    let h = two_level();
    let band = BandSpec::index(1, 2, 0.1);
    let z = PhasePoint::new1(0.7, 0.2);
    let a = spectral_jets(&h.jet(&z, 2).unwrap(), &band).unwrap();
    let b = spectral_jets_fd(&h, &z, 2, &band, &FdConfig::default().scaled(10.0)).unwrap();
    assert!(jet_diff(&a.projector, &b.projector) < 1e-5);
    assert!(jet_diff(&a.resolvent, &b.resolvent) < 1e-5);
    assert!(jet_diff(&a.frame, &b.frame) < 1e-5, "{}", jet_diff(&a.frame, &b.frame));
}

#[test]
fn frame_jet_is_unitary_and_parallel_at_center() {
    let h = two_level();
    let band = BandSpec::index(0, 1, 0.1);
    let z = PhasePoint::new1(-0.4, 0.9);
    let sj = spectral_jets(&h.jet(&z, 4).unwrap(), &band).unwrap();
    let f = &sj.frame;
    let gram = f.adjoint().mul(f).add_const(&-CMat::identity(2, 2));
    assert!(gram.max_abs() < 1e-11);
    let b = sj.band_basis();
    assert!(sj.projector.mul(&b).sub(&b).max_abs() < 1e-11);
    for v in 0..2 {
        let berry = b.adjoint().value() * b.d1(v);
        assert!(max_abs(&berry) < 1e-12);
    }
    // R₀(H₀ − E) = 1 − π₀ as jets
    let id = CMat::identity(2, 2);
    let hm = h.jet(&z, 4).unwrap().sub(&sj.energy_matrix());
    let lhs = sj.resolvent.mul(&hm);
    let rhs = sj.projector.scale_re(-1.0).add_const(&id);
    assert!(jet_diff(&lhs, &rhs) < 1e-10);
}

fn random_projector(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for v in m.iter_mut() {
        *v = crate::linalg::c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let h = &m + m.adjoint();
    let (_, vecs) = crate::linalg::herm_eig(&h);
    let b = vecs.columns(0, rank).into_owned();
    &b * b.adjoint()
}

#[test]
fn nagy_intertwines_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 100 {
        let a = random_projector(&mut rng, 4, 2);
        let b = random_projector(&mut rng, 4, 2);
        match nagy_transport(&a, &b) {
            Ok(w) => {
                let id = CMat::identity(4, 4);
                assert!(op_norm(&(w.adjoint() * &w - &id)) < 1e-10);
                assert!(op_norm(&(&w * &b * w.adjoint() - &a)) < 1e-10);
                done += 1;
            }
            Err(crate::AdptError::Transport(d)) => assert!(d >= 1.0 - 1e-12),
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn band_model_symbols_share_cache() {
    let bm = BandModel::new(two_level(), BandSpec::index(1, 2, 0.1)).unwrap();
    let z = PhasePoint::new1(0.1, 0.2);
    let p = bm.projector().jet(&z, 3).unwrap();
    let e = bm.energy().jet(&z, 2).unwrap();
    let (po, eo) = oracle(&z, 3);
    assert!(jet_diff(&p, &po) < 1e-10);
    assert!((e.value()[(0, 0)].re - eo.value()).abs() < 1e-12);
    let u0 = bm.u0().eval(&z).unwrap();
    let pr = bm.reference_projector();
    assert!(max_abs(&(&u0 * po.value() * u0.adjoint() - pr)) < 1e-12);
}

#[test]
fn reference_frame_is_smooth_unitary_and_intertwining() {
    let bm = BandModel::new(two_level(), BandSpec::index(1, 2, 0.1)).unwrap();
    let f = bm.reference_frame(&PhasePoint::new1(0.0, 0.0)).unwrap();
    let z = PhasePoint::new1(0.4, -0.3);
    let j = f.jet(&z, 3).unwrap();
    assert!(j.adjoint().mul(&j).add_const(&-CMat::identity(2, 2)).max_abs() < 1e-11);
    let p = bm.projector().jet(&z, 3).unwrap();
    let sel = {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = r(1.0);
        m
    };
    let back = j.right_mul_const(&sel).mul(&j.adjoint());
    assert!(jet_diff(&back, &p) < 1e-10);
    // finite differences of the values agree with the jet derivative
    let h = 1e-5;
    let fp = f.eval(&z.shifted(&[h, 0.0])).unwrap();
    let fm = f.eval(&z.shifted(&[-h, 0.0])).unwrap();
    assert!(max_abs(&((fp - fm) / r(2.0 * h) - j.d1(0))) < 1e-8);
}
