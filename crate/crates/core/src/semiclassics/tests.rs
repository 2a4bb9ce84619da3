use std::sync::Arc;

use super::*;
use crate::linalg::{expm_herm, max_abs, pauli, r, CMat};
use crate::models::{Dirac, DiracFields, DiracParams, TwoLevel, TwoLevelParams};
use crate::symbol::{MatrixSymbol, PhasePoint, SJet};

fn free() -> FnField<impl Fn(&PhasePoint, usize) -> SJet + Send + Sync> {
    FnField::new(1, |z: &PhasePoint, k| SJet::var(z, 1, k).sq() * 0.5)
}

fn oscillator() -> FnField<impl Fn(&PhasePoint, usize) -> SJet + Send + Sync> {
    FnField::new(1, |z: &PhasePoint, k| (SJet::var(z, 0, k).sq() + SJet::var(z, 1, k).sq()) * 0.5)
}

fn dirac_energy(m: &Dirac) -> Arc<dyn ScalarField> {
    let m = m.clone();
    Arc::new(FnField::new(3, move |z: &PhasePoint, k| m.energy_jet(z, k)))
}

fn dirac_start() -> PhasePoint {
    PhasePoint::new(vec![0.3, -0.8, 1.1], vec![0.4, 0.2, -0.5]).unwrap()
}

#[test]
fn free_flow_is_linear() {
    let tr = classical_flow(&free(), &PhasePoint::new1(0.5, 1.3), 2.0, 1e-2).unwrap();
    let end = tr.end();
    assert!((end.coord(0) - (0.5 + 2.6)).abs() < 1e-12);
    assert!((end.coord(1) - 1.3).abs() < 1e-14);
}

#[test]
fn oscillator_orbit_closes() {
    let z = PhasePoint::new1(1.0, 0.3);
    let tr = classical_flow(&oscillator(), &z, 2.0 * std::f64::consts::PI, 1e-3).unwrap();
    let end = tr.end();
    assert!((end.coord(0) - 1.0).abs() < 1e-8 && (end.coord(1) - 0.3).abs() < 1e-8);
}

#[test]
fn two_level_energy_is_conserved() {
    let m = TwoLevel::new(TwoLevelParams::default());
    let e = m.energy_symbol();
    let tr = classical_flow(&e, &PhasePoint::new1(0.7, -0.4), 10.0, 1e-3).unwrap();
    assert!(tr.energy_drift() < 1e-8, "{}", tr.energy_drift());
}

#[test]
fn tangent_map_matches_finite_differences() {
    let m = TwoLevel::new(TwoLevelParams::default());
    let e = m.energy_symbol();
    let z = PhasePoint::new1(0.7, -0.4);
    let tr = classical_flow_tangent(&e, &z, 1.5, 1e-3).unwrap();
    let mt = tr.tangent.as_ref().unwrap().last().unwrap();
    let h = 1e-5;
    for j in 0..2 {
        let mut dz = [0.0; 2];
        dz[j] = h;
        let a = classical_flow(&e, &z.shifted(&dz), 1.5, 1e-3).unwrap().end().coords();
        dz[j] = -h;
        let b = classical_flow(&e, &z.shifted(&dz), 1.5, 1e-3).unwrap().end().coords();
        for i in 0..2 {
            assert!(((a[i] - b[i]) / (2.0 * h) - mt[(i, j)]).abs() < 1e-7);
        }
    }
}

#[test]
fn spin_transport_closed_forms() {
    let tr = classical_flow(&free(), &PhasePoint::new1(0.0, 1.0), 1.0, 1e-3).unwrap();
    let zero = MatrixSymbol::zero(1, 2);
    let f = spin_transport(&zero, &tr).unwrap();
    assert!(max_abs(&(f.d.last().unwrap() - CMat::identity(2, 2))) < 1e-15);
    let s = pauli();
    let h = &s[0] * r(0.3) + &s[2] * r(-0.7);
    let f = spin_transport(&MatrixSymbol::constant(1, h.clone()), &tr).unwrap();
    assert!(max_abs(&(f.d.last().unwrap() - expm_herm(&h, 1.0))) < 1e-9);
}

#[test]
fn spin_transport_group_law() {
    let m = Dirac::new(DiracParams::default());
    let e = dirac_energy(&m);
    let h1 = m.h1_symbol();
    let z = dirac_start();
    let (s, t, dt) = (0.6, 0.8, 1e-3);
    let tr = classical_flow(&*e, &z, s + t, dt).unwrap();
    let full = spin_transport(&h1, &tr).unwrap();
    let tr_s = classical_flow(&*e, &z, s, dt).unwrap();
    let ds = spin_transport(&h1, &tr_s).unwrap().d.pop().unwrap();
    let tr_t = classical_flow(&*e, tr_s.end(), t, dt).unwrap();
    let dt_ = spin_transport(&h1, &tr_t).unwrap().d.pop().unwrap();
    let d = max_abs(&(full.d.last().unwrap() - dt_ * ds));
    assert!(d < 1e-6, "{d}");
}

#[test]
fn spin_gradient_matches_finite_differences() {
    let m = Dirac::new(DiracParams::default());
    let e = dirac_energy(&m);
    let h1 = m.h1_symbol();
    let z = dirac_start();
    let tr = classical_flow_tangent(&*e, &z, 1.0, 1e-2).unwrap();
    let g = spin_transport_gradient(&h1, &tr).unwrap();
    let gl = g.gradient.as_ref().unwrap().last().unwrap();
    let h = 1e-5;
    for j in 0..6 {
        let mut dz = [0.0; 6];
        dz[j] = h;
        let dp = spin_transport(&h1, &classical_flow(&*e, &z.shifted(&dz), 1.0, 1e-2).unwrap()).unwrap();
        dz[j] = -h;
        let dm = spin_transport(&h1, &classical_flow(&*e, &z.shifted(&dz), 1.0, 1e-2).unwrap()).unwrap();
        let fd = (dp.d.last().unwrap() - dm.d.last().unwrap()) * r(0.5 / h);
        assert!(max_abs(&(fd - &gl[j])) < 1e-7, "direction {j}");
    }
}

#[test]
fn egorov_trivial_observables() {
    let m = Dirac::new(DiracParams::default());
    let eg = Egorov::new(dirac_energy(&m), m.h1_symbol());
    let z = dirac_start();
    let one = MatrixSymbol::constant(3, CMat::identity(2, 2));
    assert!(max_abs(&(egorov_evolve(&eg, &one, &z, 1.0).unwrap() - CMat::identity(2, 2))) < 1e-12);
    let x = MatrixSymbol::analytic("q1", 3, 2, 2, |z, k| {
        Ok(crate::symbol::Jet::from_scalars(z, &[(&SJet::var(z, 0, k), &CMat::identity(2, 2))]))
    });
    let tr = eg.flow(&z, 1.0).unwrap();
    let a = egorov_evolve(&eg, &x, &z, 1.0).unwrap();
    assert!(max_abs(&(a - CMat::identity(2, 2) * r(tr.end().coord(0)))) < 1e-12);
}

/// a(z,t) sampled around (z,t) for finite-difference residuals.
fn residual_parts(
    f: impl Fn(&PhasePoint, f64) -> CMat,
    z: &PhasePoint,
    t: f64,
    h: f64,
) -> (CMat, CMat, Vec<CMat>) {
    let n2 = z.nv();
    let dt = (f(z, t + h) - f(z, t - h)) * r(0.5 / h);
    let grad = (0..n2)
        .map(|j| {
            let mut d = vec![0.0; n2];
            d[j] = h;
            let p = f(&z.shifted(&d), t);
            d[j] = -h;
            (p - f(&z.shifted(&d), t)) * r(0.5 / h)
        })
        .collect();
    (f(z, t), dt, grad)
}

fn pb(da: &[CMat], db: &[CMat]) -> CMat {
    let d = da.len() / 2;
    let mut o = CMat::zeros(da[0].nrows(), db[0].ncols());
    for i in 0..d {
        o += &da[d + i] * &db[i] - &da[i] * &db[d + i];
    }
    o
}

fn scalar_grads(e: &dyn ScalarField, z: &PhasePoint, l: usize) -> Vec<CMat> {
    let s = e.jet(z, 1).unwrap();
    (0..z.nv()).map(|k| CMat::identity(l, l) * r(s.d1(k))).collect()
}

#[test]
fn egorov_principal_solves_transport_equation() {
    let m = Dirac::new(DiracParams::default());
    let e = dirac_energy(&m);
    let h1 = m.h1_symbol();
    let eg = Egorov::new(e.clone(), h1.clone()).with_dt(2e-3);
    let s = pauli();
    let a0 = MatrixSymbol::analytic("spin_obs", 3, 2, 2, move |z, k| {
        let q = SJet::var(z, 0, k);
        Ok(crate::symbol::Jet::from_scalars(z, &[(&q.cos(), &s[0]), (&q.sin(), &s[2])]))
    });
    let z = dirac_start();
    let t = 0.7;
    let (a, dt, grad) = residual_parts(|w, t| eg.evolve(&a0, w, t).unwrap(), &z, t, 1e-4);
    let hz = h1.eval(&z).unwrap();
    let res = dt - pb(&scalar_grads(&*e, &z, 2), &grad) - (&hz * &a - &a * &hz) * crate::linalg::c(0.0, 1.0);
    assert!(max_abs(&res) < 1e-5, "{}", max_abs(&res));
}

#[test]
fn egorov_first_correction_solves_its_equation() {
    let m = Dirac::new(DiracParams::default());
    let e = dirac_energy(&m);
    let h1 = m.h1_symbol();
    let eg = Egorov::new(e.clone(), h1.clone()).with_dt(2e-3);
    let x = MatrixSymbol::analytic("q1", 3, 2, 2, |z, k| {
        Ok(crate::symbol::Jet::from_scalars(z, &[(&SJet::var(z, 0, k), &CMat::identity(2, 2))]))
    });
    let z = dirac_start();
    let t = 0.7;
    let h = 1e-4;
    let (a1, dt, grad) = residual_parts(|w, t| eg.correct(&x, w, t).unwrap(), &z, t, h);
    let (_, _, g0) = residual_parts(|w, t| eg.evolve(&x, w, t).unwrap(), &z, t, h);
    let hj = h1.jet(&z, 1).unwrap();
    let dh: Vec<CMat> = (0..6).map(|k| hj.d1(k)).collect();
    let hz = hj.value();
    let inh = (pb(&dh, &g0) - pb(&g0, &dh)) * r(0.5);
    let res = dt - pb(&scalar_grads(&*e, &z, 2), &grad) - (hz * &a1 - &a1 * hz) * crate::linalg::c(0.0, 1.0) - inh;
    assert!(max_abs(&a1) > 1e-3);
    assert!(max_abs(&res) < 1e-4, "{}", max_abs(&res));
}

#[test]
fn egorov_correction_vanishes_without_h1() {
    let m = TwoLevel::new(TwoLevelParams::default());
    let eg = Egorov::new(Arc::new(m.energy_symbol()), m.h1_symbol());
    let a = MatrixSymbol::analytic("a", 1, 1, 1, |z, k| {
        let q = SJet::var(z, 0, k);
        Ok(crate::symbol::Jet::from_scalars(z, &[(&q.cos(), &CMat::identity(1, 1))]))
    });
    let a1 = eg.correct(&a, &PhasePoint::new1(0.3, 0.6), 1.0).unwrap();
    assert!(max_abs(&a1) < 1e-14);
}

#[test]
fn egorov_capabilities() {
    let m = Dirac::new(DiracParams::default());
    let eg = Egorov::new(dirac_energy(&m), m.h1_symbol());
    let s = pauli();
    let a = MatrixSymbol::constant(3, s[2].clone());
    let z = dirac_start();
    assert!(matches!(eg.correct(&a, &z, 0.5), Err(crate::AdptError::Capability(_))));
    assert!(matches!(egorov_correct(&eg, &a, 2, &z, 0.5), Err(crate::AdptError::Capability(_))));
}

#[test]
fn bmt_constant_precession() {
    let w = 1.7;
    let s = bmt_evolve(|_| [0.0, 0.0, w], [1.0, 0.0, 0.0], 2.0 * std::f64::consts::PI / w, 1e-3).unwrap();
    let e = s.last();
    assert!((e[0] - 1.0).abs() < 1e-8 && e[1].abs() < 1e-8 && e[2].abs() < 1e-8);
    let quarter = bmt_evolve(|_| [0.0, 0.0, w], [1.0, 0.0, 0.0], 0.5 * std::f64::consts::PI / w, 1e-3).unwrap();
    // ∂_t s = Ω ∧ s turns e₁ towards e₂
    assert!((quarter.last()[1] - 1.0).abs() < 1e-10);
    let par = bmt_evolve(|_| [0.3, -0.2, 0.5], [0.3 / 0.6164414002968976, -0.2 / 0.6164414002968976, 0.5 / 0.6164414002968976], 5.0, 1e-3).unwrap();
    for (a, b) in par.last().iter().zip(par.s[0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

fn sigma_dot(s: [f64; 3]) -> CMat {
    let p = pauli();
    &p[0] * r(s[0]) + &p[1] * r(s[1]) + &p[2] * r(s[2])
}

#[test]
fn bmt_matches_spin_transport_for_fixed_direction_field() {
    let m = Dirac::new(DiracParams { fields: DiracFields::axial_magnetic(), ..Default::default() });
    let e = dirac_energy(&m);
    let tr = classical_flow(&*e, &dirac_start(), 10.0, 1e-3).unwrap();
    let frame = spin_transport(&m.h1_symbol(), &tr).unwrap();
    let p = pauli();
    for k in 0..3 {
        let mut s0 = [0.0; 3];
        s0[k] = 1.0;
        let sv = bmt_along(&tr, |z| Ok(m.omega(z)), s0).unwrap();
        assert!(sv.norm_drift() < 1e-9);
        for (d, s) in frame.d.iter().zip(&sv.s) {
            let lhs = d.adjoint() * &p[k] * d;
            assert!(max_abs(&(lhs - sigma_dot(*s))) < 1e-8);
        }
    }
}

#[test]
fn trajectory_csv_has_header_and_rows() {
    let tr = classical_flow(&free(), &PhasePoint::new1(0.0, 1.0), 0.1, 1e-2).unwrap();
    let f = spin_transport(&MatrixSymbol::zero(1, 1), &tr).unwrap();
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &tr, Some(&f), None).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,q0,p0,E_r,re_D00,im_D00");
    assert_eq!(lines.count(), tr.times.len());
}
