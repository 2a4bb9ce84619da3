use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{c, pauli, CMat, C64};
use crate::models::{TwoLevel, TwoLevelParams};
use crate::symbol::MatrixSymbol;

fn grid(n: usize, m: usize, eps: f64) -> Grid1D {
    Grid1D::new(n, 8.0, m, eps).unwrap()
}

fn max_entry(a: &DenseOp, b: &DenseOp) -> f64 {
    let mut w = 0.0f64;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            w = w.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    w
}

fn scalar(name: &str, f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static) -> MatrixSymbol {
    MatrixSymbol::from_fn(name, 1, 1, move |z| CMat::from_element(1, 1, f(z.coord(0), z.coord(1))))
}

fn random_wavefn(g: &Grid1D, rng: &mut ChaCha8Rng) -> WaveFn {
    let v = (0..g.dim()).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    WaveFn::new(g, v).unwrap()
}

/// Independent Fourier-multiplier construction: Σ_k g(p_k) e^{ip_k(x_i − x_j)/ε}/n.
fn fourier_multiplier(g: &Grid1D, f: impl Fn(f64) -> f64) -> DenseOp {
    let n = g.n_points;
    let h = (n / 2) as i64;
    DenseOp::from_fn(n, |i, j| {
        (-h..h)
            .map(|k| C64::from_polar(f(g.p(k)), g.p(k) * (g.x(i) - g.x(j)) / g.eps))
            .sum::<C64>()
            / n as f64
    })
}

#[test]
fn grid_validation() {
    assert!(Grid1D::new(48, 8.0, 1, 0.1).is_err());
    assert!(Grid1D::new(1024, 8.0, 1, 0.1).is_err());
    assert!(Grid1D::new(64, -1.0, 1, 0.1).is_err());
    assert!(Grid1D::new(64, 8.0, 0, 0.1).is_err());
    assert!(Grid1D::new(64, 8.0, 1, 0.0).is_err());
    let g = grid(64, 2, 0.125);
    assert_eq!(g.dim(), 128);
    assert_eq!(g.momenta().len(), 64);
    assert!((g.p_nyquist() - PI * 0.125 * 64.0 / 8.0).abs() < 1e-12);
}

#[test]
fn identity_symbol_gives_identity() {
    let g = grid(32, 2, 0.1);
    let one = MatrixSymbol::constant(1, CMat::identity(2, 2));
    let op = weyl_quantize(&one, &g).unwrap();
    assert!(op.is_hermitian());
    assert!(max_entry(&op, &DenseOp::identity(64)) < 1e-12);
}

#[test]
fn position_symbol_is_diagonal() {
    let g = grid(64, 1, 0.1);
    let f = |q: f64| (2.0 * PI * q / 8.0).cos() + 0.3 * (4.0 * PI * q / 8.0).sin();
    let op = weyl_quantize(&scalar("f", move |q, _| c(f(q), 0.0)), &g).unwrap();
    let diag = DenseOp::from_fn(64, |i, j| if i == j { c(f(g.x(i)), 0.0) } else { c(0.0, 0.0) });
    assert!(max_entry(&op, &diag) < 1e-12);
}

#[test]
fn momentum_symbol_is_spectral_derivative() {
    let g = grid(64, 1, 0.07);
    let op = weyl_quantize(&scalar("p", |_, p| c(p, 0.0)), &g).unwrap();
    assert!(max_entry(&op, &fourier_multiplier(&g, |p| p)) < 1e-10);
    let op = weyl_quantize(&scalar("tanh", |_, p| c(p.tanh(), 0.0)), &g).unwrap();
    assert!(max_entry(&op, &fourier_multiplier(&g, f64::tanh)) < 1e-10);
}

#[test]
fn quantization_is_linear_and_star_compatible() {
    let g = grid(32, 2, 0.1);
    let m = TwoLevel::new(TwoLevelParams { twist: 0.6, ..Default::default() });
    let u0 = m.u0();
    let h0 = m.h0();
    let q = weyl_from_samples(&g, 4, |z| {
        let (u, h) = (u0.eval(z)?, h0.eval(z)?);
        Ok(vec![u.clone(), u.adjoint(), h.clone(), &u * c(0.5, 0.2) + &h * c(-1.5, 0.0)])
    })
    .unwrap();
    assert!(!q.ops[0].is_hermitian());
    assert!(q.ops[2].is_hermitian());
    assert!(max_entry(&q.ops[1], &q.ops[0].adjoint()) < 1e-10);
    let lin = q.ops[0].scale(c(0.5, 0.2)).add(&q.ops[2].scale(c(-1.5, 0.0)));
    assert!(max_entry(&q.ops[3], &lin) < 1e-10);
}

#[test]
fn product_of_position_and_momentum_follows_moyal() {
    // f(q)#p = fp + (iε/2)f' exactly, so Ŵ(f)Ŵ(p) = Ŵ(fp + iεf'/2) away from the band edge.
    let g = grid(64, 1, 0.1);
    let k = 2.0 * PI / 8.0;
    let f = scalar("f", move |q, _| c((k * q).cos(), 0.0));
    let p = scalar("p", |_, p| c(p, 0.0));
    let eps = g.eps;
    let fp = scalar("f#p", move |q, p| c((k * q).cos() * p, -0.5 * eps * k * (k * q).sin()));
    let lhs = weyl_quantize(&f, &g).unwrap().mul(&weyl_quantize(&p, &g).unwrap());
    let rhs = weyl_quantize(&fp, &g).unwrap();
    let w = momentum_window(&g, 0.5 * g.p_nyquist());
    assert!(lhs.sub(&rhs).sandwich(&w).op_norm() < 1e-10);
}

#[test]
fn edge_coupling_flags_p_dependence_at_the_band_edge() {
    let g = grid(32, 2, 0.1);
    let m = TwoLevel::new(TwoLevelParams::default());
    let rep = weyl_quantize_report(&m.h0(), &g).unwrap();
    assert!(rep.edge_coupling[0] > 0.1);
    assert!(matches!(
        weyl_quantize_checked(&m.h0(), &g, 1e-6),
        Err(crate::AdptError::Aliasing { .. })
    ));
    let mult = scalar("f", |q, _| c(q.sin(), 0.0)).with_hermitian(true);
    let g1 = grid(32, 1, 0.1);
    assert!(weyl_quantize_report(&mult, &g1).unwrap().edge_coupling[0] > 0.1);
    let free = scalar("p2", |_, p| c(p * p, 0.0)).with_hermitian(true);
    assert!(weyl_quantize_checked(&free, &g1, 1e-12).is_ok());
}

#[test]
fn propagation_is_unitary_and_exact() {
    let g = grid(32, 2, 0.1);
    let m = TwoLevel::new(TwoLevelParams::default());
    let h = weyl_quantize(&m.h0(), &g).unwrap();
    let prop = Propagator::new(&h).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let psi = random_wavefn(&g, &mut rng);
        let s = rng.gen_range(-5.0..5.0);
        assert!((prop.apply(&psi, s).norm() - 1.0).abs() < 1e-12);
    }
    let psi = random_wavefn(&g, &mut rng);
    let same = propagate(&h, &psi, 0.0, TimeMode::Microscopic).unwrap();
    assert!(same.values().iter().zip(psi.values()).all(|(a, b)| (a - b).norm() < 1e-12));

    let diag = DenseOp::hermitian(
        DenseOp::from_fn(g.dim(), |i, j| if i == j { c(0.1 * i as f64, 0.0) } else { c(0.0, 0.0) })
            .into_matrix(),
    )
    .unwrap();
    let out = propagate(&diag, &psi, 2.0, TimeMode::Macroscopic).unwrap();
    let tau = 2.0 / g.eps;
    for (i, (a, b)) in out.values().iter().zip(psi.values()).enumerate() {
        assert!((a - b * C64::from_polar(1.0, -0.1 * i as f64 * tau)).norm() < 1e-10);
    }
    assert!(Propagator::new(&weyl_quantize(&m.u0(), &g).unwrap()).is_err());
}

#[test]
fn spectral_projection() {
    let g = grid(32, 2, 0.1);
    let m = TwoLevel::new(TwoLevelParams::default());
    let h = weyl_quantize(&m.h0(), &g).unwrap();
    let exact = h.herm_fn(|x| c(if x > 0.5 { 1.0 } else { 0.0 }, 0.0)).unwrap();
    let p = project_spectral(&exact).unwrap();
    assert!(max_entry(&p.op, &exact) < 1e-12);
    assert!(p.distance < 1e-12);
    assert_eq!(p.rank as f64, exact.trace().re.round());
    let idem = p.op.mul(&p.op).sub(&p.op).op_norm();
    assert!(idem < 1e-12);

    // An exact spectral projector of Ĥ leaks nothing.
    let prop = Propagator::new(&h).unwrap();
    assert!(prop.leakage(&p.op, 3.0, None) < 1e-10);
    assert!(leakage(&h, &p.op, 0.2, TimeMode::Macroscopic, g.eps).unwrap() < 1e-10);

    let half = DenseOp::identity(8).scale(c(0.5, 0.0));
    assert!(matches!(project_spectral(&half), Err(crate::AdptError::Cluster(_))));
}

#[test]
fn unitarization() {
    let g = grid(16, 2, 0.1);
    let n = g.dim();
    let sx = &pauli()[0];
    let pi_r = DenseOp::from_fn(n, |i, j| if i == j && i % 2 == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let pi_r = DenseOp::hermitian(pi_r.into_matrix()).unwrap();
    // A unitary swap of fiber components that carries Π = 1⊗|1⟩⟨1| to Π_r.
    let swap = DenseOp::from_fn(n, |i, j| if i / 2 == j / 2 { sx[(i % 2, j % 2)] } else { c(0.0, 0.0) });
    let pi = DenseOp::hermitian(pi_r.complement().into_matrix()).unwrap();
    let u = unitarize(&swap, &pi, &pi_r).unwrap();
    assert!(u.distance < 1e-12);
    assert!(u.intertwining_defect < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise = DenseOp::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 0.01);
    let u_hat = swap.add(&noise);
    let out = unitarize(&u_hat, &pi, &pi_r).unwrap();
    let unit = out.op.adjoint().mul(&out.op).sub(&DenseOp::identity(n)).op_norm();
    assert!(unit < 1e-12, "{unit}");
    assert!(out.intertwining_defect < 1e-12);
    assert!(out.distance < 0.2);
    assert!(unitarize(&DenseOp::zeros(n), &pi, &pi_r).is_err());
}

#[test]
fn egorov_error_trivial_cases() {
    let g = grid(32, 2, 0.1);
    let m = TwoLevel::new(TwoLevelParams::default());
    let h = weyl_quantize(&m.h0(), &g).unwrap();
    let a = weyl_quantize(&m.h0(), &g).unwrap();
    assert!(egorov_error(&h, &a, &a, 0.0, g.eps, None).unwrap() < 1e-12);
    let one = DenseOp::identity(g.dim());
    assert!(egorov_error(&h, &one, &one, 1.0, g.eps, None).unwrap() < 1e-10);
}

#[test]
fn wigner_normalization_duality_and_peak() {
    let g = grid(64, 2, 0.1);
    let chi = [c(0.6, 0.0), c(0.0, 0.8)];
    let psi = WaveFn::gaussian(&g, 0.7, 0.4, 0.5, &chi).unwrap();
    assert!((psi.norm() - 1.0).abs() < 1e-12);
    let w = wigner(&psi);
    assert!((w.total() - 1.0).abs() < 1e-8);

    let m = TwoLevel::new(TwoLevelParams { twist: 0.6, ..Default::default() });
    let h0 = m.h0();
    let lhs = psi.expectation(&weyl_quantize(&h0, &g).unwrap());
    let rhs = w.pair(&h0).unwrap();
    assert!((lhs - rhs).norm() < 1e-6, "{lhs} vs {rhs}");

    let (q, p) = w.peak();
    assert!((q - 0.7).abs() <= g.dx() && (p - 0.4).abs() <= g.dp(), "peak at ({q}, {p})");
}

#[test]
fn binary_and_csv_round_trip() {
    let g = grid(16, 2, 0.1);
    let m = TwoLevel::new(TwoLevelParams::default());
    let op = weyl_quantize(&m.u0(), &g).unwrap();
    let mut buf = Vec::new();
    io::write_operator(&mut buf, &op).unwrap();
    assert_eq!(&buf[..4], b"ADPT");
    assert_eq!(buf.len(), 4 + 4 + 4 + 16 + 16 * op.dim() * op.dim());
    let back = io::read_operator(&mut buf.as_slice()).unwrap();
    assert_eq!(max_entry(&op, &back), 0.0);

    let psi = WaveFn::gaussian(&g, 0.0, 0.3, 0.7, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let mut buf = Vec::new();
    io::write_wavefn(&mut buf, &psi).unwrap();
    let back = io::read_wavefn(&mut buf.as_slice(), &g).unwrap();
    assert!(back.values().iter().zip(psi.values()).all(|(a, b)| (a - b).norm() < 1e-15));

    let mut csv = Vec::new();
    io::write_wavefn_csv(&mut csv, &psi).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,re_0,im_0,re_1,im_1");
    assert_eq!(text.lines().count(), 17);

    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(io::read_array(&mut bad.as_slice()).is_err());
}

#[test]
fn window_is_a_projector() {
    let g = grid(32, 2, 0.1);
    let w = momentum_window(&g, 1.0);
    assert!(w.mul(&w).sub(&w).op_norm() < 1e-12);
    let kept = g.momenta().iter().filter(|p| p.abs() <= 1.0).count();
    assert!((w.trace().re - 2.0 * kept as f64).abs() < 1e-10);
}
