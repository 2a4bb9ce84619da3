use std::hint::black_box;

use adpt_core::expansion::{moyal_projector, ExpansionContext};
use adpt_core::models::{TwoLevel, TwoLevelParams};
use adpt_core::quantum::{momentum_window, weyl_quantize, Propagator};
use adpt_core::symbol::moyal_mul;
use adpt_core::{Grid1D, PhasePoint};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn benchmark() -> TwoLevel {
    TwoLevel::new(TwoLevelParams::default())
}

fn symbol_calculus(c: &mut Criterion) {
    let m = benchmark();
    let z = PhasePoint::new(vec![0.7], vec![-0.3]).unwrap();
    let h = m.hamiltonian();
    let hh = moyal_mul(&h, &h, 2).unwrap();
    c.bench_function("moyal square, order 2 term", |b| b.iter(|| hh.term(2).eval(black_box(&z)).unwrap()));

    let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), 2).unwrap();
    let pi = moyal_projector(&ctx).unwrap();
    c.bench_function("projector pi2 at a point", |b| b.iter(|| pi.term(2).eval(black_box(&z)).unwrap()));
}

fn grid_operators(c: &mut Criterion) {
    let m = benchmark();
    let h0 = m.hamiltonian().term(0);
    let mut g = c.benchmark_group("grid");
    g.sample_size(10);
    for n in [64usize, 128] {
        let grid = Grid1D::new(n, m.params.l, 2, 1.0 / 32.0).unwrap();
        g.bench_with_input(BenchmarkId::new("weyl quantize H0", n), &grid, |b, grid| {
            b.iter(|| weyl_quantize(&h0, grid).unwrap())
        });
        let op = weyl_quantize(&h0, &grid).unwrap();
        g.bench_with_input(BenchmarkId::new("eigendecomposition", n), &op, |b, op| b.iter(|| Propagator::new(op).unwrap()));
        let prop = Propagator::new(&op).unwrap();
        let w = momentum_window(&grid, 0.2);
        g.bench_with_input(BenchmarkId::new("windowed heisenberg error", n), &op, |b, op| {
            b.iter(|| prop.heisenberg_error(op, op, 1.0, Some(&w)))
        });
    }
    g.finish();
}

criterion_group!(benches, symbol_calculus, grid_operators);
criterion_main!(benches);
