//! Discrete Weyl quantization on the periodic grid.
//!
//! In the plane-wave basis φ_k(x) = e^{ip_k x/ε}, Weyl quantization on the
//! circle acts as ⟨φ_k, Ŵ(A) φ_k'⟩ = a_{k−k'}((p_k + p_k')/2), where a_m(p)
//! is the m-th Fourier coefficient of A(·, p) in q. The grid version samples
//! A at the n positions times the 2n momentum midpoints ν·Δp/2, takes one DFT
//! in q per midpoint, and fills the momentum matrix with k − k' wrapped into
//! [−n/2, n/2). Pairs wrapped across the band edge couple ±p_N; their
//! strength is reported as `edge_coupling`. The matrix is finally rotated to
//! the position basis.
//!
//! Multiplication operators f(q) and Fourier multipliers g(p) come out exact,
//! and only periodicity in q is assumed. A position-midpoint formula would
//! instead treat symbols as periodic in p, which for non-decaying symbols
//! puts a jump at p_N that leaks into every momentum window.

use faer::Mat;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::grid::Grid1D;
use super::op::{to_c64, DenseOp, HERMITIAN_TOL};
use crate::error::{AdptError, Result};
use crate::linalg::{max_abs, CMat, C64};
use crate::symbol::{MatrixSymbol, PhasePoint};

/// Quantized symbols together with the size of their q-dependence at the
/// band edge.
///
/// A nonzero `edge_coupling` means the compressed operator couples the two
/// band edges ±p_N, so only momenta well inside the band are faithful.
#[derive(Debug, Clone)]
pub struct Quantized {
    pub ops: Vec<DenseOp>,
    pub edge_coupling: Vec<f64>,
}

/// Momentum-midpoint index ν ∈ [−n, n) for the pair (k, k − m).
#[inline]
pub(crate) fn midpoint_index(n: i64, k: i64, m: i64) -> i64 {
    (2 * k - m + n).rem_euclid(2 * n) - n
}

/// Unitary change of basis with columns e^{ip_k x_j/ε}/√n, tensored with 1_m.
pub(crate) fn fourier_basis(grid: &Grid1D) -> Mat<faer::complex_native::c64> {
    let (n, m) = (grid.n_points, grid.m_fiber);
    let h = (n / 2) as i64;
    let s = 1.0 / (n as f64).sqrt();
    Mat::from_fn(n * m, n * m, |row, col| {
        if row % m != col % m {
            return to_c64(C64::new(0.0, 0.0));
        }
        let j = row / m;
        let k = (col / m) as i64 - h;
        to_c64(C64::from_polar(s, 2.0 * PI * k as f64 * grid.x(j) / grid.l))
    })
}

/// Quantizes `count` symbols sampled jointly by `f` at every lattice point.
pub fn weyl_from_samples<F>(grid: &Grid1D, count: usize, f: F) -> Result<Quantized>
where
    F: Fn(&PhasePoint) -> Result<Vec<CMat>> + Sync,
{
    let n = grid.n_points;
    let m = grid.m_fiber;
    let ni = n as i64;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);

    let sample = |z: &PhasePoint| -> Result<Vec<CMat>> {
        let v = f(z)?;
        if v.len() != count || v.iter().any(|a| a.shape() != (m, m)) {
            return Err(AdptError::Dimension(format!("sampler must return {count} matrices of size {m}×{m}")));
        }
        if v.iter().any(|a| a.iter().any(|x| !x.is_finite())) {
            return Err(AdptError::NonFinite(format!("symbol sample at {z:?}")));
        }
        Ok(v)
    };

    // Per momentum midpoint: coefficients a_m for every symbol, laid out
    // [(m mod n)·m_f² + a·m_f + b].
    let rows: Vec<Vec<Vec<C64>>> = (-ni..ni)
        .into_par_iter()
        .map(|nu| -> Result<Vec<Vec<C64>>> {
            let p = grid.p_mid(nu);
            let mut bufs = vec![vec![C64::new(0.0, 0.0); n * m * m]; count];
            for l in 0..n {
                let v = sample(&PhasePoint::new1(grid.x(l), p))?;
                for (s, a) in v.iter().enumerate() {
                    for ai in 0..m {
                        for bi in 0..m {
                            bufs[s][(ai * m + bi) * n + l] = a[(ai, bi)];
                        }
                    }
                }
            }
            Ok(bufs
                .into_iter()
                .map(|mut buf| {
                    for chunk in buf.chunks_mut(n) {
                        fft.process(chunk);
                    }
                    // x_l = −L/2 + lΔx contributes the phase (−1)^m.
                    let mut a = vec![C64::new(0.0, 0.0); n * m * m];
                    for ab in 0..m * m {
                        for t in 0..n {
                            let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
                            a[t * m * m + ab] = buf[ab * n + t] * (sign / n as f64);
                        }
                    }
                    a
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    // Largest non-constant Fourier coefficient at the band edge.
    let edge = |coef: &[C64]| -> f64 {
        (1..n)
            .map(|t| max_abs(&CMat::from_fn(m, m, |a, b| coef[t * m * m + a * m + b])))
            .fold(0.0, f64::max)
    };

    let basis = fourier_basis(grid);
    let h = ni / 2;
    let mut ops = Vec::with_capacity(count);
    let mut edge_coupling = Vec::with_capacity(count);
    for s in 0..count {
        let coef = |nu: i64| -> &[C64] { &rows[(nu + ni) as usize][s] };
        edge_coupling.push(edge(coef(-ni)));
        let mt = Mat::from_fn(n * m, n * m, |row, col| {
            let (k, a) = ((row / m) as i64 - h, row % m);
            let (kp, b) = ((col / m) as i64 - h, col % m);
            let mm = grid.wrap(k - kp);
            let t = mm.rem_euclid(ni) as usize;
            let at = |nu: i64| coef(nu)[t * m * m + a * m + b];
            let v = if mm == -h {
                // k − k' = ±n/2 has two admissible midpoints; averaging keeps hermiticity.
                0.5 * (at(midpoint_index(ni, k, mm)) + at(midpoint_index(ni, k, -mm)))
            } else {
                at(midpoint_index(ni, k, mm))
            };
            to_c64(v)
        });
        let pos = &basis * &mt * basis.adjoint();
        let mut op = DenseOp::new(pos)?;
        let def = op.hermitian_defect();
        let scale = op.matrix().norm_max().max(1.0);
        if def <= HERMITIAN_TOL * scale {
            op = DenseOp::hermitian(op.into_matrix())?;
        }
        ops.push(op);
    }
    Ok(Quantized { ops, edge_coupling })
}

/// Ŵ(A) for a single symbol. Hermitian symbols must give hermitian matrices.
pub fn weyl_quantize(a: &MatrixSymbol, grid: &Grid1D) -> Result<DenseOp> {
    Ok(weyl_quantize_report(a, grid)?.ops.remove(0))
}

pub fn weyl_quantize_report(a: &MatrixSymbol, grid: &Grid1D) -> Result<Quantized> {
    check_symbol(a, grid)?;
    let q = weyl_from_samples(grid, 1, |z| Ok(vec![a.eval(z)?]))?;
    if a.is_hermitian() && !q.ops[0].is_hermitian() {
        return Err(AdptError::Defect {
            what: "quantized hermiticity",
            order: 0,
            value: q.ops[0].hermitian_defect(),
            tol: HERMITIAN_TOL,
        });
    }
    Ok(q)
}

/// As [`weyl_quantize`], but fails when the symbol still depends on q at the
/// band edge by more than `tol`.
pub fn weyl_quantize_checked(a: &MatrixSymbol, grid: &Grid1D, tol: f64) -> Result<DenseOp> {
    let mut q = weyl_quantize_report(a, grid)?;
    if q.edge_coupling[0] > tol {
        return Err(AdptError::Aliasing { jump: q.edge_coupling[0], tol });
    }
    Ok(q.ops.remove(0))
}

fn check_symbol(a: &MatrixSymbol, grid: &Grid1D) -> Result<()> {
    if a.d() != 1 || a.shape() != (grid.m_fiber, grid.m_fiber) {
        return Err(AdptError::Dimension(format!(
            "grid quantization needs a d=1 symbol of size {0}×{0}, got d={1}, {2:?}",
            grid.m_fiber,
            a.d(),
            a.shape()
        )));
    }
    Ok(())
}
