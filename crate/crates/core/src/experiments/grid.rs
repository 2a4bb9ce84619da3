//! Grid experiments on the two-level benchmark: leakage, effective dynamics,
//! operator-level projector and unitary, Egorov scaling, Wigner snapshots.
//!
//! Scaling metrics are restricted to the momentum window |p| ≤ p_w (see
//! [`crate::quantum::momentum_window`]); ε sweeps run in parallel over ε and
//! are assembled in input order.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Check, Report, Table, EPS_SWEEP};
use crate::error::{AdptError, Result};
use crate::expansion::{effective_symbol, moyal_projector, moyal_unitary, ExpansionContext};
use crate::linalg::{c, CMat, C64};
use crate::models::{TwoLevel, TwoLevelParams};
use crate::quantum::{
    effective_dynamics_error, momentum_window, project_spectral, unitarize, weyl_from_samples, weyl_quantize, wigner,
    DenseOp, Grid1D, Propagator, TimeMode, WaveFn,
};
use crate::semiclassics::{Egorov, FnField};
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint, SJet};

/// Full adiabatic sweep: leakage for N = 0, 1, effective dynamics and the
/// operator-level Π and U.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepParams {
    pub model: TwoLevelParams,
    pub n_points: usize,
    pub eps_list: Vec<f64>,
    pub window: f64,
    /// Microscopic time s.
    pub s: f64,
    /// Macroscopic time t.
    pub t: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self { model: TwoLevelParams::default(), n_points: 256, eps_list: EPS_SWEEP.to_vec(), window: 0.5, s: 1.0, t: 1.0 }
    }
}

/// ‖(1 − π̂⁽ᴺ⁾) e^{−iĤτ} π̂⁽ᴺ⁾‖ over an ε sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeakageParams {
    pub model: TwoLevelParams,
    pub n_points: usize,
    pub eps_list: Vec<f64>,
    pub order: usize,
    pub time: f64,
    pub mode: TimeMode,
    /// Momentum window; `None` measures on the full grid space.
    pub window: Option<f64>,
}

impl Default for LeakageParams {
    fn default() -> Self {
        Self {
            model: TwoLevelParams::default(),
            n_points: 256,
            eps_list: EPS_SWEEP.to_vec(),
            order: 1,
            time: 1.0,
            mode: TimeMode::Microscopic,
            window: Some(0.5),
        }
    }
}

impl LeakageParams {
    /// [Ĥ, π̂⁽ᴺ⁾] = O(ε^{N+1}) integrates to O(ε^{N+1}s) at microscopic s and
    /// O(ε^N t) at macroscopic t.
    pub fn expected_slope(&self) -> f64 {
        match self.mode {
            TimeMode::Microscopic => (self.order + 1) as f64,
            TimeMode::Macroscopic => self.order as f64,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EgorovParams {
    /// Defaults to the twisted benchmark, whose h₁ is nonzero.
    pub model: TwoLevelParams,
    pub n_points: usize,
    pub eps_list: Vec<f64>,
    /// Macroscopic time t.
    pub time: f64,
    pub window: f64,
    /// Flow step for the classical transport.
    pub dt: f64,
    /// Momentum width of the observable cos(2πq/L)·exp(−p²/2σ²).
    pub sigma_p: f64,
}

impl Default for EgorovParams {
    fn default() -> Self {
        Self {
            model: TwoLevelParams { twist: 0.8, ..Default::default() },
            n_points: 256,
            eps_list: EPS_SWEEP.to_vec(),
            time: 1.0,
            window: 0.5,
            dt: 0.05,
            sigma_p: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WignerParams {
    pub model: TwoLevelParams,
    pub n_points: usize,
    pub eps: f64,
    pub q0: f64,
    pub p0: f64,
    pub sigma: f64,
    /// Macroscopic evolution time.
    pub time: f64,
}

impl Default for WignerParams {
    fn default() -> Self {
        Self { model: TwoLevelParams::default(), n_points: 64, eps: 1.0 / 16.0, q0: -1.0, p0: 0.4, sigma: 0.5, time: 0.5 }
    }
}

fn check_window(grid: &Grid1D, window: f64) -> Result<()> {
    // Window pairs must not wrap across the band edge.
    if !(window > 0.0 && window < 0.5 * grid.p_nyquist()) {
        return Err(AdptError::Invalid(format!(
            "momentum window {window} must lie in (0, p_N/2) = (0, {:.4}) at eps = {}",
            0.5 * grid.p_nyquist(),
            grid.eps
        )));
    }
    Ok(())
}

/// Quantized two-level operators at one ε.
struct BenchOps {
    grid: Grid1D,
    h: DenseOp,
    /// π̂_j for j = 0..=N.
    pi_terms: Vec<DenseOp>,
    /// Ŵ(u₀ + εu₁) and Ŵ(h₀ + εh₁), when requested.
    unitary: Option<(DenseOp, DenseOp)>,
    pi_r: CMat,
}

impl BenchOps {
    fn build(model: &TwoLevel, n: usize, eps: f64, order: usize, with_unitary: bool) -> Result<Self> {
        let grid = Grid1D::new(n, model.params.l, 2, eps)?;
        let ctx = ExpansionContext::new(model.hamiltonian(), model.band(), order.max(1))?.with_u0(model.u0())?;
        let pi = moyal_projector(&ctx)?;
        let mut syms: Vec<FormalSymbol> = vec![ctx.h().clone()];
        syms.extend((0..=order).map(|j| FormalSymbol::single(pi.term(j))));
        if with_unitary {
            let u = moyal_unitary(&ctx, &pi)?;
            let heff = effective_symbol(&ctx, &u)?;
            syms.push(u.truncated(1));
            syms.push(heff.truncated(1));
        }
        let q = weyl_from_samples(&grid, syms.len(), |z| syms.iter().map(|s| s.eval_sum(z, eps)).collect())?;
        let mut ops = q.ops.into_iter();
        let h = ops.next().expect("hamiltonian");
        let pi_terms: Vec<DenseOp> = ops.by_ref().take(order + 1).collect();
        let unitary = if with_unitary {
            let u = ops.next().expect("unitary");
            let he = ops.next().expect("effective hamiltonian");
            Some((u, he))
        } else {
            None
        };
        Ok(Self { grid, h, pi_terms, unitary, pi_r: ctx.pi_r().clone() })
    }

    /// π̂⁽ᴺ⁾ = Σ_{j≤N} ε^j π̂_j.
    fn pi_hat(&self, order: usize) -> DenseOp {
        let eps = self.grid.eps;
        let mut acc = self.pi_terms[0].clone();
        for (j, t) in self.pi_terms.iter().enumerate().take(order + 1).skip(1) {
            acc = acc.add(&t.scale(c(eps.powi(j as i32), 0.0)));
        }
        acc
    }

    /// 1 ⊗ π_r.
    fn pi_r_op(&self) -> Result<DenseOp> {
        let m = self.grid.m_fiber;
        let op = DenseOp::from_fn(self.grid.dim(), |i, j| if i / m == j / m { self.pi_r[(i % m, j % m)] } else { c(0.0, 0.0) });
        DenseOp::hermitian(op.into_matrix())
    }
}

pub fn leakage_scaling(p: &LeakageParams) -> Result<Report> {
    let model = TwoLevel::new(p.model);
    let rows: Vec<[f64; 2]> = p
        .eps_list
        .par_iter()
        .map(|&eps| -> Result<[f64; 2]> {
            let ops = BenchOps::build(&model, p.n_points, eps, p.order, false)?;
            let w = match p.window {
                Some(pw) => {
                    check_window(&ops.grid, pw)?;
                    Some(momentum_window(&ops.grid, pw))
                }
                None => None,
            };
            let prop = Propagator::new(&ops.h)?;
            Ok([eps, prop.leakage(&ops.pi_hat(p.order), p.mode.tau(p.time, eps), w.as_ref())])
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new("leakage", &["eps", "leakage"]);
    rows.iter().for_each(|r| table.push(r.to_vec()));
    let mut r = Report::new("leakage-scaling");
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r[0], r[1])).unzip();
    r.slope_check("leakage", &xs, &ys, p.expected_slope())?;
    r.tables.push(table);
    Ok(r)
}

const SWEEP_COLUMNS: [&str; 11] = [
    "eps",
    "leak0_micro",
    "leak1_micro",
    "leak1_macro",
    "effective_dynamics",
    "pi_minus_pihat",
    "u_minus_uhat",
    "pi_idempotency",
    "u_intertwining",
    "u_unitarity",
    "pi_rank",
];

fn sweep_row(model: &TwoLevel, p: &SweepParams, eps: f64) -> Result<Vec<f64>> {
    let ops = BenchOps::build(model, p.n_points, eps, 1, true)?;
    check_window(&ops.grid, p.window)?;
    let w = momentum_window(&ops.grid, p.window);
    let prop = Propagator::new(&ops.h)?;
    let (pi0, pi1) = (ops.pi_hat(0), ops.pi_hat(1));
    let l0 = prop.leakage(&pi0, p.s, Some(&w));
    let l1 = prop.leakage(&pi1, p.s, Some(&w));
    let l1m = prop.leakage(&pi1, TimeMode::Macroscopic.tau(p.t, eps), Some(&w));

    let proj = project_spectral(&pi1)?;
    let big_pi = &proj.op;
    let (u_hat, h_eff) = ops.unitary.as_ref().expect("built with unitary");
    let eff = effective_dynamics_error(&prop, &Propagator::new(h_eff)?, u_hat, big_pi, p.s, Some(&w));
    let uni = unitarize(u_hat, big_pi, &ops.pi_r_op()?)?;
    let id = DenseOp::identity(ops.grid.dim());
    Ok(vec![
        eps,
        l0,
        l1,
        l1m,
        eff,
        big_pi.sub(&pi1).sandwich(&w).op_norm(),
        uni.op.sub(u_hat).sandwich(&w).op_norm(),
        big_pi.mul(big_pi).sub(big_pi).op_norm(),
        uni.intertwining_defect,
        uni.op.adjoint().mul(&uni.op).sub(&id).op_norm(),
        proj.rank as f64,
    ])
}

/// Criteria for leakage, effective dynamics and the operator-level Π and U
/// from one set of quantized operators per ε.
pub fn adiabatic_sweep(p: &SweepParams) -> Result<Report> {
    let model = TwoLevel::new(p.model);
    let rows: Vec<Vec<f64>> = p.eps_list.par_iter().map(|&eps| sweep_row(&model, p, eps)).collect::<Result<_>>()?;
    let mut table = Table::new("sweep", &SWEEP_COLUMNS);
    rows.iter().for_each(|r| table.push(r.clone()));
    let col = |name: &str| table.column(name).expect("known column");
    let eps = col("eps");
    let mut r = Report::new("adiabatic-sweep");
    r.slope_check("leakage N=0 microscopic", &eps, &col("leak0_micro"), 1.0)?;
    r.slope_check("leakage N=1 microscopic", &eps, &col("leak1_micro"), 2.0)?;
    r.slope_check("leakage N=1 macroscopic", &eps, &col("leak1_macro"), 1.0)?;
    r.slope_check("effective dynamics", &eps, &col("effective_dynamics"), 2.0)?;
    r.slope_check("Pi - pi_hat", &eps, &col("pi_minus_pihat"), 2.0)?;
    r.slope_check("U - u_hat", &eps, &col("u_minus_uhat"), 2.0)?;
    let max = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    r.checks.push(Check::at_most("Pi idempotency", max(col("pi_idempotency")), 1e-12));
    r.checks.push(Check::at_most("U Pi U* - Pi_r", max(col("u_intertwining")), 1e-12));
    r.checks.push(Check::at_most("U unitarity", max(col("u_unitarity")), 1e-12));
    // One band: the range of Π has one state per grid momentum.
    let rank_err = col("pi_rank").iter().map(|&k| (k - p.n_points as f64).abs()).fold(0.0, f64::max);
    r.checks.push(Check::at_most("Pi rank - n", rank_err, 0.0));
    r.tables.push(table);
    Ok(r)
}

fn observable(l: f64, sigma: f64) -> MatrixSymbol {
    MatrixSymbol::analytic("a0", 1, 1, 1, move |z, k| {
        let v = SJet::vars(z, k);
        let a = (&v[0] * (2.0 * PI / l)).cos() * (v[1].sq() * (-0.5 / (sigma * sigma))).exp();
        Ok(Jet::from_scalars(z, &[(&a, &CMat::identity(1, 1))]))
    })
    .with_hermitian(true)
}

fn egorov_row(model: &TwoLevel, p: &EgorovParams, eps: f64) -> Result<[f64; 3]> {
    let grid = Grid1D::new(p.n_points, model.params.l, 1, eps)?;
    check_window(&grid, p.window)?;
    let (e, h1) = (model.energy_symbol(), model.h1_symbol());
    let h = weyl_from_samples(&grid, 1, |z| Ok(vec![e.eval(z)? + h1.eval(z)? * c(eps, 0.0)]))?.ops.remove(0);
    let a0 = observable(model.params.l, p.sigma_p);
    let a0_hat = weyl_quantize(&a0, &grid)?;

    let me = model.clone();
    let field = Arc::new(FnField::new(1, move |z: &PhasePoint, k| me.energy(z, k)));
    let eg = Egorov::new(field, h1.clone()).with_dt(p.dt);
    // Only midpoints inside the window enter W·Ŵ(a)·W.
    let cut = p.window + grid.dp();
    let zero = CMat::zeros(1, 1);
    let at = weyl_from_samples(&grid, 2, |z| {
        if z.coord(1).abs() > cut {
            return Ok(vec![zero.clone(), zero.clone()]);
        }
        let (a, b) = eg.evolve_pair(&a0, z, p.time)?;
        let corrected = &a + b * c(eps, 0.0);
        Ok(vec![a, corrected])
    })?;
    let w = momentum_window(&grid, p.window);
    let prop = Propagator::new(&h)?;
    let tau = TimeMode::Macroscopic.tau(p.time, eps);
    Ok([
        eps,
        prop.heisenberg_error(&a0_hat, &at.ops[0], tau, Some(&w)),
        prop.heisenberg_error(&a0_hat, &at.ops[1], tau, Some(&w)),
    ])
}

/// ‖W(e^{iĥt/ε}Ŵ(a₀)e^{−iĥt/ε} − Ŵ(a(t)))W‖ with ĥ = Ŵ(E_r + εh₁), for
/// a(t) = a₀(t) and a(t) = a₀(t) + εa₁(t).
pub fn egorov_scaling(p: &EgorovParams) -> Result<Report> {
    let model = TwoLevel::new(p.model);
    let rows: Vec<[f64; 3]> = p.eps_list.par_iter().map(|&eps| egorov_row(&model, p, eps)).collect::<Result<_>>()?;
    let mut table = Table::new("egorov", &["eps", "error_a0", "error_a0_a1"]);
    rows.iter().for_each(|r| table.push(r.to_vec()));
    let eps: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let mut r = Report::new("egorov-scaling");
    r.slope_check("a0 only", &eps, &rows.iter().map(|r| r[1]).collect::<Vec<_>>(), 1.0)?;
    r.slope_check("a0 + eps a1", &eps, &rows.iter().map(|r| r[2]).collect::<Vec<_>>(), 2.0)?;
    r.tables.push(table);
    Ok(r)
}

fn wigner_table(name: &str, psi: &WaveFn) -> (Table, f64) {
    let w = wigner(psi);
    let mut t = Table::new(name, &["q", "p", "tr_w", "w00", "w11"]);
    for (q, p, m) in w.iter() {
        t.push(vec![q, p, m.trace().re, m[(0, 0)].re, m[(1, 1)].re]);
    }
    (t, w.total())
}

/// Wigner transform of a Gaussian before and after evolution under Ĥ.
pub fn wigner_snapshot(p: &WignerParams) -> Result<Report> {
    let model = TwoLevel::new(p.model);
    let grid = Grid1D::new(p.n_points, model.params.l, 2, p.eps)?;
    let h0 = model.h0();
    let h = weyl_quantize(&h0, &grid)?;
    let psi0 = WaveFn::gaussian(&grid, p.q0, p.p0, p.sigma, &[c(1.0, 0.0), c(0.0, 0.0)])?;
    let psi = Propagator::new(&h)?.apply(&psi0, TimeMode::Macroscopic.tau(p.time, p.eps));
    let (t0, n0) = wigner_table("initial", &psi0);
    let (t1, n1) = wigner_table("final", &psi);
    let direct: C64 = psi.expectation(&h);
    let paired = wigner(&psi).pair(&h0)?;
    let mut r = Report::new("wigner-snapshot");
    r.checks.push(Check::at_most("normalization", (n0 - 1.0).abs().max((n1 - 1.0).abs()), 1e-8));
    r.checks.push(Check::at_most("duality with quantization", (direct - paired).norm(), 1e-6));
    r.tables.push(t0);
    r.tables.push(t1);
    Ok(r)
}
