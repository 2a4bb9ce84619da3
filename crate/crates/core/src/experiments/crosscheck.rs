//! Dual-path comparisons: generic machinery against model closed forms.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{sample_points, Check, Report, Table};
use crate::error::Result;
use crate::expansion::defects::band_block_at;
use crate::expansion::{effective_symbol, h1_block, moyal_projector, moyal_unitary, ExpansionContext};
use crate::linalg::{max_abs, pauli, r, CMat};
use crate::models::{
    howland_effective, time_adiabatic_h, BornOppenheimer, Dirac, DiracFields, DiracParams, KatoFrame, Kinetic,
    TimeDepHamiltonian,
};
use crate::semiclassics::{bmt_along, bmt_evolve, classical_flow, spin_transport, FnField};
use crate::spectral::BandSpec;
use crate::symbol::PhasePoint;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiracCheckParams {
    pub dirac: DiracParams,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    /// Momentum offsets from the zero-velocity point (e/c)A(q).
    pub low_velocity: Vec<f64>,
}

impl Default for DiracCheckParams {
    fn default() -> Self {
        Self {
            dirac: DiracParams::default(),
            points: 100,
            seed: 7,
            tol: 1e-5,
            low_velocity: vec![0.0, 1e-4, 1e-3, 1e-2, 1e-1],
        }
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Generic h₁ on the Foldy-Wouthuysen frame against −(ħ/2)σ·Ω, and the
/// v → 0 limit Ω → (e/mc)B.
pub fn dirac_crosscheck(p: &DiracCheckParams) -> Result<Report> {
    let m = Dirac::new(p.dirac.clone());
    let hbar = p.dirac.hbar;
    let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), 1)?.with_u0(m.u0())?;
    let pts = sample_points(p.seed, p.points, (-4.0, 4.0), (-2.0, 2.0), 3);
    let mut table = Table::new("h1", &["point", "q1", "q2", "q3", "p1", "p2", "p3", "rel_err"]);
    let mut worst = 0.0f64;
    for (i, z) in pts.iter().enumerate() {
        let gen = h1_block(&ctx, z)? * r(hbar);
        let or = m.h1_oracle(z);
        let rel = max_abs(&(&gen - &or)) / max_abs(&or).max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        let mut row = vec![i as f64];
        row.extend(z.coords());
        row.push(rel);
        table.push(row);
    }

    // p = (e/c)A(q) + δ·n̂ has kinetic momentum δ.
    let f = p.dirac.e / (p.dirac.m * p.dirac.c);
    let mut low = Table::new("low_velocity", &["delta", "max_rel_err"]);
    let mut at_rest = 0.0f64;
    let dirs = sample_points(p.seed ^ 0x5eed, 10, (-4.0, 4.0), (-1.0, 1.0), 3);
    for &delta in &p.low_velocity {
        let mut e = 0.0f64;
        for d in &dirs {
            let q: Vec<f64> = (0..3).map(|i| d.coord(i)).collect();
            let dir: Vec<f64> = (3..6).map(|i| d.coord(i)).collect();
            let dn = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a = p.dirac.fields.vector_jet(&PhasePoint::new(q.clone(), vec![0.0; 3])?, 0);
            let mom: Vec<f64> = (0..3).map(|i| p.dirac.e / p.dirac.c * a[i].value() + delta * dir[i] / dn).collect();
            let z = PhasePoint::new(q, mom)?;
            let b = p.dirac.fields.magnetic(&z);
            let om = m.omega(&z);
            let want = [f * b[0], f * b[1], f * b[2]];
            let diff = [om[0] - want[0], om[1] - want[1], om[2] - want[2]];
            e = e.max(norm3(diff) / norm3(want).max(f64::MIN_POSITIVE));
        }
        if delta == 0.0 {
            at_rest = e;
        }
        low.push(vec![delta, e]);
    }
    let mut r = Report::new("dirac-crosscheck");
    r.checks.push(Check::at_most("h1 relative error", worst, p.tol));
    r.checks.push(Check::at_most("omega at zero velocity", at_rest, 1e-12));
    if let Some(row) = low.rows.iter().find(|row| row[0] > 0.0) {
        // The leading correction is the v∧E term, linear in δ.
        r.checks.push(Check::at_most("omega at smallest velocity", row[1], 10.0 * row[0] * (1.0 + f)));
    }
    r.tables.push(table);
    r.tables.push(low);
    Ok(r)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoParams {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub eps_list: Vec<f64>,
}

impl Default for BoParams {
    fn default() -> Self {
        Self { points: 50, seed: 3, tol: 1e-5, eps_list: vec![0.1, 0.03, 0.01] }
    }
}

/// Generic h₂ against (h2BO), and E + εh₁ + ε²h₂ against (h3BO).
pub fn bo_crosscheck(p: &BoParams) -> Result<Report> {
    let m = BornOppenheimer::standard(Kinetic::Raw);
    let ctx = ExpansionContext::from_model(m.hamiltonian(), m.band_model().clone(), 2)?.with_u0(m.u0())?;
    let pi = moyal_projector(&ctx)?;
    let u = moyal_unitary(&ctx, &pi)?;
    let h = effective_symbol(&ctx, &u)?;
    let pts = sample_points(p.seed, p.points, (-3.0, 3.0), (-1.5, 1.5), 2);
    let mut table = Table::new("h2", &["point", "q1", "q2", "p1", "p2", "h2_generic", "h2_closed", "abs_err"]);
    let (mut e2, mut e3) = (0.0f64, 0.0f64);
    for (i, z) in pts.iter().enumerate() {
        let blocks: Vec<CMat> = (0..=2).map(|j| band_block_at(&ctx, &h.term(j), z)).collect::<Result<_>>()?;
        let or = m.h2_oracle(z)?;
        let d = max_abs(&(&blocks[2] - &or));
        e2 = e2.max(d);
        let mut row = vec![i as f64];
        row.extend(z.coords());
        row.extend([blocks[2][(0, 0)].re, or[(0, 0)].re, d]);
        table.push(row);
        for &eps in &p.eps_list {
            let asm = &blocks[0] + &blocks[1] * r(eps) + &blocks[2] * r(eps * eps);
            e3 = e3.max(max_abs(&(asm - m.h3_oracle(z, eps)?)));
        }
    }
    let mut r = Report::new("bo-crosscheck");
    r.checks.push(Check::at_most("h2 generic vs closed form", e2, p.tol));
    r.checks.push(Check::at_most("assembled symbol vs completed square", e3, p.tol));
    r.tables.push(table);
    Ok(r)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BmtParams {
    pub t_final: f64,
    pub dt: f64,
    /// Precession rate for the constant-Ω period check.
    pub omega: f64,
    /// Keep every n-th step in the output table.
    pub table_stride: usize,
}

impl Default for BmtParams {
    fn default() -> Self {
        Self { t_final: 10.0, dt: 1e-3, omega: 1.7, table_stride: 100 }
    }
}

/// BMT spin vectors against the spin transport D along a Dirac trajectory,
/// plus the exact constant-Ω precession period.
pub fn bmt(p: &BmtParams) -> Result<Report> {
    let m = Dirac::new(DiracParams { fields: DiracFields::axial_magnetic(), ..Default::default() });
    let me = m.clone();
    let energy = Arc::new(FnField::new(3, move |z: &PhasePoint, k| me.energy_jet(z, k)));
    let start = PhasePoint::new(vec![0.3, -0.8, 1.1], vec![0.4, 0.2, -0.5])?;
    let tr = classical_flow(&*energy, &start, p.t_final, p.dt)?;
    let frame = spin_transport(&m.h1_symbol(), &tr)?;
    let sig = pauli();
    let (mut drift, mut conj) = (0.0f64, 0.0f64);
    let mut table = Table::new("spin", &["t", "k", "s1", "s2", "s3", "conj_err"]);
    for (k, sk) in sig.iter().enumerate() {
        let mut s0 = [0.0; 3];
        s0[k] = 1.0;
        let sv = bmt_along(&tr, |z| Ok(m.omega(z)), s0)?;
        drift = drift.max(sv.norm_drift());
        for (n, (d, s)) in frame.d.iter().zip(&sv.s).enumerate() {
            let lhs = d.adjoint() * sk * d;
            let rhs = &sig[0] * r(s[0]) + &sig[1] * r(s[1]) + &sig[2] * r(s[2]);
            let e = max_abs(&(lhs - rhs));
            conj = conj.max(e);
            if n % p.table_stride.max(1) == 0 {
                table.push(vec![sv.times[n], k as f64, s[0], s[1], s[2], e]);
            }
        }
    }
    let w = p.omega;
    let period = bmt_evolve(|_| [0.0, 0.0, w], [1.0, 0.0, 0.0], 2.0 * PI / w, p.dt)?;
    let end = period.last();
    let closure = norm3([end[0] - 1.0, end[1], end[2]]);
    let mut r = Report::new("bmt");
    r.checks.push(Check::at_most("norm drift", drift, 1e-9));
    r.checks.push(Check::at_most("D* sigma_k D - s_k.sigma", conj, 1e-8));
    r.checks.push(Check::at_most("precession period closure", closure, 1e-8));
    r.tables.push(table);
    Ok(r)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeAdiabaticParams {
    /// Avoided crossing H(t) = tσ₃ + δ(cos ωt σ₁ + sin ωt σ₂).
    pub delta: f64,
    pub omega: f64,
    pub times: Vec<f64>,
    pub gauge_rates: Vec<f64>,
    /// Howland energy variable η at which the generic path is evaluated.
    pub eta: f64,
    pub tol: f64,
}

impl Default for TimeAdiabaticParams {
    fn default() -> Self {
        Self {
            delta: 0.6,
            omega: 1.3,
            times: vec![-1.5, -0.3, 0.0, 0.7, 2.0],
            gauge_rates: vec![0.0, 0.4],
            eta: 0.8,
            tol: 1e-6,
        }
    }
}

/// Howland generic expansion against the explicit second-order h(t); the
/// constant case and the rotating-field quasienergy as exact anchors.
pub fn time_adiabatic(p: &TimeAdiabaticParams) -> Result<Report> {
    let mut table = Table::new("blocks", &["t", "gauge_rate", "order", "generic", "explicit", "abs_err"]);
    let mut worst = 0.0f64;
    for &alpha in &p.gauge_rates {
        let f = KatoFrame::new(TimeDepHamiltonian::avoided_crossing(p.delta, p.omega)?)?.with_gauge_rate(alpha);
        for &t in &p.times {
            let gen = howland_effective(&f, t, p.eta)?;
            let exp = time_adiabatic_h(&f, t, 2)?;
            for j in 0..3 {
                let d = max_abs(&(&gen.terms[j] - &exp.terms[j]));
                worst = worst.max(d);
                table.push(vec![t, alpha, j as f64, gen.terms[j][(0, 0)].re, exp.terms[j][(0, 0)].re, d]);
            }
        }
    }

    let s = pauli();
    let hc = &s[0] * r(0.4) + &s[2] * r(0.9);
    let fc = KatoFrame::new(TimeDepHamiltonian::constant(hc, BandSpec::index(1, 2, 0.5))?)?;
    let mut constant = 0.0f64;
    for &t in &p.times {
        let gen = howland_effective(&fc, t, p.eta)?;
        let exp = time_adiabatic_h(&fc, t, 2)?;
        for j in 1..3 {
            constant = constant.max(max_abs(&gen.terms[j])).max(max_abs(&exp.terms[j]));
        }
    }

    // Quasienergy √(B² + ε²ω²/4) of a field rotating at rate ω.
    let (b, w) = (0.8, 1.7);
    let fr = KatoFrame::new(TimeDepHamiltonian::rotating(b, w)?)?;
    let exact = w * w / (8.0 * b);
    let mut rot = 0.0f64;
    for &t in &p.times {
        let gen = howland_effective(&fr, t, 0.0)?;
        rot = rot.max((gen.terms[2][(0, 0)].re - exact).abs());
    }

    let mut r = Report::new("time-adiabatic");
    r.checks.push(Check::at_most("howland vs explicit h(t)", worst, p.tol));
    r.checks.push(Check::at_most("constant H corrections", constant, 0.0));
    r.checks.push(Check::at_most("rotating field h2 vs quasienergy", rot, p.tol));
    r.tables.push(table);
    Ok(r)
}
