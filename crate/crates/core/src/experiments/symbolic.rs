//! Pointwise checks of the symbol calculus and the formal constructions.

use serde::{Deserialize, Serialize};

use super::{sample_points, Check, Report, Table};
use crate::error::Result;
use crate::expansion::projector::pi1_diag_printed;
use crate::expansion::{
    moyal_projector, moyal_unitary, pi1_closed, pi1_od_jet, projector_defects, u1_closed, u1_jet, unitary_defects,
    ExpansionContext, U1Form,
};
use crate::linalg::{c, max_abs, pauli, CMat};
use crate::models::{TwoLevel, TwoLevelParams};
use crate::symbol::{moyal_mul, moyal_term, FormalSymbol, Jet, MatrixSymbol, PhasePoint, SJet};

/// Two-level expansion checks at random phase-space points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub model: TwoLevelParams,
    pub order: usize,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    /// Momentum range of the sample box; q covers one period.
    pub p_max: f64,
}

impl Default for ExpansionParams {
    fn default() -> Self {
        Self { model: TwoLevelParams::default(), order: 2, points: 100, seed: 1, tol: 1e-6, p_max: 2.0 }
    }
}

impl ExpansionParams {
    fn points(&self) -> Vec<PhasePoint> {
        let h = 0.5 * self.model.l;
        sample_points(self.seed, self.points, (-h, h), (-self.p_max, self.p_max), 1)
    }
}

fn worst(a: &mut f64, b: f64) {
    *a = a.max(b);
}

pub fn projector_defect(p: &ExpansionParams) -> Result<Report> {
    let m = TwoLevel::new(p.model);
    let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), p.order)?;
    let pi = moyal_projector(&ctx)?;
    let mut table = Table::new("defects", &["point", "q", "p", "order", "idempotency", "hermiticity", "commutation"]);
    let (mut idem, mut herm, mut comm, mut closed, mut printed) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, z) in p.points().iter().enumerate() {
        let d = projector_defects(ctx.h(), &pi, z)?;
        for k in 0..=p.order {
            table.push(vec![i as f64, z.coord(0), z.coord(1), k as f64, d.idempotency[k], d.hermiticity[k], d.commutation[k]]);
            worst(&mut idem, d.idempotency[k]);
            worst(&mut herm, d.hermiticity[k]);
            worst(&mut comm, d.commutation[k]);
        }
        if p.order >= 1 {
            let g = pi.term(1).eval(z)?;
            worst(&mut closed, max_abs(&(&g - pi1_closed(&ctx, z)?)));
            let pr = pi1_od_jet(&ctx, z, 0)?.value() + pi1_diag_printed(&ctx, z)?;
            worst(&mut printed, max_abs(&(&g - pr)));
        }
    }
    let mut r = Report::new("projector-defect");
    r.checks.push(Check::at_most("idempotency", idem, p.tol));
    r.checks.push(Check::at_most("hermiticity", herm, p.tol));
    r.checks.push(Check::at_most("commutation", comm, p.tol));
    if p.order >= 1 {
        r.checks.push(Check::at_most("pi1 printed closed form", printed, p.tol));
        r.checks.push(Check::at_most("pi1 derived closed form", closed, p.tol));
    }
    r.tables.push(table);
    Ok(r)
}

pub fn unitary_defect(p: &ExpansionParams) -> Result<Report> {
    let m = TwoLevel::new(p.model);
    let ctx = ExpansionContext::new(m.hamiltonian(), m.band(), p.order)?.with_u0(m.u0())?;
    let pi = moyal_projector(&ctx)?;
    let u = moyal_unitary(&ctx, &pi)?;
    let mut table = Table::new("defects", &["point", "q", "p", "order", "left", "right", "intertwining"]);
    let (mut left, mut right, mut inter, mut printed, mut unitary) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, z) in p.points().iter().enumerate() {
        let d = unitary_defects(&ctx, &u, &pi, z)?;
        for k in 0..=p.order {
            table.push(vec![i as f64, z.coord(0), z.coord(1), k as f64, d.left[k], d.right[k], d.intertwining[k]]);
            worst(&mut left, d.left[k]);
            worst(&mut right, d.right[k]);
            worst(&mut inter, d.intertwining[k]);
        }
        if p.order >= 1 {
            let g = u.term(1).eval(z)?;
            worst(&mut printed, max_abs(&(&g - u1_closed(&ctx, z)?)));
            worst(&mut unitary, max_abs(&(&g - u1_jet(&ctx, z, 0, U1Form::Unitary)?.value())));
        }
    }
    let mut r = Report::new("unitary-defect");
    r.checks.push(Check::at_most("u*u - 1", left, p.tol));
    r.checks.push(Check::at_most("uu* - 1", right, p.tol));
    r.checks.push(Check::at_most("u pi u* - pi_r", inter, p.tol));
    if p.order >= 1 {
        r.checks.push(Check::at_most("u1 printed closed form", printed, p.tol));
        r.checks.push(Check::at_most("u1 unitary closed form", unitary, p.tol));
    }
    r.tables.push(table);
    Ok(r)
}

fn scalar_times(name: &str, f: fn(&[SJet]) -> Vec<(SJet, usize)>) -> MatrixSymbol {
    MatrixSymbol::analytic(name, 1, 2, 2, move |z, k| {
        let v = SJet::vars(z, k);
        let mats = basis();
        let terms = f(&v);
        let refs: Vec<(&SJet, &CMat)> = terms.iter().map(|(s, i)| (s, &mats[*i])).collect();
        Ok(Jet::from_scalars(z, &refs))
    })
}

/// 1, σ₁, σ₂, σ₃.
fn basis() -> [CMat; 4] {
    let [s1, s2, s3] = pauli();
    [CMat::identity(2, 2), s1, s2, s3]
}

/// Order-0 and order-1 composition, the canonical commutator and
/// associativity through order 2.
pub fn moyal_algebra(seed: u64, points: usize) -> Result<Report> {
    let pts = sample_points(seed, points, (-2.0, 2.0), (-2.0, 2.0), 1);
    let s = basis();
    let i = c(0.0, 1.0);

    // A₀ = sin q σ₁ + p² σ₃ and B₀ = cos p σ₂ + qp with finite-difference
    // jets; the oracle uses their exact derivatives.
    let (s1, s3) = (s[1].clone(), s[3].clone());
    let a0 = MatrixSymbol::from_fn("A0", 1, 2, move |z| {
        let (q, p) = (z.coord(0), z.coord(1));
        &s1 * c(q.sin(), 0.0) + &s3 * c(p * p, 0.0)
    });
    let (id, s2) = (s[0].clone(), s[2].clone());
    let b0 = MatrixSymbol::from_fn("B0", 1, 2, move |z| {
        let (q, p) = (z.coord(0), z.coord(1));
        &s2 * c(p.cos(), 0.0) + &id * c(q * p, 0.0)
    });
    let a1 = scalar_times("A1", |v| vec![(v[0].clone(), 2)]);
    let b1 = scalar_times("B1", |v| vec![(v[1].clone(), 1)]);
    let fa = FormalSymbol::new(vec![a0.clone(), a1.clone()])?;
    let fb = FormalSymbol::new(vec![b0.clone(), b1.clone()])?;

    let (mut o0, mut o1) = (0.0f64, 0.0f64);
    for z in &pts {
        let (q, p) = (z.coord(0), z.coord(1));
        let (av, bv) = (a0.eval(z)?, b0.eval(z)?);
        o0 = o0.max(max_abs(&(moyal_term(&fa, &fb, 0, z)? - &av * &bv)));
        let (daq, dap) = (&s[1] * c(q.cos(), 0.0), &s[3] * c(2.0 * p, 0.0));
        let (dbq, dbp) = (&s[0] * c(p, 0.0), &s[2] * c(-p.sin(), 0.0) + &s[0] * c(q, 0.0));
        let bracket = &dap * &dbq - &daq * &dbp;
        let want = &av * b1.eval(z)? + a1.eval(z)? * &bv - bracket * (i * 0.5);
        o1 = o1.max(max_abs(&(moyal_term(&fa, &fb, 1, z)? - want)));
    }

    let q = FormalSymbol::single(scalar_times("q", |v| vec![(v[0].clone(), 0)]));
    let pm = FormalSymbol::single(scalar_times("p", |v| vec![(v[1].clone(), 0)]));
    let (qp, pq) = (moyal_mul(&q, &pm, 2)?, moyal_mul(&pm, &q, 2)?);
    let mut ccr = 0.0f64;
    for z in &pts {
        for eps in [0.1, 1.0 / 64.0, 1e-3] {
            let d = qp.eval_sum(z, eps)? - pq.eval_sum(z, eps)? - CMat::identity(2, 2) * (i * eps);
            ccr = ccr.max(max_abs(&d));
        }
    }

    // Cubic matrix polynomials, so that order 2 is nontrivial.
    let pa = FormalSymbol::single(scalar_times("a", |v| {
        vec![(&v[0].sq() * &v[0], 1), (v[1].clone(), 3), (&v[0] * &v[1], 0)]
    }));
    let pb = FormalSymbol::single(scalar_times("b", |v| vec![(&v[1].sq() * &v[1], 2), (v[0].clone(), 1)]));
    let pc = FormalSymbol::single(scalar_times("c", |v| {
        vec![(&v[0] * &v[1], 3), (v[1].sq(), 1), (v[0].sq(), 2)]
    }));
    let left = moyal_mul(&moyal_mul(&pa, &pb, 2)?, &pc, 2)?;
    let right = moyal_mul(&pa, &moyal_mul(&pb, &pc, 2)?, 2)?;
    let mut assoc = 0.0f64;
    let mut table = Table::new("associativity", &["q", "p", "order", "defect"]);
    for z in &pts {
        for k in 0..=2 {
            let d = max_abs(&(left.term(k).eval(z)? - right.term(k).eval(z)?));
            table.push(vec![z.coord(0), z.coord(1), k as f64, d]);
            assoc = assoc.max(d);
        }
    }

    let mut r = Report::new("moyal-algebra");
    r.checks.push(Check::at_most("order 0 pointwise", o0, 1e-12));
    r.checks.push(Check::at_most("order 1 bracket identity", o1, 1e-8));
    r.checks.push(Check::at_most("[q,p] = i eps", ccr, 1e-10));
    r.checks.push(Check::at_most("associativity through order 2", assoc, 1e-7));
    r.tables.push(table);
    Ok(r)
}
