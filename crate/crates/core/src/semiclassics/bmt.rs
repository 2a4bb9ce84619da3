//! BMT precession ∂_t s = −s ∧ Ω along a trajectory.

use super::flow::Trajectory;
use crate::error::{AdptError, Result};
use crate::symbol::PhasePoint;

#[derive(Debug, Clone)]
pub struct SpinVector {
    pub times: Vec<f64>,
    pub s: Vec<[f64; 3]>,
}

impl SpinVector {
    pub fn norm_drift(&self) -> f64 {
        let n0 = norm(self.s[0]);
        self.s.iter().map(|s| (norm(*s) - n0).abs()).fold(0.0, f64::max)
    }

    pub fn last(&self) -> [f64; 3] {
        *self.s.last().unwrap()
    }
}

fn norm(s: [f64; 3]) -> f64 {
    (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Exact solution over one step with Ω frozen: rotation about Ω by |Ω|h.
fn rotate(s: [f64; 3], om: [f64; 3], h: f64) -> [f64; 3] {
    let w = norm(om);
    if w == 0.0 {
        return s;
    }
    let k = [om[0] / w, om[1] / w, om[2] / w];
    let (sn, cs) = (w * h).sin_cos();
    let kxs = cross(k, s);
    let kd = k[0] * s[0] + k[1] * s[1] + k[2] * s[2];
    std::array::from_fn(|i| s[i] * cs + kxs[i] * sn + k[i] * kd * (1.0 - cs))
}

const NORM_TOL: f64 = 1e-9;

fn run(times: Vec<f64>, mid: impl Fn(usize) -> Result<[f64; 3]>, s0: [f64; 3]) -> Result<SpinVector> {
    if (norm(s0) - 1.0).abs() > 1e-12 {
        return Err(AdptError::Invalid(format!("BMT needs a unit start vector, |s0| = {}", norm(s0))));
    }
    let mut s = vec![s0];
    for n in 0..times.len() - 1 {
        let om = mid(n)?;
        s.push(rotate(s[n], om, times[n + 1] - times[n]));
    }
    let out = SpinVector { times, s };
    let drift = out.norm_drift();
    if drift > NORM_TOL {
        return Err(AdptError::Defect {
            what: "BMT norm",
            order: 0,
            value: drift,
            tol: NORM_TOL,
        });
    }
    Ok(out)
}

/// s(t) for a prescribed Ω(t), frozen at step midpoints.
pub fn bmt_evolve(omega: impl Fn(f64) -> [f64; 3], s0: [f64; 3], t: f64, dt: f64) -> Result<SpinVector> {
    if !(dt > 0.0) {
        return Err(AdptError::Invalid("BMT needs dt > 0".into()));
    }
    let steps = ((t.abs() / dt).ceil() as usize).max(1);
    let h = t / steps as f64;
    let times = (0..=steps).map(|n| n as f64 * h).collect();
    run(times, |n| Ok(omega((n as f64 + 0.5) * h)), s0)
}

/// s(t) with Ω evaluated along `traj` at the same midpoints used by the spin
/// transport, so the two discretizations correspond step by step.
pub fn bmt_along(
    traj: &Trajectory,
    omega: impl Fn(&PhasePoint) -> Result<[f64; 3]>,
    s0: [f64; 3],
) -> Result<SpinVector> {
    run(traj.times.clone(), |n| omega(&traj.midpoint(n)), s0)
}
