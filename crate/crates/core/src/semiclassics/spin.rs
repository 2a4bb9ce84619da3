//! Spin transport ∂_tD = −i h₁(Φᵗz) D along a trajectory.

use super::flow::Trajectory;
use crate::error::{AdptError, Result};
use crate::linalg::{dexpm_herm, expm_herm, op_norm, r, CMat};
use crate::symbol::MatrixSymbol;

/// D(z, t_n) along a trajectory; D(0) = 1.
#[derive(Debug, Clone)]
pub struct SpinFrame {
    pub times: Vec<f64>,
    pub d: Vec<CMat>,
    /// ∂D/∂z_j at each node, when computed.
    pub gradient: Option<Vec<Vec<CMat>>>,
}

impl SpinFrame {
    pub fn unitarity_defect(&self) -> f64 {
        self.d
            .iter()
            .map(|d| op_norm(&(d.adjoint() * d - CMat::identity(d.nrows(), d.ncols()))))
            .fold(0.0, f64::max)
    }
}

const UNITARITY_TOL: f64 = 1e-9;

fn transport(h1: &MatrixSymbol, traj: &Trajectory, gradient: bool) -> Result<SpinFrame> {
    let l = h1.n();
    let h = traj.step_size();
    let n2 = traj.points[0].nv();
    if gradient && traj.tangent.is_none() {
        return Err(AdptError::Precondition("spin gradients need a trajectory with tangent map".into()));
    }
    let mut d = CMat::identity(l, l);
    let mut g = vec![CMat::zeros(l, l); if gradient { n2 } else { 0 }];
    let mut out = SpinFrame {
        times: traj.times.clone(),
        d: Vec::with_capacity(traj.times.len()),
        gradient: gradient.then(Vec::new),
    };
    for n in 0..=traj.steps() {
        out.d.push(d.clone());
        if let Some(gr) = out.gradient.as_mut() {
            gr.push(g.clone());
        }
        if n == traj.steps() {
            break;
        }
        let zm = traj.midpoint(n);
        let step = if gradient {
            let jet = h1.jet(&zm, 1)?;
            let hm = jet.value().clone();
            let e = expm_herm(&hm, h);
            let mm = traj.midpoint_tangent(n).unwrap();
            let dh: Vec<CMat> = (0..n2).map(|k| jet.d1(k)).collect();
            for (j, gj) in g.iter_mut().enumerate() {
                let mut dir = CMat::zeros(l, l);
                for (k, dhk) in dh.iter().enumerate() {
                    dir += dhk * r(mm[(k, j)]);
                }
                *gj = dexpm_herm(&hm, &dir, h) * &d + &e * &*gj;
            }
            e
        } else {
            expm_herm(&h1.eval(&zm)?, h)
        };
        d = step * d;
    }
    let defect = out.unitarity_defect();
    if defect > UNITARITY_TOL {
        return Err(AdptError::Defect {
            what: "spin transport unitarity",
            order: 0,
            value: defect,
            tol: UNITARITY_TOL,
        });
    }
    Ok(out)
}

/// D along `traj`, one exponential of the midpoint-frozen generator per step.
pub fn spin_transport(h1: &MatrixSymbol, traj: &Trajectory) -> Result<SpinFrame> {
    transport(h1, traj, false)
}

/// As [`spin_transport`], also differentiating the discrete map in z.
pub fn spin_transport_gradient(h1: &MatrixSymbol, traj: &Trajectory) -> Result<SpinFrame> {
    transport(h1, traj, true)
}
