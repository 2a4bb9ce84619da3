//! Egorov hierarchy: a₀(t) by transport along the flow and the first
//! correction a₁(t) by Duhamel quadrature.

use std::sync::Arc;

use super::flow::{classical_flow, classical_flow_tangent, ScalarField, Trajectory};
use super::spin::{spin_transport, spin_transport_gradient, SpinFrame};
use crate::error::{AdptError, Result};
use crate::linalg::{c, max_abs, r, CMat};
use crate::symbol::{MatrixSymbol, PhasePoint};

/// Inputs shared by all Egorov evaluations: E_r, h₁ and optionally h₂.
#[derive(Clone)]
pub struct Egorov {
    energy: Arc<dyn ScalarField>,
    h1: MatrixSymbol,
    h2: Option<MatrixSymbol>,
    dt: f64,
    quad_stride: usize,
}

impl std::fmt::Debug for Egorov {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Egorov")
            .field("h1", &self.h1)
            .field("h2", &self.h2)
            .field("dt", &self.dt)
            .finish()
    }
}

/// Poisson bracket of matrix-valued first-order data,
/// Σ_i ∂_{p_i}A ∂_{q_i}B − ∂_{q_i}A ∂_{p_i}B.
fn bracket(da: &[CMat], db: &[CMat]) -> CMat {
    let d = da.len() / 2;
    let mut out = CMat::zeros(da[0].nrows(), db[0].ncols());
    for i in 0..d {
        out += &da[d + i] * &db[i] - &da[i] * &db[d + i];
    }
    out
}

fn is_scalar(a: &CMat) -> bool {
    let l = a.nrows();
    let mean = (0..l).map(|i| a[(i, i)]).sum::<num_complex::Complex64>() / l as f64;
    max_abs(&(a - CMat::identity(l, l) * mean)) <= 1e-12 * max_abs(a).max(1.0)
}

impl Egorov {
    pub fn new(energy: Arc<dyn ScalarField>, h1: MatrixSymbol) -> Self {
        Self {
            energy,
            h1,
            h2: None,
            dt: 1e-3,
            quad_stride: 1,
        }
    }

    pub fn with_h2(mut self, h2: MatrixSymbol) -> Self {
        self.h2 = Some(h2);
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    /// Use every k-th flow node for the Duhamel quadrature.
    pub fn with_quad_stride(mut self, k: usize) -> Self {
        self.quad_stride = k.max(1);
        self
    }

    pub fn energy(&self) -> &dyn ScalarField {
        &*self.energy
    }

    pub fn h1(&self) -> &MatrixSymbol {
        &self.h1
    }

    pub fn flow(&self, z: &PhasePoint, t: f64) -> Result<Trajectory> {
        classical_flow(&*self.energy, z, t, self.dt)
    }

    /// a₀(z,t) = D*(z,t) a₀(Φᵗz) D(z,t).
    pub fn evolve(&self, a0: &MatrixSymbol, z: &PhasePoint, t: f64) -> Result<CMat> {
        let traj = self.flow(z, t)?;
        let a = a0.eval(traj.end())?;
        if self.h1.is_zero() || is_scalar(&a) {
            return Ok(a);
        }
        let dn = spin_transport(&self.h1, &traj)?.d.pop().unwrap();
        Ok(dn.adjoint() * a * dn)
    }

    /// a₁(z,t) = ∫₀ᵗ U(τ) I₁(t−τ) dτ with
    /// I₁ = ½({h₁,a₀} − {a₀,h₁}) + i[h₂,a₀].
    pub fn correct(&self, a0: &MatrixSymbol, z: &PhasePoint, t: f64) -> Result<CMat> {
        Ok(self.evolve_pair(a0, z, t)?.1)
    }

    /// (a₀(z,t), a₁(z,t)) from one trajectory.
    pub fn evolve_pair(&self, a0: &MatrixSymbol, z: &PhasePoint, t: f64) -> Result<(CMat, CMat)> {
        let traj = classical_flow_tangent(&*self.energy, z, t, self.dt)?;
        let big_n = traj.steps();
        let xt = traj.end();
        let aj = a0.jet(xt, 1)?;
        let a = aj.value().clone();
        let l = a.nrows();
        if self.h2.is_none() && !is_scalar(&a0.eval(z)?) {
            return Err(AdptError::Capability(
                "the first Egorov correction for matrix-valued a₀ needs h₂".into(),
            ));
        }
        let frame = if self.h1.is_zero() {
            let n2 = z.nv();
            SpinFrame {
                times: traj.times.clone(),
                d: vec![CMat::identity(l, l); big_n + 1],
                gradient: Some(vec![vec![CMat::zeros(l, l); n2]; big_n + 1]),
            }
        } else {
            spin_transport_gradient(&self.h1, &traj)?
        };
        let grads = frame.gradient.as_ref().unwrap();
        let tm = traj.tangent.as_ref().unwrap();
        let n2 = z.nv();
        let (dn, gn, mn) = (&frame.d[big_n], &grads[big_n], &tm[big_n]);
        let da: Vec<CMat> = (0..n2).map(|k| aj.d1(k)).collect();
        let a0t = dn.adjoint() * &a * dn;

        let mut stride = self.quad_stride.min(big_n / 2).max(1);
        while stride > 1 && (big_n % stride != 0 || (big_n / stride) % 2 != 0) {
            stride -= 1;
        }
        let nodes = big_n / stride;
        let h = traj.step_size() * stride as f64;
        let mut acc = CMat::zeros(l, l);
        for m in 0..=nodes {
            let n = m * stride;
            let w = &traj.points[n];
            let (d_n, g_n) = (&frame.d[n], &grads[n]);
            let minv = tm[n]
                .clone()
                .try_inverse()
                .ok_or_else(|| AdptError::NonFinite("singular tangent map".into()))?;
            // D(w,s) with s = t − τ_n, and its w-gradient via the group law.
            let dws = dn * d_n.adjoint();
            let dv: Vec<CMat> = (0..n2).map(|j| (&gn[j] - &dws * &g_n[j]) * d_n.adjoint()).collect();
            let chain = mn * &minv;
            let mut dgrad = Vec::with_capacity(n2);
            for k in 0..n2 {
                let mut ddk = CMat::zeros(l, l);
                let mut dak = CMat::zeros(l, l);
                for j in 0..n2 {
                    ddk += &dv[j] * r(minv[(j, k)]);
                    dak += &da[j] * r(chain[(j, k)]);
                }
                dgrad.push(ddk.adjoint() * &a * &dws + dws.adjoint() * dak * &dws + dws.adjoint() * &a * ddk);
            }
            let a0s = dws.adjoint() * &a * &dws;
            let hj = self.h1.jet(w, 1)?;
            let dh: Vec<CMat> = (0..n2).map(|k| hj.d1(k)).collect();
            let mut inh = (bracket(&dh, &dgrad) - bracket(&dgrad, &dh)) * r(0.5);
            if let Some(h2) = &self.h2 {
                let h2w = h2.eval(w)?;
                inh += (&h2w * &a0s - &a0s * &h2w) * c(0.0, 1.0);
            }
            let wgt = if m == 0 || m == nodes {
                1.0
            } else if m % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += d_n.adjoint() * inh * d_n * r(wgt);
        }
        Ok((a0t, acc * r(h / 3.0)))
    }
}

/// a₀(z,t) for the Egorov setup `eg`.
pub fn egorov_evolve(eg: &Egorov, a0: &MatrixSymbol, z: &PhasePoint, t: f64) -> Result<CMat> {
    eg.evolve(a0, z, t)
}

/// a_n(z,t); only n = 1 is available since the order-2 inhomogeneity is not
/// known in closed form.
pub fn egorov_correct(eg: &Egorov, a0: &MatrixSymbol, n: usize, z: &PhasePoint, t: f64) -> Result<CMat> {
    match n {
        0 => eg.evolve(a0, z, t),
        1 => eg.correct(a0, z, t),
        _ => Err(AdptError::Capability(format!("Egorov correction of order {n}; only n ≤ 1 is supported"))),
    }
}
