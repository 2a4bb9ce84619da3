//! Central finite-difference jets on tensor-product stencils.

use super::jet::Jet;
use super::multiindex::table;
use super::point::PhasePoint;
use crate::error::{AdptError, Result};
use crate::linalg::{r, CMat};
use serde::{Deserialize, Serialize};

/// Highest derivative order the stencils support.
pub const FD_MAX_ORDER: usize = 4;

/// Step schedule h_m = h0 · growth^m for derivatives of total order m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub h0: f64,
    pub growth: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            h0: 1e-4,
            growth: 3.0,
        }
    }
}

impl FdConfig {
    pub fn step(&self, m: usize) -> f64 {
        self.h0 * self.growth.powi(m as i32)
    }

    /// Same schedule with every step scaled by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            h0: self.h0 * s,
            growth: self.growth,
        }
    }
}

/// Central stencils (offsets, weights) for ∂^k, k = 1..4: fourth-order
/// accurate for k ≤ 2, second-order for k = 3, 4.
fn stencil(k: usize) -> (&'static [i32], &'static [f64]) {
    match k {
        1 => (&[-2, -1, 1, 2], &[1.0 / 12.0, -2.0 / 3.0, 2.0 / 3.0, -1.0 / 12.0]),
        2 => (&[-2, -1, 0, 1, 2], &[-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0]),
        3 => (&[-2, -1, 1, 2], &[-0.5, 1.0, -1.0, 0.5]),
        4 => (&[-2, -1, 0, 1, 2], &[1.0, -4.0, 6.0, -4.0, 1.0]),
        _ => unreachable!(),
    }
}

/// Jet of `f` at `z` up to `order`, each derivative of total order m taken on
/// the tensor product of one-dimensional stencils with step h_m.
pub fn fd_jet<F>(f: F, z: &PhasePoint, order: usize, cfg: &FdConfig) -> Result<Jet>
where
    F: Fn(&PhasePoint) -> Result<CMat>,
{
    if order > FD_MAX_ORDER {
        return Err(AdptError::JetOrder {
            requested: order,
            max: FD_MAX_ORDER,
        });
    }
    let nv = z.nv();
    let t = table(nv);
    let f0 = f(z)?;
    let (rows, cols) = (f0.nrows(), f0.ncols());
    let mut coeffs = Vec::with_capacity(t.len(order));
    coeffs.push(f0);
    let mut delta = vec![0.0; nv];
    for i in 1..t.len(order) {
        let e = t.exps(i);
        let m = t.degree(i);
        let h = cfg.step(m);
        let active: Vec<usize> = (0..nv).filter(|&v| e[v] > 0).collect();
        let stencils: Vec<_> = active.iter().map(|&v| stencil(e[v] as usize)).collect();
        let mut acc = CMat::zeros(rows, cols);
        // iterate over the tensor product of the active stencils
        let mut pos = vec![0usize; active.len()];
        loop {
            let mut w = 1.0;
            delta.iter_mut().for_each(|x| *x = 0.0);
            for (k, &v) in active.iter().enumerate() {
                let (offs, ws) = stencils[k];
                delta[v] = offs[pos[k]] as f64 * h;
                w *= ws[pos[k]];
            }
            let val = f(&z.shifted(&delta))?;
            acc += val * r(w);
            let mut k = 0;
            while k < active.len() {
                pos[k] += 1;
                if pos[k] < stencils[k].0.len() {
                    break;
                }
                pos[k] = 0;
                k += 1;
            }
            if k == active.len() {
                break;
            }
        }
        coeffs.push(acc * r(1.0 / (h.powi(m as i32) * t.factorial(i))));
    }
    Jet::from_coeffs(z, order, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs, pauli};

    #[test]
    fn linear_symbol_is_exact() {
        // A = p σ₃: ∂_p A = σ₃, ∂_q A = 0
        let s3 = pauli()[2].clone();
        let f = |z: &PhasePoint| Ok(&s3 * r(z.p[0]));
        let z = PhasePoint::new1(0.3, -1.2);
        let j = fd_jet(f, &z, 1, &FdConfig::default()).unwrap();
        assert!(max_abs(&(j.derivative_value(&[0], &[1]).unwrap() - &s3)) < 1e-10);
        assert!(max_abs(&j.derivative_value(&[1], &[0]).unwrap()) < 1e-12);
    }

    #[test]
    fn mixed_fourth_derivatives_converge() {
        let f = |z: &PhasePoint| {
            let v = (z.q[0] * 1.3).sin() * (0.7 * z.p[0]).exp();
            Ok(CMat::from_element(1, 1, c(v, 0.0)))
        };
        let z = PhasePoint::new1(0.2, 0.1);
        let exact = |a: u32, b: u32| {
            let s = 1.3f64.powi(a as i32) * 0.7f64.powi(b as i32);
            let trig = match a % 4 {
                0 => (0.26f64).sin(),
                1 => (0.26f64).cos(),
                2 => -(0.26f64).sin(),
                _ => -(0.26f64).cos(),
            };
            s * trig * (0.07f64).exp()
        };
        let coarse = fd_jet(f, &z, 4, &FdConfig::default().scaled(4.0)).unwrap();
        let fine = fd_jet(f, &z, 4, &FdConfig::default().scaled(2.0)).unwrap();
        let err = |j: &Jet, a: u32, b: u32| (j.derivative_value(&[a as usize], &[b as usize]).unwrap()[(0, 0)].re - exact(a, b)).abs();
        // Fourth-order stencils are already at round-off for these steps.
        for (a, b) in [(1, 0), (1, 1), (2, 2)] {
            assert!(err(&fine, a, b) < 1e-7, "({a},{b}) {:e}", err(&fine, a, b));
        }
        let (ec, ef) = (err(&coarse, 3, 1), err(&fine, 3, 1));
        assert!(ef < ec / 3.0, "coarse {ec:e} fine {ef:e}");
    }

    #[test]
    fn rejects_deep_jets() {
        let f = |_: &PhasePoint| Ok(CMat::zeros(1, 1));
        let z = PhasePoint::new1(0.0, 0.0);
        assert!(matches!(
            fd_jet(f, &z, 5, &FdConfig::default()),
            Err(AdptError::JetOrder { .. })
        ));
    }
}
