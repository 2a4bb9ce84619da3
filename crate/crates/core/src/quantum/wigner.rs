//! Matrix-valued Wigner transform on the lattice dual to [`super::weyl`].
//!
//! The lattice points are the n grid positions times the 2n momentum
//! midpoints. W is defined so that ⟨ψ, Ŵ(a)ψ⟩ = Σ Tr(a·W)·ΔqΔp holds exactly
//! for the discrete quantization, including the averaged k − k' = ±n/2 pairs.

use rustfft::FftPlanner;

use super::grid::Grid1D;
use super::op::WaveFn;
use super::weyl::midpoint_index;
use crate::error::Result;
use crate::linalg::{CMat, C64};
use crate::symbol::{MatrixSymbol, PhasePoint};

#[derive(Debug, Clone)]
pub struct Wigner {
    grid: Grid1D,
    /// Entry (l, ν) at index (ν + n)·n + l.
    values: Vec<CMat>,
}

pub fn wigner(psi: &WaveFn) -> Wigner {
    let grid = *psi.grid();
    let (n, m) = (grid.n_points, grid.m_fiber);
    let ni = n as i64;
    let h = ni / 2;
    let zero = C64::new(0.0, 0.0);
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);

    // Plane-wave amplitudes ψ̃_k = n^{-1/2} Σ_j e^{−ip_k x_j/ε} ψ_j, indexed k + n/2.
    let mut tilde = vec![vec![zero; m]; n];
    let mut buf = vec![zero; n];
    for a in 0..m {
        for (j, x) in buf.iter_mut().enumerate() {
            *x = psi.at(j)[a];
        }
        fwd.process(&mut buf);
        for k in -h..h {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            tilde[(k + h) as usize][a] = buf[k.rem_euclid(ni) as usize] * (sign / (n as f64).sqrt());
        }
    }

    // y[ν + n][(m mod n)·m_f² + a·m_f + b] = Σ w ψ̃_{k'} ψ̃_k^† over pairs with midpoint ν.
    let mut y = vec![vec![zero; n * m * m]; 2 * n];
    let mut add = |nu: i64, t: usize, k: i64, kp: i64, w: f64| {
        let (pk, pkp) = (&tilde[(k + h) as usize], &tilde[(kp + h) as usize]);
        let row = &mut y[(nu + ni) as usize];
        for a in 0..m {
            for b in 0..m {
                row[(t * m + a) * m + b] += pkp[a] * pk[b].conj() * w;
            }
        }
    };
    for k in -h..h {
        for kp in -h..h {
            let mm = grid.wrap(k - kp);
            let t = mm.rem_euclid(ni) as usize;
            if mm == -h {
                add(midpoint_index(ni, k, mm), t, k, kp, 0.5);
                add(midpoint_index(ni, k, -mm), t, k, kp, 0.5);
            } else {
                add(midpoint_index(ni, k, mm), t, k, kp, 1.0);
            }
        }
    }

    // W(l, ν) = 2/(nΔp) Σ_m (−1)^m e^{−2πiml/n} y_ν[m].
    let norm = 2.0 / (n as f64 * grid.dp());
    let mut values = vec![CMat::zeros(m, m); 2 * n * n];
    for (row_idx, row) in y.iter().enumerate() {
        for a in 0..m {
            for b in 0..m {
                for (t, x) in buf.iter_mut().enumerate() {
                    let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
                    *x = row[(t * m + a) * m + b] * sign;
                }
                fwd.process(&mut buf);
                for l in 0..n {
                    values[row_idx * n + l][(a, b)] = buf[l] * norm;
                }
            }
        }
    }
    Wigner { grid, values }
}

impl Wigner {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn dq(&self) -> f64 {
        self.grid.dx()
    }

    pub fn dp(&self) -> f64 {
        0.5 * self.grid.dp()
    }

    /// Value at grid site l and momentum midpoint ν ∈ [−n, n), p = νΔp/2.
    pub fn at(&self, l: usize, nu: i64) -> &CMat {
        let n = self.grid.n_points;
        &self.values[(nu + n as i64) as usize * n + l]
    }

    /// Lattice points (q, p, W), momentum-major.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, &CMat)> + '_ {
        let n = self.grid.n_points;
        self.values.iter().enumerate().map(move |(idx, w)| {
            let nu = (idx / n) as i64 - n as i64;
            (self.grid.x(idx % n), self.grid.p_mid(nu), w)
        })
    }

    /// Σ Tr W·ΔqΔp, equal to ‖ψ‖².
    pub fn total(&self) -> f64 {
        self.values.iter().map(|w| w.trace().re).sum::<f64>() * self.dq() * self.dp()
    }

    /// Σ Tr(a·W)·ΔqΔp.
    pub fn pair(&self, a: &MatrixSymbol) -> Result<C64> {
        let mut s = C64::new(0.0, 0.0);
        for (q, p, w) in self.iter() {
            s += (a.eval(&PhasePoint::new1(q, p))? * w).trace();
        }
        Ok(s * self.dq() * self.dp())
    }

    /// Lattice point of the largest Tr W.
    pub fn peak(&self) -> (f64, f64) {
        let (q, p, _) = self
            .iter()
            .max_by(|a, b| a.2.trace().re.total_cmp(&b.2.trace().re))
            .expect("nonempty lattice");
        (q, p)
    }
}
