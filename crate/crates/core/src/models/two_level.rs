//! Two-level benchmark H₀ = e·1 + n̂·σ with a unit Bloch vector.

use crate::linalg::{c, pauli, CMat};
use crate::spectral::BandSpec;
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint, SJet};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Parameters of θ(q,p) = a sin(2πq/L) + b tanh p, e(q,p) = c cos(2πq/L) +
/// d p²/(1+p²) and the optional azimuthal twist φ(q) = τ sin(2πq/L).
///
/// With τ = 0 the Bloch vector stays in the σ₁σ₃-plane and the global real
/// frame has h₁ = 0; a nonzero twist makes h₁ nontrivial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TwoLevelParams {
    pub a: f64,
    pub b: f64,
    pub c_amp: f64,
    pub d_amp: f64,
    pub l: f64,
    pub twist: f64,
}

impl Default for TwoLevelParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 0.5,
            c_amp: 0.3,
            d_amp: 0.5,
            l: 8.0,
            twist: 0.0,
        }
    }
}

/// Scalar ingredients (θ, φ, e) as jets.
pub struct Angles {
    pub theta: SJet,
    pub phi: SJet,
    pub e: SJet,
}

#[derive(Debug, Clone)]
pub struct TwoLevel {
    pub params: TwoLevelParams,
}

impl TwoLevel {
    pub fn new(params: TwoLevelParams) -> Self {
        Self { params }
    }

    pub fn angles(&self, z: &PhasePoint, k: usize) -> Angles {
        let pr = &self.params;
        let v = SJet::vars(z, k);
        let (q, p) = (&v[0], &v[1]);
        let s = (q * (2.0 * PI / pr.l)).sin();
        let p2 = p.sq();
        Angles {
            theta: &s * pr.a + p.tanh() * pr.b,
            phi: &s * pr.twist,
            e: (q * (2.0 * PI / pr.l)).cos() * pr.c_amp
                + (&p2 * (p2.add_const(1.0)).recip()) * pr.d_amp,
        }
    }

    fn h0_jet(&self, z: &PhasePoint, k: usize) -> Jet {
        let an = self.angles(z, k);
        let s = pauli();
        let st = an.theta.sin();
        let n1 = &st * an.phi.cos();
        let n2 = &st * an.phi.sin();
        let n3 = an.theta.cos();
        let id = CMat::identity(2, 2);
        Jet::from_scalars(z, &[(&an.e, &id), (&n1, &s[0]), (&n2, &s[1]), (&n3, &s[2])])
    }

    pub fn h0(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("two_level", 1, 2, 2, move |z, k| Ok(me.h0_jet(z, k)))
            .with_hermitian(true)
    }

    pub fn hamiltonian(&self) -> FormalSymbol {
        FormalSymbol::single(self.h0())
    }

    /// Upper band E_r = e + 1.
    pub fn band(&self) -> BandSpec {
        BandSpec::index(1, 2, 1.0)
    }

    pub fn energy(&self, z: &PhasePoint, k: usize) -> SJet {
        self.angles(z, k).e.add_const(1.0)
    }

    /// π₀ = (1 + n̂·σ)/2 as an exact jet.
    pub fn projector_jet(&self, z: &PhasePoint, k: usize) -> Jet {
        let h = self.h0_jet(z, k);
        let e = self.angles(z, k).e;
        let mut j = h.scale_re(0.5);
        j.add_scalar_term(&e.scale(-0.5).add_const(0.5), &CMat::identity(2, 2));
        j
    }

    /// Global frame Ψ = [ψ₊, ψ₋] with ψ₊ = (cos θ/2, e^{iφ} sin θ/2),
    /// ψ₋ = (−e^{−iφ} sin θ/2, cos θ/2).
    pub fn frame_jet(&self, z: &PhasePoint, k: usize) -> Jet {
        let an = self.angles(z, k);
        let half = an.theta.scale(0.5);
        let (ch, sh) = (half.cos(), half.sin());
        let (cp, sp) = (an.phi.cos(), an.phi.sin());
        let e = |r: usize, col: usize, re: f64, im: f64| {
            let mut m = CMat::zeros(2, 2);
            m[(r, col)] = c(re, im);
            m
        };
        Jet::from_scalars(
            z,
            &[
                (&ch, &e(0, 0, 1.0, 0.0)),
                (&(&sh * &cp), &e(1, 0, 1.0, 0.0)),
                (&(&sh * &sp), &e(1, 0, 0.0, 1.0)),
                (&(&sh * &cp), &e(0, 1, -1.0, 0.0)),
                (&(&sh * &sp), &e(0, 1, 0.0, 1.0)),
                (&ch, &e(1, 1, 1.0, 0.0)),
            ],
        )
    }

    pub fn frame(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("two_level_frame", 1, 2, 2, move |z, k| Ok(me.frame_jet(z, k)))
    }

    /// u₀ = Ψ* in the global frame.
    pub fn u0(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("two_level_u0", 1, 2, 2, move |z, k| {
            Ok(me.frame_jet(z, k).adjoint())
        })
    }

    /// h₁ of the upper band in the global frame,
    /// ∂_pE φ_q sin²(θ/2) + ½ sin θ θ_p φ_q.
    pub fn h1_jet(&self, z: &PhasePoint, k: usize) -> SJet {
        let an = self.angles(z, k + 1);
        let ep = an.e.derivative(1);
        let phq = an.phi.derivative(0);
        let thp = an.theta.derivative(1);
        let th = an.theta.truncate(k);
        let s2 = th.scale(0.5).sin().sq();
        &ep * &phq * &s2 + &th.sin() * &thp * &phq * 0.5
    }

    pub fn h1(&self, z: &PhasePoint) -> f64 {
        self.h1_jet(z, 0).value()
    }

    /// h₁ as a 1×1 symbol.
    pub fn h1_symbol(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("two_level_h1", 1, 1, 1, move |z, k| {
            let s = me.h1_jet(z, k);
            Ok(Jet::from_scalars(z, &[(&s, &CMat::identity(1, 1))]))
        })
        .with_hermitian(true)
        .with_max_jet_order(crate::symbol::multiindex::MAX_ORDER - 1)
    }

    /// E_r as a 1×1 symbol.
    pub fn energy_symbol(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("two_level_E", 1, 1, 1, move |z, k| {
            let s = me.energy(z, k);
            Ok(Jet::from_scalars(z, &[(&s, &CMat::identity(1, 1))]))
        })
        .with_hermitian(true)
    }
}
