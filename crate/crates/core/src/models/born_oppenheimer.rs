//! Born-Oppenheimer type symbols H₀(q,p) = κ(p)·1 + V(q).

use crate::error::{AdptError, Result};
use crate::linalg::{c, r, CMat};
use crate::spectral::{BandModel, BandSpec};
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint, SJet};
use serde::{Deserialize, Serialize};

/// Nuclear kinetic energy κ(p).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kinetic {
    /// κ = |p|²/2.
    Raw,
    /// κ = |p|²/(2(1 + η|p|²)), bounded with bounded derivatives.
    Mollified { eta: f64 },
}

impl Kinetic {
    pub fn jet(&self, z: &PhasePoint, k: usize) -> SJet {
        let d = z.d();
        let v = SJet::vars(z, k);
        let mut p2 = SJet::constant(z.nv(), k, 0.0);
        for j in 0..d {
            p2 = p2 + v[d + j].sq();
        }
        match *self {
            Kinetic::Raw => p2 * 0.5,
            Kinetic::Mollified { eta } => (&p2 * (p2.scale(eta).add_const(1.0)).recip()) * 0.5,
        }
    }
}

#[derive(Clone)]
pub struct BornOppenheimer {
    v: MatrixSymbol,
    kinetic: Kinetic,
    band: BandSpec,
    z_ref: PhasePoint,
    model: BandModel,
}

impl std::fmt::Debug for BornOppenheimer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BornOppenheimer({:?}, {:?})", self.v, self.kinetic)
    }
}

fn hermitian_unit(n: usize, i: usize, j: usize, im: bool) -> CMat {
    let mut m = CMat::zeros(n, n);
    if i == j {
        m[(i, i)] = r(1.0);
    } else if im {
        m[(i, j)] = c(0.0, 1.0);
        m[(j, i)] = c(0.0, -1.0);
    } else {
        m[(i, j)] = r(1.0);
        m[(j, i)] = r(1.0);
    }
    m
}

impl BornOppenheimer {
    /// `v` must depend on q only; the frame is transported from (q_ref, 0).
    pub fn new(v: MatrixSymbol, kinetic: Kinetic, band: BandSpec, q_ref: Vec<f64>) -> Result<Self> {
        let d = v.d();
        if q_ref.len() != d {
            return Err(AdptError::Dimension("reference point has wrong dimension".into()));
        }
        let vv = v.clone();
        let kin = kinetic;
        let n = v.n();
        let h0 = MatrixSymbol::from_jet_fn("H_BO", d, n, n, v.max_jet_order(), move |z, k| {
            let mut j = vv.jet(z, k)?;
            j.add_scalar_term(&kin.jet(z, k), &CMat::identity(n, n));
            Ok(j)
        })
        .with_hermitian(true);
        let model = BandModel::new(h0, band.clone())?;
        Ok(Self {
            v,
            kinetic,
            band,
            z_ref: PhasePoint::new(q_ref, vec![0.0; d])?,
            model,
        })
    }

    /// Three-level electronic potential in d = 2 with complex couplings, so
    /// that the lowest band carries a nonzero Berry connection.
    pub fn standard(kinetic: Kinetic) -> Self {
        let v = MatrixSymbol::analytic("V", 2, 3, 3, |z, k| {
            let x = SJet::vars(z, k);
            let (q1, q2) = (&x[0], &x[1]);
            let u = |i, j, im| hermitian_unit(3, i, j, im);
            let terms: Vec<(SJet, CMat)> = vec![
                (q1.cos() * 0.3 + (-1.0), u(0, 0, false)),
                (q2.sin() * 0.2 + 0.4, u(1, 1, false)),
                (SJet::constant(4, k, 1.2), u(2, 2, false)),
                (q2.cos() * 0.25, u(0, 1, false)),
                (q1.sin() * 0.25, u(0, 1, true)),
                (q2.cos() * 0.15, u(0, 2, false)),
                (q2.sin() * 0.15, u(0, 2, true)),
                ((q1 + q2).sin() * 0.2, u(1, 2, true)),
            ];
            let refs: Vec<(&SJet, &CMat)> = terms.iter().map(|(s, m)| (s, m)).collect();
            Ok(Jet::from_scalars(z, &refs))
        })
        .with_hermitian(true);
        Self::new(v, kinetic, BandSpec::index(0, 1, 0.3), vec![0.0, 0.0]).expect("standard BO model")
    }

    pub fn kinetic(&self) -> Kinetic {
        self.kinetic
    }

    pub fn potential(&self) -> &MatrixSymbol {
        &self.v
    }

    pub fn band(&self) -> &BandSpec {
        &self.band
    }

    pub fn band_model(&self) -> &BandModel {
        &self.model
    }

    pub fn h0(&self) -> MatrixSymbol {
        self.model.h0().clone()
    }

    pub fn hamiltonian(&self) -> FormalSymbol {
        FormalSymbol::single(self.h0())
    }

    /// Global q-dependent frame (band columns first).
    pub fn frame(&self) -> MatrixSymbol {
        self.model
            .reference_frame(&self.z_ref)
            .expect("reference point lies in the gapped region")
    }

    pub fn u0(&self) -> MatrixSymbol {
        let f = self.frame();
        let n = self.v.n();
        MatrixSymbol::from_jet_fn("u0_BO", self.v.d(), n, n, f.max_jet_order(), move |z, k| {
            Ok(f.jet(z, k)?.adjoint())
        })
    }

    fn psi(&self, z: &PhasePoint, k: usize) -> Result<Jet> {
        let l = self.band.multiplicity;
        let f = self.frame().jet(z, k)?;
        let sel = CMat::identity(self.v.n(), l);
        Ok(f.right_mul_const(&sel))
    }

    /// Berry connection A_j = i⟨ψ, ∂_{q_j}ψ⟩, one ℓ×ℓ matrix per direction.
    pub fn berry_connection(&self, z: &PhasePoint) -> Result<Vec<CMat>> {
        let psi = self.psi(z, 1)?;
        let ps = psi.value().adjoint();
        Ok((0..z.d()).map(|j| &ps * psi.d1(j) * c(0.0, 1.0)).collect())
    }

    /// e_r(q).
    pub fn electronic_energy(&self, z: &PhasePoint) -> Result<f64> {
        Ok(self.model.jets(z, 0)?.energy.value() - self.kinetic.jet(z, 0).value())
    }

    fn gradients(&self, z: &PhasePoint) -> (Vec<f64>, Vec<Vec<f64>>) {
        let d = z.d();
        let kj = self.kinetic.jet(z, 2);
        let grad = (0..d).map(|j| kj.d1(d + j)).collect();
        let hess = (0..d)
            .map(|i| (0..d).map(|j| kj.derivative(d + i).d1(d + j)).collect())
            .collect();
        (grad, hess)
    }

    /// h₁ = −∇κ·A (−p·A for the raw kinetic energy).
    pub fn h1_oracle(&self, z: &PhasePoint) -> Result<CMat> {
        let a = self.berry_connection(z)?;
        let (g, _) = self.gradients(z);
        let l = self.band.multiplicity;
        Ok(a.iter().zip(&g).fold(CMat::zeros(l, l), |acc, (aj, gj)| acc - aj * r(*gj)))
    }

    /// h₂ = ½Σ κ_{jk}(A_jA_k + ⟨∂_jψ,(1−π₀)∂_kψ⟩) − ⟨∇κ·∇ψ, R₀ ∇κ·∇ψ⟩; for the
    /// raw kinetic energy κ_{jk} = δ_{jk} and ∇κ = p.
    pub fn h2_oracle(&self, z: &PhasePoint) -> Result<CMat> {
        let d = z.d();
        let n = self.v.n();
        let psi = self.psi(z, 1)?;
        let sj = self.model.jets(z, 0)?;
        let q0 = CMat::identity(n, n) - &sj.eig.pi0;
        let r0 = sj.eig.reduced_resolvent();
        let a = self.berry_connection(z)?;
        let (g, hs) = self.gradients(z);
        let dpsi: Vec<CMat> = (0..d).map(|j| psi.d1(j)).collect();
        let l = self.band.multiplicity;
        let mut acc = CMat::zeros(l, l);
        for i in 0..d {
            for j in 0..d {
                let w = 0.5 * hs[i][j];
                if w != 0.0 {
                    acc += (&a[i] * &a[j] + dpsi[i].adjoint() * &q0 * &dpsi[j]) * r(w);
                }
            }
        }
        let v = dpsi.iter().zip(&g).fold(CMat::zeros(n, l), |acc, (dp, gj)| acc + dp * r(*gj));
        acc -= v.adjoint() * r0 * &v;
        Ok(acc)
    }

    /// Second-order BO symbol ½(p − εA)² + e_r + ε²(½⟨∇ψ,(1−π₀)∇ψ⟩ − ⟨p·∇ψ, R₀ p·∇ψ⟩),
    /// for the raw kinetic energy.
    pub fn h3_oracle(&self, z: &PhasePoint, eps: f64) -> Result<CMat> {
        if self.kinetic != Kinetic::Raw {
            return Err(AdptError::Capability("h3BO is stated for κ = p²/2".into()));
        }
        let d = z.d();
        let n = self.v.n();
        let l = self.band.multiplicity;
        let a = self.berry_connection(z)?;
        let psi = self.psi(z, 1)?;
        let sj = self.model.jets(z, 0)?;
        let q0 = CMat::identity(n, n) - &sj.eig.pi0;
        let r0 = sj.eig.reduced_resolvent();
        let id = CMat::identity(l, l);
        let mut acc = id.clone() * r(self.electronic_energy(z)?);
        let mut v = CMat::zeros(n, l);
        for j in 0..d {
            let pj = &id * r(z.p[j]) - &a[j] * r(eps);
            acc += &pj * &pj * r(0.5);
            let dj = psi.d1(j);
            acc += dj.adjoint() * &q0 * &dj * r(0.5 * eps * eps);
            v += dj * r(z.p[j]);
        }
        acc -= v.adjoint() * r0 * v * r(eps * eps);
        Ok(acc)
    }
}
