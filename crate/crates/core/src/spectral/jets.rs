//! Jets of the band projector, energy, reduced resolvent and a local frame.
//!
//! The default route solves [H, P] = 0, P² = P order by order in the Taylor
//! coefficients, which is exact up to rounding. The finite-difference route
//! re-diagonalizes on a stencil and serves as an independent check.

use super::band::{eig_frame, BandSpec, EigFrame};
use super::nagy::nagy_transport;
use crate::error::{AdptError, Result};
use crate::linalg::{r, CMat};
use crate::symbol::multiindex::table;
use crate::symbol::{fd_jet, FdConfig, Jet, MatrixSymbol, PhasePoint, SJet};

/// Spectral data of H₀ expanded around one center.
///
/// The frame Ψ is unitary with the band columns first. Its value is the
/// eigensolver basis at the center and its Taylor coefficients follow the
/// Nagy transport from the center, so the Berry connection vanishes there.
#[derive(Debug, Clone)]
pub struct SpectralJets {
    pub eig: EigFrame,
    pub projector: Jet,
    pub energy: SJet,
    pub resolvent: Jet,
    pub frame: Jet,
}

impl SpectralJets {
    pub fn order(&self) -> usize {
        self.projector.order()
    }

    pub fn energy_matrix(&self) -> Jet {
        let n = self.projector.rows();
        let mut j = Jet::zeros(self.projector.center(), self.energy.order(), n, n);
        j.add_scalar_term(&self.energy, &CMat::identity(n, n));
        j
    }

    /// Band columns of the frame: a smooth orthonormal basis of Ran π₀.
    pub fn band_basis(&self) -> Jet {
        let n = self.frame.rows();
        let l = self.eig.multiplicity();
        let mut sel = CMat::zeros(n, l);
        for k in 0..l {
            sel[(k, k)] = r(1.0);
        }
        self.frame.right_mul_const(&sel)
    }
}

fn central_binomial(k: usize) -> f64 {
    // binom(2k, k) / 4^k
    (1..=k).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64)
}

/// Frame jet w(P(z'), P₀)Ψ₀ from a projector jet.
fn transported_frame(p: &Jet, eig: &EigFrame) -> Jet {
    let n = p.rows();
    let id = CMat::identity(n, n);
    let p0 = &eig.pi0;
    let q0 = &id - p0;
    let x = p.add_const(&-p0.clone());
    let y = x.mul(&x);
    let s = y.nilpotent_series(central_binomial);
    let one_minus_p = p.scale_re(-1.0).add_const(&id);
    let t = p.right_mul_const(p0).add(&one_minus_p.right_mul_const(&q0));
    s.mul(&t).right_mul_const(&eig.eigvecs)
}

fn energy_from(h: &Jet, p: &Jet, l: usize) -> SJet {
    let tr = h.mul(p).trace();
    SJet::from_coeffs(
        h.nv(),
        p.order(),
        tr.iter().map(|z| z.re / l as f64).collect(),
    )
}

fn resolvent_from(h: &Jet, p: &Jet, e: &SJet) -> Result<Jet> {
    let n = h.rows();
    let mut shifted = h.add(p);
    shifted.add_scalar_term(&e.scale(-1.0), &CMat::identity(n, n));
    Ok(shifted.inverse()?.sub(p))
}

/// Exact spectral jets from a jet of H₀ by the perturbative recursion
///
/// G = Σ P_{γ₁}P_{γ₂} (γ₁, γ₂ ≠ 0),  Pᴰ = −P₀GP₀ + Q₀GQ₀,
/// F = Σ_{γ₁≠0} [H_{γ₁}, P_{γ−γ₁}] + [H₀, Pᴰ],  P_γ = Pᴰ + P₀FR₀ − R₀FP₀.
pub fn spectral_jets(h: &Jet, band: &BandSpec) -> Result<SpectralJets> {
    let n = h.rows();
    if h.cols() != n {
        return Err(AdptError::Dimension("H₀ must be square".into()));
    }
    let z = h.center().clone();
    let eig = eig_frame(h.value(), &z, band)?;
    let t = table(z.nv());
    let len = t.len(h.order());
    let p0 = eig.pi0.clone();
    let q0 = CMat::identity(n, n) - &p0;
    let r0 = eig.reduced_resolvent();
    let h00 = h.value();
    let one = r(1.0);
    let mut pc: Vec<CMat> = Vec::with_capacity(len);
    pc.push(p0.clone());
    for i in 1..len {
        let mut g = CMat::zeros(n, n);
        let mut f = CMat::zeros(n, n);
        for &(a, b) in t.pairs(i) {
            let (a, b) = (a as usize, b as usize);
            if a != 0 && b != 0 {
                g.gemm(one, &pc[a], &pc[b], one);
            }
            if a != 0 {
                let ha = h.coeff(a);
                f.gemm(one, ha, &pc[b], one);
                f.gemm(-one, &pc[b], ha, one);
            }
        }
        let pd = -(&p0 * &g * &p0) + &q0 * &g * &q0;
        f += h00 * &pd - &pd * h00;
        pc.push(&pd + &p0 * &f * &r0 - &r0 * &f * &p0);
    }
    let projector = Jet::from_coeffs(&z, h.order(), pc)?;
    let energy = energy_from(h, &projector, eig.multiplicity());
    let resolvent = resolvent_from(h, &projector, &energy)?;
    let frame = transported_frame(&projector, &eig);
    Ok(SpectralJets {
        eig,
        projector,
        energy,
        resolvent,
        frame,
    })
}

/// Spectral jets by finite differences of pointwise eigendata.
pub fn spectral_jets_fd(
    h0: &MatrixSymbol,
    z: &PhasePoint,
    order: usize,
    band: &BandSpec,
    cfg: &FdConfig,
) -> Result<SpectralJets> {
    let eig = eig_frame(&h0.eval(z)?, z, band)?;
    let proj = |w: &PhasePoint| -> Result<CMat> { Ok(eig_frame(&h0.eval(w)?, w, band)?.pi0) };
    let projector = fd_jet(proj, z, order, cfg)?;
    let ej = fd_jet(
        |w: &PhasePoint| -> Result<CMat> {
            Ok(CMat::from_element(1, 1, r(eig_frame(&h0.eval(w)?, w, band)?.e_r)))
        },
        z,
        order,
        cfg,
    )?;
    let energy = SJet::from_coeffs(z.nv(), order, ej.coeffs().iter().map(|m| m[(0, 0)].re).collect());
    let resolvent = fd_jet(
        |w: &PhasePoint| -> Result<CMat> {
            Ok(eig_frame(&h0.eval(w)?, w, band)?.reduced_resolvent())
        },
        z,
        order,
        cfg,
    )?;
    let p0 = eig.pi0.clone();
    let psi0 = eig.eigvecs.clone();
    let frame = fd_jet(
        |w: &PhasePoint| -> Result<CMat> {
            let pw = eig_frame(&h0.eval(w)?, w, band)?.pi0;
            Ok(nagy_transport(&pw, &p0)? * &psi0)
        },
        z,
        order,
        cfg,
    )?;
    Ok(SpectralJets {
        eig,
        projector,
        energy,
        resolvent,
        frame,
    })
}

/// Smooth orthonormal basis of Ran π₀ near `z` as an n×ℓ jet.
pub fn smooth_frame(h0: &MatrixSymbol, band: &BandSpec, z: &PhasePoint, order: usize) -> Result<Jet> {
    Ok(spectral_jets(&h0.jet(z, order)?, band)?.band_basis())
}
