//! Pointwise spectral data of the principal symbol.

use crate::error::{AdptError, Result};
use crate::linalg::{herm_eig, max_abs, r, CMat};
use crate::symbol::{MatrixSymbol, PhasePoint};
use serde::{Deserialize, Serialize};

/// How the relevant band is picked from the sorted spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BandSelection {
    /// Eigenvalue indices lo..hi of the ascending spectrum.
    Index { lo: usize, hi: usize },
    /// All eigenvalues inside [min, max].
    Energy { min: f64, max: f64 },
}

/// The relevant band σ_r(z) = {E_r(z)} with multiplicity ℓ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub selection: BandSelection,
    pub multiplicity: usize,
    pub gap_floor: f64,
}

impl BandSpec {
    pub fn index(lo: usize, hi: usize, gap_floor: f64) -> Self {
        Self {
            selection: BandSelection::Index { lo, hi },
            multiplicity: hi - lo,
            gap_floor,
        }
    }

    pub fn energy(min: f64, max: f64, multiplicity: usize, gap_floor: f64) -> Self {
        Self {
            selection: BandSelection::Energy { min, max },
            multiplicity,
            gap_floor,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.multiplicity == 0 || self.multiplicity > n {
            return Err(AdptError::Invalid(format!(
                "band multiplicity {} outside 1..={n}",
                self.multiplicity
            )));
        }
        if !(self.gap_floor > 0.0) {
            return Err(AdptError::Invalid("gap floor must be positive".into()));
        }
        if let BandSelection::Index { lo, hi } = self.selection {
            if hi > n || lo >= hi || hi - lo != self.multiplicity {
                return Err(AdptError::Invalid(format!("band index window {lo}..{hi} for n={n}")));
            }
        }
        Ok(())
    }
}

/// Band energy, projector, eigenbasis and gap at a phase-space point.
#[derive(Debug, Clone)]
pub struct EigFrame {
    pub z: PhasePoint,
    pub e_r: f64,
    pub pi0: CMat,
    /// n×ℓ orthonormal basis of Ran π₀.
    pub basis: CMat,
    pub gap: f64,
    /// Ascending eigenvalues of H₀(z).
    pub eigenvalues: Vec<f64>,
    /// Full unitary eigenbasis with the band columns first.
    pub eigvecs: CMat,
    /// Eigenvalue index of each column of `eigvecs`.
    pub order: Vec<usize>,
}

impl EigFrame {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }

    /// (H₀ − E_r)^{-1}(1 − π₀) from the complement eigenvectors.
    pub fn reduced_resolvent(&self) -> CMat {
        let n = self.eigvecs.nrows();
        let l = self.multiplicity();
        let mut acc = CMat::zeros(n, n);
        for col in l..n {
            let v = self.eigvecs.column(col);
            let lam = self.eigenvalues[self.order[col]];
            acc += v * v.adjoint() * r(1.0 / (lam - self.e_r));
        }
        acc
    }
}

/// Raw band data without gap enforcement: (band indices, energy, gap, spread).
fn pick_band(vals: &[f64], band: &BandSpec) -> Result<Vec<usize>> {
    let idx: Vec<usize> = match band.selection {
        BandSelection::Index { lo, hi } => (lo..hi).collect(),
        BandSelection::Energy { min, max } => (0..vals.len())
            .filter(|&k| vals[k] >= min && vals[k] <= max)
            .collect(),
    };
    if idx.len() != band.multiplicity || idx.iter().any(|&k| k >= vals.len()) {
        return Err(AdptError::Band(format!(
            "expected {} eigenvalues in the band, found {}",
            band.multiplicity,
            idx.len()
        )));
    }
    Ok(idx)
}

fn degeneracy_tol(h: &CMat) -> f64 {
    1e-8 * max_abs(h).max(1.0)
}

/// Eigen-analysis of H₀(z) without enforcing the gap floor.
pub fn eig_frame_unchecked(h: &CMat, z: &PhasePoint, band: &BandSpec) -> Result<EigFrame> {
    let n = h.nrows();
    band.validate(n)?;
    let (vals, vecs) = herm_eig(h);
    let idx = pick_band(&vals, band)?;
    let lo = idx.iter().map(|&k| vals[k]).fold(f64::INFINITY, f64::min);
    let hi = idx.iter().map(|&k| vals[k]).fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > degeneracy_tol(h) {
        return Err(AdptError::Band(format!(
            "band eigenvalues split by {:.3e} at {z}",
            hi - lo
        )));
    }
    let e_r = idx.iter().map(|&k| vals[k]).sum::<f64>() / idx.len() as f64;
    let rest: Vec<usize> = (0..n).filter(|k| !idx.contains(k)).collect();
    let gap = rest
        .iter()
        .map(|&k| (vals[k] - e_r).abs())
        .fold(f64::INFINITY, f64::min);
    let order: Vec<usize> = idx.iter().chain(rest.iter()).copied().collect();
    let mut eigvecs = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        eigvecs.set_column(col, &vecs.column(k));
    }
    let l = idx.len();
    let basis = eigvecs.columns(0, l).into_owned();
    let pi0 = &basis * basis.adjoint();
    Ok(EigFrame {
        z: z.clone(),
        e_r,
        pi0,
        basis,
        gap,
        eigenvalues: vals,
        eigvecs,
        order,
    })
}

/// Eigen-analysis of H₀(z) enforcing the gap floor.
pub fn eig_frame(h: &CMat, z: &PhasePoint, band: &BandSpec) -> Result<EigFrame> {
    let f = eig_frame_unchecked(h, z, band)?;
    if f.gap < band.gap_floor {
        return Err(AdptError::GapViolation {
            gap: f.gap,
            floor: band.gap_floor,
            at: z.to_string(),
        });
    }
    Ok(f)
}

/// Rank-ℓ spectral projector π₀(z) onto the relevant band.
pub fn spectral_projector(h0: &MatrixSymbol, z: &PhasePoint, band: &BandSpec) -> Result<CMat> {
    Ok(eig_frame(&h0.eval(z)?, z, band)?.pi0)
}

/// Band energy E_r(z).
pub fn band_energy(h0: &MatrixSymbol, z: &PhasePoint, band: &BandSpec) -> Result<f64> {
    Ok(eig_frame(&h0.eval(z)?, z, band)?.e_r)
}

/// Reduced resolvent R₀(E_r)(z) = (H₀ − E_r)^{-1}(1 − π₀).
pub fn reduced_resolvent(h0: &MatrixSymbol, z: &PhasePoint, band: &BandSpec) -> Result<CMat> {
    Ok(eig_frame(&h0.eval(z)?, z, band)?.reduced_resolvent())
}

/// Outcome of a gap scan over sample points.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub min_gap: f64,
    pub argmin: Option<PhasePoint>,
    pub violations: Vec<(PhasePoint, f64)>,
    /// Largest band energy modulus over the samples.
    pub energy_sup: f64,
    /// Largest splitting of the band eigenvalues over the samples.
    pub spread_sup: f64,
    /// Points where the band could not be identified at all.
    pub unidentified: Vec<PhasePoint>,
}

/// Scans `samples` for the smallest gap and reports every floor violation.
pub fn gap_check(h0: &MatrixSymbol, band: &BandSpec, samples: &[PhasePoint]) -> GapReport {
    let mut rep = GapReport {
        min_gap: f64::INFINITY,
        argmin: None,
        violations: Vec::new(),
        energy_sup: 0.0,
        spread_sup: 0.0,
        unidentified: Vec::new(),
    };
    for z in samples {
        let Ok(h) = h0.eval(z) else {
            rep.unidentified.push(z.clone());
            continue;
        };
        let (vals, _) = herm_eig(&h);
        let Ok(idx) = pick_band(&vals, band) else {
            rep.unidentified.push(z.clone());
            continue;
        };
        let lo = idx.iter().map(|&k| vals[k]).fold(f64::INFINITY, f64::min);
        let hi = idx.iter().map(|&k| vals[k]).fold(f64::NEG_INFINITY, f64::max);
        let e = 0.5 * (lo + hi);
        let gap = (0..vals.len())
            .filter(|k| !idx.contains(k))
            .map(|k| (vals[k] - e).abs())
            .fold(f64::INFINITY, f64::min);
        rep.energy_sup = rep.energy_sup.max(e.abs());
        rep.spread_sup = rep.spread_sup.max(hi - lo);
        if gap < rep.min_gap {
            rep.min_gap = gap;
            rep.argmin = Some(z.clone());
        }
        if gap < band.gap_floor {
            rep.violations.push((z.clone(), gap));
        }
    }
    rep
}
