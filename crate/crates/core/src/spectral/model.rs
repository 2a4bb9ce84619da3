use super::band::BandSpec;
use super::jets::{spectral_jets, spectral_jets_fd, SpectralJets};
use crate::error::{AdptError, Result};
use crate::linalg::{r, CMat};
use crate::symbol::fd::FD_MAX_ORDER;
use crate::symbol::multiindex::MAX_ORDER;
use crate::symbol::{FdConfig, Jet, MatrixSymbol, PhasePoint, SJet};
use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

/// How spectral jets are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralMethod {
    Perturbative,
    FiniteDifference(FdConfig),
}

const CACHE_SIZE: usize = 32;

struct Inner {
    h0: MatrixSymbol,
    band: BandSpec,
    method: SpectralMethod,
    cache: Mutex<VecDeque<(Vec<u64>, Arc<SpectralJets>)>>,
}

/// The principal symbol together with its isolated band, exposing π₀, E_r,
/// R₀ and a local frame as lazily evaluated symbols sharing one cache.
#[derive(Clone)]
pub struct BandModel {
    inner: Arc<Inner>,
}

impl std::fmt::Debug for BandModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BandModel({:?}, {:?})", self.inner.h0, self.inner.band)
    }
}

impl BandModel {
    pub fn new(h0: MatrixSymbol, band: BandSpec) -> Result<Self> {
        Self::with_method(h0, band, SpectralMethod::Perturbative)
    }

    pub fn with_method(h0: MatrixSymbol, band: BandSpec, method: SpectralMethod) -> Result<Self> {
        let (n, m) = h0.shape();
        if n != m {
            return Err(AdptError::Dimension("H₀ must be square".into()));
        }
        band.validate(n)?;
        Ok(Self {
            inner: Arc::new(Inner {
                h0,
                band,
                method,
                cache: Mutex::new(VecDeque::new()),
            }),
        })
    }

    pub fn h0(&self) -> &MatrixSymbol {
        &self.inner.h0
    }

    pub fn band(&self) -> &BandSpec {
        &self.inner.band
    }

    pub fn method(&self) -> SpectralMethod {
        self.inner.method
    }

    pub fn d(&self) -> usize {
        self.inner.h0.d()
    }

    pub fn n(&self) -> usize {
        self.inner.h0.n()
    }

    pub fn multiplicity(&self) -> usize {
        self.inner.band.multiplicity
    }

    /// Deepest jet order available for the derived symbols.
    pub fn max_jet_order(&self) -> usize {
        let cap = match self.inner.method {
            SpectralMethod::Perturbative => MAX_ORDER,
            SpectralMethod::FiniteDifference(_) => FD_MAX_ORDER,
        };
        cap.min(self.inner.h0.max_jet_order())
    }

    /// Reference projector π_r = diag(1_ℓ, 0) of the reference space.
    pub fn reference_projector(&self) -> CMat {
        let mut m = CMat::zeros(self.n(), self.n());
        for k in 0..self.multiplicity() {
            m[(k, k)] = r(1.0);
        }
        m
    }

    pub fn jets(&self, z: &PhasePoint, order: usize) -> Result<Arc<SpectralJets>> {
        let key = z.key();
        {
            let cache = self.inner.cache.lock().unwrap();
            if let Some((_, j)) = cache.iter().find(|(k, j)| *k == key && j.order() >= order) {
                return Ok(j.clone());
            }
        }
        let sj = match self.inner.method {
            SpectralMethod::Perturbative => {
                spectral_jets(&self.inner.h0.jet(z, order)?, &self.inner.band)?
            }
            SpectralMethod::FiniteDifference(cfg) => {
                spectral_jets_fd(&self.inner.h0, z, order, &self.inner.band, &cfg)?
            }
        };
        let sj = Arc::new(sj);
        let mut cache = self.inner.cache.lock().unwrap();
        cache.retain(|(k, _)| *k != key);
        if cache.len() >= CACHE_SIZE {
            cache.pop_front();
        }
        cache.push_back((key, sj.clone()));
        Ok(sj)
    }

    pub fn energy_jet(&self, z: &PhasePoint, order: usize) -> Result<SJet> {
        Ok(self.jets(z, order)?.energy.truncate(order))
    }

    fn derived(&self, name: &str, cols: usize, pick: fn(&SpectralJets) -> Jet) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::from_jet_fn(name, self.d(), self.n(), cols, self.max_jet_order(), move |z, k| {
            Ok(pick(&*me.jets(z, k)?).truncate(k))
        })
    }

    /// π₀.
    pub fn projector(&self) -> MatrixSymbol {
        self.derived("pi0", self.n(), |s| s.projector.clone())
            .with_hermitian(true)
    }

    /// E_r·1.
    pub fn energy(&self) -> MatrixSymbol {
        self.derived("E", self.n(), |s| s.energy_matrix())
            .with_hermitian(true)
    }

    /// R₀(E_r) = (H₀ − E_r)^{−1}(1 − π₀).
    pub fn resolvent(&self) -> MatrixSymbol {
        self.derived("R0", self.n(), |s| s.resolvent.clone())
            .with_hermitian(true)
    }

    /// Local unitary frame Ψ with the band columns first.
    pub fn frame(&self) -> MatrixSymbol {
        self.derived("psi", self.n(), |s| s.frame.clone())
    }

    /// u₀ = Ψ*, mapping Ran π₀ onto Ran π_r.
    pub fn u0(&self) -> MatrixSymbol {
        self.derived("u0", self.n(), |s| s.frame.adjoint())
    }

    /// n×ℓ band basis.
    pub fn band_basis(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::from_jet_fn(
            "psi_r",
            self.d(),
            self.n(),
            self.multiplicity(),
            self.max_jet_order(),
            move |z, k| Ok(me.jets(z, k)?.band_basis().truncate(k)),
        )
    }

    /// Global frame Ψ(z) = w(π₀(z), π₀(z_ref))Ψ(z_ref), smooth on the region
    /// where ‖π₀(z) − π₀(z_ref)‖ < 1. Evaluation fails outside it.
    pub fn reference_frame(&self, z_ref: &PhasePoint) -> Result<MatrixSymbol> {
        let reference = self.jets(z_ref, 0)?;
        let p_ref = reference.eig.pi0.clone();
        let psi_ref = reference.eig.eigvecs.clone();
        let me = self.clone();
        let n = self.n();
        Ok(MatrixSymbol::from_jet_fn(
            "psi_global",
            self.d(),
            n,
            n,
            self.max_jet_order(),
            move |z, k| {
                let p = me.jets(z, k)?.projector.truncate(k);
                let id = CMat::identity(n, n);
                let x = p.add_const(&-p_ref.clone());
                let dist = crate::linalg::op_norm(x.value());
                if dist >= 1.0 {
                    return Err(AdptError::Transport(dist));
                }
                let s = x.mul(&x).scale_re(-1.0).add_const(&id).inv_sqrt_herm()?;
                let q_ref = &id - &p_ref;
                let one_minus_p = p.scale_re(-1.0).add_const(&id);
                let t = p.right_mul_const(&p_ref).add(&one_minus_p.right_mul_const(&q_ref));
                Ok(s.mul(&t).right_mul_const(&psi_ref))
            },
        ))
    }
}
