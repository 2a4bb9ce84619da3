use crate::error::{AdptError, Result};
use crate::linalg::{op_norm, CMat};
use crate::spectral::{BandModel, BandSpec};
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint};

/// Everything the order-by-order constructions need: the full symbol H, the
/// band model of H₀, the reference projector π_r and the principal unitary u₀.
#[derive(Clone, Debug)]
pub struct ExpansionContext {
    h: FormalSymbol,
    model: BandModel,
    pi_r: CMat,
    u0: MatrixSymbol,
    order: usize,
}

impl ExpansionContext {
    /// Context with u₀ taken from the local Nagy-gauge frame of the band model.
    pub fn new(h: FormalSymbol, band: BandSpec, order: usize) -> Result<Self> {
        let model = BandModel::new(h.term(0), band)?;
        Self::from_model(h, model, order)
    }

    pub fn from_model(h: FormalSymbol, model: BandModel, order: usize) -> Result<Self> {
        if !model.h0().same(&h.term(0)) {
            return Err(AdptError::Invalid("band model must be built on H₀".into()));
        }
        let pi_r = model.reference_projector();
        let u0 = model.u0();
        Ok(Self {
            h,
            model,
            pi_r,
            u0,
            order,
        })
    }

    /// Replaces u₀ by a caller-supplied unitary with u₀π₀u₀* = π_r.
    pub fn with_u0(mut self, u0: MatrixSymbol) -> Result<Self> {
        let n = self.n();
        if u0.shape() != (n, n) || u0.d() != self.d() {
            return Err(AdptError::Dimension("u₀ must be n×n over the same phase space".into()));
        }
        self.u0 = u0;
        Ok(self)
    }

    pub fn h(&self) -> &FormalSymbol {
        &self.h
    }

    pub fn model(&self) -> &BandModel {
        &self.model
    }

    pub fn pi_r(&self) -> &CMat {
        &self.pi_r
    }

    pub fn u0(&self) -> &MatrixSymbol {
        &self.u0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn d(&self) -> usize {
        self.h.d()
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn multiplicity(&self) -> usize {
        self.model.multiplicity()
    }

    /// n×ℓ embedding χ of the reference band.
    pub fn chi(&self) -> CMat {
        self.pi_r.columns(0, self.multiplicity()).into_owned()
    }

    /// Jet of the band columns ψ_α = u₀*χ_α.
    pub fn psi_jet(&self, z: &PhasePoint, k: usize) -> Result<Jet> {
        Ok(self.u0.jet(z, k)?.adjoint().right_mul_const(&self.chi()))
    }

    /// Unitarity and intertwining defects of u₀ at z.
    pub fn u0_defects(&self, z: &PhasePoint) -> Result<(f64, f64)> {
        let u = self.u0.eval(z)?;
        let p = self.model.projector().eval(z)?;
        let n = self.n();
        let unit = op_norm(&(&u * u.adjoint() - CMat::identity(n, n)));
        let inter = op_norm(&(&u * p * u.adjoint() - &self.pi_r));
        Ok((unit, inter))
    }

    /// Checks the invariants of the context at sample points.
    pub fn validate(&self, samples: &[PhasePoint], tol: f64) -> Result<()> {
        for z in samples {
            let herm = (0..=self.h.order())
                .map(|j| self.h.term(j).hermitian_defect_at(z))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            if herm > tol {
                return Err(AdptError::Precondition(format!("H not hermitian at {z}: {herm:.2e}")));
            }
            let (unit, inter) = self.u0_defects(z)?;
            if unit > tol || inter > tol {
                return Err(AdptError::Precondition(format!(
                    "u₀ defects at {z}: unitarity {unit:.2e}, intertwining {inter:.2e}"
                )));
            }
        }
        Ok(())
    }
}
