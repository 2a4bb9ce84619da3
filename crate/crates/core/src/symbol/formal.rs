use super::matrix::MatrixSymbol;
use super::point::PhasePoint;
use crate::error::{AdptError, Result};
use crate::linalg::{r, CMat};

/// Truncated power series Σ_{j≤N} ε^j A_j of matrix symbols sharing (d, n).
#[derive(Clone, Debug)]
pub struct FormalSymbol {
    d: usize,
    n: usize,
    terms: Vec<MatrixSymbol>,
}

impl FormalSymbol {
    pub fn new(terms: Vec<MatrixSymbol>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| AdptError::Invalid("formal symbol needs at least one term".into()))?;
        let (d, (n, m)) = (first.d(), first.shape());
        if n != m {
            return Err(AdptError::Dimension("formal symbol terms must be square".into()));
        }
        if terms.iter().any(|t| t.d() != d || t.shape() != (n, n)) {
            return Err(AdptError::Dimension("formal symbol terms disagree in (d, n)".into()));
        }
        Ok(Self { d, n, terms })
    }

    /// The series consisting of a single principal term.
    pub fn single(a: MatrixSymbol) -> Self {
        Self::new(vec![a]).expect("single term")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[MatrixSymbol] {
        &self.terms
    }

    /// A_j, or the zero symbol beyond the truncation order.
    pub fn term(&self, j: usize) -> MatrixSymbol {
        self.terms
            .get(j)
            .cloned()
            .unwrap_or_else(|| MatrixSymbol::zero(self.d, self.n))
    }

    pub fn push(&mut self, a: MatrixSymbol) -> Result<()> {
        if a.d() != self.d || a.shape() != (self.n, self.n) {
            return Err(AdptError::Dimension("pushed term disagrees in (d, n)".into()));
        }
        self.terms.push(a);
        Ok(())
    }

    pub fn truncated(&self, n: usize) -> Self {
        Self {
            d: self.d,
            n: self.n,
            terms: (0..=n).map(|j| self.term(j)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            d: self.d,
            n: self.n,
            terms: self.terms.iter().map(|t| t.adjoint()).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.terms.len().max(o.terms.len());
        Self {
            d: self.d,
            n: self.n,
            terms: (0..len).map(|j| self.term(j).add(&o.term(j))).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let len = self.terms.len().max(o.terms.len());
        Self {
            d: self.d,
            n: self.n,
            terms: (0..len).map(|j| self.term(j).sub(&o.term(j))).collect(),
        }
    }

    /// Σ_j ε^j A_j(z).
    pub fn eval_sum(&self, z: &PhasePoint, eps: f64) -> Result<CMat> {
        let mut acc = CMat::zeros(self.n, self.n);
        for (j, t) in self.terms.iter().enumerate() {
            if !t.is_zero() {
                acc += t.eval(z)? * r(eps.powi(j as i32));
            }
        }
        Ok(acc)
    }
}
