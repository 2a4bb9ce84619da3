use faer::complex_native::c64;
use faer::{Mat, Side};
use std::f64::consts::PI;

use super::grid::Grid1D;
use crate::error::{AdptError, Result};
use crate::linalg::C64;

#[inline]
pub(crate) fn to_c64(z: C64) -> c64 {
    c64::new(z.re, z.im)
}

#[inline]
pub(crate) fn from_c64(z: c64) -> C64 {
    C64::new(z.re, z.im)
}

pub const HERMITIAN_TOL: f64 = 1e-10;

/// A dense (n·m) × (n·m) operator on the grid.
#[derive(Clone)]
pub struct DenseOp {
    mat: Mat<c64>,
    hermitian: bool,
}

impl std::fmt::Debug for DenseOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DenseOp({}×{}, hermitian={})", self.dim(), self.dim(), self.hermitian)
    }
}

impl DenseOp {
    pub fn new(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(AdptError::Dimension(format!(
                "operator must be square, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { mat, hermitian: false })
    }

    /// Wraps a matrix claimed hermitian; the claim is verified relative to its scale.
    pub fn hermitian(mat: Mat<c64>) -> Result<Self> {
        let mut op = Self::new(mat)?;
        let def = op.hermitian_defect();
        let scale = op.mat.norm_max().max(1.0);
        if def > HERMITIAN_TOL * scale {
            return Err(AdptError::Defect { what: "hermiticity", order: 0, value: def, tol: HERMITIAN_TOL * scale });
        }
        op.symmetrize();
        op.hermitian = true;
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: Mat::identity(dim, dim), hermitian: true }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: Mat::zeros(dim, dim), hermitian: true }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut f = f;
        Self { mat: Mat::from_fn(dim, dim, |i, j| to_c64(f(i, j))), hermitian: false }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Mat<c64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.mat
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        from_c64(self.mat.read(i, j))
    }

    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in j..n {
                let a = self.mat.read(i, j);
                let b = self.mat.read(j, i);
                worst = worst.max((a.re - b.re).hypot(a.im + b.im));
            }
        }
        worst
    }

    /// Replaces the matrix by its hermitian part.
    fn symmetrize(&mut self) {
        let n = self.dim();
        for j in 0..n {
            for i in j..n {
                let a = self.mat.read(i, j);
                let b = self.mat.read(j, i);
                let v = c64::new(0.5 * (a.re + b.re), 0.5 * (a.im - b.im));
                self.mat.write(i, j, v);
                self.mat.write(j, i, c64::new(v.re, -v.im));
            }
        }
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint().to_owned(), hermitian: self.hermitian }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { mat: &self.mat * &o.mat, hermitian: false }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { mat: &self.mat + &o.mat, hermitian: self.hermitian && o.hermitian }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { mat: &self.mat - &o.mat, hermitian: self.hermitian && o.hermitian }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            mat: faer::scale(to_c64(s)) * &self.mat,
            hermitian: self.hermitian && s.im == 0.0,
        }
    }

    /// 1 − self.
    pub fn complement(&self) -> Self {
        Self::identity(self.dim()).sub(self)
    }

    /// Operator norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        if self.hermitian {
            return self
                .mat
                .selfadjoint_eigenvalues(Side::Lower)
                .into_iter()
                .fold(0.0, |m, x| m.max(x.abs()));
        }
        self.mat.singular_values().first().copied().unwrap_or(0.0)
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.norm_l2()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| from_c64(self.mat.read(i, i))).sum()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let x = Mat::from_fn(v.len(), 1, |i, _| to_c64(v[i]));
        let y = &self.mat * &x;
        (0..v.len()).map(|i| from_c64(y.read(i, 0))).collect()
    }

    /// W·self·W, for norms restricted to a phase-space window.
    pub fn sandwich(&self, w: &Self) -> Self {
        w.mul(self).mul(w)
    }

    pub(crate) fn with_flag(mat: Mat<c64>, hermitian: bool) -> Self {
        Self { mat, hermitian }
    }

    /// Eigenvalues and eigenvectors of a hermitian operator.
    pub fn eigh(&self) -> Result<(Vec<f64>, Mat<c64>)> {
        if !self.hermitian {
            return Err(AdptError::Precondition("eigendecomposition needs a hermitian operator".into()));
        }
        let e = self.mat.selfadjoint_eigendecomposition(Side::Lower);
        let s = e.s().column_vector();
        let vals = (0..self.dim()).map(|i| s.read(i).re).collect();
        Ok((vals, e.u().to_owned()))
    }

    /// f(self) through the spectral theorem.
    pub fn herm_fn(&self, f: impl Fn(f64) -> C64) -> Result<Self> {
        let (vals, v) = self.eigh()?;
        let fv: Vec<C64> = vals.iter().map(|&x| f(x)).collect();
        let real = fv.iter().all(|z| z.im == 0.0);
        Ok(Self::with_flag(spectral_sum(&v, &fv), real))
    }
}

/// V·diag(f)·V*.
pub(crate) fn spectral_sum(v: &Mat<c64>, f: &[C64]) -> Mat<c64> {
    let n = v.nrows();
    let scaled = Mat::from_fn(n, f.len(), |i, j| v.read(i, j) * to_c64(f[j]));
    &scaled * v.adjoint()
}

/// Fourier projector onto the momenta |p_k| ≤ p_w, tensored with the fiber identity.
pub fn momentum_window(grid: &Grid1D, p_w: f64) -> DenseOp {
    let n = grid.n_points;
    let m = grid.m_fiber;
    let h = (n / 2) as i64;
    let ks: Vec<i64> = (-h..h).filter(|&k| grid.p(k).abs() <= p_w).collect();
    let kernel: Vec<C64> = (0..n as i64)
        .map(|r| {
            ks.iter()
                .map(|&k| C64::from_polar(1.0, 2.0 * PI * (k * r) as f64 / n as f64))
                .sum::<C64>()
                / n as f64
        })
        .collect();
    let mut w = DenseOp::from_fn(n * m, |i, j| {
        if i % m != j % m {
            return C64::new(0.0, 0.0);
        }
        let r = (i / m) as i64 - (j / m) as i64;
        kernel[r.rem_euclid(n as i64) as usize]
    });
    w.hermitian = true;
    w
}

/// A grid wavefunction, L²-normalized with weight L/n.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFn {
    grid: Grid1D,
    values: Vec<C64>,
}

impl WaveFn {
    /// Normalizes the given values; fails on a zero or non-finite vector.
    pub fn new(grid: &Grid1D, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.dim() {
            return Err(AdptError::Dimension(format!(
                "wavefunction has {} entries, grid needs {}",
                values.len(),
                grid.dim()
            )));
        }
        let norm = (values.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx()).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(AdptError::Invalid(format!("cannot normalize wavefunction of norm {norm}")));
        }
        Ok(Self { grid: *grid, values: values.into_iter().map(|z| z / norm).collect() })
    }

    /// ψ(x) = f(x) for each fiber component.
    pub fn from_fn(grid: &Grid1D, f: impl Fn(f64) -> Vec<C64>) -> Result<Self> {
        let mut v = Vec::with_capacity(grid.dim());
        for j in 0..grid.n_points {
            let c = f(grid.x(j));
            if c.len() != grid.m_fiber {
                return Err(AdptError::Dimension("fiber vector length".into()));
            }
            v.extend(c);
        }
        Self::new(grid, v)
    }

    /// Periodized Gaussian wavepacket exp(−(x−q₀)²/(2σ²) + ip₀x/ε)·χ.
    pub fn gaussian(grid: &Grid1D, q0: f64, p0: f64, sigma: f64, fiber: &[C64]) -> Result<Self> {
        let l = grid.l;
        Self::from_fn(grid, |x| {
            let mut d = (x - q0).rem_euclid(l);
            if d >= 0.5 * l {
                d -= l;
            }
            let amp = C64::from_polar((-d * d / (2.0 * sigma * sigma)).exp(), p0 * (q0 + d) / grid.eps);
            fiber.iter().map(|c| c * amp).collect()
        })
    }

    pub(crate) fn from_raw(grid: &Grid1D, values: Vec<C64>) -> Self {
        Self { grid: *grid, values }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Fiber vector at site j.
    pub fn at(&self, j: usize) -> &[C64] {
        let m = self.grid.m_fiber;
        &self.values[j * m..(j + 1) * m]
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// ⟨self, other⟩ = Σ conj(ψ)φ·Δx.
    pub fn inner(&self, other: &[C64]) -> C64 {
        self.values.iter().zip(other).map(|(a, b)| a.conj() * b).sum::<C64>() * self.grid.dx()
    }

    /// ⟨ψ, Âψ⟩.
    pub fn expectation(&self, a: &DenseOp) -> C64 {
        self.inner(&a.apply(&self.values))
    }
}
