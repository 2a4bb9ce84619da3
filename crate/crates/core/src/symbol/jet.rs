//! Matrix-valued Taylor jets with exact Leibniz arithmetic.

use super::multiindex::{table, Exps, MAX_VARS};
use super::point::PhasePoint;
use super::sjet::SJet;
use crate::error::{AdptError, Result};
use crate::linalg::{c, r, CMat, C64};

/// Truncated Taylor expansion of a matrix-valued symbol at `center`.
///
/// Coefficients are stored as ∂^γ A(center)/γ! in graded order, which turns
/// products into plain convolutions. [`Jet::derivative_value`] returns the raw
/// partial derivatives.
#[derive(Debug, Clone)]
pub struct Jet {
    center: PhasePoint,
    order: usize,
    rows: usize,
    cols: usize,
    coeffs: Vec<CMat>,
}

impl Jet {
    pub fn zeros(center: &PhasePoint, order: usize, rows: usize, cols: usize) -> Self {
        let len = table(center.nv()).len(order);
        Self {
            center: center.clone(),
            order,
            rows,
            cols,
            coeffs: vec![CMat::zeros(rows, cols); len],
        }
    }

    pub fn constant(center: &PhasePoint, order: usize, m: &CMat) -> Self {
        let mut j = Self::zeros(center, order, m.nrows(), m.ncols());
        j.coeffs[0] = m.clone();
        j
    }

    pub fn identity(center: &PhasePoint, order: usize, n: usize) -> Self {
        Self::constant(center, order, &CMat::identity(n, n))
    }

    /// Builds a jet from Taylor coefficients (∂^γ A / γ!) in table order.
    pub fn from_coeffs(center: &PhasePoint, order: usize, coeffs: Vec<CMat>) -> Result<Self> {
        let len = table(center.nv()).len(order);
        if coeffs.len() != len {
            return Err(AdptError::Dimension(format!(
                "jet of order {order} needs {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        let (rows, cols) = (coeffs[0].nrows(), coeffs[0].ncols());
        if coeffs.iter().any(|m| m.nrows() != rows || m.ncols() != cols) {
            return Err(AdptError::Dimension("inconsistent coefficient shapes".into()));
        }
        Ok(Self {
            center: center.clone(),
            order,
            rows,
            cols,
            coeffs,
        })
    }

    /// Σ_k s_k(z)·M_k for real scalar jets s_k and constant matrices M_k.
    pub fn from_scalars(center: &PhasePoint, terms: &[(&SJet, &CMat)]) -> Self {
        assert!(!terms.is_empty());
        let order = terms.iter().map(|(s, _)| s.order()).min().unwrap();
        let (rows, cols) = (terms[0].1.nrows(), terms[0].1.ncols());
        let mut j = Self::zeros(center, order, rows, cols);
        for (s, m) in terms {
            j.add_scalar_term(s, m);
        }
        j
    }

    /// self += s(z)·M.
    pub fn add_scalar_term(&mut self, s: &SJet, m: &CMat) {
        for (i, coef) in self.coeffs.iter_mut().enumerate() {
            let v = s.coeffs()[i];
            if v != 0.0 {
                *coef += m * r(v);
            }
        }
    }

    pub fn center(&self) -> &PhasePoint {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nv(&self) -> usize {
        self.center.nv()
    }

    pub fn value(&self) -> &CMat {
        &self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &CMat {
        &self.coeffs[i]
    }

    pub fn coeff_mut(&mut self, i: usize) -> &mut CMat {
        &mut self.coeffs[i]
    }

    /// ∂_q^α ∂_p^β A at the center.
    pub fn derivative_value(&self, alpha: &[usize], beta: &[usize]) -> Result<CMat> {
        let d = self.center.d();
        if alpha.len() != d || beta.len() != d {
            return Err(AdptError::Dimension("multi-index length must equal d".into()));
        }
        let deg: usize = alpha.iter().chain(beta).sum();
        if deg > self.order {
            return Err(AdptError::JetOrder {
                requested: deg,
                max: self.order,
            });
        }
        let mut e = [0u8; MAX_VARS];
        for i in 0..d {
            e[i] = alpha[i] as u8;
            e[d + i] = beta[i] as u8;
        }
        let t = table(self.nv());
        let i = t.index_of(&e).unwrap();
        Ok(&self.coeffs[i] * r(t.factorial(i)))
    }

    /// First partial ∂_v A at the center.
    pub fn d1(&self, v: usize) -> CMat {
        let mut e = [0u8; MAX_VARS];
        e[v] = 1;
        self.coeffs[table(self.nv()).index_of(&e).unwrap()].clone()
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Self {
            center: self.center.clone(),
            order,
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs[..table(self.nv()).len(order)].to_vec(),
        }
    }

    /// ∂^μ A as a jet of order `order` (which must not exceed self.order − |μ|).
    pub fn deriv_multi(&self, mu: &Exps, order: usize) -> Self {
        let t = table(self.nv());
        let deg: usize = mu[..self.nv()].iter().map(|&k| k as usize).sum();
        assert!(order + deg <= self.order, "jet too short for derivative");
        if deg == 0 {
            return self.truncate(order);
        }
        let coeffs = (0..t.len(order))
            .map(|i| {
                let s = t.shifted(i, mu).unwrap();
                &self.coeffs[s] * r(t.factorial(s) / t.factorial(i))
            })
            .collect();
        Self {
            center: self.center.clone(),
            order,
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    /// ∂_v A as a jet of one lower order.
    pub fn derivative(&self, v: usize) -> Self {
        let mut mu = [0u8; MAX_VARS];
        mu[v] = 1;
        self.deriv_multi(&mu, self.order - 1)
    }

    fn zip(&self, o: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "jet shape mismatch");
        let order = self.order.min(o.order);
        let len = table(self.nv()).len(order);
        Self {
            center: self.center.clone(),
            order,
            rows: self.rows,
            cols: self.cols,
            coeffs: (0..len).map(|i| f(&self.coeffs[i], &o.coeffs[i])).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn add_assign(&mut self, o: &Self) {
        assert!(o.order >= self.order);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            center: self.center.clone(),
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|m| m * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(r(s))
    }

    /// Leibniz product; the result has the smaller of the two orders.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "jet product shape mismatch");
        let t = table(self.nv());
        let order = self.order.min(o.order);
        let len = t.len(order);
        let one = r(1.0);
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = CMat::zeros(self.rows, o.cols);
            for &(a, b) in t.pairs(i) {
                acc.gemm(one, &self.coeffs[a as usize], &o.coeffs[b as usize], one);
            }
            coeffs.push(acc);
        }
        Self {
            center: self.center.clone(),
            order,
            rows: self.rows,
            cols: o.cols,
            coeffs,
        }
    }

    /// Product with a real scalar jet.
    pub fn mul_scalar(&self, s: &SJet) -> Self {
        let t = table(self.nv());
        let order = self.order.min(s.order());
        let len = t.len(order);
        let coeffs = (0..len)
            .map(|i| {
                let mut acc = CMat::zeros(self.rows, self.cols);
                for &(a, b) in t.pairs(i) {
                    let w = s.coeffs()[b as usize];
                    if w != 0.0 {
                        acc += &self.coeffs[a as usize] * r(w);
                    }
                }
                acc
            })
            .collect();
        Self {
            center: self.center.clone(),
            order,
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    pub fn left_mul_const(&self, m: &CMat) -> Self {
        Self {
            center: self.center.clone(),
            order: self.order,
            rows: m.nrows(),
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|a| m * a).collect(),
        }
    }

    pub fn right_mul_const(&self, m: &CMat) -> Self {
        Self {
            center: self.center.clone(),
            order: self.order,
            rows: self.rows,
            cols: m.ncols(),
            coeffs: self.coeffs.iter().map(|a| a * m).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            center: self.center.clone(),
            order: self.order,
            rows: self.cols,
            cols: self.rows,
            coeffs: self.coeffs.iter().map(|a| a.adjoint()).collect(),
        }
    }

    /// Adds a constant matrix to the value.
    pub fn add_const(&self, m: &CMat) -> Self {
        let mut o = self.clone();
        o.coeffs[0] += m;
        o
    }

    /// Trace as a complex 1×1 jet, returned by components.
    pub fn trace(&self) -> Vec<C64> {
        self.coeffs
            .iter()
            .map(|m| (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum())
            .collect()
    }

    /// Inverse of a square jet with invertible value, by the recursion
    /// N_γ = −A₀⁻¹ Σ_{γ₁≠0} A_{γ₁} N_{γ−γ₁}.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(AdptError::Dimension("inverse of a non-square jet".into()));
        }
        let inv0 = self
            .coeffs[0]
            .clone()
            .try_inverse()
            .ok_or_else(|| AdptError::Invalid("singular jet value".into()))?;
        let t = table(self.nv());
        let len = t.len(self.order);
        let mut out: Vec<CMat> = Vec::with_capacity(len);
        out.push(inv0.clone());
        let one = r(1.0);
        for i in 1..len {
            let mut acc = CMat::zeros(self.rows, self.cols);
            for &(a, b) in t.pairs(i) {
                if a != 0 {
                    acc.gemm(one, &self.coeffs[a as usize], &out[b as usize], one);
                }
            }
            out.push(-(&inv0 * acc));
        }
        Ok(Self {
            center: self.center.clone(),
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            coeffs: out,
        })
    }

    /// M^{−1/2} for a jet with hermitian positive-definite value, solving
    /// S₀S_γ + S_γS₀ = (M⁻¹)_γ − Σ_{γ₁,γ₂≠0} S_{γ₁}S_{γ₂} in the eigenbasis of S₀.
    pub fn inv_sqrt_herm(&self) -> Result<Self> {
        let (vals, vecs) = crate::linalg::herm_eig(&self.coeffs[0]);
        if vals.iter().any(|&v| !(v > 0.0)) {
            return Err(AdptError::Invalid("inverse square root of a non-positive jet".into()));
        }
        let s = vals.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>();
        let n = self.rows;
        let inv = self.inverse()?;
        let t = table(self.nv());
        let len = t.len(self.order);
        let vh = vecs.adjoint();
        let mut out: Vec<CMat> = Vec::with_capacity(len);
        out.push(&vecs * CMat::from_diagonal(&nalgebra::DVector::from_iterator(n, s.iter().map(|&x| r(x)))) * &vh);
        let one = r(1.0);
        for i in 1..len {
            let mut rhs = inv.coeffs[i].clone();
            for &(a, b) in t.pairs(i) {
                if a != 0 && b != 0 {
                    rhs.gemm(-one, &out[a as usize], &out[b as usize], one);
                }
            }
            let mut x = &vh * rhs * &vecs;
            for p in 0..n {
                for q in 0..n {
                    x[(p, q)] /= s[p] + s[q];
                }
            }
            out.push(&vecs * x * &vh);
        }
        Ok(Self {
            center: self.center.clone(),
            order: self.order,
            rows: n,
            cols: n,
            coeffs: out,
        })
    }

    /// Power series Σ_k a_k X^k for a jet X with vanishing value; terms beyond
    /// the jet order vanish identically.
    pub fn nilpotent_series(&self, a: impl Fn(usize) -> f64) -> Self {
        debug_assert!(crate::linalg::max_abs(&self.coeffs[0]) < 1e-12);
        let n = self.rows;
        let mut out = Self::identity(&self.center, self.order, n).scale_re(a(0));
        let mut pow = Self::identity(&self.center, self.order, n);
        for k in 1..=self.order {
            pow = pow.mul(self);
            let ak = a(k);
            if ak != 0.0 {
                out.add_assign(&pow.scale_re(ak));
            }
        }
        out
    }

    /// Largest entry modulus over all coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .map(crate::linalg::max_abs)
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(crate::linalg::is_finite)
    }

    /// Poisson bracket {A, B} = Σ_j ∂_{p_j}A ∂_{q_j}B − ∂_{q_j}A ∂_{p_j}B, as a jet
    /// of order min − 1. Not antisymmetrized.
    pub fn poisson(&self, o: &Self) -> Self {
        let d = self.center.d();
        let order = self.order.min(o.order) - 1;
        let mut acc = Self::zeros(&self.center, order, self.rows, o.cols);
        for j in 0..d {
            let dpa = self.derivative(d + j).truncate(order);
            let dqb = o.derivative(j).truncate(order);
            let dqa = self.derivative(j).truncate(order);
            let dpb = o.derivative(d + j).truncate(order);
            acc = acc.add(&dpa.mul(&dqb)).sub(&dqa.mul(&dpb));
        }
        acc
    }
}

/// i as a jet scale factor.
pub fn imag_unit() -> C64 {
    c(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    #[test]
    fn product_rule_on_polynomials() {
        let z = PhasePoint::new1(0.4, -0.3);
        let v = SJet::vars(&z, 3);
        let s = pauli();
        // A = q σ₁ + p² σ₃, B = q p σ₂
        let a = Jet::from_scalars(&z, &[(&v[0], &s[0]), (&(&v[1] * &v[1]), &s[2])]);
        let b = Jet::from_scalars(&z, &[(&(&v[0] * &v[1]), &s[1])]);
        let ab = a.mul(&b);
        // ∂_q (AB) = σ₁ (q p σ₂) + (q σ₁ + p² σ₃) p σ₂ at the center
        let (q, p) = (0.4, -0.3);
        let a0 = &s[0] * r(q) + &s[2] * r(p * p);
        let expected = &s[0] * &s[1] * r(q * p) + a0 * &s[1] * r(p);
        let got = ab.derivative_value(&[1], &[0]).unwrap();
        assert!(crate::linalg::max_abs(&(got - expected)) < 1e-14);
    }

    #[test]
    fn inverse_recursion() {
        let z = PhasePoint::new1(0.1, 0.2);
        let v = SJet::vars(&z, 4);
        let s = pauli();
        let id = CMat::identity(2, 2);
        let m = Jet::from_scalars(
            &z,
            &[(&v[0].cos().add_const(2.0), &id), (&v[1].sin(), &s[0]), (&v[0], &s[1])],
        );
        let prod = m.mul(&m.inverse().unwrap());
        assert!(crate::linalg::max_abs(&(prod.value() - &id)) < 1e-13);
        assert!(prod.coeffs()[1..].iter().all(|c| crate::linalg::max_abs(c) < 1e-12));
    }

    #[test]
    fn poisson_bracket_of_linear_symbols() {
        // {p σ₁, q σ₂} = σ₁σ₂ = iσ₃
        let z = PhasePoint::new1(0.7, 0.2);
        let v = SJet::vars(&z, 2);
        let s = pauli();
        let a = Jet::from_scalars(&z, &[(&v[1], &s[0])]);
        let b = Jet::from_scalars(&z, &[(&v[0], &s[1])]);
        let pb = a.poisson(&b);
        let expected = &s[2] * c(0.0, 1.0);
        assert!(crate::linalg::max_abs(&(pb.value() - expected)) < 1e-15);
    }

    #[test]
    fn inverse_square_root_squares_back() {
        let z = PhasePoint::new1(0.2, -0.1);
        let v = SJet::vars(&z, 3);
        let s = crate::linalg::pauli();
        let id = CMat::identity(2, 2);
        let a = v[0].sin() * 0.3;
        let b = v[1].sq() * 0.2 + v[0].clone() * 0.1;
        let m = Jet::from_scalars(&z, &[(&SJet::constant(2, 3, 2.0), &id), (&a, &s[0]), (&b, &s[1])]);
        let r = m.inv_sqrt_herm().unwrap();
        let back = r.mul(&r).mul(&m).add_const(&-id);
        assert!(back.max_abs() < 1e-12);
    }
}
