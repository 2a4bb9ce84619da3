//! Small dense helpers for fiber-sized complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type C64 = Complex64;

pub const I: C64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    Complex64::new(re, 0.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(n: usize, m: usize) -> CMat {
    CMat::zeros(n, m)
}

/// Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli() -> [CMat; 3] {
    let o = r(0.0);
    let l = r(1.0);
    [
        CMat::from_row_slice(2, 2, &[o, l, l, o]),
        CMat::from_row_slice(2, 2, &[o, -I, I, o]),
        CMat::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

/// Dirac matrices α₁, α₂, α₃ and β in the standard representation.
pub fn dirac_matrices() -> ([CMat; 3], CMat) {
    let s = pauli();
    let alpha = s.clone().map(|sk| {
        let mut a = zeros(4, 4);
        a.view_mut((0, 2), (2, 2)).copy_from(&sk);
        a.view_mut((2, 0), (2, 2)).copy_from(&sk);
        a
    });
    let mut beta = eye(4);
    beta[(2, 2)] = r(-1.0);
    beta[(3, 3)] = r(-1.0);
    (alpha, beta)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn hermitian_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// Each eigenvector is phase-fixed so that its largest-modulus entry is real
/// and positive, which keeps results reproducible across calls.
pub fn herm_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * r(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vals = Vec::with_capacity(n);
    let mut vecs = zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[k]);
        let v = eig.eigenvectors.column(k);
        let mut best = 0;
        for i in 0..n {
            if v[i].norm() > v[best].norm() + 1e-12 {
                best = i;
            }
        }
        let ph = if v[best].norm() > 0.0 {
            v[best].conj() / v[best].norm()
        } else {
            r(1.0)
        };
        for i in 0..n {
            vecs[(i, col)] = v[i] * ph;
        }
    }
    (vals, vecs)
}

/// Apply a real function to a hermitian matrix through its eigendecomposition.
pub fn herm_fn(m: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (vals, vecs) = herm_eig(m);
    let mut scaled = vecs.clone();
    for (k, &l) in vals.iter().enumerate() {
        let fl = f(l);
        for i in 0..scaled.nrows() {
            scaled[(i, k)] *= fl;
        }
    }
    scaled * vecs.adjoint()
}

/// exp(−i·h·t) for hermitian h.
pub fn expm_herm(h: &CMat, t: f64) -> CMat {
    herm_fn(h, |l| Complex64::from_polar(1.0, -l * t))
}

/// Spectral norm via the largest eigenvalue of m*m.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let g = m.adjoint() * m;
    let (vals, _) = herm_eig(&g);
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Trace as a complex number.
pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// Fréchet derivative of h ↦ exp(−i·h·t) at hermitian h in direction δ.
pub fn dexpm_herm(h: &CMat, delta: &CMat, t: f64) -> CMat {
    let (vals, vecs) = herm_eig(h);
    let mut m = vecs.adjoint() * delta * &vecs;
    for a in 0..vals.len() {
        for b in 0..vals.len() {
            let (la, lb) = (vals[a], vals[b]);
            let ea = Complex64::from_polar(1.0, -la * t);
            let f = if (la - lb).abs() > 1e-9 * (1.0 + la.abs()) {
                (ea - Complex64::from_polar(1.0, -lb * t)) / (la - lb)
            } else {
                Complex64::new(0.0, -t) * Complex64::from_polar(1.0, -0.5 * (la + lb) * t)
            };
            m[(a, b)] *= f;
        }
    }
    &vecs * m * vecs.adjoint()
}
