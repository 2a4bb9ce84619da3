//! Real scalar Taylor jets, used to build analytic model symbols.

use super::multiindex::{table, MAX_ORDER};
use super::point::PhasePoint;
use std::ops::{Add, Mul, Neg, Sub};

/// Truncated Taylor polynomial of a real function around a phase point.
/// Coefficients are ∂^γ f / γ!.
#[derive(Debug, Clone, PartialEq)]
pub struct SJet {
    nv: usize,
    order: usize,
    c: Vec<f64>,
}

impl SJet {
    pub fn constant(nv: usize, order: usize, v: f64) -> Self {
        let mut c = vec![0.0; table(nv).len(order)];
        c[0] = v;
        Self { nv, order, c }
    }

    /// The coordinate function z ↦ z_v.
    pub fn var(z: &PhasePoint, v: usize, order: usize) -> Self {
        let nv = z.nv();
        let mut j = Self::constant(nv, order, z.coord(v));
        if order >= 1 {
            let t = table(nv);
            let mut e = [0u8; super::multiindex::MAX_VARS];
            e[v] = 1;
            j.c[t.index_of(&e).unwrap()] = 1.0;
        }
        j
    }

    /// All coordinate functions (q₁..q_d, p₁..p_d).
    pub fn vars(z: &PhasePoint, order: usize) -> Vec<Self> {
        (0..z.nv()).map(|v| Self::var(z, v, order)).collect()
    }

    pub fn from_coeffs(nv: usize, order: usize, c: Vec<f64>) -> Self {
        assert_eq!(c.len(), table(nv).len(order));
        Self { nv, order, c }
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    /// ∂^γ f at the center for the multi-index at table position `i`.
    pub fn derivative_at(&self, i: usize) -> f64 {
        self.c[i] * table(self.nv).factorial(i)
    }

    /// First partial derivative ∂_v f at the center.
    pub fn d1(&self, v: usize) -> f64 {
        let mut e = [0u8; super::multiindex::MAX_VARS];
        e[v] = 1;
        self.c[table(self.nv).index_of(&e).unwrap()]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            nv: self.nv,
            order,
            c: self.c[..table(self.nv).len(order)].to_vec(),
        }
    }

    /// ∂_v as a jet of one lower order.
    pub fn derivative(&self, v: usize) -> Self {
        assert!(self.order >= 1);
        let t = table(self.nv);
        let order = self.order - 1;
        let mut mu = [0u8; super::multiindex::MAX_VARS];
        mu[v] = 1;
        let c = (0..t.len(order))
            .map(|i| {
                let s = t.shifted(i, &mu).unwrap();
                self.c[s] * (t.exps(i)[v] as f64 + 1.0)
            })
            .collect();
        Self { nv: self.nv, order, c }
    }

    fn zip(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.nv, o.nv);
        let order = self.order.min(o.order);
        let n = table(self.nv).len(order);
        Self {
            nv: self.nv,
            order,
            c: (0..n).map(|i| f(self.c[i], o.c[i])).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            nv: self.nv,
            order: self.order,
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add_const(&self, s: f64) -> Self {
        let mut o = self.clone();
        o.c[0] += s;
        o
    }

    pub fn mul_jet(&self, o: &Self) -> Self {
        assert_eq!(self.nv, o.nv);
        let t = table(self.nv);
        let order = self.order.min(o.order);
        let c = (0..t.len(order))
            .map(|i| {
                t.pairs(i)
                    .iter()
                    .map(|&(a, b)| self.c[a as usize] * o.c[b as usize])
                    .sum()
            })
            .collect();
        Self { nv: self.nv, order, c }
    }

    /// f ∘ self, given the Taylor coefficients f^{(k)}(g₀)/k! at g₀ = self.value().
    pub fn compose(&self, taylor: &[f64]) -> Self {
        let mut delta = self.clone();
        delta.c[0] = 0.0;
        // Horner on Σ f_k δ^k; δ has no constant term so δ^k vanishes beyond the order
        let k_max = self.order.min(taylor.len().saturating_sub(1));
        let mut out = Self::constant(self.nv, self.order, taylor[k_max]);
        for k in (0..k_max).rev() {
            out = out.mul_jet(&delta).add_const(taylor[k]);
        }
        out
    }

    fn taylor_len(&self) -> usize {
        self.order + 1
    }

    pub fn sin(&self) -> Self {
        let x = self.value();
        let (s, c) = x.sin_cos();
        let cyc = [s, c, -s, -c];
        let t: Vec<f64> = (0..self.taylor_len())
            .map(|k| cyc[k % 4] / fact(k))
            .collect();
        self.compose(&t)
    }

    pub fn cos(&self) -> Self {
        let x = self.value();
        let (s, c) = x.sin_cos();
        let cyc = [c, -s, -c, s];
        let t: Vec<f64> = (0..self.taylor_len())
            .map(|k| cyc[k % 4] / fact(k))
            .collect();
        self.compose(&t)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let t: Vec<f64> = (0..self.taylor_len()).map(|k| e / fact(k)).collect();
        self.compose(&t)
    }

    pub fn tanh(&self) -> Self {
        // d^k/dx^k tanh = P_k(tanh x), P_{k+1}(t) = P_k'(t)(1 − t²)
        let th = self.value().tanh();
        let mut poly = vec![0.0, 1.0];
        let mut t = Vec::with_capacity(self.taylor_len());
        for k in 0..self.taylor_len() {
            let val: f64 = poly.iter().rev().fold(0.0, |acc, &a| acc * th + a);
            t.push(val / fact(k));
            let dp: Vec<f64> = (1..poly.len()).map(|i| i as f64 * poly[i]).collect();
            let mut next = vec![0.0; dp.len() + 2];
            for (i, &a) in dp.iter().enumerate() {
                next[i] += a;
                next[i + 2] -= a;
            }
            poly = next;
        }
        self.compose(&t)
    }

    /// self^a for a real exponent; requires a positive value.
    pub fn powf(&self, a: f64) -> Self {
        let x = self.value();
        let mut t = Vec::with_capacity(self.taylor_len());
        let mut binom = 1.0;
        for k in 0..self.taylor_len() {
            t.push(binom * x.powf(a - k as f64));
            binom *= (a - k as f64) / (k as f64 + 1.0);
        }
        self.compose(&t)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Self {
        let x = self.value();
        let t: Vec<f64> = (0..self.taylor_len())
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / x.powi(k as i32 + 1))
            .collect();
        self.compose(&t)
    }

    pub fn sq(&self) -> Self {
        self.mul_jet(self)
    }
}

fn fact(k: usize) -> f64 {
    debug_assert!(k <= MAX_ORDER + 1);
    (1..=k).map(|x| x as f64).product()
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&SJet> for &SJet {
            type Output = SJet;
            fn $m(self, o: &SJet) -> SJet {
                $body(self, o)
            }
        }
        impl $tr<SJet> for SJet {
            type Output = SJet;
            fn $m(self, o: SJet) -> SJet {
                $body(&self, &o)
            }
        }
        impl $tr<&SJet> for SJet {
            type Output = SJet;
            fn $m(self, o: &SJet) -> SJet {
                $body(&self, o)
            }
        }
        impl $tr<SJet> for &SJet {
            type Output = SJet;
            fn $m(self, o: SJet) -> SJet {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, |a: &SJet, b: &SJet| a.zip(b, |x, y| x + y));
binop!(Sub, sub, |a: &SJet, b: &SJet| a.zip(b, |x, y| x - y));
binop!(Mul, mul, |a: &SJet, b: &SJet| a.mul_jet(b));

impl Mul<f64> for &SJet {
    type Output = SJet;
    fn mul(self, s: f64) -> SJet {
        self.scale(s)
    }
}

impl Mul<f64> for SJet {
    type Output = SJet;
    fn mul(self, s: f64) -> SJet {
        self.scale(s)
    }
}

impl Add<f64> for &SJet {
    type Output = SJet;
    fn add(self, s: f64) -> SJet {
        self.add_const(s)
    }
}

impl Add<f64> for SJet {
    type Output = SJet;
    fn add(self, s: f64) -> SJet {
        self.add_const(s)
    }
}

impl Neg for &SJet {
    type Output = SJet;
    fn neg(self) -> SJet {
        self.scale(-1.0)
    }
}

impl Neg for SJet {
    type Output = SJet;
    fn neg(self) -> SJet {
        self.scale(-1.0)
    }
}
