//! Dirac symbol H_D = cα·(p − (e/c)A(q)) + βmc² + eφ(q) and its 1D analogue.

use crate::linalg::{c, dirac_matrices, pauli, r, CMat};
use crate::spectral::BandSpec;
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint, SJet};
use serde::{Deserialize, Serialize};

/// a·sin(k·q + phase), one Fourier mode of a bounded field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode<const N: usize> {
    #[serde(with = "serde_arrays")]
    pub amp: [f64; N],
    pub k: [f64; 3],
    pub phase: f64,
}

mod serde_arrays {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(a: &[f64; N], s: S) -> Result<S::Ok, S::Error> {
        a.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(d: D) -> Result<[f64; N], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom(format!("expected {N} components")))
    }
}

/// Smooth bounded potentials as finite Fourier sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracFields {
    pub vector: Vec<Mode<3>>,
    pub scalar: Vec<Mode<1>>,
}

impl DiracFields {
    pub fn none() -> Self {
        Self {
            vector: Vec::new(),
            scalar: Vec::new(),
        }
    }

    /// A magnetic field with all three components and a gentle electric field.
    pub fn standard() -> Self {
        Self {
            vector: vec![
                Mode { amp: [0.0, 0.6, 0.0], k: [0.5, 0.0, 0.0], phase: 0.3 },
                Mode { amp: [0.0, 0.0, 0.4], k: [0.0, 0.7, 0.0], phase: -0.2 },
                Mode { amp: [0.5, 0.0, 0.0], k: [0.0, 0.0, 0.6], phase: 0.9 },
            ],
            scalar: vec![
                Mode { amp: [0.4], k: [0.0, 0.0, 0.6], phase: 0.5 },
                Mode { amp: [0.2], k: [0.5, 0.3, 0.0], phase: 0.0 },
            ],
        }
    }

    fn phase(z: &PhasePoint, k: usize, m_k: &[f64; 3], phase: f64) -> SJet {
        let v = SJet::vars(z, k);
        let mut s = SJet::constant(z.nv(), k, phase);
        for (j, kj) in m_k.iter().enumerate() {
            if *kj != 0.0 {
                s = s + &v[j] * *kj;
            }
        }
        s
    }

    pub fn vector_jet(&self, z: &PhasePoint, k: usize) -> [SJet; 3] {
        let zero = SJet::constant(z.nv(), k, 0.0);
        let mut a = [zero.clone(), zero.clone(), zero];
        for m in &self.vector {
            let s = Self::phase(z, k, &m.k, m.phase).sin();
            for i in 0..3 {
                if m.amp[i] != 0.0 {
                    a[i] = &a[i] + &s * m.amp[i];
                }
            }
        }
        a
    }

    pub fn scalar_jet(&self, z: &PhasePoint, k: usize) -> SJet {
        let mut f = SJet::constant(z.nv(), k, 0.0);
        for m in &self.scalar {
            f = f + Self::phase(z, k, &m.k, m.phase).sin() * m.amp[0];
        }
        f
    }

    /// A purely magnetic field B = (0, 0, B₃(q₁)) of fixed direction.
    pub fn axial_magnetic() -> Self {
        Self {
            vector: vec![Mode { amp: [0.0, 0.6, 0.0], k: [0.5, 0.0, 0.0], phase: 0.3 }],
            scalar: Vec::new(),
        }
    }

    /// B = ∇×A at the point.
    pub fn magnetic(&self, z: &PhasePoint) -> [f64; 3] {
        let a = self.vector_jet(z, 1);
        let d = |i: usize, j: usize| a[i].d1(j);
        [d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)]
    }

    /// E = −∇φ at the point.
    pub fn electric(&self, z: &PhasePoint) -> [f64; 3] {
        let f = self.scalar_jet(z, 1);
        [-f.d1(0), -f.d1(1), -f.d1(2)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracParams {
    pub hbar: f64,
    pub c: f64,
    pub m: f64,
    pub e: f64,
    pub fields: DiracFields,
}

impl Default for DiracParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            m: 1.0,
            e: 1.0,
            fields: DiracFields::standard(),
        }
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[derive(Debug, Clone)]
pub struct Dirac {
    pub params: DiracParams,
}

impl Dirac {
    pub fn new(params: DiracParams) -> Self {
        Self { params }
    }

    /// Kinetic momentum k = p − (e/c)A(q) and p₀ = √(m²c² + k²) as jets.
    pub fn kinetic(&self, z: &PhasePoint, order: usize) -> ([SJet; 3], SJet) {
        let pr = &self.params;
        let a = pr.fields.vector_jet(z, order);
        let v = SJet::vars(z, order);
        let k: [SJet; 3] = std::array::from_fn(|i| &v[3 + i] - &a[i] * (pr.e / pr.c));
        let mut s = SJet::constant(z.nv(), order, (pr.m * pr.c).powi(2));
        for ki in &k {
            s = s + ki.sq();
        }
        (k, s.sqrt())
    }

    fn h0_jet(&self, z: &PhasePoint, order: usize) -> Jet {
        let pr = &self.params;
        let (alpha, beta) = dirac_matrices();
        let (k, _) = self.kinetic(z, order);
        let phi = pr.fields.scalar_jet(z, order) * pr.e;
        let mut j = Jet::constant(z, order, &(&beta * r(pr.m * pr.c * pr.c)));
        for i in 0..3 {
            j.add_scalar_term(&(&k[i] * pr.c), &alpha[i]);
        }
        j.add_scalar_term(&phi, &CMat::identity(4, 4));
        j
    }

    pub fn h0(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("dirac", 3, 4, 4, move |z, k| Ok(me.h0_jet(z, k))).with_hermitian(true)
    }

    pub fn hamiltonian(&self) -> FormalSymbol {
        FormalSymbol::single(self.h0())
    }

    /// Electron band: the two-fold eigenvalue E₊ = cp₀ + eφ.
    pub fn band(&self) -> BandSpec {
        let pr = &self.params;
        BandSpec::index(2, 4, pr.m * pr.c * pr.c)
    }

    /// Foldy-Wouthuysen u₀ = (cp₀ + mc² + βcα·k)/√(2cp₀(cp₀ + mc²)).
    pub fn u0_jet(&self, z: &PhasePoint, order: usize) -> Jet {
        let pr = &self.params;
        let (alpha, beta) = dirac_matrices();
        let (k, p0) = self.kinetic(z, order);
        let e = &p0 * pr.c;
        let mc2 = pr.m * pr.c * pr.c;
        let norm = (&e * e.add_const(mc2) * 2.0).sqrt().recip();
        let mut j = Jet::zeros(z, order, 4, 4);
        j.add_scalar_term(&(e.add_const(mc2) * &norm), &CMat::identity(4, 4));
        for i in 0..3 {
            j.add_scalar_term(&(&k[i] * &norm * pr.c), &(&beta * &alpha[i]));
        }
        j
    }

    pub fn u0(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("u_FW", 3, 4, 4, move |z, k| Ok(me.u0_jet(z, k)))
    }

    /// P₊ = ½(1 + (α·k + βmc)/p₀).
    pub fn projector(&self, z: &PhasePoint) -> CMat {
        let pr = &self.params;
        let (alpha, beta) = dirac_matrices();
        let (k, p0) = self.kinetic(z, 0);
        let mut m = &beta * r(pr.m * pr.c);
        for i in 0..3 {
            m += &alpha[i] * r(k[i].value());
        }
        (CMat::identity(4, 4) + m / r(p0.value())) * r(0.5)
    }

    /// Velocity v = ck/p₀ and γ = p₀/(mc).
    pub fn velocity(&self, z: &PhasePoint) -> ([f64; 3], f64) {
        let pr = &self.params;
        let (k, p0) = self.kinetic(z, 0);
        let p0 = p0.value();
        (std::array::from_fn(|i| pr.c * k[i].value() / p0), p0 / (pr.m * pr.c))
    }

    /// Ω = (e/mc)(B/γ − v∧E/(c(1+γ))).
    pub fn omega(&self, z: &PhasePoint) -> [f64; 3] {
        let pr = &self.params;
        let b = pr.fields.magnetic(z);
        let ef = pr.fields.electric(z);
        let (v, g) = self.velocity(z);
        let vxe = cross(v, ef);
        let f = pr.e / (pr.m * pr.c);
        std::array::from_fn(|i| f * (b[i] / g - vxe[i] / (pr.c * (1.0 + g))))
    }

    /// Ω from the other displayed form, (e/p₀)(B − p₀/(c(p₀ + mc)) v∧E).
    pub fn omega_p0_form(&self, z: &PhasePoint) -> [f64; 3] {
        let pr = &self.params;
        let b = pr.fields.magnetic(z);
        let ef = pr.fields.electric(z);
        let (v, _) = self.velocity(z);
        let p0 = self.kinetic(z, 0).1.value();
        let vxe = cross(v, ef);
        std::array::from_fn(|i| pr.e / p0 * (b[i] - p0 / (pr.c * (p0 + pr.m * pr.c)) * vxe[i]))
    }

    /// E₊ = cp₀ + eφ as a jet.
    pub fn energy_jet(&self, z: &PhasePoint, order: usize) -> SJet {
        let pr = &self.params;
        let (_, p0) = self.kinetic(z, order);
        p0 * pr.c + pr.fields.scalar_jet(z, order) * pr.e
    }

    /// Ω as jets, built from jets of A and φ one order higher.
    pub fn omega_jet(&self, z: &PhasePoint, order: usize) -> [SJet; 3] {
        let pr = &self.params;
        let a = pr.fields.vector_jet(z, order + 1);
        let phi = pr.fields.scalar_jet(z, order + 1);
        let da = |i: usize, j: usize| a[i].derivative(j);
        let b = [da(2, 1) - da(1, 2), da(0, 2) - da(2, 0), da(1, 0) - da(0, 1)];
        let ef: [SJet; 3] = std::array::from_fn(|i| -phi.derivative(i));
        let (k, p0) = self.kinetic(z, order);
        let inv = p0.recip();
        let g = &p0 * (1.0 / (pr.m * pr.c));
        let v: [SJet; 3] = std::array::from_fn(|i| &k[i] * &inv * pr.c);
        let vxe = [
            &v[1] * &ef[2] - &v[2] * &ef[1],
            &v[2] * &ef[0] - &v[0] * &ef[2],
            &v[0] * &ef[1] - &v[1] * &ef[0],
        ];
        let f = pr.e / (pr.m * pr.c);
        let ginv = g.recip();
        let w = (g.add_const(1.0) * pr.c).recip();
        std::array::from_fn(|i| (&b[i] * &ginv - &vxe[i] * &w) * f)
    }

    /// −(ħ/2)σ·Ω as a 2×2 symbol with exact jets.
    pub fn h1_symbol(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("dirac_h1", 3, 2, 2, move |z, k| {
            let om = me.omega_jet(z, k);
            let s = pauli();
            let mut j = Jet::zeros(z, k, 2, 2);
            for i in 0..3 {
                j.add_scalar_term(&(&om[i] * (-0.5 * me.params.hbar)), &s[i]);
            }
            Ok(j)
        })
        .with_hermitian(true)
        .with_max_jet_order(4)
    }

    /// h_{e,1} = −(ħ/2)σ·Ω.
    pub fn h1_oracle(&self, z: &PhasePoint) -> CMat {
        let s = pauli();
        let om = self.omega(z);
        let mut m = CMat::zeros(2, 2);
        for i in 0..3 {
            m += &s[i] * r(om[i]);
        }
        m * r(-0.5 * self.params.hbar)
    }
}

/// 1D Dirac H = cσ₁(p − A(q)) + σ₃mc² + φ(q) with A = a sin(2πq/L),
/// φ = b cos(2πq/L), periodic for the grid harness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Dirac1dParams {
    pub c: f64,
    pub m: f64,
    pub a_amp: f64,
    pub phi_amp: f64,
    pub l: f64,
}

impl Default for Dirac1dParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            m: 1.0,
            a_amp: 0.5,
            phi_amp: 0.3,
            l: 8.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dirac1d {
    pub params: Dirac1dParams,
}

impl Dirac1d {
    pub fn new(params: Dirac1dParams) -> Self {
        Self { params }
    }

    fn parts(&self, z: &PhasePoint, k: usize) -> (SJet, SJet, SJet) {
        let pr = &self.params;
        let v = SJet::vars(z, k);
        let w = &v[0] * (2.0 * std::f64::consts::PI / pr.l);
        let kin = &v[1] - w.sin() * pr.a_amp;
        let phi = w.cos() * pr.phi_amp;
        let e = (kin.sq() * (pr.c * pr.c)).add_const((pr.m * pr.c * pr.c).powi(2)).sqrt();
        (kin, phi, e)
    }

    pub fn h0(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("dirac1d", 1, 2, 2, move |z, k| {
            let pr = &me.params;
            let (kin, phi, _) = me.parts(z, k);
            let s = pauli();
            let mut j = Jet::constant(z, k, &(&s[2] * r(pr.m * pr.c * pr.c)));
            j.add_scalar_term(&(kin * pr.c), &s[0]);
            j.add_scalar_term(&phi, &CMat::identity(2, 2));
            Ok(j)
        })
        .with_hermitian(true)
    }

    pub fn hamiltonian(&self) -> FormalSymbol {
        FormalSymbol::single(self.h0())
    }

    /// Electron band (upper eigenvalue).
    pub fn band(&self) -> BandSpec {
        BandSpec::index(1, 2, self.params.m * self.params.c * self.params.c)
    }

    /// u₀ = (E + mc² + icσ₂k)/√(2E(E + mc²)) with E = √(c²k² + m²c⁴).
    pub fn u0(&self) -> MatrixSymbol {
        let me = self.clone();
        MatrixSymbol::analytic("u_FW1d", 1, 2, 2, move |z, k| {
            let pr = &me.params;
            let (kin, _, e) = me.parts(z, k);
            let mc2 = pr.m * pr.c * pr.c;
            let norm = (&e * e.add_const(mc2) * 2.0).sqrt().recip();
            let s = pauli();
            let mut j = Jet::zeros(z, k, 2, 2);
            j.add_scalar_term(&(e.add_const(mc2) * &norm), &CMat::identity(2, 2));
            j.add_scalar_term(&(kin * &norm * pr.c), &(&s[1] * c(0.0, 1.0)));
            Ok(j)
        })
    }
}
