//! Time-adiabatic theory on the extended phase space (t, η): K(t,η) = η + H(t).

use std::sync::Arc;

use crate::error::{AdptError, Result};
use crate::expansion::{h1_block, h2_block, ExpansionContext};
use crate::linalg::{c, pauli, r, CMat};
use crate::spectral::{eig_frame, spectral_jets, BandSpec};
use crate::symbol::multiindex::{table, Exps, MAX_VARS};
use crate::symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint, SJet};

type TermsFn = dyn Fn(&SJet) -> Vec<(SJet, CMat)> + Send + Sync;

/// H(t) = Σ f_i(t)·M_i, with f_i evaluated on Taylor jets in t so every time
/// derivative is exact.
#[derive(Clone)]
pub struct TimeDepHamiltonian {
    n: usize,
    band: BandSpec,
    terms: Arc<TermsFn>,
}

impl std::fmt::Debug for TimeDepHamiltonian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TimeDepHamiltonian").field("n", &self.n).field("band", &self.band).finish()
    }
}

fn t_index(a: usize) -> usize {
    let mut e: Exps = [0; MAX_VARS];
    e[0] = a as u8;
    table(2).index_of(&e).expect("order within table")
}

impl TimeDepHamiltonian {
    pub fn new<F>(n: usize, band: BandSpec, terms: F) -> Result<Self>
    where
        F: Fn(&SJet) -> Vec<(SJet, CMat)> + Send + Sync + 'static,
    {
        band.validate(n)?;
        Ok(Self {
            n,
            band,
            terms: Arc::new(terms),
        })
    }

    /// H(t) = tσ₃ + δ(cos ωt σ₁ + sin ωt σ₂), upper band. The gap is
    /// 2√(t² + δ²) ≥ 2δ, smallest at the crossing t = 0.
    pub fn avoided_crossing(delta: f64, omega: f64) -> Result<Self> {
        if delta <= 0.0 {
            return Err(AdptError::Invalid("avoided crossing needs δ > 0".into()));
        }
        let s = pauli();
        Self::new(2, BandSpec::index(1, 2, delta), move |t| {
            let w = t * omega;
            vec![
                (t.clone(), s[2].clone()),
                (w.cos() * delta, s[0].clone()),
                (w.sin() * delta, s[1].clone()),
            ]
        })
    }

    /// H(t) = B(cos ωt σ₁ + sin ωt σ₂), upper band. In the co-rotating frame
    /// the problem is static with quasienergies ±√(B² + ε²ω²/4), so the
    /// upper effective energy is B + ε²ω²/(8B) + O(ε⁴) in the Kato frame.
    pub fn rotating(b: f64, omega: f64) -> Result<Self> {
        if b <= 0.0 {
            return Err(AdptError::Invalid("rotating field needs B > 0".into()));
        }
        let s = pauli();
        Self::new(2, BandSpec::index(1, 2, b), move |t| {
            let w = t * omega;
            vec![(w.cos() * b, s[0].clone()), (w.sin() * b, s[1].clone())]
        })
    }

    /// Time-independent H.
    pub fn constant(h: CMat, band: BandSpec) -> Result<Self> {
        let n = h.nrows();
        Self::new(n, band, move |t| vec![(SJet::constant(t.nv(), t.order(), 1.0), h.clone())])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn band(&self) -> &BandSpec {
        &self.band
    }

    /// Jet of H(t) at an extended point z = (t, η); constant in η.
    fn jet(&self, z: &PhasePoint, k: usize) -> Jet {
        let t = SJet::var(z, 0, k);
        let mut j = Jet::zeros(z, k, self.n, self.n);
        for (f, m) in (self.terms)(&t) {
            j.add_scalar_term(&f, &m);
        }
        j
    }

    pub fn eval(&self, t: f64) -> CMat {
        self.jet(&PhasePoint::new1(t, 0.0), 0).value().clone()
    }

    /// Taylor coefficients H^{(a)}(t)/a! for a = 0..=k.
    pub fn taylor(&self, t: f64, k: usize) -> Vec<CMat> {
        let j = self.jet(&PhasePoint::new1(t, 0.0), k);
        (0..=k).map(|a| j.coeff(t_index(a)).clone()).collect()
    }

    /// The extended symbol K(t,η) = η + H(t) on phase space (q, p) = (t, η).
    pub fn howland(&self) -> FormalSymbol {
        let me = self.clone();
        let n = self.n;
        let k0 = MatrixSymbol::analytic("howland", 1, n, n, move |z, k| {
            let mut j = me.jet(z, k);
            j.add_scalar_term(&SJet::var(z, 1, k), &CMat::identity(n, n));
            Ok(j)
        })
        .with_hermitian(true);
        FormalSymbol::single(k0)
    }

    /// Pointwise π₀(t), e_r(t), R₀(t) and the Kato generator [π̇₀, π₀].
    pub fn spectral_at(&self, t: f64) -> Result<SpectralPoint> {
        let tc = self.taylor(t, 1);
        let eig = eig_frame(&tc[0], &PhasePoint::new1(t, 0.0), &self.band)?;
        let p = eig.pi0.clone();
        let r0 = eig.reduced_resolvent();
        let pdot = -(&r0 * &tc[1] * &p + &p * &tc[1] * &r0);
        let gen = &pdot * &p - &p * &pdot;
        Ok(SpectralPoint {
            e_r: eig.e_r,
            pi0: p,
            resolvent: r0,
            generator: gen,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SpectralPoint {
    pub e_r: f64,
    pub pi0: CMat,
    pub resolvent: CMat,
    pub generator: CMat,
}

/// Kato-transported frame u₀*(t), solving du₀*/dt = [π̇₀, π₀]u₀* from the
/// band-first eigenbasis at t = 0, optionally times a gauge phase e^{iαt}.
#[derive(Debug, Clone)]
pub struct KatoFrame {
    ham: TimeDepHamiltonian,
    basis0: CMat,
    gauge_rate: f64,
    step: f64,
}

impl KatoFrame {
    pub fn new(ham: TimeDepHamiltonian) -> Result<Self> {
        let eig = eig_frame(&ham.eval(0.0), &PhasePoint::new1(0.0, 0.0), ham.band())?;
        Ok(Self {
            basis0: eig.eigvecs.clone(),
            ham,
            gauge_rate: 0.0,
            step: 1e-3,
        })
    }

    pub fn with_gauge_rate(mut self, alpha: f64) -> Self {
        self.gauge_rate = alpha;
        self
    }

    pub fn with_step(mut self, dt: f64) -> Self {
        self.step = dt;
        self
    }

    pub fn hamiltonian(&self) -> &TimeDepHamiltonian {
        &self.ham
    }

    /// Kato transport V(t) with V(0) = 1, by classic RK4.
    pub fn transport(&self, t: f64) -> Result<CMat> {
        let n = self.ham.n();
        let steps = (t.abs() / self.step).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let gen = |s: f64| self.ham.spectral_at(s).map(|sp| sp.generator);
        let mut v = CMat::identity(n, n);
        let mut s = 0.0;
        for _ in 0..steps {
            let a0 = gen(s)?;
            let am = gen(s + 0.5 * h)?;
            let a1 = gen(s + h)?;
            let k1 = &a0 * &v;
            let k2 = &am * (&v + &k1 * r(0.5 * h));
            let k3 = &am * (&v + &k2 * r(0.5 * h));
            let k4 = &a1 * (&v + &k3 * r(h));
            v += (k1 + k2 * r(2.0) + k3 * r(2.0) + k4) * r(h / 6.0);
            s += h;
        }
        Ok(v)
    }

    /// u₀*(t) = V(t)·B·e^{iαt}, with B the eigenbasis at t = 0.
    pub fn u0_adjoint(&self, t: f64) -> Result<CMat> {
        let ph = c(0.0, self.gauge_rate * t).exp();
        Ok(self.transport(t)? * &self.basis0 * ph)
    }

    /// Band columns φ_α(t) and their exact time derivatives.
    pub fn band_frame(&self, t: f64) -> Result<(CMat, CMat)> {
        let l = self.ham.band().multiplicity;
        let sp = self.ham.spectral_at(t)?;
        let phi = self.u0_adjoint(t)?.columns(0, l).into_owned();
        let dphi = &sp.generator * &phi + &phi * c(0.0, self.gauge_rate);
        Ok((phi, dphi))
    }

    /// Jet of u₀ at (t, η); the t-Taylor coefficients follow from the
    /// transport equation, V_{a+1} = Σ A_i V_{a−i}/(a+1).
    pub fn u0_jet(&self, z: &PhasePoint, k: usize) -> Result<Jet> {
        let t = z.coord(0);
        let n = self.ham.n();
        let kz = self.ham.howland().term(0).jet(z, k + 1)?;
        let p = spectral_jets(&kz, self.ham.band())?.projector;
        let pd = p.derivative(0);
        let pk = p.truncate(k);
        let a = pd.mul(&pk).sub(&pk.mul(&pd));
        let mut vc = vec![self.transport(t)?];
        for m in 0..k {
            let mut acc = CMat::zeros(n, n);
            for i in 0..=m {
                acc += a.coeff(t_index(i)) * &vc[m - i];
            }
            vc.push(acc * r(1.0 / (m + 1) as f64));
        }
        let mut coeffs = vec![CMat::zeros(n, n); table(2).len(k)];
        for (m, v) in vc.into_iter().enumerate() {
            coeffs[t_index(m)] = v * &self.basis0;
        }
        let w = Jet::from_coeffs(z, k, coeffs)?;
        let tj = SJet::var(z, 0, k) * self.gauge_rate;
        let ustar = w.mul_scalar(&tj.cos()).add(&w.scale(c(0.0, 1.0)).mul_scalar(&tj.sin()));
        Ok(ustar.adjoint())
    }

    pub fn u0(&self) -> MatrixSymbol {
        let me = self.clone();
        let n = self.ham.n();
        MatrixSymbol::from_jet_fn("u_kato", 1, n, n, 5, move |z, k| me.u0_jet(z, k))
    }
}

/// Blocks of the effective Hamiltonian h = h₀ + εh₁ + ε²h₂ (ℓ×ℓ).
#[derive(Debug, Clone)]
pub struct EffectiveBlocks {
    pub terms: Vec<CMat>,
}

impl EffectiveBlocks {
    pub fn eval_sum(&self, eps: f64) -> CMat {
        let mut acc = CMat::zeros(self.terms[0].nrows(), self.terms[0].ncols());
        for (j, t) in self.terms.iter().enumerate() {
            acc += t * r(eps.powi(j as i32));
        }
        acc
    }
}

/// h_{αβ}(t) = e_r δ_{αβ} − iε⟨φ_α, φ̇_β⟩ − ε²⟨φ̇_α, R₀(e_r)φ̇_β⟩ in the
/// frame of `frame`, with R₀(e_r) = (H − e_r)⁻¹(1 − π₀).
///
/// The second-order coefficient is −1. A coefficient of +½ contradicts the
/// exact quasienergy √(B² + ε²ω²/4) of a uniformly rotating field (see
/// [`TimeDepHamiltonian::rotating`]); [`time_adiabatic_h2_half`] evaluates
/// that variant for comparison.
pub fn time_adiabatic_h(frame: &KatoFrame, t: f64, order: usize) -> Result<EffectiveBlocks> {
    if order > 2 {
        return Err(AdptError::Capability("explicit time-adiabatic h is known through order 2".into()));
    }
    let l = frame.hamiltonian().band().multiplicity;
    let sp = frame.hamiltonian().spectral_at(t)?;
    let (phi, dphi) = frame.band_frame(t)?;
    let mut terms = vec![CMat::identity(l, l) * r(sp.e_r)];
    if order >= 1 {
        terms.push(phi.adjoint() * &dphi * c(0.0, -1.0));
    }
    if order >= 2 {
        terms.push(dphi.adjoint() * &sp.resolvent * &dphi * r(-1.0));
    }
    Ok(EffectiveBlocks { terms })
}

/// ½⟨φ̇_α, R₀φ̇_β⟩, the second-order term with coefficient +½.
pub fn time_adiabatic_h2_half(frame: &KatoFrame, t: f64) -> Result<CMat> {
    let sp = frame.hamiltonian().spectral_at(t)?;
    let (_, dphi) = frame.band_frame(t)?;
    Ok(dphi.adjoint() * &sp.resolvent * &dphi * r(0.5))
}

/// The same blocks from the generic machinery applied to K with u₀ from
/// `frame`, evaluated at (t, η); the trivial η is removed from h₀.
pub fn howland_effective(frame: &KatoFrame, t: f64, eta: f64) -> Result<EffectiveBlocks> {
    let ham = frame.hamiltonian();
    let ctx = ExpansionContext::new(ham.howland(), ham.band().clone(), 2)?.with_u0(frame.u0())?;
    let z = PhasePoint::new1(t, eta);
    let l = ham.band().multiplicity;
    let e = ctx.model().energy().eval(&z)?[(0, 0)].re - eta;
    Ok(EffectiveBlocks {
        terms: vec![CMat::identity(l, l) * r(e), h1_block(&ctx, &z)?, h2_block(&ctx, &z)?],
    })
}
