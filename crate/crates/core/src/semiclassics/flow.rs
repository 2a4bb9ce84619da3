//! Hamiltonian flow of a scalar band energy, with its tangent map.

use nalgebra::DMatrix;

use crate::error::{AdptError, Result};
use crate::symbol::multiindex::{table, Exps, MAX_VARS};
use crate::symbol::{MatrixSymbol, PhasePoint, SJet};

pub type RMat = DMatrix<f64>;

/// A real scalar function on phase space that can produce Taylor jets.
pub trait ScalarField: Send + Sync {
    fn d(&self) -> usize;
    fn jet(&self, z: &PhasePoint, order: usize) -> Result<SJet>;
}

/// The real part of the (0,0) entry; meant for 1×1 energy symbols.
impl ScalarField for MatrixSymbol {
    fn d(&self) -> usize {
        MatrixSymbol::d(self)
    }

    fn jet(&self, z: &PhasePoint, order: usize) -> Result<SJet> {
        let j = MatrixSymbol::jet(self, z, order)?;
        let c = j.coeffs().iter().map(|m| m[(0, 0)].re).collect();
        Ok(SJet::from_coeffs(z.nv(), order, c))
    }
}

/// Wraps a closure producing scalar jets.
pub struct FnField<F> {
    d: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&PhasePoint, usize) -> SJet + Send + Sync,
{
    pub fn new(d: usize, f: F) -> Self {
        Self { d, f }
    }
}

impl<F> ScalarField for FnField<F>
where
    F: Fn(&PhasePoint, usize) -> SJet + Send + Sync,
{
    fn d(&self) -> usize {
        self.d
    }

    fn jet(&self, z: &PhasePoint, order: usize) -> Result<SJet> {
        Ok((self.f)(z, order))
    }
}

/// ∂_i∂_j of a jet of order ≥ 2.
pub(crate) fn second(s: &SJet, i: usize, j: usize) -> f64 {
    let mut e: Exps = [0; MAX_VARS];
    e[i] += 1;
    e[j] += 1;
    let c = s.coeffs()[table(s.nv()).index_of(&e).unwrap()];
    if i == j {
        2.0 * c
    } else {
        c
    }
}

/// Discrete trajectory z(t_n) of q̇ = ∇_pE, ṗ = −∇_qE.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    pub energy: Vec<f64>,
    /// ż at each node.
    pub velocity: Vec<Vec<f64>>,
    /// DΦ^{t_n} and its time derivative, when requested.
    pub tangent: Option<Vec<RMat>>,
    pub tangent_rate: Option<Vec<RMat>>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn step_size(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn end(&self) -> &PhasePoint {
        self.points.last().unwrap()
    }

    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }

    /// Cubic Hermite value at the midpoint of step n.
    pub fn midpoint(&self, n: usize) -> PhasePoint {
        let h = self.step_size();
        let (a, b) = (self.points[n].coords(), self.points[n + 1].coords());
        let (va, vb) = (&self.velocity[n], &self.velocity[n + 1]);
        let x: Vec<f64> = (0..a.len())
            .map(|i| 0.5 * (a[i] + b[i]) + h * (va[i] - vb[i]) / 8.0)
            .collect();
        PhasePoint::from_coords(&x)
    }

    /// Cubic Hermite tangent map at the midpoint of step n.
    pub fn midpoint_tangent(&self, n: usize) -> Option<RMat> {
        let (m, r) = (self.tangent.as_ref()?, self.tangent_rate.as_ref()?);
        let h = self.step_size();
        Some((&m[n] + &m[n + 1]) * 0.5 + (&r[n] - &r[n + 1]) * (h / 8.0))
    }
}

struct Rhs {
    v: Vec<f64>,
    e: f64,
    jh: Option<RMat>,
}

fn rhs(e: &dyn ScalarField, x: &[f64], tangent: bool) -> Result<Rhs> {
    let z = PhasePoint::from_coords(x);
    let d = e.d();
    let s = e.jet(&z, if tangent { 2 } else { 1 })?;
    let mut v = vec![0.0; 2 * d];
    for i in 0..d {
        v[i] = s.d1(d + i);
        v[d + i] = -s.d1(i);
    }
    let jh = tangent.then(|| {
        RMat::from_fn(2 * d, 2 * d, |i, j| {
            if i < d {
                second(&s, d + i, j)
            } else {
                -second(&s, i - d, j)
            }
        })
    });
    if v.iter().any(|x| !x.is_finite()) {
        return Err(AdptError::NonFinite(format!("flow velocity at {z}")));
    }
    Ok(Rhs { v, e: s.value(), jh })
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| x + a * y).collect()
}

fn integrate(e: &dyn ScalarField, z0: &PhasePoint, t: f64, dt: f64, tangent: bool) -> Result<Trajectory> {
    if z0.d() != e.d() {
        return Err(AdptError::Dimension("start point and energy disagree on d".into()));
    }
    if !(dt > 0.0) || !t.is_finite() {
        return Err(AdptError::Invalid(format!("flow needs dt > 0 and finite t, got dt={dt}, t={t}")));
    }
    let mut steps = ((t.abs() / dt).ceil() as usize).max(2);
    steps += steps % 2;
    let h = t / steps as f64;
    let n2 = 2 * e.d();
    let mut x = z0.coords();
    let mut m = RMat::identity(n2, n2);
    let mut out = Trajectory {
        times: Vec::with_capacity(steps + 1),
        points: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        velocity: Vec::with_capacity(steps + 1),
        tangent: tangent.then(Vec::new),
        tangent_rate: tangent.then(Vec::new),
    };
    let mut k1 = rhs(e, &x, tangent)?;
    for n in 0..=steps {
        out.times.push(n as f64 * h);
        out.points.push(PhasePoint::from_coords(&x));
        out.energy.push(k1.e);
        out.velocity.push(k1.v.clone());
        if let (Some(tm), Some(tr)) = (out.tangent.as_mut(), out.tangent_rate.as_mut()) {
            tr.push(k1.jh.as_ref().unwrap() * &m);
            tm.push(m.clone());
        }
        if n == steps {
            break;
        }
        let k2 = rhs(e, &axpy(&x, 0.5 * h, &k1.v), tangent)?;
        let k3 = rhs(e, &axpy(&x, 0.5 * h, &k2.v), tangent)?;
        let k4 = rhs(e, &axpy(&x, h, &k3.v), tangent)?;
        if tangent {
            let (a1, a2, a3, a4) = (
                k1.jh.as_ref().unwrap(),
                k2.jh.as_ref().unwrap(),
                k3.jh.as_ref().unwrap(),
                k4.jh.as_ref().unwrap(),
            );
            let m1 = a1 * &m;
            let m2 = a2 * (&m + &m1 * (0.5 * h));
            let m3 = a3 * (&m + &m2 * (0.5 * h));
            let m4 = a4 * (&m + &m3 * h);
            m += (m1 + m2 * 2.0 + m3 * 2.0 + m4) * (h / 6.0);
        }
        for i in 0..n2 {
            x[i] += h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
        }
        k1 = rhs(e, &x, tangent)?;
    }
    Ok(out)
}

/// Classical flow Φᵗ(z0) on an even number of RK4 steps of size ≈ dt.
pub fn classical_flow(e: &dyn ScalarField, z0: &PhasePoint, t: f64, dt: f64) -> Result<Trajectory> {
    integrate(e, z0, t, dt, false)
}

/// Classical flow together with the tangent map DΦᵗ(z0).
pub fn classical_flow_tangent(e: &dyn ScalarField, z0: &PhasePoint, t: f64, dt: f64) -> Result<Trajectory> {
    integrate(e, z0, t, dt, true)
}
