//! Matrix-valued phase-space symbols queried through jets.

use super::fd::{fd_jet, FdConfig, FD_MAX_ORDER};
use super::jet::Jet;
use super::multiindex::MAX_ORDER;
use super::point::PhasePoint;
use crate::error::{AdptError, Result};
use crate::linalg::{hermitian_defect, is_finite, CMat};
use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

/// Something that can evaluate a symbol and, optionally, its exact jets.
pub trait SymbolSource: Send + Sync {
    fn eval(&self, z: &PhasePoint) -> Result<CMat>;

    /// Exact jet of the given order, or `None` to fall back on finite differences.
    fn jet(&self, _z: &PhasePoint, _order: usize) -> Option<Result<Jet>> {
        None
    }
}

/// Sources that only know how to produce jets; the value is the order-0 jet.
pub trait JetSource: Send + Sync {
    fn jet(&self, z: &PhasePoint, order: usize) -> Result<Jet>;
}

struct FnSource<F>(F);

impl<F> SymbolSource for FnSource<F>
where
    F: Fn(&PhasePoint) -> CMat + Send + Sync,
{
    fn eval(&self, z: &PhasePoint) -> Result<CMat> {
        Ok((self.0)(z))
    }
}

struct JetOnly<S>(S);

impl<S: JetSource> SymbolSource for JetOnly<S> {
    fn eval(&self, z: &PhasePoint) -> Result<CMat> {
        Ok(self.0.jet(z, 0)?.value().clone())
    }

    fn jet(&self, z: &PhasePoint, order: usize) -> Option<Result<Jet>> {
        Some(self.0.jet(z, order))
    }
}

struct JetFn<F>(F);

impl<F> JetSource for JetFn<F>
where
    F: Fn(&PhasePoint, usize) -> Result<Jet> + Send + Sync,
{
    fn jet(&self, z: &PhasePoint, order: usize) -> Result<Jet> {
        (self.0)(z, order)
    }
}

enum Kind {
    Zero,
    Constant(CMat),
    General(Box<dyn SymbolSource>),
}

const CACHE_SIZE: usize = 24;

struct Inner {
    name: String,
    d: usize,
    rows: usize,
    cols: usize,
    hermitian: bool,
    max_jet_order: usize,
    fd: FdConfig,
    kind: Kind,
    cache: Mutex<VecDeque<(Vec<u64>, Jet)>>,
}

/// A smooth map from phase space to complex matrices.
///
/// Cheap to clone; clones share the jet cache. The cache is keyed by the exact
/// bits of the point and only ever returns truncations of stored jets, so
/// results do not depend on it.
#[derive(Clone)]
pub struct MatrixSymbol {
    inner: Arc<Inner>,
}

impl std::fmt::Debug for MatrixSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MatrixSymbol({}, d={}, {}x{})",
            self.inner.name, self.inner.d, self.inner.rows, self.inner.cols
        )
    }
}

impl MatrixSymbol {
    fn build(name: &str, d: usize, rows: usize, cols: usize, max: usize, kind: Kind) -> Self {
        Self {
            inner: Arc::new(Inner {
                name: name.to_string(),
                d,
                rows,
                cols,
                hermitian: false,
                max_jet_order: max,
                fd: FdConfig::default(),
                kind,
                cache: Mutex::new(VecDeque::new()),
            }),
        }
    }

    /// Symbol given by a plain evaluator; jets come from finite differences.
    pub fn from_fn<F>(name: &str, d: usize, n: usize, f: F) -> Self
    where
        F: Fn(&PhasePoint) -> CMat + Send + Sync + 'static,
    {
        Self::build(name, d, n, n, FD_MAX_ORDER, Kind::General(Box::new(FnSource(f))))
    }

    /// Symbol given by an exact jet evaluator.
    pub fn analytic<F>(name: &str, d: usize, rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(&PhasePoint, usize) -> Result<Jet> + Send + Sync + 'static,
    {
        Self::build(
            name,
            d,
            rows,
            cols,
            MAX_ORDER,
            Kind::General(Box::new(JetOnly(JetFn(f)))),
        )
    }

    /// Symbol backed by a custom source.
    pub fn from_source(
        name: &str,
        d: usize,
        rows: usize,
        cols: usize,
        max_jet_order: usize,
        source: Box<dyn SymbolSource>,
    ) -> Self {
        Self::build(name, d, rows, cols, max_jet_order, Kind::General(source))
    }

    /// Symbol whose values and jets come from a jet-only source.
    pub fn derived<S: JetSource + 'static>(
        name: &str,
        d: usize,
        rows: usize,
        cols: usize,
        max_jet_order: usize,
        source: S,
    ) -> Self {
        Self::build(
            name,
            d,
            rows,
            cols,
            max_jet_order,
            Kind::General(Box::new(JetOnly(source))),
        )
    }

    pub fn constant(d: usize, m: CMat) -> Self {
        let (rows, cols) = (m.nrows(), m.ncols());
        let herm = rows == cols && hermitian_defect(&m) < 1e-14;
        Self::build("const", d, rows, cols, usize::MAX, Kind::Constant(m)).with_hermitian(herm)
    }

    pub fn zero(d: usize, n: usize) -> Self {
        Self::build("zero", d, n, n, usize::MAX, Kind::Zero).with_hermitian(true)
    }

    pub fn zero_rect(d: usize, rows: usize, cols: usize) -> Self {
        Self::build("zero", d, rows, cols, usize::MAX, Kind::Zero)
    }

    fn rebuild(self, f: impl FnOnce(&mut Inner)) -> Self {
        match Arc::try_unwrap(self.inner) {
            Ok(mut inner) => {
                f(&mut inner);
                Self {
                    inner: Arc::new(inner),
                }
            }
            Err(_) => panic!("symbol builder methods must be applied before cloning"),
        }
    }

    pub fn with_hermitian(self, h: bool) -> Self {
        self.rebuild(|i| i.hermitian = h)
    }

    pub fn with_fd(self, fd: FdConfig) -> Self {
        self.rebuild(|i| i.fd = fd)
    }

    pub fn with_max_jet_order(self, k: usize) -> Self {
        self.rebuild(|i| i.max_jet_order = k)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn d(&self) -> usize {
        self.inner.d
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.inner.rows, self.inner.cols)
    }

    pub fn is_hermitian(&self) -> bool {
        self.inner.hermitian
    }

    pub fn max_jet_order(&self) -> usize {
        self.inner.max_jet_order
    }

    pub fn fd_config(&self) -> FdConfig {
        self.inner.fd
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.inner.kind, Kind::Zero)
    }

    pub fn constant_value(&self) -> Option<CMat> {
        match &self.inner.kind {
            Kind::Zero => Some(CMat::zeros(self.inner.rows, self.inner.cols)),
            Kind::Constant(m) => Some(m.clone()),
            Kind::General(_) => None,
        }
    }

    /// True when both symbols share the same underlying object.
    pub fn same(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &o.inner)
    }

    fn check_point(&self, z: &PhasePoint) -> Result<()> {
        if z.d() != self.inner.d {
            return Err(AdptError::Dimension(format!(
                "symbol {} has d={}, point has d={}",
                self.inner.name,
                self.inner.d,
                z.d()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, z: &PhasePoint) -> Result<CMat> {
        self.check_point(z)?;
        let v = match &self.inner.kind {
            Kind::Zero => return Ok(CMat::zeros(self.inner.rows, self.inner.cols)),
            Kind::Constant(m) => return Ok(m.clone()),
            Kind::General(src) => src.eval(z)?,
        };
        if !is_finite(&v) {
            return Err(AdptError::NonFinite(format!("{} at {z}", self.inner.name)));
        }
        Ok(v)
    }

    /// Jet of order `order` at `z`: exact when the source provides one, finite
    /// differences otherwise.
    pub fn jet(&self, z: &PhasePoint, order: usize) -> Result<Jet> {
        self.check_point(z)?;
        if order > self.inner.max_jet_order {
            return Err(AdptError::JetOrder {
                requested: order,
                max: self.inner.max_jet_order,
            });
        }
        let src = match &self.inner.kind {
            Kind::Zero => {
                return Ok(Jet::zeros(z, order, self.inner.rows, self.inner.cols));
            }
            Kind::Constant(m) => return Ok(Jet::constant(z, order, m)),
            Kind::General(src) => src,
        };
        let key = z.key();
        {
            let cache = self.inner.cache.lock().unwrap();
            if let Some((_, j)) = cache.iter().find(|(k, j)| *k == key && j.order() >= order) {
                return Ok(j.truncate(order));
            }
        }
        let jet = match src.jet(z, order) {
            Some(j) => j?,
            None => fd_jet(|x| self.eval(x), z, order, &self.inner.fd)?,
        };
        if !jet.is_finite() {
            return Err(AdptError::NonFinite(format!("jet of {} at {z}", self.inner.name)));
        }
        let mut cache = self.inner.cache.lock().unwrap();
        cache.retain(|(k, _)| *k != key);
        if cache.len() >= CACHE_SIZE {
            cache.pop_front();
        }
        cache.push_back((key, jet.clone()));
        Ok(jet)
    }

    /// Drops all cached jets.
    pub fn clear_cache(&self) {
        self.inner.cache.lock().unwrap().clear();
    }

    /// ‖A(z) − A(z)*‖ at a point; used to spot-check the hermitian flag.
    pub fn hermitian_defect_at(&self, z: &PhasePoint) -> Result<f64> {
        Ok(hermitian_defect(&self.eval(z)?))
    }

    /// Pointwise adjoint A*.
    pub fn adjoint(&self) -> Self {
        match &self.inner.kind {
            Kind::Zero => Self::zero_rect(self.inner.d, self.inner.cols, self.inner.rows),
            Kind::Constant(m) => Self::constant(self.inner.d, m.adjoint()),
            Kind::General(_) => {
                let a = self.clone();
                let herm = self.inner.hermitian;
                Self::derived(
                    &format!("{}*", self.inner.name),
                    self.inner.d,
                    self.inner.cols,
                    self.inner.rows,
                    self.inner.max_jet_order,
                    JetFn(move |z: &PhasePoint, k| Ok(a.jet(z, k)?.adjoint())),
                )
                .with_hermitian(herm)
            }
        }
    }

    /// Pointwise sum.
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = (self.clone(), o.clone());
        let max = self.inner.max_jet_order.min(o.inner.max_jet_order);
        Self::derived(
            &format!("({}+{})", self.inner.name, o.inner.name),
            self.inner.d,
            self.inner.rows,
            self.inner.cols,
            max,
            JetFn(move |z: &PhasePoint, k| Ok(a.jet(z, k)?.add(&b.jet(z, k)?))),
        )
        .with_hermitian(self.is_hermitian() && o.is_hermitian())
    }

    /// Pointwise difference.
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    /// Pointwise real multiple.
    pub fn scale(&self, s: f64) -> Self {
        match &self.inner.kind {
            Kind::Zero => self.clone(),
            Kind::Constant(m) => Self::constant(self.inner.d, m * crate::linalg::r(s)),
            Kind::General(_) => {
                let a = self.clone();
                Self::derived(
                    &format!("{s}*{}", self.inner.name),
                    self.inner.d,
                    self.inner.rows,
                    self.inner.cols,
                    self.inner.max_jet_order,
                    JetFn(move |z: &PhasePoint, k| Ok(a.jet(z, k)?.scale_re(s))),
                )
                .with_hermitian(self.inner.hermitian)
            }
        }
    }

    /// Pointwise (matrix) product.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero_rect(self.inner.d, self.inner.rows, o.inner.cols);
        }
        let (a, b) = (self.clone(), o.clone());
        let max = self.inner.max_jet_order.min(o.inner.max_jet_order);
        Self::derived(
            &format!("{}.{}", self.inner.name, o.inner.name),
            self.inner.d,
            self.inner.rows,
            o.inner.cols,
            max,
            JetFn(move |z: &PhasePoint, k| Ok(a.jet(z, k)?.mul(&b.jet(z, k)?))),
        )
    }

    /// Symbol defined by a closure over jets of order k.
    pub fn from_jet_fn<F>(name: &str, d: usize, rows: usize, cols: usize, max: usize, f: F) -> Self
    where
        F: Fn(&PhasePoint, usize) -> Result<Jet> + Send + Sync + 'static,
    {
        Self::derived(name, d, rows, cols, max, JetFn(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, pauli, r};

    #[test]
    fn constant_symbol_has_vanishing_derivatives() {
        let m = pauli()[0].clone() + pauli()[2].clone();
        let a = MatrixSymbol::constant(1, m.clone());
        let j = a.jet(&PhasePoint::new1(0.3, 0.1), 2).unwrap();
        assert!(max_abs(&(j.value() - &m)) == 0.0);
        assert!(j.coeffs()[1..].iter().all(|c| max_abs(c) == 0.0));
    }

    #[test]
    fn cache_returns_consistent_truncations() {
        let s3 = pauli()[2].clone();
        let a = MatrixSymbol::from_fn("p2", 1, 2, move |z| &s3 * r(z.p[0] * z.p[0] + z.q[0].sin()));
        let z = PhasePoint::new1(0.2, 0.4);
        let j2 = a.jet(&z, 2).unwrap();
        let j1 = a.jet(&z, 1).unwrap();
        a.clear_cache();
        let fresh = a.jet(&z, 1).unwrap();
        for i in 0..j1.coeffs().len() {
            assert_eq!(j1.coeff(i), fresh.coeff(i));
            assert_eq!(j1.coeff(i), j2.coeff(i));
        }
    }

    #[test]
    fn jet_order_is_capped() {
        let a = MatrixSymbol::from_fn("x", 1, 1, |z| CMat::from_element(1, 1, r(z.q[0])));
        assert!(matches!(
            a.jet(&PhasePoint::new1(0.0, 0.0), 5),
            Err(AdptError::JetOrder { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = MatrixSymbol::zero(2, 2);
        assert!(matches!(
            a.eval(&PhasePoint::new1(0.0, 0.0)),
            Err(AdptError::Dimension(_))
        ));
    }
}
