//! Truncated Moyal product (A # B)_k and the Poisson bracket.

use super::formal::FormalSymbol;
use super::jet::Jet;
use super::matrix::{JetSource, MatrixSymbol};
use super::multiindex::moyal_splits;
use super::point::PhasePoint;
use crate::error::{AdptError, Result};
use crate::linalg::{c, CMat};

/// Jets of the terms of a series; `None` marks an identically zero term.
pub type SeriesJets = Vec<Option<Jet>>;

/// Jets of A_0..A_upto with A_j of order `top + upto − j`, as needed to form
/// Moyal terms up to `upto` with result order `top`.
pub fn series_jets(s: &FormalSymbol, z: &PhasePoint, top: usize, upto: usize) -> Result<SeriesJets> {
    (0..=upto)
        .map(|j| {
            let t = s.term(j);
            if t.is_zero() {
                Ok(None)
            } else {
                t.jet(z, top + upto - j).map(Some)
            }
        })
        .collect()
}

/// (A # B)_k from term jets, returned with order `order`.
///
/// (A#B)_k = Σ_{|α|+|β|+j+l=k} (2i)^{−(|α|+|β|)} (−1)^{|α|}/(α!β!) (∂_q^α ∂_p^β A_j)(∂_p^α ∂_q^β B_l),
/// with multi-index factorials. Requires A_j of order ≥ order + k − j and
/// likewise for B_l.
pub fn moyal_term_jets(
    a: &[Option<Jet>],
    b: &[Option<Jet>],
    k: usize,
    order: usize,
    z: &PhasePoint,
    shape: (usize, usize),
) -> Result<Jet> {
    let d = z.d();
    let mut acc = Jet::zeros(z, order, shape.0, shape.1);
    for j in 0..=k.min(a.len().saturating_sub(1)) {
        let Some(aj) = &a[j] else { continue };
        for l in 0..=(k - j).min(b.len().saturating_sub(1)) {
            let Some(bl) = &b[l] else { continue };
            let m = k - j - l;
            if aj.order() < order + m || bl.order() < order + m {
                return Err(AdptError::JetOrder {
                    requested: order + m,
                    max: aj.order().min(bl.order()),
                });
            }
            let pref = c(0.0, 2.0).powi(-(m as i32));
            for (ea, eb, w) in moyal_splits(d, m) {
                let da = aj.deriv_multi(&ea, order);
                let db = bl.deriv_multi(&eb, order);
                acc.add_assign(&da.mul(&db).scale(pref * w));
            }
        }
    }
    Ok(acc)
}

/// All terms (A # B)_0..=upto, with term k of order `top + upto − k`.
pub fn moyal_product_jets(
    a: &[Option<Jet>],
    b: &[Option<Jet>],
    upto: usize,
    top: usize,
    z: &PhasePoint,
    shape: (usize, usize),
) -> Result<SeriesJets> {
    (0..=upto)
        .map(|k| moyal_term_jets(a, b, k, top + upto - k, z, shape).map(Some))
        .collect()
}

struct MoyalTermSource {
    a: FormalSymbol,
    b: FormalSymbol,
    k: usize,
}

impl JetSource for MoyalTermSource {
    fn jet(&self, z: &PhasePoint, order: usize) -> Result<Jet> {
        let aj = series_jets(&self.a, z, order, self.k)?;
        let bj = series_jets(&self.b, z, order, self.k)?;
        moyal_term_jets(&aj, &bj, self.k, order, z, (self.a.n(), self.b.n()))
    }
}

fn term_depth(s: &FormalSymbol, k: usize) -> usize {
    (0..=k)
        .map(|j| s.term(j).max_jet_order().saturating_sub(k - j))
        .min()
        .unwrap()
}

/// The k-th Moyal term as a symbol in its own right.
pub fn moyal_term_symbol(a: &FormalSymbol, b: &FormalSymbol, k: usize) -> MatrixSymbol {
    let all_zero = (0..=k).all(|j| a.term(j).is_zero())
        || (0..=k).all(|l| b.term(l).is_zero());
    if all_zero {
        return MatrixSymbol::zero(a.d(), a.n());
    }
    let max = term_depth(a, k).min(term_depth(b, k));
    MatrixSymbol::derived(
        &format!("(A#B)_{k}"),
        a.d(),
        a.n(),
        b.n(),
        max,
        MoyalTermSource {
            a: a.clone(),
            b: b.clone(),
            k,
        },
    )
}

/// (A # B)_k at a point.
pub fn moyal_term(a: &FormalSymbol, b: &FormalSymbol, k: usize, z: &PhasePoint) -> Result<CMat> {
    check_dims(a, b)?;
    let aj = series_jets(a, z, 0, k)?;
    let bj = series_jets(b, z, 0, k)?;
    Ok(moyal_term_jets(&aj, &bj, k, 0, z, (a.n(), b.n()))?.value().clone())
}

fn check_dims(a: &FormalSymbol, b: &FormalSymbol) -> Result<()> {
    if a.d() != b.d() || a.n() != b.n() {
        return Err(AdptError::Dimension(format!(
            "Moyal product of (d={}, n={}) and (d={}, n={})",
            a.d(),
            a.n(),
            b.d(),
            b.n()
        )));
    }
    Ok(())
}

/// Σ_{k≤N} ε^k (A # B)_k as a formal symbol.
pub fn moyal_mul(a: &FormalSymbol, b: &FormalSymbol, n: usize) -> Result<FormalSymbol> {
    check_dims(a, b)?;
    FormalSymbol::new((0..=n).map(|k| moyal_term_symbol(a, b, k)).collect())
}

/// [A, B]_# = A # B − B # A through order N.
pub fn moyal_commutator(a: &FormalSymbol, b: &FormalSymbol, n: usize) -> Result<FormalSymbol> {
    Ok(moyal_mul(a, b, n)?.sub(&moyal_mul(b, a, n)?))
}

/// {A, B}(z) = Σ_j ∂_{p_j}A ∂_{q_j}B − ∂_{q_j}A ∂_{p_j}B; not antisymmetrized.
pub fn poisson_bracket(a: &MatrixSymbol, b: &MatrixSymbol, z: &PhasePoint) -> Result<CMat> {
    if a.d() != b.d() || a.shape().1 != b.shape().0 {
        return Err(AdptError::Dimension("Poisson bracket operands disagree".into()));
    }
    Ok(a.jet(z, 1)?.poisson(&b.jet(z, 1)?).value().clone())
}
