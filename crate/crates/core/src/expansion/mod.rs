//! Order-by-order construction of π⁽ᴺ⁾, u⁽ᴺ⁾ and h = u#H#u*, with the
//! closed-form low-order blocks kept as independent checks.

pub mod context;
pub mod defects;
pub mod effective;
pub mod projector;
pub mod unitary;

pub use context::ExpansionContext;
pub use defects::{block_diagonality, projector_defects, unitary_defects, ProjectorDefects, UnitaryDefects};
pub use effective::{effective_symbol, h1_block, h1_block_jet, h2_block, h2_block_with};
pub use projector::{moyal_projector, pi1_closed, pi1_diag_printed, pi1_od_jet};
pub use unitary::{moyal_unitary, u1_closed, u1_jet, U1Form};

use crate::error::Result;
use crate::symbol::moyal::moyal_term_jets;
use crate::symbol::Jet;

/// (A#B)_m for ε-independent symbols given by their jets; result of order `order`.
pub fn moyal_jet(a: &Jet, b: &Jet, m: usize, order: usize) -> Result<Jet> {
    moyal_term_jets(
        &[Some(a.clone())],
        &[Some(b.clone())],
        m,
        order,
        a.center(),
        (a.rows(), b.cols()),
    )
}

#[cfg(test)]
mod tests;
