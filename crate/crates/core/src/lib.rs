//! Space-adiabatic perturbation theory for matrix-valued phase-space symbols.
//!
//! The crate builds super-adiabatic projectors, intertwining unitaries and
//! effective Hamiltonians order by order in ε, propagates the resulting
//! semiclassical dynamics, and checks the predicted ε-scaling against exact
//! propagation on a periodic grid.

// Index loops mirror the component formulas; `!(x > 0.0)` rejects NaN on purpose.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod experiments;
pub mod linalg;
pub mod models;
pub mod quantum;
pub mod scaling;
pub mod semiclassics;
pub mod spectral;
pub mod symbol;

pub use error::{AdptError, Result};
pub use linalg::CMat;
pub use quantum::{DenseOp, Grid1D, WaveFn};
pub use scaling::{fit_slope, SlopeFit};
pub use symbol::{FormalSymbol, Jet, MatrixSymbol, PhasePoint, SJet};
