//! Phase-space points, matrix-valued symbols with derivative jets, and the
//! truncated Moyal algebra.

pub mod fd;
pub mod formal;
pub mod jet;
pub mod matrix;
pub mod moyal;
pub mod multiindex;
pub mod point;
pub mod sjet;

pub use fd::{fd_jet, FdConfig};
pub use formal::FormalSymbol;
pub use jet::Jet;
pub use matrix::{JetSource, MatrixSymbol, SymbolSource};
pub use moyal::{moyal_commutator, moyal_mul, moyal_term, poisson_bracket};
pub use point::PhasePoint;
pub use sjet::SJet;
