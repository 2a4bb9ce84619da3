//! Exact reference dynamics on a periodic 1D grid: discrete Weyl
//! quantization, dense propagation, true projectors and unitaries, and the
//! error metrics that test the ε-scaling predictions.

pub mod dynamics;
pub mod grid;
pub mod io;
pub mod op;
pub mod projection;
pub mod weyl;
pub mod wigner;

pub use dynamics::{
    effective_dynamics_error, egorov_error, leakage, propagate, restricted_norm, Propagator, TimeMode,
};
pub use grid::Grid1D;
pub use op::{momentum_window, DenseOp, WaveFn};
pub use projection::{project_spectral, unitarize, SpectralProjection, Unitarized};
pub use weyl::{weyl_from_samples, weyl_quantize, weyl_quantize_checked, weyl_quantize_report, Quantized};
pub use wigner::{wigner, Wigner};

#[cfg(test)]
mod tests;
