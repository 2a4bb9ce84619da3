//! Classical flow, spin transport, Egorov-evolved observables and BMT.

pub mod bmt;
pub mod egorov;
pub mod export;
pub mod flow;
pub mod spin;

#[cfg(test)]
mod tests;

pub use bmt::{bmt_along, bmt_evolve, SpinVector};
pub use egorov::{egorov_correct, egorov_evolve, Egorov};
pub use export::write_trajectory_csv;
pub use flow::{classical_flow, classical_flow_tangent, FnField, RMat, ScalarField, Trajectory};
pub use spin::{spin_transport, spin_transport_gradient, SpinFrame};
