//! Shipped model symbols with closed-form oracles.

pub mod born_oppenheimer;
pub mod dirac;
pub mod howland;
pub mod two_level;

#[cfg(test)]
mod tests;

pub use born_oppenheimer::{BornOppenheimer, Kinetic};
pub use howland::{howland_effective, time_adiabatic_h, time_adiabatic_h2_half, EffectiveBlocks, KatoFrame, SpectralPoint, TimeDepHamiltonian};
pub use dirac::{Dirac, Dirac1d, Dirac1dParams, DiracFields, DiracParams};
pub use two_level::{TwoLevel, TwoLevelParams};
