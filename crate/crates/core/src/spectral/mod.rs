//! Band selection, spectral projectors, reduced resolvents and smooth frames.

pub mod band;
pub mod jets;
pub mod model;
pub mod nagy;

pub use band::{
    band_energy, eig_frame, eig_frame_unchecked, gap_check, reduced_resolvent, spectral_projector,
    BandSelection, BandSpec, EigFrame, GapReport,
};
pub use jets::{smooth_frame, spectral_jets, spectral_jets_fd, SpectralJets};
pub use model::{BandModel, SpectralMethod};
pub use nagy::nagy_transport;

#[cfg(test)]
mod tests;
