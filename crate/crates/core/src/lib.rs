//! Simulation of non-mode-selective single-photon subtraction from
//! frequency-multimode squeezed vacuum.
//!
//! The numerical core is generic over the float type through [`Real`];
//! `f64` aliases are provided for the common case. [`experiments`] builds
//! the laboratory-scale sweeps and optimizers on top of it in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod filtered_basis;
pub mod filters;
pub mod overlaps;
pub mod quadrature;
pub mod scalar;
pub mod supermodes;
pub mod units;
pub mod wigner;

pub use error::{Error, Result};
pub use filtered_basis::FilteredBasis;
pub use filters::{FilterKind, FilterProfile};
pub use overlaps::{GammaMatrix, LoProjection};
pub use scalar::Real;
pub use supermodes::{DoubleGaussianJsa, SqueezingSpectrum, SupermodeBasis};
pub use units::{BandwidthSpec, SpectralGrid};
pub use wigner::{HeraldedStateParams, PhaseSpaceSpec, PolyGaussian, TargetState, WignerGrid};

pub type SpectralGrid64 = SpectralGrid<f64>;
pub type BandwidthSpec64 = BandwidthSpec<f64>;
pub type SupermodeBasis64 = SupermodeBasis<f64>;
pub type SqueezingSpectrum64 = SqueezingSpectrum<f64>;
pub type DoubleGaussianJsa64 = DoubleGaussianJsa<f64>;
pub type FilterProfile64 = FilterProfile<f64>;
pub type GammaMatrix64 = GammaMatrix<f64>;
pub type LoProjection64 = LoProjection<f64>;
pub type FilteredBasis64 = FilteredBasis<f64>;
pub type HeraldedStateParams64 = HeraldedStateParams<f64>;
pub type TargetState64 = TargetState<f64>;
pub type PhaseSpaceSpec64 = PhaseSpaceSpec<f64>;
pub type WignerGrid64 = WignerGrid<f64>;
