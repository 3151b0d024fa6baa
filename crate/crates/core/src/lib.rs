//! Time-frequency Hong-Ou-Mandel interferometry.
//!
//! The numerical core is generic over the real scalar ([`num::Real`], `f32`
//! or `f64`); the aliases below fix it to `f64`.

// `!(x > 0)` is used on purpose throughout so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// Library version, recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod biphoton;
pub mod chronowigner;
pub mod classical;
pub mod error;
pub mod gkpcomb;
pub mod hom;
pub mod num;
pub mod pumpeng;
pub mod sfgrid;

pub use biphoton::PMConvention;
pub use hom::{Arm, PhaseSpaceMap};
pub use error::{Error, Result};
pub use gkpcomb::LogicalLabel;
pub use num::Real;
pub use sfgrid::{Boundary, Kernel};

pub type FrequencyGrid = sfgrid::FrequencyGrid<f64>;
pub type TimeGrid = sfgrid::TimeGrid<f64>;
pub type SpectralAmplitude = biphoton::SpectralAmplitude<f64>;
pub type JointSpectralAmplitude = biphoton::JointSpectralAmplitude<f64>;
pub type PhaseSpacePoint = biphoton::PhaseSpacePoint<f64>;
pub type DeviceConfig = pumpeng::DeviceConfig<f64>;
pub type PumpBeam = pumpeng::PumpBeam<f64>;
pub type CavityConfig = pumpeng::CavityConfig<f64>;
pub type CoincidenceMap = hom::CoincidenceMap<f64>;
pub type WignerMap = chronowigner::WignerMap<f64>;
pub type CoherentInput = classical::CoherentInput<f64>;
pub type PhaseDistribution = classical::PhaseDistribution<f64>;
pub type CombState = gkpcomb::CombState<f64>;
pub type ShiftGate = gkpcomb::ShiftGate<f64>;
