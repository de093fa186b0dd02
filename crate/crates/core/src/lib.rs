//! Two differently charged ions in a Penning trap and the Rydberg electron
//! that can be shared between them.
//!
//! * [`trap`]: single-ion frequencies, stability thresholds, two-ion
//!   equilibrium, axial normal modes and the charge-swap detuning.
//! * [`electronic`]: transverse channel, the transverse-averaged 1D
//!   potential, critical quantum numbers and the ionisation saddle.
//! * [`spectral`]: gerade/ungerade eigenstates near the barrier top,
//!   tunnel couplings and localised states.
//! * [`dynamics`]: laser-driven four-level charge transfer.
//! * [`cli`]: configuration files, reports and CSV/JSON emitters used by
//!   the `penning-rydberg` binary.

pub mod cli;
pub mod dynamics;
pub mod electronic;
pub mod quantities;
pub mod spectral;
pub mod special;
pub mod trap;

pub use electronic::{Potential1D, TransverseChannel, Wells};
pub use quantities::{constants, PhysicalConstants, Quantity, Unit};
pub use trap::{TrapConfig, TwoIonGeometry};
