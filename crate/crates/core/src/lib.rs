//! Temperature registered by a thermometer, held at rest by a clamp, that
//! exchanges black-body radiation with a heat bath moving at constant
//! velocity.
//!
//! All quantities are in reduced units `hbar = k = c = 1`. The radiative
//! coupling constant and the area of the hole joining the two enclosures are
//! set to one, so frequencies and temperatures share a unit and fluxes are
//! energies per unit time per unit coupling area.
//!
//! The crate is organised as:
//!
//! - [`boost`], [`profile`], [`eos`]: kinematics, absorptivity of the
//!   thermometer, and its equation of state.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration.
//! - [`flux`]: emitted and absorbed radiative fluxes.
//! - [`equilibrium`]: the stationary temperature, narrow-band limits, and
//!   the historical transformation laws for comparison.
//! - [`dynamics`]: relaxation of the thermometer and its Lyapunov function.
//! - [`entropy`]: entropy bookkeeping of the composite system.
//! - [`montecarlo`]: sampling estimators of both fluxes.

pub mod boost;
pub mod dynamics;
pub mod entropy;
pub mod eos;
pub mod equilibrium;
pub mod error;
pub mod flux;
pub mod montecarlo;
pub mod profile;
pub mod quadrature;

pub use boost::{make_boost, Boost};
pub use eos::{eos_energy_of_temperature, eos_entropy, eos_temperature, EquationOfState};
pub use error::{Error, Result};
pub use flux::FluxResult;
pub use profile::{absorption_value, AbsorptionProfile};
pub use quadrature::QuadratureResult;
