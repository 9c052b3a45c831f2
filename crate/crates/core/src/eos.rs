//! Equations of state for the thermometer body.
//!
//! Each variant fixes a strictly concave entropy `S(E, V)` and hence the
//! temperature through `1/T = dS/dE`. The volume is carried for completeness
//! but never enters: no mechanical work is exchanged.

use crate::error::{check_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquationOfState {
    /// `S = s_ref + C_V ln(E / e_ref)`, `T = E / C_V`.
    ConstantCv {
        heat_capacity: f64,
        e_ref: f64,
        s_ref: f64,
    },
    /// `S = a E^alpha`, `T = E^(1 - alpha) / (a alpha)`.
    PowerLaw { a: f64, alpha: f64 },
}

impl EquationOfState {
    pub fn constant_cv(heat_capacity: f64, e_ref: f64, s_ref: f64) -> Result<Self> {
        check_positive("C_V", heat_capacity)?;
        check_positive("E_ref", e_ref)?;
        if !s_ref.is_finite() {
            return Err(Error::Domain {
                name: "S_ref",
                value: s_ref,
                range: "finite",
            });
        }
        Ok(EquationOfState::ConstantCv {
            heat_capacity,
            e_ref,
            s_ref,
        })
    }

    pub fn power_law(a: f64, alpha: f64) -> Result<Self> {
        check_positive("a", a)?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha,
                range: "(0, 1)",
            });
        }
        Ok(EquationOfState::PowerLaw { a, alpha })
    }

    pub fn temperature(&self, energy: f64) -> Result<f64> {
        check_positive("energy", energy)?;
        Ok(match *self {
            EquationOfState::ConstantCv { heat_capacity, .. } => energy / heat_capacity,
            EquationOfState::PowerLaw { a, alpha } => energy.powf(1.0 - alpha) / (a * alpha),
        })
    }

    pub fn entropy(&self, energy: f64, _volume: f64) -> Result<f64> {
        check_positive("energy", energy)?;
        Ok(match *self {
            EquationOfState::ConstantCv {
                heat_capacity,
                e_ref,
                s_ref,
            } => s_ref + heat_capacity * (energy / e_ref).ln(),
            EquationOfState::PowerLaw { a, alpha } => a * energy.powf(alpha),
        })
    }

    pub fn energy_of_temperature(&self, temperature: f64) -> Result<f64> {
        check_positive("temperature", temperature)?;
        Ok(match *self {
            EquationOfState::ConstantCv { heat_capacity, .. } => heat_capacity * temperature,
            EquationOfState::PowerLaw { a, alpha } => {
                (a * alpha * temperature).powf(1.0 / (1.0 - alpha))
            }
        })
    }
}

pub fn eos_temperature(eos: &EquationOfState, energy: f64) -> Result<f64> {
    eos.temperature(energy)
}

pub fn eos_entropy(eos: &EquationOfState, energy: f64, volume: f64) -> Result<f64> {
    eos.entropy(energy, volume)
}

pub fn eos_energy_of_temperature(eos: &EquationOfState, temperature: f64) -> Result<f64> {
    eos.energy_of_temperature(temperature)
}
