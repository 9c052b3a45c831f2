use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{name} = {value} is outside the admissible range {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: best estimate {estimate} with error bound {error}")]
    Accuracy { estimate: f64, error: f64 },

    /// The absorption profile vanishes everywhere, so no flux balance exists.
    #[error("absorption profile is identically zero; no fixed point exists")]
    DegenerateProfile,

    #[error("root finder failed: {0}")]
    Solver(String),

    /// The ODE step size collapsed. Carries the last accepted state.
    #[error("step size underflow at t = {t}, E = {energy}")]
    Stiffness { t: f64, energy: f64 },

    /// The narrow-band balance underflowed to zero.
    #[error("band balance underflows at f = {frequency}")]
    OverflowGuard { frequency: f64 },

    #[error("entropy probe needs a nonzero boost")]
    DegenerateProbe,

    #[error("invalid absorption profile: {0}")]
    InvalidProfile(String),
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            range: "(0, inf)",
        })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            range: "[0, inf)",
        })
    }
}
