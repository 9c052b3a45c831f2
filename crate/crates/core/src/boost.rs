use crate::error::{Error, Result};

/// Largest admissible speed ratio. Keeps the Lorentz factor finite.
pub const MAX_BETA: f64 = 1.0 - 1e-6;

/// Relative velocity of the bath with respect to the thermometer frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    beta: f64,
    gamma: f64,
}

impl Boost {
    pub fn new(beta: f64) -> Result<Self> {
        if !(0.0..=MAX_BETA).contains(&beta) {
            return Err(Error::Domain {
                name: "beta",
                value: beta,
                range: "[0, 1 - 1e-6]",
            });
        }
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        Ok(Boost { beta, gamma })
    }

    pub fn rest() -> Self {
        Boost {
            beta: 0.0,
            gamma: 1.0,
        }
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `sqrt(1 - beta^2)`, the reciprocal of gamma.
    #[inline]
    pub fn contraction(&self) -> f64 {
        (1.0 - self.beta * self.beta).sqrt()
    }
}

pub fn make_boost(beta: f64) -> Result<Boost> {
    Boost::new(beta)
}
