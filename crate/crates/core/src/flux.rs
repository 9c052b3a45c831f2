//! Spectral energy fluxes through the hole between thermometer and bath.
//!
//! Reduced units throughout: `hbar = k = c = 1`, and fluxes are per unit of
//! the coupling constant times the hole area. The angular factors of an
//! emitted pencil integrate to `pi`; for the absorbed pencil the azimuthal
//! integral (= 2) is folded into the prefactor and the polar integral is
//! done numerically.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::boost::Boost;
use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::profile::AbsorptionProfile;
use crate::quadrature::{integrate_finite, integrate_semi_infinite_scaled, MIN_REL_TOL};

/// Occupations with `omega / T` beyond this are treated as exactly zero.
pub const EXPONENT_CUTOFF: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxResult {
    pub flux: f64,
    pub error_estimate: f64,
}

/// Black-body flux per unit absorptivity at unit temperature, `pi^5 / 15`.
pub const BLACK_BODY_FLUX: f64 = PI * PI * PI * PI * PI / 15.0;

fn check_angle(theta0: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta0) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "theta0",
            value: theta0,
            range: "[0, pi]",
        })
    }
}

/// Frequency seen by the thermometer of a photon emitted at `omega0` in the
/// bath frame, travelling at polar angle `theta0` to the boost direction.
pub fn doppler_frequency(boost: &Boost, theta0: f64, omega0: f64) -> Result<f64> {
    check_angle(theta0)?;
    check_non_negative("omega0", omega0)?;
    Ok(boost.gamma() * (1.0 + boost.beta() * theta0.cos()) * omega0)
}

/// `x^3 / (e^x - 1)`, continuous at zero and clipped past the cutoff.
#[inline]
pub(crate) fn cubic_occupation(x: f64) -> f64 {
    if x <= 0.0 || x > EXPONENT_CUTOFF {
        0.0
    } else {
        x * x * x / x.exp_m1()
    }
}

#[inline]
pub(crate) fn occupation(x: f64) -> f64 {
    if x > EXPONENT_CUTOFF {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Bose–Einstein occupation `1 / (exp(omega / T) - 1)`.
pub fn planck_occupation(omega: f64, temperature: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("temperature", temperature)?;
    Ok(occupation(omega / temperature))
}

/// Spectral density of the flux emitted by the thermometer.
pub fn emitted_integrand(profile: &AbsorptionProfile, temperature: f64, omega: f64) -> Result<f64> {
    check_positive("temperature", temperature)?;
    let a = profile.value(omega)?;
    Ok(emitted_density(a, temperature, omega))
}

#[inline]
fn emitted_density(a: f64, temperature: f64, omega: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    PI * a * temperature.powi(3) * cubic_occupation(omega / temperature)
}

fn check_flux_tol(rel_tol: f64) -> Result<()> {
    if (MIN_REL_TOL..=crate::quadrature::MAX_REL_TOL).contains(&rel_tol) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "rel_tol",
            value: rel_tol,
            range: "[1e-14, 1e-2]",
        })
    }
}

/// Sums `level * integral(g)` over the profile's segments, using the
/// compactified transform only for the unbounded one.
fn integrate_over_profile<G: Fn(f64) -> f64>(
    profile: &AbsorptionProfile,
    scale: f64,
    rel_tol: f64,
    g: G,
) -> Result<FluxResult> {
    let mut flux = 0.0;
    let mut error_estimate = 0.0;
    for seg in profile.segments() {
        let r = match seg.hi {
            None => integrate_semi_infinite_scaled(&g, scale, rel_tol)?,
            Some(hi) => integrate_finite(&g, seg.lo, hi, rel_tol)?,
        };
        flux += seg.level * r.value;
        error_estimate += seg.level * r.error_estimate;
    }
    Ok(FluxResult {
        flux: flux.max(0.0),
        error_estimate,
    })
}

/// Flux emitted by the thermometer at temperature `T`:
/// `pi * integral A(w) w^3 n(w / T) dw`.
pub fn emitted_flux(
    profile: &AbsorptionProfile,
    temperature: f64,
    rel_tol: f64,
) -> Result<FluxResult> {
    check_positive("temperature", temperature)?;
    check_flux_tol(rel_tol)?;
    integrate_over_profile(profile, temperature, rel_tol, |w| {
        emitted_density(1.0, temperature, w)
    })
}

#[inline]
fn absorbed_density(boost: &Boost, t0: f64, omega: f64, theta0: f64) -> f64 {
    let (beta, gamma) = (boost.beta(), boost.gamma());
    let s = theta0.sin();
    let d = 1.0 + beta * theta0.cos();
    let x = omega / (gamma * t0 * d);
    if x <= 0.0 {
        return 0.0;
    }
    2.0 * s * s * omega * omega * omega * occupation(x) / (gamma * gamma * gamma * d * d * d)
}

/// Density in `(omega, theta0)` of the flux the thermometer absorbs from the
/// moving bath, with the azimuthal integral already performed.
pub fn absorbed_integrand(
    profile: &AbsorptionProfile,
    boost: &Boost,
    t0: f64,
    omega: f64,
    theta0: f64,
) -> Result<f64> {
    check_positive("T0", t0)?;
    check_angle(theta0)?;
    let a = profile.value(omega)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(a * absorbed_density(boost, t0, omega, theta0))
}

/// Flux absorbed from a black body at rest temperature `t0` moving with
/// `boost`, as a nested integral over frequency (outer) and polar angle
/// (inner).
pub fn absorbed_flux(
    profile: &AbsorptionProfile,
    boost: &Boost,
    t0: f64,
    rel_tol: f64,
) -> Result<FluxResult> {
    check_positive("T0", t0)?;
    check_flux_tol(rel_tol)?;
    let inner_tol = (0.1 * rel_tol).max(MIN_REL_TOL);
    let inner_error: Cell<Option<Error>> = Cell::new(None);
    let inner_rel_err = Cell::new(0.0f64);

    let outer = |omega: f64| -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        match integrate_finite(
            |theta| absorbed_density(boost, t0, omega, theta),
            0.0,
            PI,
            inner_tol,
        ) {
            Ok(r) => {
                if r.value > 0.0 {
                    inner_rel_err.set(inner_rel_err.get().max(r.error_estimate / r.value));
                }
                r.value
            }
            Err(e) => {
                inner_error.set(Some(e));
                0.0
            }
        }
    };

    let mut result =
        integrate_over_profile(profile, boost.gamma() * t0, rel_tol, outer)?;
    if let Some(e) = inner_error.take() {
        return Err(e);
    }
    result.error_estimate += inner_rel_err.get() * result.flux;
    Ok(result)
}
