//! Entropy bookkeeping for the thermometer plus moving bath.
//!
//! The bath is an infinite reservoir at rest temperature `T0`; its momentum
//! only enters through the component along the boost, so momenta are scalars
//! here. Additive constants in the composite entropy are set to zero.

use crate::boost::Boost;
use crate::eos::EquationOfState;
use crate::error::{check_non_negative, check_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeState {
    /// Energy of the thermometer in its own frame.
    pub energy: f64,
    pub volume: f64,
    /// Bath momentum increment along the boost, bath rest frame.
    pub p0_parallel: f64,
    /// Bath energy increment, bath rest frame.
    pub e0: f64,
}

/// `gamma T0`.
pub fn tilde_temperature(boost: &Boost, t0: f64) -> Result<f64> {
    check_positive("T0", t0)?;
    Ok(boost.gamma() * t0)
}

/// `S(E, V) - E / (gamma T0)`.
pub fn tilde_entropy(
    eos: &EquationOfState,
    energy: f64,
    volume: f64,
    boost: &Boost,
    t0: f64,
) -> Result<f64> {
    let tt = tilde_temperature(boost, t0)?;
    Ok(eos.entropy(energy, volume)? - energy / tt)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildeMaximum {
    pub e_star: f64,
    pub s_tilde_max: f64,
    /// `E* - T~ S(E*, V)`; the maximum equals minus this over `T~`.
    pub helmholtz: f64,
}

/// Maximises the tilted entropy over `E`. Concavity puts the maximum where
/// `T(E) = gamma T0`.
pub fn maximize_tilde_entropy(
    eos: &EquationOfState,
    volume: f64,
    boost: &Boost,
    t0: f64,
) -> Result<TildeMaximum> {
    let tt = tilde_temperature(boost, t0)?;
    let e_star = eos.energy_of_temperature(tt)?;
    let s_tilde_max = tilde_entropy(eos, e_star, volume, boost, t0)?;
    let helmholtz = e_star - tt * eos.entropy(e_star, volume)?;
    Ok(TildeMaximum {
        e_star,
        s_tilde_max,
        helmholtz,
    })
}

/// `S~(E, V) - beta p0_parallel / T0`.
pub fn composite_entropy_value(
    eos: &EquationOfState,
    state: &CompositeState,
    boost: &Boost,
    t0: f64,
) -> Result<f64> {
    let tilde = tilde_entropy(eos, state.energy, state.volume, boost, t0)?;
    Ok(tilde - boost.beta() * state.p0_parallel / t0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub p0_magnitude: f64,
    pub sup_entropy: f64,
}

/// For each bath momentum magnitude, directed against the boost, reports
/// the supremum over `E` of the composite entropy. The rows grow without
/// bound with slope `beta / T0`.
pub fn unboundedness_probe(
    eos: &EquationOfState,
    volume: f64,
    boost: &Boost,
    t0: f64,
    magnitudes: &[f64],
) -> Result<Vec<ProbeRow>> {
    if boost.beta() == 0.0 {
        return Err(Error::DegenerateProbe);
    }
    for &m in magnitudes {
        check_non_negative("|P0|", m)?;
    }
    if magnitudes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain {
            name: "|P0|",
            value: f64::NAN,
            range: "strictly increasing sequence",
        });
    }
    let max = maximize_tilde_entropy(eos, volume, boost, t0)?;
    magnitudes
        .iter()
        .map(|&m| {
            let state = CompositeState {
                energy: max.e_star,
                volume,
                p0_parallel: -m,
                e0: 0.0,
            };
            Ok(ProbeRow {
                p0_magnitude: m,
                sup_entropy: composite_entropy_value(eos, &state, boost, t0)?,
            })
        })
        .collect()
}

/// Least-squares slope of `sup_entropy` against `p0_magnitude`.
pub fn fitted_slope(rows: &[ProbeRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let n = rows.len() as f64;
    let mx = rows.iter().map(|r| r.p0_magnitude).sum::<f64>() / n;
    let my = rows.iter().map(|r| r.sup_entropy).sum::<f64>() / n;
    let sxy: f64 = rows
        .iter()
        .map(|r| (r.p0_magnitude - mx) * (r.sup_entropy - my))
        .sum();
    let sxx: f64 = rows.iter().map(|r| (r.p0_magnitude - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `dE + gamma (dE0 + beta dP0)`, zero for any energy-conserving exchange.
pub fn energy_conservation_residual(
    delta_e: f64,
    delta_e0: f64,
    delta_p0_parallel: f64,
    boost: &Boost,
) -> f64 {
    delta_e + boost.gamma() * (delta_e0 + boost.beta() * delta_p0_parallel)
}
