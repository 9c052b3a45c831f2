//! Relaxation of the thermometer towards the registered temperature.
//!
//! The energy obeys `dE/dt = absorbed(T0) - emitted(T)`. The free energy
//! `F = E - T_bar S(E, V)` decreases along every trajectory and is
//! stationary only at `T = T_bar`, so it serves as a Lyapunov function.

use crate::boost::Boost;
use crate::eos::EquationOfState;
use crate::equilibrium::solve_equilibrium_temperature;
use crate::error::{check_positive, Error, Result};
use crate::flux::{absorbed_flux, emitted_flux};
use crate::profile::AbsorptionProfile;
use crate::quadrature::DEFAULT_REL_TOL;

pub const DEFAULT_STEP_TOL: f64 = 1e-8;
/// Integration stops once `|T - T_bar| / T_bar` falls below this.
pub const CONVERGENCE_GAP: f64 = 1e-8;
const FLUX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub energy: f64,
    pub temperature: f64,
    pub free_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub profile: AbsorptionProfile,
    pub boost: Boost,
    pub t0: f64,
    pub eos: EquationOfState,
    pub volume: f64,
    pub t_bar: f64,
    /// Whether the convergence gap was reached before `t_max`.
    pub converged: bool,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    /// Relative distance of the final temperature from `t_bar`.
    pub fn terminal_gap(&self) -> f64 {
        ((self.last().temperature - self.t_bar) / self.t_bar).abs()
    }

    /// Index of the first sample whose free energy exceeds its predecessor's
    /// by more than `slack`.
    pub fn first_ascent(&self, slack: f64) -> Option<usize> {
        self.samples
            .windows(2)
            .position(|w| w[1].free_energy > w[0].free_energy + slack)
            .map(|i| i + 1)
    }
}

/// `dE/dt = absorbed(T0) - emitted(T)`.
pub fn energy_rate(
    profile: &AbsorptionProfile,
    boost: &Boost,
    t0: f64,
    temperature: f64,
) -> Result<f64> {
    check_positive("temperature", temperature)?;
    let absorbed = absorbed_flux(profile, boost, t0, FLUX_TOL)?.flux;
    let emitted = emitted_flux(profile, temperature, FLUX_TOL)?.flux;
    Ok(absorbed - emitted)
}

/// Free energy `F = E - t_bar S(E, V)`.
pub fn lyapunov_value(eos: &EquationOfState, energy: f64, volume: f64, t_bar: f64) -> Result<f64> {
    check_positive("t_bar", t_bar)?;
    Ok(energy - t_bar * eos.entropy(energy, volume)?)
}

/// `dF/dt = (1 - t_bar / T) (emitted(t_bar) - emitted(T))`, never positive.
pub fn lyapunov_rate(
    profile: &AbsorptionProfile,
    eos: &EquationOfState,
    energy: f64,
    t_bar: f64,
) -> Result<f64> {
    check_positive("t_bar", t_bar)?;
    let t = eos.temperature(energy)?;
    let at_bar = emitted_flux(profile, t_bar, FLUX_TOL)?.flux;
    let at_t = emitted_flux(profile, t, FLUX_TOL)?.flux;
    Ok((1.0 - t_bar / t) * (at_bar - at_t))
}

// Dormand–Prince 5(4) tableau. The system is autonomous, so the stage
// abscissae are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates the energy balance from `e_init` until the temperature is
/// within [`CONVERGENCE_GAP`] of the registered temperature or `t_max` is
/// reached, recording every accepted step.
#[allow(clippy::too_many_arguments)]
pub fn evolve(
    profile: &AbsorptionProfile,
    boost: &Boost,
    t0: f64,
    eos: &EquationOfState,
    e_init: f64,
    volume: f64,
    t_max: f64,
    step_tol: f64,
) -> Result<Trajectory> {
    match evolve_partial(profile, boost, t0, eos, e_init, volume, t_max, step_tol)? {
        (traj, None) => Ok(traj),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`evolve`], but a failure after integration has started is returned
/// alongside the samples accepted so far.
#[allow(clippy::too_many_arguments)]
pub fn evolve_partial(
    profile: &AbsorptionProfile,
    boost: &Boost,
    t0: f64,
    eos: &EquationOfState,
    e_init: f64,
    volume: f64,
    t_max: f64,
    step_tol: f64,
) -> Result<(Trajectory, Option<Error>)> {
    check_positive("E_init", e_init)?;
    check_positive("t_max", t_max)?;
    check_positive("step_tol", step_tol)?;
    let t_bar = solve_equilibrium_temperature(profile, boost, t0, DEFAULT_REL_TOL)?.t_bar;
    let absorbed = absorbed_flux(profile, boost, t0, FLUX_TOL)?.flux;

    let rate = |energy: f64| -> Result<f64> {
        let t = eos.temperature(energy)?;
        Ok(absorbed - emitted_flux(profile, t, FLUX_TOL)?.flux)
    };
    let sample = |t: f64, energy: f64| -> Result<Sample> {
        Ok(Sample {
            t,
            energy,
            temperature: eos.temperature(energy)?,
            free_energy: lyapunov_value(eos, energy, volume, t_bar)?,
        })
    };

    let mut traj = Trajectory {
        samples: vec![sample(0.0, e_init)?],
        profile: profile.clone(),
        boost: *boost,
        t0,
        eos: *eos,
        volume,
        t_bar,
        converged: false,
    };
    if traj.terminal_gap() < CONVERGENCE_GAP {
        traj.converged = true;
        return Ok((traj, None));
    }

    let failure = step_until_converged(&mut traj, t_max, step_tol, &rate, &sample).err();
    Ok((traj, failure))
}

fn step_until_converged<R, S>(
    traj: &mut Trajectory,
    t_max: f64,
    step_tol: f64,
    rate: &R,
    sample: &S,
) -> Result<()>
where
    R: Fn(f64) -> Result<f64>,
    S: Fn(f64, f64) -> Result<Sample>,
{
    let mut t = 0.0;
    let mut energy = traj.samples[0].energy;
    let mut k0 = rate(energy)?;
    // Start with a step that changes E by about 1%.
    let mut h = (0.01 * energy / k0.abs()).min(t_max);

    while t < t_max {
        h = h.min(t_max - t);
        if h <= 1e-14 * t.max(1.0) {
            return Err(Error::Stiffness { t, energy });
        }
        let mut k = [0.0; 7];
        k[0] = k0;
        let mut ok = true;
        for s in 1..7 {
            let y = energy + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
            if y.is_nan() || y <= 0.0 {
                ok = false;
                break;
            }
            k[s] = rate(y)?;
        }
        if !ok {
            h *= 0.25;
            continue;
        }
        // Row 6 of the tableau holds the fifth-order solution weights.
        let next = energy + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err = h * (0..7).map(|j| E[j] * k[j]).sum::<f64>();
        let scale = step_tol * energy.abs().max(next.abs());
        let ratio = (err / scale).abs();
        if ratio <= 1.0 && next > 0.0 {
            t += h;
            energy = next;
            k0 = k[6];
            traj.samples.push(sample(t, energy)?);
            if traj.terminal_gap() < CONVERGENCE_GAP {
                traj.converged = true;
                break;
            }
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(())
}
