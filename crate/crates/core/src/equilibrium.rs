//! Stationary temperature of the thermometer.
//!
//! The registered temperature `T_bar` balances emitted against absorbed flux,
//! `emitted(T_bar) = absorbed(T0)`. Because the emitted flux is continuous and
//! strictly increasing from 0 to infinity the balance has exactly one root,
//! located here by bracketing followed by safeguarded false position.

use std::f64::consts::PI;

use crate::boost::Boost;
use crate::error::{check_positive, Error, Result};
use crate::flux::{absorbed_flux, emitted_flux};
use crate::profile::AbsorptionProfile;
use crate::quadrature::{integrate_finite, DEFAULT_REL_TOL, MIN_REL_TOL};

/// Maximum number of doublings (or halvings) while bracketing.
pub const MAX_BRACKET_STEPS: u32 = 60;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResult {
    pub t_bar: f64,
    /// `emitted(t_bar) - absorbed(T0)`.
    pub residual: f64,
    pub iterations: usize,
    /// Absorbed flux `absorbed(T0)` that the emitted flux is balanced against.
    pub absorbed: f64,
    /// Emitted flux at `t_bar`.
    pub emitted: f64,
}

fn flux_tol(rel_tol: f64) -> f64 {
    (0.1 * rel_tol).max(MIN_REL_TOL)
}

/// Solves `emitted(T_bar) = absorbed(T0)` for the thermometer temperature.
pub fn solve_equilibrium_temperature(
    profile: &AbsorptionProfile,
    boost: &Boost,
    t0: f64,
    rel_tol: f64,
) -> Result<EquilibriumResult> {
    check_positive("T0", t0)?;
    if profile.is_identically_zero() {
        return Err(Error::DegenerateProfile);
    }
    let qtol = flux_tol(rel_tol);
    let target = absorbed_flux(profile, boost, t0, qtol)?.flux;
    if target <= 0.0 {
        return Err(Error::Solver(format!(
            "absorbed flux underflows to zero at T0 = {t0}"
        )));
    }
    let emitted = |t: f64| emitted_flux(profile, t, qtol).map(|r| r.flux);
    let (t_bar, phi, iterations) = find_balance(emitted, target, t0, rel_tol)?;
    Ok(EquilibriumResult {
        t_bar,
        residual: phi - target,
        iterations,
        absorbed: target,
        emitted: phi,
    })
}

/// Root of the increasing function `phi(t) = target`, starting from `start`.
/// Returns `(t, phi(t), iterations)`.
pub(crate) fn find_balance<P>(phi: P, target: f64, start: f64, rel_tol: f64) -> Result<(f64, f64, usize)>
where
    P: Fn(f64) -> Result<f64>,
{
    let tol = rel_tol * target;
    let g0 = phi(start)? - target;
    if g0.abs() <= tol {
        return Ok((start, g0 + target, 0));
    }

    let (mut a, mut ga, mut b, mut gb);
    if g0 < 0.0 {
        (a, ga) = (start, g0);
        let mut hi = start;
        let mut g = g0;
        let mut steps = 0;
        while g < 0.0 {
            if steps == MAX_BRACKET_STEPS {
                return Err(Error::Solver("no upper bracket within 2^60 T0".into()));
            }
            (a, ga) = (hi, g);
            hi *= 2.0;
            g = phi(hi)? - target;
            steps += 1;
        }
        (b, gb) = (hi, g);
    } else {
        (b, gb) = (start, g0);
        let mut lo = start;
        let mut g = g0;
        let mut steps = 0;
        while g > 0.0 {
            if steps == MAX_BRACKET_STEPS {
                return Err(Error::Solver("no lower bracket within 2^-60 T0".into()));
            }
            (b, gb) = (lo, g);
            lo *= 0.5;
            g = phi(lo)? - target;
            steps += 1;
        }
        (a, ga) = (lo, g);
    }
    if ga.abs() <= tol {
        return Ok((a, ga + target, 0));
    }
    if gb.abs() <= tol {
        return Ok((b, gb + target, 0));
    }

    // Illinois false position with a bisection fallback whenever the bracket
    // fails to halve.
    let mut side = 0i8;
    let mut width = b - a;
    for iter in 1..=MAX_ITERATIONS {
        let mut x = b - gb * (b - a) / (gb - ga);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let gx = phi(x)? - target;
        if gx.abs() <= tol || (b - a) <= 4.0 * f64::EPSILON * b {
            return Ok((x, gx + target, iter));
        }
        if gx < 0.0 {
            (a, ga) = (x, gx);
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            (b, gb) = (x, gx);
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let gm = phi(m)? - target;
            if gm.abs() <= tol {
                return Ok((m, gm + target, iter));
            }
            if gm < 0.0 {
                (a, ga) = (m, gm);
            } else {
                (b, gb) = (m, gm);
            }
            side = 0;
        }
        width = b - a;
    }
    Err(Error::Solver(format!(
        "no convergence after {MAX_ITERATIONS} iterations; bracket [{a}, {b}]"
    )))
}

/// Registered temperature for an infinitely narrow absorption band at
/// frequency `f`, where the band width cancels from both sides of the
/// balance.
///
/// The angular average of the Doppler-shifted occupation is computed with
/// its dominant exponential factored out, so large `f` does not underflow.
pub fn narrowband_equilibrium(f: f64, boost: &Boost, t0: f64, rel_tol: f64) -> Result<f64> {
    check_positive("f", f)?;
    check_positive("T0", t0)?;
    let (beta, gamma) = (boost.beta(), boost.gamma());
    let scale = f / (gamma * t0);
    let x_min = scale / (1.0 + beta);
    let reduced = integrate_finite(
        |theta: f64| {
            let s = theta.sin();
            let d = 1.0 + beta * theta.cos();
            let x = scale / d;
            s * s * (-(x - x_min)).exp() / (-(-x).exp_m1() * d * d * d)
        },
        0.0,
        PI,
        rel_tol,
    )?;
    if !(reduced.value > 0.0 && reduced.value.is_finite()) {
        return Err(Error::OverflowGuard { frequency: f });
    }
    // ln of the occupation the band must reach.
    let log_occ = (2.0 / (PI * gamma.powi(3))).ln() + reduced.value.ln() - x_min;
    // n(f / T) = exp(log_occ)  =>  f / T = ln(1 + exp(-log_occ)).
    let neg = -log_occ;
    let ratio = if neg > 700.0 {
        neg + (-neg).exp().ln_1p()
    } else {
        neg.exp().ln_1p()
    };
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::OverflowGuard { frequency: f });
    }
    Ok(f / ratio)
}

/// Small-`f` limit of the narrow-band temperature, from the quadrature of
/// the angular integral. Equals `2 s / (1 + s) T0` with `s = sqrt(1 - beta^2)`.
pub fn low_frequency_limit(boost: &Boost, t0: f64) -> Result<f64> {
    check_positive("T0", t0)?;
    let beta = boost.beta();
    let angular = integrate_finite(
        |theta: f64| theta.sin().powi(2) / (1.0 + beta * theta.cos()).powi(2),
        0.0,
        PI,
        DEFAULT_REL_TOL,
    )?;
    Ok(2.0 / (PI * boost.gamma().powi(2)) * t0 * angular.value)
}

/// Large-`f` limit: the forward Doppler factor `sqrt((1 + beta) / (1 - beta))`.
pub fn high_frequency_limit(boost: &Boost, t0: f64) -> Result<f64> {
    check_positive("T0", t0)?;
    let beta = boost.beta();
    Ok(t0 * ((1.0 + beta) / (1.0 - beta)).sqrt())
}

/// The three historical candidate transformation laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparatorLaws {
    /// `T0 / gamma`.
    pub planck_einstein: f64,
    /// `gamma T0`.
    pub ott_kibble: f64,
    /// `T0`.
    pub invariant: f64,
}

pub fn comparator_laws(boost: &Boost, t0: f64) -> Result<ComparatorLaws> {
    check_positive("T0", t0)?;
    Ok(ComparatorLaws {
        planck_einstein: t0 * boost.contraction(),
        ott_kibble: t0 * boost.gamma(),
        invariant: t0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn b(beta: f64) -> Boost {
        Boost::new(beta).unwrap()
    }

    #[test]
    fn rest_frame_reproduces_bath_temperature() {
        let profiles = [
            AbsorptionProfile::gray(0.3).unwrap(),
            AbsorptionProfile::narrowband(2.0, 0.5).unwrap(),
        ];
        for p in &profiles {
            let r = solve_equilibrium_temperature(p, &Boost::rest(), 1.0, TOL).unwrap();
            assert!(rel(r.t_bar, 1.0) < 1e-9);
        }
        for f in [1e-3, 1.0, 50.0] {
            assert!(rel(narrowband_equilibrium(f, &Boost::rest(), 1.0, TOL).unwrap(), 1.0) < 1e-9);
        }
    }

    #[test]
    fn gray_quarter_power_law() {
        let expected = 1.25f64.powf(0.25);
        assert!((expected - 1.057371).abs() < 1e-6);
        for a in [0.2, 0.7, 1.0] {
            let g = AbsorptionProfile::gray(a).unwrap();
            let r = solve_equilibrium_temperature(&g, &b(0.6), 1.0, TOL).unwrap();
            assert!(rel(r.t_bar, expected) < 1e-8, "{}", r.t_bar);
            assert!(r.residual.abs() <= TOL * r.absorbed);
        }
    }

    #[test]
    fn degenerate_profile() {
        let zero = AbsorptionProfile::gray(0.0).unwrap();
        assert_eq!(
            solve_equilibrium_temperature(&zero, &b(0.6), 1.0, TOL),
            Err(Error::DegenerateProfile)
        );
    }

    #[test]
    fn residual_changes_sign_across_root() {
        let p = AbsorptionProfile::narrowband(2.0, 0.5).unwrap();
        let r = solve_equilibrium_temperature(&p, &b(0.6), 1.0, TOL).unwrap();
        let below = emitted_flux(&p, r.t_bar * (1.0 - 1e-6), 1e-12).unwrap().flux;
        let above = emitted_flux(&p, r.t_bar * (1.0 + 1e-6), 1e-12).unwrap().flux;
        assert!(below < r.absorbed && above > r.absorbed);
    }

    #[test]
    fn low_frequency_closed_form() {
        for beta in [0.0, 0.3, 0.6, 0.9] {
            let s = (1.0f64 - beta * beta).sqrt();
            let closed = 2.0 * s / (1.0 + s);
            assert!(rel(low_frequency_limit(&b(beta), 1.0).unwrap(), closed) < 1e-10);
        }
        assert!((low_frequency_limit(&b(0.6), 1.0).unwrap() - 0.888889).abs() < 1e-6);
        // T0 (1 + O(beta^2)).
        for beta in [1e-2, 1e-3] {
            let dev = low_frequency_limit(&b(beta), 1.0).unwrap() - 1.0;
            assert!(dev.abs() < beta * beta);
        }
    }

    #[test]
    fn high_frequency_values() {
        assert_eq!(high_frequency_limit(&Boost::rest(), 1.0).unwrap(), 1.0);
        assert!((high_frequency_limit(&b(0.6), 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((high_frequency_limit(&b(0.8), 1.0).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn comparators() {
        let c = comparator_laws(&b(0.6), 1.0).unwrap();
        assert!((c.planck_einstein - 0.8).abs() < 1e-15);
        assert!((c.ott_kibble - 1.25).abs() < 1e-15);
        assert_eq!(c.invariant, 1.0);
        let c = comparator_laws(&Boost::rest(), 1.0).unwrap();
        assert_eq!((c.planck_einstein, c.ott_kibble, c.invariant), (1.0, 1.0, 1.0));
        for beta in [0.1, 0.5, 0.95] {
            let c = comparator_laws(&b(beta), 1.7).unwrap();
            assert!(rel(c.planck_einstein * c.ott_kibble, 1.7 * 1.7) < 1e-14);
        }
    }

    #[test]
    fn narrowband_limits() {
        let lo = narrowband_equilibrium(1e-3, &b(0.6), 1.0, TOL).unwrap();
        assert!(rel(lo, 0.888889) < 5e-3);
        // The large-f approach to the forward Doppler factor is slow
        // (logarithmic corrections); 1% is reached only for f of order 10^4.
        let hi = narrowband_equilibrium(1e5, &b(0.6), 1.0, TOL).unwrap();
        assert!(rel(hi, 2.0) < 1e-3, "{hi}");
        let mid = narrowband_equilibrium(50.0, &b(0.6), 1.0, TOL).unwrap();
        assert!(mid > lo && mid < hi);
    }

    #[test]
    fn narrowband_matches_thin_band_profile() {
        for f in [0.01, 1.0, 50.0] {
            let limit = narrowband_equilibrium(f, &b(0.6), 1.0, TOL).unwrap();
            let p = AbsorptionProfile::narrowband(f, f * 1e-4).unwrap();
            let full = solve_equilibrium_temperature(&p, &b(0.6), 1.0, TOL).unwrap();
            assert!(rel(full.t_bar, limit) < 1e-3, "f={f}: {} vs {limit}", full.t_bar);
        }
    }

    #[test]
    fn narrowband_overflow_guard() {
        assert!(matches!(
            narrowband_equilibrium(1e300, &b(0.6), 1.0, TOL),
            Err(Error::OverflowGuard { .. }) | Err(Error::Accuracy { .. })
        ));
    }

    #[test]
    fn increasing_in_t0_and_scale_invariant() {
        let band = AbsorptionProfile::narrowband(2.0, 0.5).unwrap();
        let gray = AbsorptionProfile::gray(0.8).unwrap();
        for p in [&band, &gray] {
            let mut last = 0.0;
            for t0 in [0.5, 1.0, 2.0, 4.0] {
                let t = solve_equilibrium_temperature(p, &b(0.3), t0, TOL).unwrap().t_bar;
                assert!(t > last);
                last = t;
            }
            for c in [0.5, 0.1] {
                let t1 = solve_equilibrium_temperature(p, &b(0.6), 1.0, TOL).unwrap().t_bar;
                let scaled = p.scaled(c).unwrap();
                let t2 = solve_equilibrium_temperature(&scaled, &b(0.6), 1.0, TOL).unwrap().t_bar;
                assert!(rel(t1, t2) < 10.0 * TOL);
            }
        }
    }
}
