//! Sampling estimators of the emitted and absorbed fluxes.
//!
//! Frequencies are drawn exactly from the Planck energy spectrum
//! `w^3 / (exp(w / T) - 1)`: expanding the occupation as a geometric series
//! gives a mixture over `n >= 1` with weights `1 / n^4` of Gamma(4, T / n)
//! densities. Polar angles are drawn from `(2 / pi) sin^2` by rejection.
//!
//! The absorbed flux uses the bath-frame variables. Substituting
//! `w = gamma (1 + beta cos t) w0` in the frequency integral turns the
//! absorbed flux into
//!
//! ```text
//! 2 gamma  int dt sin^2 t (1 + beta cos t)  int dw0 A(w) w0^3 n(w0 / T0)
//!   = gamma (pi^5 / 15) T0^4  E[(1 + beta cos t) A(gamma (1 + beta cos t) w0)]
//! ```
//!
//! with `w0` Planck-distributed at `T0` and `t` sin^2-distributed.
//!
//! Samples are generated in fixed chunks of [`CHUNK_SIZE`]. Chunk `i` uses
//! a ChaCha8 generator seeded with the master seed on stream `i`, and chunk
//! sums are reduced in chunk order, so the estimate does not depend on the
//! number of worker threads.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boost::Boost;
use crate::error::{check_positive, Error, Result};
use crate::flux::BLACK_BODY_FLUX;
use crate::profile::AbsorptionProfile;

pub const CHUNK_SIZE: u64 = 1 << 16;
pub const MIN_SAMPLES: u64 = 1_000;

/// `zeta(4) = pi^4 / 90`.
const ZETA4: f64 = PI * PI * PI * PI / 90.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Uniform on `(0, 1]`.
#[inline]
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Draws a frequency from the normalised Planck energy spectrum at `T`.
pub fn sample_planck_frequency<R: Rng + ?Sized>(rng: &mut R, temperature: f64) -> f64 {
    let u = rng.random::<f64>() * ZETA4;
    let mut n = 1u64;
    let mut acc = 1.0;
    while u >= acc && n < 10_000_000 {
        n += 1;
        acc += (n as f64).powi(-4);
    }
    let gamma4: f64 = (0..4).map(|_| -open_unit(rng).ln()).sum();
    temperature / n as f64 * gamma4
}

/// Draws a polar angle from the density `(2 / pi) sin^2(t)` on `[0, pi]`.
pub fn sample_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let theta = PI * rng.random::<f64>();
        let s = theta.sin();
        if rng.random::<f64>() < s * s {
            return theta;
        }
    }
}

/// Mean and standard error of `scale * w` over `n` draws of `w`.
fn estimate<W>(n: u64, seed: u64, scale: f64, weight: W) -> McEstimate
where
    W: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK_SIZE);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let len = CHUNK_SIZE.min(n - i * CHUNK_SIZE);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..len {
                let w = weight(&mut rng);
                sum += w;
                sum_sq += w * w;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partial
        .iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - sum * sum / nf) / (nf - 1.0)).max(0.0);
    McEstimate {
        mean: scale * mean,
        std_error: scale * (var / nf).sqrt(),
        n_samples: n,
        seed,
    }
}

fn check_samples(n: u64) -> Result<()> {
    if n >= MIN_SAMPLES {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "n_samples",
            value: n as f64,
            range: "[1000, inf)",
        })
    }
}

/// Estimates the emitted flux as `(pi^5 / 15) T^4 E[A(w)]`.
pub fn mc_emitted_flux(
    profile: &AbsorptionProfile,
    temperature: f64,
    n_samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_positive("temperature", temperature)?;
    check_samples(n_samples)?;
    let scale = BLACK_BODY_FLUX * temperature.powi(4);
    Ok(estimate(n_samples, seed, scale, |rng| {
        let w = sample_planck_frequency(rng, temperature);
        profile.value_unchecked(w)
    }))
}

/// Estimates the absorbed flux from the bath moving with `boost`.
pub fn mc_absorbed_flux(
    profile: &AbsorptionProfile,
    boost: &Boost,
    t0: f64,
    n_samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_positive("T0", t0)?;
    check_samples(n_samples)?;
    let (beta, gamma) = (boost.beta(), boost.gamma());
    let scale = gamma * BLACK_BODY_FLUX * t0.powi(4);
    Ok(estimate(n_samples, seed, scale, |rng| {
        let w0 = sample_planck_frequency(rng, t0);
        let theta = sample_angle(rng);
        let d = 1.0 + beta * theta.cos();
        d * profile.value_unchecked(gamma * d * w0)
    }))
}
