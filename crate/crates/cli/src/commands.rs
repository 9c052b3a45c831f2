//! Subcommand implementations. Each returns the artifact text plus an
//! optional failure that should set a nonzero exit code after the artifact
//! has been written.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use thermoboost::dynamics::evolve_partial;
use thermoboost::entropy::{fitted_slope, unboundedness_probe};
use thermoboost::equilibrium::{
    comparator_laws, high_frequency_limit, low_frequency_limit, solve_equilibrium_temperature,
};
use thermoboost::flux::{absorbed_flux, emitted_flux};
use thermoboost::montecarlo::{mc_absorbed_flux, mc_emitted_flux, McEstimate};
use thermoboost::{AbsorptionProfile, Boost, FluxResult};

use crate::config::{Axis, Format, Mode, RunConfig};
use crate::error::{error_marker, CliError};

/// Fixed sweep column order.
pub const SWEEP_COLUMNS: [&str; 9] = [
    "t_bar",
    "emitted_flux",
    "absorbed_flux",
    "low_frequency_limit",
    "high_frequency_limit",
    "planck_einstein",
    "ott_kibble",
    "invariant",
    "status",
];

/// z-scores beyond this fail `mc-validate`.
pub const Z_LIMIT: f64 = 4.0;

pub struct Outcome {
    pub artifact: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(artifact: String) -> Self {
        Outcome {
            artifact,
            failure: None,
        }
    }
}

/// Full double precision, 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv(header: &[&str], rows: &[Vec<String>], footer: &[(&str, String)]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    for (k, v) in footer {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.mode {
        Mode::FixedPoint => run_fixed_point(cfg),
        Mode::Sweep => run_sweep(cfg),
        Mode::Evolve => run_evolve(cfg),
        Mode::McValidate => run_mc_validate(cfg),
        Mode::EntropyProbe => run_entropy_probe(cfg),
        Mode::Flux => run_flux(cfg),
    }
}

pub fn run_fixed_point(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let eq = solve_equilibrium_temperature(&cfg.profile, &cfg.boost, cfg.t0, cfg.rel_tol)?;
    let laws = comparator_laws(&cfg.boost, cfg.t0)?;
    let artifact = match cfg.format {
        Format::Csv => csv(
            &[
                "t_bar",
                "residual",
                "iterations",
                "emitted_flux",
                "absorbed_flux",
                "planck_einstein",
                "ott_kibble",
                "invariant",
            ],
            &[vec![
                num(eq.t_bar),
                num(eq.residual),
                eq.iterations.to_string(),
                num(eq.emitted),
                num(eq.absorbed),
                num(laws.planck_einstein),
                num(laws.ott_kibble),
                num(laws.invariant),
            ]],
            &[],
        ),
        Format::Json => to_json(&json!({
            "profile": cfg.profile_spec,
            "beta": cfg.boost.beta(),
            "t0": cfg.t0,
            "t_bar": eq.t_bar,
            "residual": eq.residual,
            "iterations": eq.iterations,
            "emitted_flux": eq.emitted,
            "absorbed_flux": eq.absorbed,
            "planck_einstein": laws.planck_einstein,
            "ott_kibble": laws.ott_kibble,
            "invariant": laws.invariant,
        })),
    };
    Ok(Outcome::ok(artifact))
}

struct SweepRow {
    x: f64,
    values: Result<[f64; 8], thermoboost::Error>,
}

fn sweep_point(cfg: &RunConfig, axis: Axis, x: f64, rel_width: f64) -> Result<[f64; 8], thermoboost::Error> {
    let mut boost = cfg.boost;
    let mut t0 = cfg.t0;
    let profile = match axis {
        Axis::Beta => {
            boost = Boost::new(x)?;
            cfg.profile.clone()
        }
        Axis::T0 => {
            t0 = x;
            cfg.profile.clone()
        }
        Axis::BandCenter => AbsorptionProfile::narrowband(x, x * rel_width)?,
        Axis::GrayLevel => AbsorptionProfile::gray(x)?,
    };
    let eq = solve_equilibrium_temperature(&profile, &boost, t0, cfg.rel_tol)?;
    let laws = comparator_laws(&boost, t0)?;
    Ok([
        eq.t_bar,
        eq.emitted,
        eq.absorbed,
        low_frequency_limit(&boost, t0)?,
        high_frequency_limit(&boost, t0)?,
        laws.planck_einstein,
        laws.ott_kibble,
        laws.invariant,
    ])
}

pub fn run_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sweep = cfg
        .sweep
        .ok_or_else(|| CliError::Usage("sweep needs --axis, --from and --to".into()))?;
    let rows: Vec<SweepRow> = sweep
        .grid()
        .into_par_iter()
        .map(|x| SweepRow {
            x,
            values: sweep_point(cfg, sweep.axis, x, sweep.band_rel_width),
        })
        .collect();
    let failed = rows.iter().filter(|r| r.values.is_err()).count();

    let artifact = match cfg.format {
        Format::Csv => {
            let mut header = vec![sweep.axis.column()];
            header.extend_from_slice(&SWEEP_COLUMNS);
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![num(r.x)];
                    match &r.values {
                        Ok(v) => {
                            row.extend(v.iter().map(|&x| num(x)));
                            row.push("ok".into());
                        }
                        Err(e) => {
                            row.extend(std::iter::repeat_n(String::new(), 8));
                            row.push(error_marker(e).into());
                        }
                    }
                    row
                })
                .collect();
            csv(&header, &body, &[])
        }
        Format::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::Map::new();
                    obj.insert(sweep.axis.column().into(), json!(r.x));
                    match &r.values {
                        Ok(v) => {
                            for (name, x) in SWEEP_COLUMNS.iter().zip(v) {
                                obj.insert((*name).into(), json!(x));
                            }
                            obj.insert("status".into(), json!("ok"));
                        }
                        Err(e) => {
                            for name in &SWEEP_COLUMNS[..8] {
                                obj.insert((*name).into(), Value::Null);
                            }
                            obj.insert("status".into(), json!(error_marker(e)));
                        }
                    }
                    Value::Object(obj)
                })
                .collect();
            to_json(&body)
        }
    };
    let failure = (failed > 0).then(|| {
        let first = rows.iter().find_map(|r| r.values.as_ref().err()).cloned();
        CliError::Numerical(first.expect("at least one failed row"))
    });
    Ok(Outcome { artifact, failure })
}

pub fn run_evolve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let e_init = cfg.eos.energy_of_temperature(cfg.t_init)?;
    let (traj, failure) = evolve_partial(
        &cfg.profile,
        &cfg.boost,
        cfg.t0,
        &cfg.eos,
        e_init,
        cfg.volume,
        cfg.t_max,
        cfg.step_tol,
    )?;
    let gap = traj.terminal_gap();
    let artifact = match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = traj
                .samples
                .iter()
                .map(|s| vec![num(s.t), num(s.energy), num(s.temperature), num(s.free_energy)])
                .collect();
            let mut footer = vec![
                ("t_bar", num(traj.t_bar)),
                ("terminal_gap", num(gap)),
                ("converged", traj.converged.to_string()),
            ];
            if let Some(e) = &failure {
                footer.push(("error", error_marker(e).to_string()));
            }
            csv(&["t", "energy", "temperature", "free_energy"], &rows, &footer)
        }
        Format::Json => {
            let samples: Vec<Value> = traj
                .samples
                .iter()
                .map(|s| {
                    json!({
                        "t": s.t,
                        "energy": s.energy,
                        "temperature": s.temperature,
                        "free_energy": s.free_energy,
                    })
                })
                .collect();
            to_json(&json!({
                "t_bar": traj.t_bar,
                "terminal_gap": gap,
                "converged": traj.converged,
                "error": failure.as_ref().map(error_marker),
                "samples": samples,
            }))
        }
    };
    Ok(Outcome {
        artifact,
        failure: failure.map(CliError::Numerical),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Comparison {
    quadrature: f64,
    mc_mean: f64,
    mc_std_error: f64,
    z_score: f64,
}

fn compare(quad: FluxResult, mc: McEstimate) -> Comparison {
    let diff = mc.mean - quad.flux;
    let z_score = if mc.std_error > 0.0 {
        diff / mc.std_error
    } else if diff.abs() <= quad.error_estimate {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Comparison {
        quadrature: quad.flux,
        mc_mean: mc.mean,
        mc_std_error: mc.std_error,
        z_score,
    }
}

pub fn run_mc_validate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let emitted = compare(
        emitted_flux(&cfg.profile, cfg.temperature, cfg.rel_tol)?,
        mc_emitted_flux(&cfg.profile, cfg.temperature, cfg.samples, cfg.seed)?,
    );
    let absorbed = compare(
        absorbed_flux(&cfg.profile, &cfg.boost, cfg.t0, cfg.rel_tol)?,
        mc_absorbed_flux(&cfg.profile, &cfg.boost, cfg.t0, cfg.samples, cfg.seed)?,
    );
    let artifact = match cfg.format {
        Format::Json => to_json(&json!({
            "seed": cfg.seed,
            "samples": cfg.samples,
            "emitted": emitted,
            "absorbed": absorbed,
        })),
        Format::Csv => csv(
            &["flux", "quadrature", "mc_mean", "mc_std_error", "z_score"],
            &[("emitted", emitted), ("absorbed", absorbed)]
                .iter()
                .map(|(name, c)| {
                    vec![
                        name.to_string(),
                        num(c.quadrature),
                        num(c.mc_mean),
                        num(c.mc_std_error),
                        num(c.z_score),
                    ]
                })
                .collect::<Vec<_>>(),
            &[("seed", cfg.seed.to_string()), ("samples", cfg.samples.to_string())],
        ),
    };
    let worst = emitted.z_score.abs().max(absorbed.z_score.abs());
    let failure = (worst.is_nan() || worst > Z_LIMIT).then(|| {
        CliError::Validation(format!("|z| = {worst} exceeds {Z_LIMIT}"))
    });
    Ok(Outcome { artifact, failure })
}

pub fn run_entropy_probe(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = unboundedness_probe(&cfg.eos, cfg.volume, &cfg.boost, cfg.t0, &cfg.magnitudes)?;
    let slope = fitted_slope(&rows);
    let analytic = cfg.boost.beta() / cfg.t0;
    let artifact = match cfg.format {
        Format::Csv => csv(
            &["p0_magnitude", "sup_entropy"],
            &rows
                .iter()
                .map(|r| vec![num(r.p0_magnitude), num(r.sup_entropy)])
                .collect::<Vec<_>>(),
            &[
                ("fitted_slope", slope.map_or_else(String::new, num)),
                ("analytic_slope", num(analytic)),
            ],
        ),
        Format::Json => to_json(&json!({
            "rows": rows
                .iter()
                .map(|r| json!({"p0_magnitude": r.p0_magnitude, "sup_entropy": r.sup_entropy}))
                .collect::<Vec<_>>(),
            "fitted_slope": slope,
            "analytic_slope": analytic,
        })),
    };
    Ok(Outcome::ok(artifact))
}

pub fn run_flux(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let e = emitted_flux(&cfg.profile, cfg.temperature, cfg.rel_tol)?;
    let a = absorbed_flux(&cfg.profile, &cfg.boost, cfg.t0, cfg.rel_tol)?;
    let artifact = match cfg.format {
        Format::Csv => csv(
            &[
                "temperature",
                "emitted_flux",
                "emitted_error",
                "t0",
                "absorbed_flux",
                "absorbed_error",
            ],
            &[vec![
                num(cfg.temperature),
                num(e.flux),
                num(e.error_estimate),
                num(cfg.t0),
                num(a.flux),
                num(a.error_estimate),
            ]],
            &[],
        ),
        Format::Json => to_json(&json!({
            "temperature": cfg.temperature,
            "emitted_flux": e.flux,
            "emitted_error": e.error_estimate,
            "t0": cfg.t0,
            "absorbed_flux": a.flux,
            "absorbed_error": a.error_estimate,
        })),
    };
    Ok(Outcome::ok(artifact))
}
