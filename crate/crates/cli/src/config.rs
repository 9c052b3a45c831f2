//! Run configuration: command-line flags, an optional flat `key = value`
//! config file, and defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thermoboost::quadrature::{MAX_REL_TOL, MIN_REL_TOL};
use thermoboost::{AbsorptionProfile, Boost, EquationOfState};

use crate::error::CliError;

/// Relative output paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "THERMOBOOST_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "thermoboost",
    version,
    about = "Temperature registered by a clamped thermometer for a moving heat bath"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve for the registered temperature.
    FixedPoint(Flags),
    /// Tabulate the registered temperature along one parameter axis.
    Sweep(Flags),
    /// Integrate the relaxation of the thermometer.
    Evolve(Flags),
    /// Compare sampling estimates of both fluxes against quadrature.
    McValidate(Flags),
    /// Tabulate the supremum of the composite entropy against bath momentum.
    EntropyProbe(Flags),
    /// Evaluate the emitted and absorbed fluxes.
    Flux(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    FixedPoint,
    Sweep,
    Evolve,
    McValidate,
    EntropyProbe,
    Flux,
}

impl Command {
    fn split(&self) -> (Mode, &Flags) {
        match self {
            Command::FixedPoint(f) => (Mode::FixedPoint, f),
            Command::Sweep(f) => (Mode::Sweep, f),
            Command::Evolve(f) => (Mode::Evolve, f),
            Command::McValidate(f) => (Mode::McValidate, f),
            Command::EntropyProbe(f) => (Mode::EntropyProbe, f),
            Command::Flux(f) => (Mode::Flux, f),
        }
    }
}

/// Every option is kept as a raw string so that flag and config-file values
/// go through the same parser.
#[derive(Debug, Clone, Default, PartialEq, Eq, Args)]
pub struct Flags {
    /// Flat `key = value` file using the long flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// gray:<a> | band:<f>:<width> | piecewise:<path>
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<String>,
    /// Thermometer temperature for `flux` (defaults to t0).
    #[arg(long, allow_hyphen_values = true)]
    pub temperature: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rel_tol: Option<String>,
    /// cv:<C_V>[:<E_ref>:<S_ref>] | power:<a>:<alpha>
    #[arg(long)]
    pub eos: Option<String>,
    /// Initial thermometer temperature for `evolve`.
    #[arg(long, allow_hyphen_values = true)]
    pub t_init: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub step_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub volume: Option<String>,
    /// Sweep axis: beta | t0 | f | a
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    /// Grid spacing: linear | log
    #[arg(long)]
    pub spacing: Option<String>,
    /// Band width as a fraction of the center on an `f` sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub band_rel_width: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub samples: Option<String>,
    /// Comma-separated momentum magnitudes for `entropy-probe`.
    #[arg(long, allow_hyphen_values = true)]
    pub magnitudes: Option<String>,
}

pub const KEYS: &[&str] = &[
    "profile",
    "beta",
    "t0",
    "temperature",
    "rel-tol",
    "eos",
    "t-init",
    "t-max",
    "step-tol",
    "volume",
    "axis",
    "from",
    "to",
    "points",
    "spacing",
    "band-rel-width",
    "output",
    "format",
    "seed",
    "samples",
    "magnitudes",
];

impl Flags {
    fn entries(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("profile", &self.profile),
            ("beta", &self.beta),
            ("t0", &self.t0),
            ("temperature", &self.temperature),
            ("rel-tol", &self.rel_tol),
            ("eos", &self.eos),
            ("t-init", &self.t_init),
            ("t-max", &self.t_max),
            ("step-tol", &self.step_tol),
            ("volume", &self.volume),
            ("axis", &self.axis),
            ("from", &self.from),
            ("to", &self.to),
            ("points", &self.points),
            ("spacing", &self.spacing),
            ("band-rel-width", &self.band_rel_width),
            ("output", &self.output),
            ("format", &self.format),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("magnitudes", &self.magnitudes),
        ]
    }
}

/// Parses a flat `key = value` file. `#` starts a comment line.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value, got {line:?}", i + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown config key {key:?}")));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!("duplicate config key {key:?}")));
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Beta,
    T0,
    BandCenter,
    GrayLevel,
}

impl Axis {
    pub fn column(&self) -> &'static str {
        match self {
            Axis::Beta => "beta",
            Axis::T0 => "t0",
            Axis::BandCenter => "f",
            Axis::GrayLevel => "a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub axis: Axis,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub log: bool,
    pub band_rel_width: f64,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.from;
                }
                if i == n - 1 {
                    return self.to;
                }
                let s = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.from.ln() + s * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + s * (self.to - self.from)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub profile_spec: String,
    pub profile: AbsorptionProfile,
    pub boost: Boost,
    pub t0: f64,
    pub temperature: f64,
    pub rel_tol: f64,
    pub eos_spec: String,
    pub eos: EquationOfState,
    pub t_init: f64,
    pub t_max: f64,
    pub step_tol: f64,
    pub volume: f64,
    pub sweep: Option<Sweep>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub samples: u64,
    pub magnitudes: Vec<f64>,
}

fn number(key: &str, raw: &str) -> Result<f64, CliError> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Usage(format!("--{key}: {raw:?} is not a number")))
}

fn integer(key: &str, raw: &str) -> Result<u64, CliError> {
    raw.trim()
        .parse::<u64>()
        .map_err(|_| CliError::Usage(format!("--{key}: {raw:?} is not a non-negative integer")))
}

fn positive(key: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::Domain(format!("--{key} = {value} must be positive")))
    }
}

/// Parses `gray:<a>`, `band:<f>:<width>` or `piecewise:<path>`.
pub fn parse_profile(spec: &str, base_dir: Option<&Path>) -> Result<AbsorptionProfile, CliError> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let fields: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.split(':').collect() };
    match kind {
        "gray" => match fields.as_slice() {
            [a] => Ok(AbsorptionProfile::gray(number("profile", a)?)?),
            _ => Err(CliError::Usage(format!(
                "profile {spec:?}: expected gray:<a>"
            ))),
        },
        "band" => match fields.as_slice() {
            [f, w] => Ok(AbsorptionProfile::narrowband(
                number("profile", f)?,
                number("profile", w)?,
            )?),
            _ => Err(CliError::Usage(format!(
                "profile {spec:?}: expected band:<f>:<width>"
            ))),
        },
        "piecewise" if !rest.is_empty() => {
            let mut path = PathBuf::from(rest);
            if let (true, Some(dir)) = (path.is_relative(), base_dir) {
                path = dir.join(path);
            }
            let text = std::fs::read_to_string(&path)?;
            Ok(AbsorptionProfile::from_breakpoint_table(&text)?)
        }
        _ => Err(CliError::Usage(format!(
            "profile {spec:?}: unknown form {kind:?}; expected gray, band or piecewise"
        ))),
    }
}

/// Parses `cv:<C_V>[:<E_ref>:<S_ref>]` or `power:<a>:<alpha>`.
pub fn parse_eos(spec: &str) -> Result<EquationOfState, CliError> {
    let mut parts = spec.split(':');
    let kind = parts.next().unwrap_or("");
    let nums = parts
        .map(|p| number("eos", p))
        .collect::<Result<Vec<_>, _>>()?;
    let eos = match (kind, nums.as_slice()) {
        ("cv", [c]) => EquationOfState::constant_cv(*c, 1.0, 0.0)?,
        ("cv", [c, e, s]) => EquationOfState::constant_cv(*c, *e, *s)?,
        ("power", [a, alpha]) => EquationOfState::power_law(*a, *alpha)?,
        _ => {
            return Err(CliError::Usage(format!(
                "eos {spec:?}: expected cv:<C_V>[:<E_ref>:<S_ref>] or power:<a>:<alpha>"
            )))
        }
    };
    Ok(eos)
}

/// Merges flags over the config file over defaults and validates every
/// value against the domain of the operation it feeds.
pub fn parse_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let (mode, flags) = cli.command.split();
    let mut values: BTreeMap<String, String> = BTreeMap::new();
    let mut base_dir = None;
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)?;
        values = parse_config_file(&text)?;
        base_dir = path.parent().map(Path::to_path_buf);
    }
    let mut from_flags = std::collections::BTreeSet::new();
    for (key, value) in flags.entries() {
        if let Some(v) = value {
            values.insert(key.to_string(), v.clone());
            from_flags.insert(key);
        }
    }
    // Relative paths named in the config file are relative to the file;
    // paths given on the command line are relative to the working directory.
    let profile_base = if from_flags.contains("profile") { None } else { base_dir.as_deref() };

    let get = |key: &str| values.get(key).map(String::as_str);
    let num_or = |key: &str, default: f64| get(key).map_or(Ok(default), |v| number(key, v));

    let profile_spec = get("profile").unwrap_or("gray:1.0").to_string();
    let eos_spec = get("eos").unwrap_or("cv:100").to_string();

    let beta = num_or("beta", 0.0)?;
    let boost = Boost::new(beta)?;
    let t0 = positive("t0", num_or("t0", 1.0)?)?;
    let temperature = positive("temperature", num_or("temperature", t0)?)?;
    let rel_tol = num_or("rel-tol", thermoboost::quadrature::DEFAULT_REL_TOL)?;
    if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
        return Err(CliError::Domain(format!(
            "--rel-tol = {rel_tol} must lie in [1e-14, 1e-2]"
        )));
    }
    let t_init = positive("t-init", num_or("t-init", 0.5)?)?;
    let t_max = positive("t-max", num_or("t-max", 1e4)?)?;
    let step_tol = num_or("step-tol", thermoboost::dynamics::DEFAULT_STEP_TOL)?;
    if !(step_tol > 0.0 && step_tol <= 1e-2) {
        return Err(CliError::Domain(format!(
            "--step-tol = {step_tol} must lie in (0, 1e-2]"
        )));
    }
    let volume = positive("volume", num_or("volume", 1.0)?)?;
    let default_format = if mode == Mode::McValidate { "json" } else { "csv" };
    let format = match get("format").unwrap_or(default_format) {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(CliError::Usage(format!("--format: unknown format {other:?}"))),
    };
    let seed = get("seed").map_or(Ok(42), |v| integer("seed", v))?;
    let samples = get("samples").map_or(Ok(1_000_000), |v| integer("samples", v))?;
    if samples < thermoboost::montecarlo::MIN_SAMPLES {
        return Err(CliError::Domain(format!("--samples = {samples} must be at least 1000")));
    }
    let magnitudes = get("magnitudes")
        .unwrap_or("0,10,20,40")
        .split(',')
        .map(|m| number("magnitudes", m))
        .collect::<Result<Vec<_>, _>>()?;
    if magnitudes.iter().any(|&m| m < 0.0) || magnitudes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Domain(
            "--magnitudes must be non-negative and strictly increasing".into(),
        ));
    }

    let sweep = if mode == Mode::Sweep {
        Some(parse_sweep(&get, &num_or)?)
    } else {
        None
    };

    let output = get("output").map(|p| {
        let path = PathBuf::from(p);
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
            _ => path,
        }
    });

    // Spec strings are parsed last so that cheap numeric errors surface first.
    let profile = parse_profile(&profile_spec, profile_base)?;
    let eos = parse_eos(&eos_spec)?;

    Ok(RunConfig {
        mode,
        profile_spec,
        profile,
        boost,
        t0,
        temperature,
        rel_tol,
        eos_spec,
        eos,
        t_init,
        t_max,
        step_tol,
        volume,
        sweep,
        output,
        format,
        seed,
        samples,
        magnitudes,
    })
}

fn parse_sweep<'a>(
    get: &impl Fn(&str) -> Option<&'a str>,
    num_or: &impl Fn(&str, f64) -> Result<f64, CliError>,
) -> Result<Sweep, CliError> {
    let axis = match get("axis") {
        Some("beta") => Axis::Beta,
        Some("t0") => Axis::T0,
        Some("f") => Axis::BandCenter,
        Some("a") => Axis::GrayLevel,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "--axis: {other:?} is not one of beta, t0, f, a"
            )))
        }
        None => return Err(CliError::Usage("sweep needs --axis".into())),
    };
    let from = get("from")
        .ok_or_else(|| CliError::Usage("sweep needs --from".into()))
        .and_then(|v| number("from", v))?;
    let to = get("to")
        .ok_or_else(|| CliError::Usage("sweep needs --to".into()))
        .and_then(|v| number("to", v))?;
    let points = get("points").map_or(Ok(11), |v| integer("points", v))? as usize;
    if points < 2 {
        return Err(CliError::Domain(format!("--points = {points} must be at least 2")));
    }
    let log = match get("spacing").unwrap_or("linear") {
        "linear" => false,
        "log" => true,
        other => return Err(CliError::Usage(format!("--spacing: unknown spacing {other:?}"))),
    };
    let band_rel_width = positive("band-rel-width", num_or("band-rel-width", 1e-4)?)?;
    for v in [from, to] {
        let ok = match axis {
            Axis::Beta => (0.0..=thermoboost::boost::MAX_BETA).contains(&v),
            Axis::T0 | Axis::BandCenter => v > 0.0,
            Axis::GrayLevel => (0.0..=1.0).contains(&v),
        };
        if !ok || (log && v <= 0.0) {
            return Err(CliError::Domain(format!(
                "sweep endpoint {v} is outside the domain of axis {}",
                axis.column()
            )));
        }
    }
    Ok(Sweep {
        axis,
        from,
        to,
        points,
        log,
        band_rel_width,
    })
}
