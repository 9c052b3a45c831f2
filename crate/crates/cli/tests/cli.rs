use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_thermoboost");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("THERMOBOOST_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    footer: Vec<(String, String)>,
}

impl Table {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let mut rows = Vec::new();
        let mut footer = Vec::new();
        for line in lines {
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta.split_once('=').unwrap();
                footer.push((k.to_string(), v.to_string()));
            } else {
                rows.push(line.split(',').map(String::from).collect());
            }
        }
        Table { header, rows, footer }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let j = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[j].parse().unwrap()).collect()
    }

    fn meta(&self, key: &str) -> &str {
        &self.footer.iter().find(|(k, _)| k == key).unwrap().1
    }
}

fn gamma(beta: f64) -> f64 {
    1.0 / (1.0 - beta * beta).sqrt()
}

#[test]
fn beta_sweep_matches_golden_file() {
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/beta_sweep_gray.csv"),
    )
    .unwrap();
    let text = ok(&[
        "sweep", "--axis", "beta", "--from", "0", "--to", "0.9", "--points", "4", "--profile",
        "gray:1.0",
    ]);
    let (got, want) = (Table::parse(&text), Table::parse(&golden));
    assert_eq!(got.header, want.header);
    assert_eq!(got.rows.len(), want.rows.len());
    for (g, w) in got.rows.iter().zip(&want.rows) {
        assert_eq!(g.len(), w.len());
        for (a, b) in g.iter().zip(w) {
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "{x} vs {y}"),
                _ => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn sweep_header_is_fixed() {
    for (axis, from, to, col) in [("beta", "0", "0.5", "beta"), ("t0", "1", "2", "t0"), ("f", "1", "2", "f"), ("a", "0.5", "1", "a")] {
        let text = ok(&["sweep", "--axis", axis, "--from", from, "--to", to, "--points", "2"]);
        assert_eq!(
            text.lines().next().unwrap(),
            format!(
                "{col},t_bar,emitted_flux,absorbed_flux,low_frequency_limit,high_frequency_limit,\
                 planck_einstein,ott_kibble,invariant,status"
            )
        );
    }
}

#[test]
fn beta_sweep_follows_quarter_power_of_gamma() {
    let t = Table::parse(&ok(&[
        "sweep", "--axis", "beta", "--from", "0", "--to", "0.9", "--points", "10", "--t0", "1.7",
    ]));
    for (b, tb) in t.column("beta").iter().zip(t.column("t_bar")) {
        let expected = gamma(*b).powf(0.25) * 1.7;
        assert!((tb - expected).abs() <= 1e-8 * expected, "beta={b}: {tb} vs {expected}");
    }
}

#[test]
fn t0_sweep_is_strictly_increasing() {
    let t = Table::parse(&ok(&[
        "sweep", "--axis", "t0", "--from", "0.2", "--to", "5", "--points", "8", "--beta", "0.6",
        "--profile", "band:3:0.3",
    ]));
    let tb = t.column("t_bar");
    assert_eq!(tb.len(), 8);
    assert!(tb.windows(2).all(|w| w[1] > w[0]), "{tb:?}");
}

#[test]
fn band_sweep_starts_at_low_frequency_limit() {
    let t = Table::parse(&ok(&[
        "sweep", "--axis", "f", "--from", "1e-3", "--to", "50", "--points", "6", "--spacing",
        "log", "--beta", "0.6",
    ]));
    let f = t.column("f");
    assert_eq!(f[0], 1e-3);
    assert_eq!(f[5], 50.0);
    let tb = t.column("t_bar");
    assert!((tb[0] - 0.8889).abs() < 1e-3, "{}", tb[0]);
    assert!(tb.windows(2).all(|w| w[1] > w[0]));
    let high = t.column("high_frequency_limit");
    assert!(tb.iter().zip(&high).all(|(a, b)| a < b));
}

#[test]
fn sweep_reports_failed_points_and_continues() {
    let out = run(&["sweep", "--axis", "a", "--from", "0", "--to", "1", "--points", "3", "--beta", "0.6"]);
    assert_eq!(out.status.code(), Some(4));
    let t = Table::parse(&stdout(&out));
    assert_eq!(t.rows.len(), 3);
    assert!(t.rows[0].last().unwrap().starts_with("error:"));
    assert_eq!(t.rows[1].last().unwrap(), "ok");
    assert_eq!(t.rows[2].last().unwrap(), "ok");
}

#[test]
fn fixed_point_reports_boosted_temperature() {
    let t = Table::parse(&ok(&["fixed-point", "--beta", "0.6", "--t0", "1.0", "--profile", "gray:1.0"]));
    let tb = t.column("t_bar")[0];
    assert!((tb - 1.057371).abs() < 1e-6);
    assert_eq!(t.column("ott_kibble")[0], 1.25);

    let rest = Table::parse(&ok(&["fixed-point", "--t0", "2.5"]));
    assert!((rest.column("t_bar")[0] - 2.5).abs() < 1e-12);
}

#[test]
fn fixed_point_json_is_one_object() {
    let text = ok(&["fixed-point", "--beta", "0.6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let obj = v.as_object().unwrap();
    for key in ["t_bar", "residual", "iterations", "planck_einstein", "ott_kibble", "invariant"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert!((obj["t_bar"].as_f64().unwrap() - gamma(0.6).powf(0.25)).abs() < 1e-9);
}

#[test]
fn evolve_descends_free_energy_to_fixed_point() {
    let t = Table::parse(&ok(&[
        "evolve", "--beta", "0.6", "--profile", "gray:1.0", "--eos", "cv:100", "--t-init", "0.5",
    ]));
    assert_eq!(t.header, ["t", "energy", "temperature", "free_energy"]);
    let f = t.column("free_energy");
    assert!(f.len() > 2);
    assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs()), "F increased");
    let last = *t.column("temperature").last().unwrap();
    assert!((last - 1.057371).abs() < 1e-6, "{last}");
    assert_eq!(t.meta("converged"), "true");
    assert!(t.meta("terminal_gap").parse::<f64>().unwrap() < 1e-6);
}

#[test]
fn evolve_from_fixed_point_is_a_single_row() {
    let start = format!("{}", gamma(0.6).powf(0.25));
    let t = Table::parse(&ok(&["evolve", "--beta", "0.6", "--t-init", &start]));
    assert_eq!(t.rows.len(), 1);
}

#[test]
fn entropy_probe_grows_linearly() {
    let t = Table::parse(&ok(&[
        "entropy-probe", "--beta", "0.6", "--t0", "1", "--magnitudes", "0,10,20",
    ]));
    let s = t.column("sup_entropy");
    assert!((s[1] - s[0] - 6.0).abs() < 1e-9);
    assert!((s[2] - s[1] - 6.0).abs() < 1e-9);
    let fitted: f64 = t.meta("fitted_slope").parse().unwrap();
    assert!((fitted - 0.6).abs() < 1e-12);
    let analytic: f64 = t.meta("analytic_slope").parse().unwrap();
    assert!((analytic - 0.6).abs() < 1e-15);
}

#[test]
fn mc_validate_gray_rest_frame_has_zero_z() {
    let text = ok(&["mc-validate", "--profile", "gray:1.0", "--samples", "10000"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for flux in ["emitted", "absorbed"] {
        assert_eq!(v[flux]["z_score"].as_f64(), Some(0.0), "{flux}");
        assert_eq!(v[flux]["mc_std_error"].as_f64(), Some(0.0), "{flux}");
    }
}

#[test]
fn mc_validate_band_agrees_with_quadrature() {
    let text = ok(&["mc-validate", "--profile", "band:2:0.5", "--beta", "0.6", "--samples", "200000"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for flux in ["emitted", "absorbed"] {
        let z = v[flux]["z_score"].as_f64().unwrap();
        assert!(z.abs() <= 4.0, "{flux}: z = {z}");
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let cases: [&[&str]; 3] = [
        &["mc-validate", "--beta", "0.6", "--profile", "band:2:0.5", "--seed", "7", "--samples", "50000"],
        &["sweep", "--axis", "f", "--from", "0.1", "--to", "10", "--points", "5", "--spacing", "log", "--beta", "0.3"],
        &["evolve", "--beta", "0.3", "--format", "json"],
    ];
    for args in cases {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
    let a = ok(&["mc-validate", "--beta", "0.6", "--seed", "1", "--samples", "20000"]);
    let b = ok(&["mc-validate", "--beta", "0.6", "--seed", "2", "--samples", "20000"]);
    assert_ne!(a, b);
}

#[test]
fn exit_codes_follow_error_class() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["fixed-point", "--beta", "1.5"]), Some(3));
    assert_eq!(code(&["fixed-point", "--profile", "band:3.0"]), Some(2));
    assert_eq!(code(&["fixed-point", "--profile", "plaid:1"]), Some(2));
    assert_eq!(code(&["fixed-point", "--t0", "-1"]), Some(3));
    assert_eq!(code(&["fixed-point", "--profile", "gray:0"]), Some(4));
    assert_eq!(code(&["entropy-probe", "--beta", "0"]), Some(4));
    assert_eq!(code(&["mc-validate", "--samples", "10"]), Some(3));
    assert_eq!(code(&["sweep", "--axis", "beta", "--from", "0", "--to", "1", "--points", "1"]), Some(3));
    assert_eq!(code(&["teleport"]), Some(2));
    assert_eq!(code(&["fixed-point", "--config", "/nonexistent/run.cfg"]), Some(5));

    let out = run(&["fixed-point", "--profile", "band:3.0"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("band:3.0"));
}

#[test]
fn flags_override_config_file_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# boosted gray body\nbeta = 0.6\nt0 = 2\nprofile = gray:0.5\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = Table::parse(&ok(&["fixed-point", "--config", cfg]));
    assert!((from_file.column("t_bar")[0] - 2.0 * gamma(0.6).powf(0.25)).abs() < 1e-9);

    let overridden = Table::parse(&ok(&["fixed-point", "--config", cfg, "--beta", "0"]));
    assert!((overridden.column("t_bar")[0] - 2.0).abs() < 1e-12);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(run(&["fixed-point", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn piecewise_profile_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("profile.txt");
    std::fs::write(&table, "# w a\n0.5 0.4\n2.0 0.9\n6.0 0\n").unwrap();
    let out_path = dir.path().join("nested/fp.json");
    let spec = format!("piecewise:{}", table.display());
    let out = run(&[
        "fixed-point", "--beta", "0.4", "--profile", &spec, "--format", "json", "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let tb = v["t_bar"].as_f64().unwrap();
    let s = (1.0f64 - 0.16).sqrt();
    assert!(tb > 2.0 * s / (1.0 + s) && tb < ((1.4f64) / 0.6).sqrt(), "{tb}");
}

#[test]
fn flux_reports_both_fluxes() {
    let v: serde_json::Value = serde_json::from_str(&ok(&[
        "flux", "--beta", "0.6", "--profile", "gray:1", "--t0", "1", "--temperature", "1",
        "--format", "json",
    ]))
    .unwrap();
    let bb = std::f64::consts::PI.powi(5) / 15.0;
    assert!((v["emitted_flux"].as_f64().unwrap() - bb).abs() < 1e-9 * bb);
    assert!((v["absorbed_flux"].as_f64().unwrap() - 1.25 * bb).abs() < 1e-9 * bb);
}
