use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dispersive_swe::app::scenario::{builtin, parse_scenario, Bathymetry, InitRecipe};
use proptest::prelude::*;

fn dswe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dswe")).args(args).output().unwrap()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn list_names_every_builtin() {
    let out = dswe(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("vacuum_generation"));
}

#[test]
fn run_writes_snapshot_and_log_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = dswe(&["run", "vacuum_generation", "--eps", "0.08", "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let snap = read(&dir.path().join("vacuum_generation_t0.300000.csv"));
    let mut lines = snap.lines();
    assert_eq!(lines.next().unwrap(), "x,h_num,h_ref,q_num,q_ref,re_psi,im_psi,b,eta_num,eta_ref");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(rows.iter().all(|r| r.len() == 10 && r[0].abs() <= 2.0 + 1e-12));
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    assert!(rows.iter().all(|r| r[1] >= 0.0));
    let first = snap.lines().nth(1).unwrap();
    let digits = first.split(',').next().unwrap().split('e').next().unwrap();
    assert_eq!(digits.trim_start_matches('-').replace('.', "").len(), 17);

    let log = read(&dir.path().join("vacuum_generation_log.csv"));
    assert!(log.starts_with("t,mass,energy_total,energy_fisher,energy_potential\n"));
    let masses: Vec<f64> = log
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(masses.len(), 2);
    assert!(masses[1] < masses[0]);

    let settings = read(&dir.path().join("vacuum_generation_settings.toml"));
    assert_eq!(parse_scenario(&settings).unwrap(), builtin("vacuum_generation", 0.08).unwrap());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = dswe(&["run", "dam_break_wet", "--eps", "0.1", "--tfinal", "0.2", "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success());
    }
    for name in ["dam_break_wet_t0.200000.csv", "dam_break_wet_log.csv"] {
        assert_eq!(read(&a.path().join(name)), read(&b.path().join(name)));
    }
}

#[test]
fn missing_reference_is_written_as_nan() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = builtin("oscillating_lake", 0.1).unwrap().with_t_final(0.05);
    s.physics.g = 2.0;
    s.output.fields = vec!["h_num".into(), "h_ref".into()];
    let file = dir.path().join("lake.toml");
    fs::write(&file, s.to_toml()).unwrap();
    let out = dswe(&["run", file.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let snap = read(&dir.path().join("oscillating_lake_t0.050000.csv"));
    assert!(snap.starts_with("x,h_num,h_ref\n"));
    assert!(snap.lines().skip(1).all(|l| l.ends_with(",nan")));
}

#[test]
fn initial_snapshot_reproduces_the_riemann_height() {
    let dir = tempfile::tempdir().unwrap();
    let out = dswe(&["run", "dam_break_wet", "--eps", "0.05", "--tfinal", "0", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let snap = read(&dir.path().join("dam_break_wet_t0.000000.csv"));
    let delta = 1.2 * 0.05;
    for line in snap.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let h0 = 0.2 + 0.4 * (1.0 - (v[0] / delta).tanh());
        assert!((v[1] - h0).abs() <= 1e-13, "x = {}", v[0]);
    }
}

#[test]
fn zero_duration_writes_the_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = dswe(&["run", "dam_break_dry", "--eps", "0.1", "--tfinal", "0", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let log = read(&dir.path().join("dam_break_dry_log.csv"));
    assert_eq!(log.lines().count(), 2);
    assert!(dir.path().join("dam_break_dry_t0.000000.csv").exists());
}

#[test]
fn sweep_reports_errors_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dswe(&[
        "sweep",
        "dam_break_dry",
        "--eps-list",
        "0.16,0.08",
        "--norm",
        "L1",
        "--field",
        "height",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# order = "));
    let table = read(&dir.path().join("sweep_dam_break_dry.csv"));
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn bad_input_exits_with_usage_code() {
    assert_eq!(dswe(&["run", "no_such_scenario"]).status.code(), Some(2));
    assert_eq!(dswe(&["run", "dam_break_dry", "--eps", "0"]).status.code(), Some(2));
    assert_eq!(dswe(&["sweep", "plane_wave"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    let text = builtin("dam_break_dry", 0.1).unwrap().to_toml().replace("eps = 0.1", "eps = -0.1");
    fs::write(&file, text).unwrap();
    let out = dswe(&["run", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("physics.eps"));
}

#[test]
fn numeric_abort_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = builtin("dam_break_dry", 0.1).unwrap().with_t_final(0.2);
    s.init = InitRecipe::RiemannTanh {
        h_left: 1e10,
        u_left: 0.0,
        h_right: 0.0,
        u_right: 0.0,
        delta_over_eps: 1.2,
    };
    // The potential phase g h dt / eps overflows to infinity.
    s.physics.g = 1e300;
    let file = dir.path().join("blowup.toml");
    fs::write(&file, s.to_toml()).unwrap();
    let out = dswe(&["run", file.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scenarios_round_trip(
        which in 0usize..7,
        eps in 1e-4f64..0.5,
        dx in 0.01f64..0.5,
        b_max in 0.0f64..2.0,
        times in proptest::collection::vec(0.0f64..5.0, 1..5),
    ) {
        let name = dispersive_swe::app::BUILTINS[which];
        let mut s = builtin(name, eps).unwrap();
        s.discretization.dx_over_eps = dx;
        if let Bathymetry::GaussianBump { .. } = s.domain.bathymetry {
            s.domain.bathymetry = Bathymetry::GaussianBump { b_max };
        }
        let mut times = times;
        times.sort_by(f64::total_cmp);
        s.output.times = times;
        prop_assert_eq!(toml::from_str::<dispersive_swe::app::Scenario>(&s.to_toml()).unwrap(), s);
    }
}
