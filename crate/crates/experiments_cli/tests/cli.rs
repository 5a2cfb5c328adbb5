use experiments_cli::*;
use proptest::prelude::*;
use restriction_space::LayoutParams;
use std::path::PathBuf;
use std::process::Command;

fn small_mc(trials: usize) -> ExperimentConfig {
    ExperimentConfig { trials, seed: 9, ..ExperimentConfig::default() }
}

fn pipeline_config(d: usize) -> ExperimentConfig {
    ExperimentConfig { layout: Some(LayoutParams::standard(451, 1, 1)), d, seed: 3, ..ExperimentConfig::default() }
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("experiments_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_experiments"))
}

#[test]
fn switch_mc_is_deterministic_and_counts_every_trial() {
    let cfg = small_mc(60);
    let a = run_switch_mc(&cfg).unwrap();
    let b = run_switch_mc(&cfg).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    assert_eq!(a.trials.len(), 60 * cfg.switching.deltas.len());
    for r in &a.rates {
        assert_eq!(r.trials, 60);
        assert!(r.ci_low <= r.rate && r.rate <= r.ci_high);
    }
    assert_eq!(a.to_csv().unwrap().lines().count(), 1 + a.trials.len());
}

#[test]
fn explicit_seeds_replace_the_trial_count() {
    let mut cfg = small_mc(1000);
    cfg.seeds = vec![5, 17, 5];
    let r = run_switch_mc(&cfg).unwrap();
    assert_eq!(r.rate("failure delta=1").unwrap().trials, 3);
    let rows: Vec<_> = r.trials.iter().filter(|t| t.delta == 1).collect();
    assert_eq!(rows[0].canonical_depth, rows[2].canonical_depth);
    assert_eq!(rows[1].seed, 17);
}

#[test]
fn constant_parts_never_fail() {
    let mut cfg = small_mc(50);
    cfg.switching.t = 0;
    let r = run_switch_mc(&cfg).unwrap();
    assert!(r.rates.iter().filter(|x| x.label.starts_with("failure")).all(|x| x.failures == 0 && x.rate == 0.0));
    assert!(r.trials.iter().all(|t| t.canonical_depth == 0));
}

#[test]
fn common_tree_depths_are_reported() {
    let mut cfg = small_mc(10);
    cfg.switching.common = true;
    cfg.switching.families = 2;
    let r = run_switch_mc(&cfg).unwrap();
    assert!(r.trials.iter().all(|t| t.common_depth.is_some()));
}

#[test]
fn invalid_switching_configs_are_rejected() {
    for f in [
        |c: &mut ExperimentConfig| c.switching.m = 4,
        |c: &mut ExperimentConfig| c.switching.m = 13,
        |c: &mut ExperimentConfig| c.switching.deltas.clear(),
        |c: &mut ExperimentConfig| c.switching.r = 0,
        |c: &mut ExperimentConfig| c.trials = 0,
    ] {
        let mut cfg = small_mc(5);
        f(&mut cfg);
        assert!(matches!(run_switch_mc(&cfg), Err(ExperimentError::Config(_) | ExperimentError::Restriction(_))));
    }
}

#[test]
fn sampling_cap_errors_carry_the_seed_and_exit_code() {
    let mut cfg = small_mc(3);
    cfg.switching.tau = restriction_space::TauMode::Restart;
    cfg.switching.restart_cap = 0;
    cfg.switching.deltas = vec![2];
    let err = run_switch_mc(&cfg).unwrap_err();
    let ExperimentError::Trial { seed, .. } = &err else { panic!("{err:?}") };
    assert_eq!(*seed, cfg.trial_seeds()[0]);
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn pipeline_rounds() {
    let zero = run_pipeline(&pipeline_config(0)).unwrap();
    assert!(zero.rounds.is_empty());
    assert_eq!(zero.final_side, Some(451));

    let one = run_pipeline(&pipeline_config(1)).unwrap();
    assert_eq!(one.rounds.len(), 1);
    assert_eq!(one.rounds[0].reduced_side, 3);
    assert!(one.rounds[0].stats.is_ok() && one.rounds[0].axioms.is_ok());
    assert_eq!(one.final_side, Some(3));
    assert_eq!(one.to_json().unwrap(), run_pipeline(&pipeline_config(1)).unwrap().to_json().unwrap());

    let err = run_pipeline(&pipeline_config(2)).unwrap_err();
    assert!(matches!(err, ExperimentError::PipelineExhausted { round: 1, n: 3, .. }), "{err}");
    assert!(matches!(run_pipeline(&ExperimentConfig::default()), Err(ExperimentError::Config(_))));
}

#[test]
fn config_json_round_trip_and_unknown_fields() {
    let cfg = pipeline_config(1);
    let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
    let partial = ExperimentConfig::from_json(r#"{"trials": 7, "switching": {"s": 2}}"#).unwrap();
    assert_eq!((partial.trials, partial.switching.s, partial.switching.m), (7, 2, 5));
    assert!(ExperimentConfig::from_json(r#"{"trails": 7}"#).is_err());
    // C has no default inside a layout.
    assert!(ExperimentConfig::from_json(r#"{"layout": {"n": 451, "delta": 1, "r": 1}}"#).is_err());
}

#[test]
fn outputs_are_written() {
    let mut cfg = small_mc(5);
    cfg.output.json = Some(tmp("mc.json"));
    cfg.output.csv = Some(tmp("mc.csv"));
    let r = run_switch_mc(&cfg).unwrap();
    r.write_outputs().unwrap();
    assert_eq!(std::fs::read_to_string(tmp("mc.json")).unwrap(), r.to_json().unwrap());
    assert!(std::fs::read_to_string(tmp("mc.csv")).unwrap().starts_with("experiment,trial,seed,delta"));
}

#[test]
fn binary_exit_codes() {
    let fig = tmp("domino.txt");
    std::fs::write(&fig, "1 1\n1 2\n").unwrap();
    assert_eq!(bin().arg("tile-check").arg(&fig).output().unwrap().status.code(), Some(0));
    std::fs::write(&fig, "1 1\n1 2\n2 2\n").unwrap();
    assert_eq!(bin().arg("tile-check").arg(&fig).output().unwrap().status.code(), Some(2));

    let proof = concat!(env!("CARGO_MANIFEST_DIR"), "/../formula_core/tests/data/depth3.proof");
    assert_eq!(bin().args(["check-proof", proof]).output().unwrap().status.code(), Some(0));
    assert_eq!(bin().args(["check-proof", proof, "--depth", "2"]).output().unwrap().status.code(), Some(2));

    let out = bin().args(["wellcover", "--points", "3,3,150"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["well_covers"], true);

    let cap = bin().args(["sample", "--partial", "--k", "1", "--restart-cap", "0"]).output().unwrap();
    assert_eq!(cap.status.code(), Some(3));
    let partial = bin().args(["sample", "--partial", "--profile", "toy", "--n", "151", "--k", "2", "--seed", "4"]).output().unwrap();
    assert_eq!(partial.status.code(), Some(0));
    assert_eq!(bin().args(["sample", "--partial"]).output().unwrap().status.code(), Some(1));
}

#[test]
fn binary_config_with_flag_overrides() {
    let cfg = tmp("cfg.json");
    std::fs::write(&cfg, r#"{"trials": 4, "seed": 1, "switching": {"deltas": [2]}}"#).unwrap();
    let json = tmp("cli.json");
    let out = bin()
        .args(["switch-mc", "--config"])
        .arg(&cfg)
        .args(["--trials", "6", "--json"])
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["trials"].as_array().unwrap().len(), 6);
    assert_eq!(report["config"]["seed"], 1);

    let seeds = tmp("seeds.txt");
    std::fs::write(&seeds, "# seeds\n11\n12\n").unwrap();
    let run = || {
        let p = tmp("seeded.json");
        bin().args(["switch-mc", "--seeds"]).arg(&seeds).arg("--json").arg(&p).output().unwrap();
        std::fs::read(p).unwrap()
    };
    let first = run();
    assert!(!first.is_empty());
    assert!(first == run(), "seeded reports differ");

    let pipe = bin().args(["pipeline", "--d", "2"]).output().unwrap();
    assert_eq!(pipe.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&pipe.stderr).contains("round 1"));
}

proptest! {
    #[test]
    fn wilson_interval_brackets_the_rate(trials in 1usize..5000, frac in 0.0f64..=1.0) {
        let failures = ((trials as f64) * frac).floor() as usize;
        let r = RateEstimate::new("x", failures, trials);
        prop_assert!(0.0 <= r.ci_low && r.ci_low <= r.rate && r.rate <= r.ci_high && r.ci_high <= 1.0);
        let wider = RateEstimate::new("x", failures / 2, trials / 2 + 1);
        prop_assert!(wider.ci_high - wider.ci_low + 1e-12 >= (r.ci_high - r.ci_low) * 0.5);
    }
}
