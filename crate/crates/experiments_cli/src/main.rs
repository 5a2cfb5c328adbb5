use clap::{Args, Parser, Subcommand};
use experiments_cli::{run_pipeline, run_switch_mc, ExperimentConfig, ExperimentError, TrialReport};
use formula_core::{check_proof, FregeProof};
use grid_core::{find_negative_certificate, tile, Figure};
use matching_engine::well_cover;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use restriction_space::{
    build_layout, sample_full_restriction, sample_partial_on, LayoutParams, PartialOptions, PathSystem, Profile,
};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "experiments", about = "Restriction, switching and proof-checking experiments on grid matchings")]
struct Cli {
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the full JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write per-trial CSV rows here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tile a figure or print a Hall-violator certificate.
    TileCheck { figure: PathBuf },
    /// Well cover of a multiset of points in [1, n].
    Wellcover {
        #[arg(long, default_value_t = 200)]
        n: i64,
        /// Comma-separated points.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        points: Vec<i64>,
    },
    /// Sample one restriction.
    Sample(SampleArgs),
    /// Monte Carlo estimate of the canonical-tree failure rate.
    SwitchMc(SwitchArgs),
    /// Compose `d` full restrictions.
    Pipeline {
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Check a Frege proof file.
    CheckProof {
        proof: PathBuf,
        /// Depth limit; defaults to the `depth` line of the file.
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long)]
    n: Option<i32>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    brick: Option<i32>,
    /// The constant C in k = C m² ln n.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_parser = parse_profile)]
    profile: Option<Profile>,
    #[arg(long)]
    restart_cap: Option<usize>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, conflicts_with = "partial", required_unless_present = "partial")]
    full: bool,
    #[arg(long)]
    partial: bool,
    #[command(flatten)]
    layout: LayoutArgs,
    /// Number of π₂ pairs; defaults to C m² ln n.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct SwitchArgs {
    #[arg(long)]
    trials: Option<usize>,
    /// File with one seed per line; replaces `--trials` and `--seed`.
    #[arg(long)]
    seeds: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<usize>>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    terms: Option<usize>,
    /// Probes per term.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    families: Option<usize>,
    #[arg(long)]
    common: bool,
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    match s {
        "standard" => Ok(Profile::Standard),
        "toy" => Ok(Profile::Toy),
        _ => Err(format!("unknown profile {s:?}; expected standard or toy")),
    }
}

impl LayoutArgs {
    /// Layout from the config with flags applied. Without a config layout
    /// the flags start from the standard constants at n = 451, Δ = R = 1.
    fn apply(&self, base: Option<LayoutParams>) -> (LayoutParams, bool) {
        let c_given = base.is_some() || self.c.is_some();
        let mut p = base.unwrap_or_else(|| LayoutParams::standard(451, 1, 1));
        if let Some(x) = self.n {
            p.n = x;
        }
        if let Some(x) = self.delta {
            p.delta = x;
        }
        if let Some(x) = self.r {
            p.r = x;
        }
        if let Some(x) = self.profile {
            p.profile = x;
            if self.brick.is_none() && x == Profile::Toy {
                p.brick = restriction_space::TOY_BRICK;
            }
        }
        if let Some(x) = self.brick {
            p.brick = x;
        }
        if let Some(x) = self.c {
            p.c = x;
        }
        if let Some(x) = self.restart_cap {
            p.restart_cap = x;
        }
        (p, c_given)
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, ExperimentError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.json.is_some() {
        cfg.output.json = cli.json.clone();
    }
    if cli.csv.is_some() {
        cfg.output.csv = cli.csv.clone();
    }
    Ok(cfg)
}

fn print(value: &serde_json::Value) -> Result<(), ExperimentError> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(value)?) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn finish(report: &TrialReport) -> Result<(), ExperimentError> {
    report.write_outputs()?;
    print(&json!({
        "experiment": report.experiment,
        "rates": report.rates,
        "rounds": report.rounds,
        "final_side": report.final_side,
    }))
}

fn run(cli: &Cli) -> Result<(), ExperimentError> {
    let mut cfg = load_config(cli)?;
    match &cli.command {
        Command::TileCheck { figure } => {
            let fig = Figure::parse(&std::fs::read_to_string(figure)?)
                .map_err(|e| ExperimentError::Config(format!("{}: {e}", figure.display())))?;
            let tiling = tile(&fig);
            let cert = find_negative_certificate(&fig);
            print(&json!({ "cells": fig.len(), "tiling": tiling, "certificate": cert }))?;
            match (tiling.is_some(), &cert) {
                (true, None) => Ok(()),
                (false, Some(c)) if c.verify(&fig) => Err(ExperimentError::Verification("figure has no tiling".into())),
                _ => Err(ExperimentError::Verification("tiling and certificate disagree".into())),
            }
        }
        Command::Wellcover { n, points } => {
            let cover = well_cover(points, *n).map_err(|e| ExperimentError::Config(e.to_string()))?;
            let ok = cover.well_covers(points);
            print(&json!({ "intervals": cover.intervals(), "total": cover.total_size(), "well_covers": ok }))?;
            if ok {
                Ok(())
            } else {
                Err(ExperimentError::Verification("cover is not a well cover".into()))
            }
        }
        Command::Sample(args) => {
            let (params, c_given) = args.layout.apply(cfg.layout.take());
            params.validate()?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            if args.full {
                let layout = build_layout(&params)?;
                let (sigma, sub, reduced) = sample_full_restriction(&layout, &mut rng)?;
                let stats = sub.replacement_stats(&layout);
                let axioms = sub.check_axioms(&layout, &reduced);
                print(&json!({ "layout": layout.summary(), "restriction": sigma, "stats": stats, "axioms": axioms }))?;
                if !stats.is_ok() || !axioms.is_ok() {
                    return Err(ExperimentError::Verification("restriction fails its checks".into()));
                }
                Ok(())
            } else {
                if args.k.is_none() && !c_given {
                    return Err(ExperimentError::Config("k = C m² ln n needs --c, --k or a config layout".into()));
                }
                let sys = PathSystem::new(params.m(), params.delta, params.r);
                let opts = PartialOptions {
                    k: args.k,
                    c: params.c,
                    n: params.n,
                    restart_cap: params.restart_cap,
                    profile: params.profile,
                    tau: params.tau_mode(),
                };
                let rho = sample_partial_on(&sys, &opts, &mut rng)?;
                print(&json!({ "params": params, "restriction": rho }))
            }
        }
        Command::SwitchMc(a) => {
            if let Some(path) = &a.seeds {
                cfg.seeds = std::fs::read_to_string(path)?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(|l| l.parse().map_err(|_| ExperimentError::Config(format!("bad seed {l:?}"))))
                    .collect::<Result<_, _>>()?;
            }
            let sw = &mut cfg.switching;
            macro_rules! set {
                ($($f:ident),*) => { $( if let Some(x) = a.$f.clone() { sw.$f = x; } )* };
            }
            set!(m, deltas, r, k, terms, t, s, ell, families);
            sw.common |= a.common;
            if let Some(t) = a.trials {
                cfg.trials = t;
            }
            finish(&run_switch_mc(&cfg)?)
        }
        Command::Pipeline { layout, d } => {
            let (params, _) = layout.apply(cfg.layout.take());
            cfg.layout = Some(params);
            if let Some(d) = d {
                cfg.d = *d;
            }
            finish(&run_pipeline(&cfg)?)
        }
        Command::CheckProof { proof, depth } => {
            let file = FregeProof::parse(&std::fs::read_to_string(proof)?)
                .map_err(|e| ExperimentError::Config(format!("{}: {e}", proof.display())))?;
            let d = depth
                .or(file.depth)
                .ok_or_else(|| ExperimentError::Config("no depth limit in the file or on the command line".into()))?;
            match check_proof(&file.proof, &file.axioms, d) {
                Ok(()) => print(&json!({ "lines": file.proof.len(), "depth": d, "valid": true })),
                Err(e) => {
                    print(&json!({ "lines": file.proof.len(), "depth": d, "valid": false, "line": e.line, "reason": format!("{:?}", e.reason) }))?;
                    Err(ExperimentError::Verification(format!("line {}: {:?}", e.line, e.reason)))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
