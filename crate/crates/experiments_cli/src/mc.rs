use crate::{ExperimentConfig, ExperimentError, RateEstimate, TrialReport, TrialRow};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use restriction_space::{sample_partial_on, PartialOptions, PathSystem, Profile};
use switching_engine::{canonical_tree, common_tree, random_family, Info, RhoWorld};

/// One switching trial: sample `ρ`, draw the DNF families, and build their
/// canonical trees with cap `2s`.
pub fn switch_trial(config: &ExperimentConfig, delta: usize, trial: usize, seed: u64) -> Result<TrialRow, ExperimentError> {
    let sw = &config.switching;
    let sys = PathSystem::new(sw.m, delta, sw.r);
    let opts = PartialOptions {
        k: Some(sw.k),
        c: 1.0,
        n: sw.layout_for(delta).n,
        restart_cap: sw.restart_cap,
        profile: Profile::Toy,
        tau: sw.tau,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = sample_partial_on(&sys, &opts, &mut rng)?;
    let families = random_family(&sys, sw.dnf(), sw.families, &mut rng);
    let world = RhoWorld::new(&sys, &rho)?;
    let cap = 2 * sw.s;
    let mut depth = 0;
    let mut failed = false;
    for parts in &families {
        let ct = canonical_tree(&world, parts, &Info::default(), cap);
        failed |= ct.exceeded;
        depth = depth.max(if ct.exceeded { cap + 1 } else { ct.tree.depth() });
    }
    let common_depth = sw.common.then(|| {
        let ct = common_tree(&world, &families, sw.ell, 4 * cap);
        if ct.exceeded { 4 * cap + 1 } else { ct.tree.depth() }
    });
    let restarts = rho.restarts + rho.quad.tau.restarts;
    Ok(TrialRow {
        experiment: "switch-mc".into(),
        trial,
        seed,
        delta,
        restarts,
        accepted: restarts == 0,
        k_forced_zero: rho.k_forced_zero,
        canonical_depth: depth,
        common_depth,
        failed,
    })
}

/// Failure rate of the canonical tree (depth above `2s`) for each Δ, on the
/// same seeds. A depth above the cap is recorded as `2s + 1`.
pub fn run_switch_mc(config: &ExperimentConfig) -> Result<TrialReport, ExperimentError> {
    config.validate_switching()?;
    let seeds = config.trial_seeds();
    let mut rows = Vec::with_capacity(seeds.len() * config.switching.deltas.len());
    let mut rates = Vec::new();
    for &delta in &config.switching.deltas {
        let batch: Vec<TrialRow> = seeds
            .par_iter()
            .enumerate()
            .map(|(i, &seed)| {
                switch_trial(config, delta, i, seed).map_err(|e| ExperimentError::Trial { seed, source: Box::new(e) })
            })
            .collect::<Result<_, _>>()?;
        let fails = batch.iter().filter(|r| r.failed).count();
        let restarted = batch.iter().filter(|r| !r.accepted).count();
        rates.push(RateEstimate::new(format!("failure delta={delta}"), fails, batch.len()));
        rates.push(RateEstimate::new(format!("restart delta={delta}"), restarted, batch.len()));
        rows.extend(batch);
    }
    Ok(TrialReport {
        experiment: "switch-mc".into(),
        config: config.clone(),
        trials: rows,
        rates,
        rounds: Vec::new(),
        final_side: None,
    })
}
