use crate::{ExperimentConfig, ExperimentError, RoundSummary, TrialReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use restriction_space::{build_layout, sample_full_restriction, LayoutParams};

/// Applies `d` full restrictions in turn. Round `i + 1` lays out a grid of
/// side `m_i`, the reduced side of round `i`, with the same Δ, R and brick.
pub fn run_pipeline(config: &ExperimentConfig) -> Result<TrialReport, ExperimentError> {
    let base = config.layout()?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rounds = Vec::with_capacity(config.d);
    let mut n = base.n;
    for round in 0..config.d {
        let params = LayoutParams { n, ..base.clone() };
        if let Err(e) = params.validate() {
            return Err(ExperimentError::PipelineExhausted { round, n, reason: e.to_string() });
        }
        let layout = build_layout(&params)?;
        let (sigma, sub, reduced) = sample_full_restriction(&layout, &mut rng)?;
        let stats = sub.replacement_stats(&layout);
        if !stats.is_ok() {
            return Err(ExperimentError::Verification(format!("round {round}: substitution shapes {stats:?}")));
        }
        let axioms = sub.check_axioms(&layout, &reduced);
        if !axioms.is_ok() {
            return Err(ExperimentError::Verification(format!("round {round}: axiom images {:?}", axioms.failures)));
        }
        let m = layout.system.m;
        rounds.push(RoundSummary { round, n, reduced_side: m, restarts: sigma.tau.restarts, stats, axioms });
        n = m as i32;
    }
    Ok(TrialReport {
        experiment: "pipeline".into(),
        config: config.clone(),
        trials: Vec::new(),
        rates: Vec::new(),
        rounds,
        final_side: Some(n),
    })
}
