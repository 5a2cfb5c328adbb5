use crate::ExperimentError;
use restriction_space::{LayoutParams, Profile, TauMode, MAX_GROUP, TOY_BRICK};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use switching_engine::{splitmix64, DnfSpec};

/// Switching trials run on the bare path system of an `m × m` reduced grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwitchingConfig {
    pub m: usize,
    pub deltas: Vec<usize>,
    pub r: usize,
    /// Requested `π₂` pairs; forced to 0 at Δ = 1.
    pub k: usize,
    pub terms: usize,
    /// Probes per term.
    pub t: usize,
    pub arity: u8,
    /// A trial fails when a canonical tree needs depth above `2s`.
    pub s: usize,
    pub ell: usize,
    /// DNFs per trial, all over the same restriction.
    pub families: usize,
    /// Also build the common tree of the families.
    pub common: bool,
    pub restart_cap: usize,
    pub tau: TauMode,
}

impl Default for SwitchingConfig {
    fn default() -> Self {
        SwitchingConfig {
            m: 5,
            deltas: vec![1, 2],
            r: 2,
            k: 4,
            terms: 6,
            t: 3,
            arity: 2,
            s: 4,
            ell: 2,
            families: 1,
            common: false,
            restart_cap: 200,
            tau: TauMode::Conditioned,
        }
    }
}

impl SwitchingConfig {
    pub fn dnf(&self) -> DnfSpec {
        DnfSpec { terms: self.terms, width: self.t, arity: self.arity }
    }

    /// Toy-brick layout parameters with this reduced side.
    pub fn layout_for(&self, delta: usize) -> LayoutParams {
        let t = 5 * delta * delta * self.r * TOY_BRICK as usize;
        LayoutParams {
            n: 1 + (self.m * t) as i32,
            delta,
            r: self.r,
            brick: TOY_BRICK,
            c: 1.0,
            restart_cap: self.restart_cap,
            profile: Profile::Toy,
            tau: Some(self.tau),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Needed by `sample` and `pipeline`. It carries the constant `C`, which
    /// has no default.
    pub layout: Option<LayoutParams>,
    pub trials: usize,
    /// Base seed; trial `i` uses `splitmix64(seed + i)`.
    pub seed: u64,
    /// Explicit per-trial seeds; when present they replace `trials` and `seed`.
    pub seeds: Vec<u64>,
    pub switching: SwitchingConfig,
    /// Pipeline rounds.
    pub d: usize,
    pub output: OutputPaths,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            layout: None,
            trials: 1000,
            seed: 0,
            seeds: Vec::new(),
            switching: SwitchingConfig::default(),
            d: 1,
            output: OutputPaths::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn trial_seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            (0..self.trials as u64).map(|i| splitmix64(self.seed.wrapping_add(i))).collect()
        } else {
            self.seeds.clone()
        }
    }

    pub fn layout(&self) -> Result<&LayoutParams, ExperimentError> {
        let l = self.layout.as_ref().ok_or_else(|| ExperimentError::Config("no layout parameters given".into()))?;
        l.validate()?;
        Ok(l)
    }

    pub fn validate_switching(&self) -> Result<(), ExperimentError> {
        let sw = &self.switching;
        let bad = |m: String| Err(ExperimentError::Config(m));
        if sw.deltas.is_empty() {
            return bad("no Δ values".into());
        }
        if sw.m.is_multiple_of(2) || !(3..=11).contains(&sw.m) {
            return bad(format!("reduced side {} must be odd and in 3..=11", sw.m));
        }
        if sw.arity == 0 {
            return bad("probe arity must be positive".into());
        }
        if 2 * sw.r > MAX_GROUP {
            return bad(format!("2R = {} exceeds {MAX_GROUP}", 2 * sw.r));
        }
        for &delta in &sw.deltas {
            sw.layout_for(delta).validate()?;
        }
        if self.trial_seeds().is_empty() {
            return bad("no trials".into());
        }
        Ok(())
    }
}
