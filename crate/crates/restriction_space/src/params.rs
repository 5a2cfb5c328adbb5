use crate::tau::TauMode;
use crate::RestrictionError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    /// Bricks of side 30, with restarts on unbalanced `π₂` picks.
    Standard,
    /// Small bricks, and no balance restarts when picking `π₂`.
    Toy,
}

pub const STANDARD_BRICK: i32 = 30;
pub const TOY_BRICK: i32 = 10;
pub const DEFAULT_RESTART_CAP: usize = 1000;
/// Largest group size the almost-bijection tables are built for.
pub const MAX_GROUP: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams {
    pub n: i32,
    pub delta: usize,
    pub r: usize,
    #[serde(default = "default_brick")]
    pub brick: i32,
    /// The constant in `k = C (n/T)² ln n`. Has no canonical value.
    pub c: f64,
    #[serde(default = "default_cap")]
    pub restart_cap: usize,
    #[serde(default)]
    pub profile: Profile,
    /// Defaults to restarts in the standard profile and the conditioned chain
    /// in the toy profile.
    #[serde(default)]
    pub tau: Option<TauMode>,
}

fn default_brick() -> i32 {
    STANDARD_BRICK
}

fn default_cap() -> usize {
    DEFAULT_RESTART_CAP
}

impl LayoutParams {
    pub fn standard(n: i32, delta: usize, r: usize) -> Self {
        LayoutParams { n, delta, r, brick: STANDARD_BRICK, c: 1.0, restart_cap: DEFAULT_RESTART_CAP, profile: Profile::Standard, tau: None }
    }

    /// Standard constants with an `m × m` reduced grid.
    pub fn standard_with_side(m: usize, delta: usize, r: usize) -> Self {
        let t = 5 * delta * delta * r * STANDARD_BRICK as usize;
        Self::standard(1 + (m * t) as i32, delta, r)
    }

    /// Toy profile on a 3 × 3 reduced grid.
    pub fn toy(delta: usize, r: usize) -> Self {
        let t = 5 * delta * delta * r * TOY_BRICK as usize;
        LayoutParams {
            n: 1 + 3 * t as i32,
            delta,
            r,
            brick: TOY_BRICK,
            c: 1.0,
            restart_cap: DEFAULT_RESTART_CAP,
            profile: Profile::Toy,
            tau: None,
        }
    }

    pub fn tau_mode(&self) -> TauMode {
        self.tau.unwrap_or(match self.profile {
            Profile::Standard => TauMode::Restart,
            Profile::Toy => TauMode::Conditioned,
        })
    }

    /// Super-square side in bricks, `5Δ²R`.
    pub fn super_bricks(&self) -> i32 {
        (5 * self.delta * self.delta * self.r) as i32
    }

    /// Mini-square side in bricks, `4ΔR`.
    pub fn mini_bricks(&self) -> i32 {
        (4 * self.delta * self.r) as i32
    }

    /// `T = 5Δ²R · B`, which is `150Δ²R` for standard bricks.
    pub fn super_side(&self) -> i32 {
        self.super_bricks() * self.brick
    }

    pub fn mini_side(&self) -> i32 {
        self.mini_bricks() * self.brick
    }

    pub fn survivor_side(&self) -> i32 {
        self.mini_side() + 1
    }

    /// Side of the reduced grid.
    pub fn m(&self) -> usize {
        ((self.n - 1) / self.super_side()) as usize
    }

    pub fn bricks_per_side(&self) -> i32 {
        (self.n - 1) / self.brick
    }

    pub fn group_size(&self) -> usize {
        2 * self.r
    }

    /// `C (n/T)² ln n`, rounded.
    pub fn default_k(&self) -> usize {
        let m = self.m() as f64;
        (self.c * m * m * (self.n as f64).ln()).round() as usize
    }

    pub fn validate(&self) -> Result<(), RestrictionError> {
        let bad = |m: String| Err(RestrictionError::Params(m));
        if self.delta == 0 || self.r == 0 {
            return bad(format!("Δ = {} and R = {} must be positive", self.delta, self.r));
        }
        if 2 * self.r > MAX_GROUP {
            return bad(format!("2R = {} exceeds {MAX_GROUP}", 2 * self.r));
        }
        if self.brick < 10 || self.brick % 4 != 2 {
            return bad(format!("brick side {} must be 2 modulo 4 and at least 10", self.brick));
        }
        if self.n < 1 || self.n % 2 == 0 {
            return bad(format!("n = {} must be odd", self.n));
        }
        if (self.n - 1) % self.brick != 0 {
            return bad(format!("n = {} is not 1 modulo {}", self.n, self.brick));
        }
        let t = self.super_side();
        if (self.n - 1) % t != 0 || ((self.n - 1) / t) % 2 == 0 {
            return bad(format!("(n - 1)/T = {}/{t} is not an odd integer", self.n - 1));
        }
        if self.m() < 3 {
            return bad(format!("reduced side {} is below 3", self.m()));
        }
        if self.c.is_nan() || self.c <= 0.0 {
            return bad(format!("C = {} must be positive", self.c));
        }
        Ok(())
    }
}
