//! Monte Carlo check of the equilibrium conditional moments.
//!
//! Samples the representative joint distribution of `(θ̃, θ, aᵢ, A)`:
//! `θ̃ ~ N(0, 1/τ_θ − 1/τ)`, `u = θ − θ̃ ~ N(0, 1/τ)`,
//! `A = βθ̃/(1−α) + βγu/(1−αγ)` and
//! `aᵢ = βθ̃/(1−α) + γ(αA + βθ − E[αA+βθ | θ̃]) + ε` with
//! `var ε = var[aᵢ|θ̃]·(1−γ)`. Moments conditional on `θ̃` are moments of
//! the residuals after removing the `θ̃`-conditional means.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::equilibrium::{EquilibriumPoint, Regime};
use crate::error::{Error, Result};
use crate::oracle::report::OracleReport;
use crate::params::{GameParams, Precision};

/// Samples per shard; each shard draws from its own stream of the seed.
pub const SHARD: usize = 1 << 16;
/// Tolerance in standard errors.
pub const SE_MULTIPLE: f64 = 3.0;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Sums {
    n: f64,
    aa: f64,
    bb: f64,
    ab: f64,
    au: f64,
    a: f64,
    x: f64,
    xa: f64,
    xx: f64,
}

impl Sums {
    fn add(self, o: Sums) -> Sums {
        Sums {
            n: self.n + o.n,
            aa: self.aa + o.aa,
            bb: self.bb + o.bb,
            ab: self.ab + o.ab,
            au: self.au + o.au,
            a: self.a + o.a,
            x: self.x + o.x,
            xa: self.xa + o.xa,
            xx: self.xx + o.xx,
        }
    }
}

/// Pairwise sum in index order, independent of how shards were scheduled.
fn pairwise(v: &[Sums]) -> Sums {
    match v.len() {
        0 => Sums::default(),
        1 => v[0],
        n => pairwise(&v[..n / 2]).add(pairwise(&v[n / 2..])),
    }
}

/// Conditional-moment checks for an acquiring equilibrium with `n` samples.
///
/// Reports `var_ai`, `var_A`, `cov_ai_A`, `cov_ai_theta` and the slope and
/// intercept of the regression of the target residual on the action
/// residual (`1` and `0` when actions are optimal), each with a tolerance
/// of three standard errors.
pub fn monte_carlo_moments(
    point: &EquilibriumPoint,
    tau: Precision,
    p: &GameParams,
    n: usize,
    seed: u64,
) -> Result<Vec<OracleReport>> {
    let t = match (point.regime, tau) {
        (Regime::Acquiring, Precision::Finite(t)) => t,
        _ => {
            return Err(Error::Domain {
                what: "gamma",
                value: point.gamma,
                expected: "an acquiring equilibrium at finite tau",
            })
        }
    };
    let g = point.gamma;
    let a = p.alpha;
    let sd_pub = (1.0 / p.tau_theta - 1.0 / t).max(0.0).sqrt();
    let sd_u = (1.0 / t).sqrt();
    let sd_eps = (point.var_ai * (1.0 - g)).sqrt();
    let k_pub = p.beta / (1.0 - a);
    let k_agg = p.beta * g / (1.0 - a * g);

    let shards = n.div_ceil(SHARD);
    let parts: Vec<Sums> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let m = SHARD.min(n - s * SHARD);
            let mut acc = Sums {
                n: m as f64,
                ..Sums::default()
            };
            for _ in 0..m {
                let z0: f64 = rng.sample(StandardNormal);
                let z1: f64 = rng.sample(StandardNormal);
                let z2: f64 = rng.sample(StandardNormal);
                let pub_sig = sd_pub * z0;
                let u = sd_u * z1;
                let theta = pub_sig + u;
                let agg = k_pub * pub_sig + k_agg * u;
                let target = a * agg + p.beta * theta;
                let target_res = target - k_pub * pub_sig;
                let ai = k_pub * pub_sig + g * target_res + sd_eps * z2;
                // Residuals given the public signal.
                let ai_r = ai - k_pub * pub_sig;
                let agg_r = agg - k_pub * pub_sig;
                acc.aa += ai_r * ai_r;
                acc.bb += agg_r * agg_r;
                acc.ab += ai_r * agg_r;
                acc.au += ai_r * (theta - pub_sig);
                acc.a += ai_r;
                acc.x += target_res;
                acc.xa += target_res * ai_r;
                acc.xx += target_res * target_res;
            }
            acc
        })
        .collect();
    let s = pairwise(&parts);
    let nf = s.n;

    let var_ai = point.var_ai;
    let var_agg = point.var_a;
    let cov_aa = point.cov_ai_a;
    let cov_at = point.cov_ai_theta;
    let var_u = 1.0 / t;
    let se_var = |v: f64| v * (2.0 / nf).sqrt();
    let se_cov = |vx: f64, vy: f64, c: f64| ((vx * vy + c * c) / nf).sqrt();

    // Regression of the target residual on the action residual.
    let mean_a = s.a / nf;
    let mean_x = s.x / nf;
    let sxx_a = s.aa - nf * mean_a * mean_a;
    let slope = (s.xa - nf * mean_a * mean_x) / sxx_a;
    let intercept = mean_x - slope * mean_a;
    let var_x = var_ai / g;
    let var_e = (var_x - var_ai).max(0.0);
    let se_slope = (var_e / (nf * var_ai)).sqrt();
    let se_intercept = (var_e / nf).sqrt();

    let k = SE_MULTIPLE;
    let reports = vec![
        OracleReport::absolute("mc/var_ai", var_ai, s.aa / nf, k * se_var(var_ai)),
        OracleReport::absolute("mc/var_A", var_agg, s.bb / nf, k * se_var(var_agg)),
        OracleReport::absolute(
            "mc/cov_ai_A",
            cov_aa,
            s.ab / nf,
            k * se_cov(var_ai, var_agg, cov_aa),
        ),
        OracleReport::absolute(
            "mc/cov_ai_theta",
            cov_at,
            s.au / nf,
            k * se_cov(var_ai, var_u, cov_at),
        ),
        OracleReport::absolute("mc/regression_slope", 1.0, slope, k * se_slope),
        OracleReport::absolute("mc/regression_intercept", 0.0, intercept, k * se_intercept),
    ];
    Ok(reports.into_iter().map(|r| r.with_seed(seed)).collect())
}
