//! Dense grid searches over the disclosure precision.

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::{self, Branch};
use crate::params::{GameParams, Precision, WelfareCoeffs};
use crate::roots::golden_max;
use crate::variants::{self, FisherParams};
use crate::welfare;

/// Finite stand-in for `τ = ∞` on the no-acquisition grid, as a multiple of `f(0)`.
pub const HUGE_FACTOR: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOptimum {
    pub tau: Precision,
    pub welfare: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisclosureGrid {
    /// Best point of the raw grid.
    pub grid: GridOptimum,
    /// Golden-section refinement around the best acquisition grid point;
    /// equals `grid` when the best point is a no-acquisition one.
    pub refined: GridOptimum,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Acquisition grid `[τ_θ, τ̄]` with `f(0)` and `τ̄` included.
fn acquisition_grid(p: &GameParams, n: usize) -> Vec<f64> {
    let tbar = equilibrium::max_precision(p);
    let mut g = if tbar > p.tau_theta {
        linspace(p.tau_theta, tbar, n)
    } else {
        vec![p.tau_theta]
    };
    let f0 = p.f_zero();
    if f0 > p.tau_theta && f0 < tbar {
        g.push(f0);
    }
    g.sort_by(f64::total_cmp);
    g
}

fn best(points: impl IntoIterator<Item = GridOptimum>) -> GridOptimum {
    points
        .into_iter()
        .fold(None::<GridOptimum>, |acc, c| match acc {
            Some(a) if a.welfare >= c.welfare => Some(a),
            _ => Some(c),
        })
        .expect("grid is never empty")
}

fn no_acquisition_best<F: Fn(Precision) -> f64 + Sync>(
    w0: F,
    p: &GameParams,
    n: usize,
) -> GridOptimum {
    let lo = p.f_zero().max(p.tau_theta);
    let mut pts: Vec<GridOptimum> = logspace(lo, HUGE_FACTOR * p.f_zero(), n)
        .into_iter()
        .map(|t| GridOptimum {
            tau: Precision::Finite(t),
            welfare: w0(Precision::Finite(t)),
        })
        .collect();
    pts.push(GridOptimum {
        tau: Precision::Infinite,
        welfare: w0(Precision::Infinite),
    });
    best(pts)
}

/// Welfare-maximising disclosure over an `n`-point grid on `[τ_θ, τ̄]` for
/// the envelope and an `n`-point log grid on `[f(0), 10¹²f(0)]` plus `∞` for
/// `W₀`, then refined by golden-section search between the neighbours of
/// the best acquisition point.
pub fn disclosure_grid_optimum(w: &WelfareCoeffs, p: &GameParams, n: usize) -> DisclosureGrid {
    let env = |t: f64| {
        welfare::envelope(Precision::Finite(t), w, p)
            .map(|e| e.welfare)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let taus = acquisition_grid(p, n);
    let vals: Vec<f64> = taus.par_iter().map(|&t| env(t)).collect();
    let (ib, &vb) = vals
        .iter()
        .enumerate()
        .fold(None::<(usize, &f64)>, |acc, (i, v)| match acc {
            Some((_, a)) if a >= v => acc,
            _ => Some((i, v)),
        })
        .expect("grid is never empty");
    let acq = GridOptimum {
        tau: Precision::Finite(taus[ib]),
        welfare: vb,
    };
    let zero = no_acquisition_best(|t| welfare::w_zero(t, w, p), p, n);
    let grid = best([acq, zero]);

    let lo = taus[ib.saturating_sub(1)];
    let hi = taus[(ib + 1).min(taus.len() - 1)];
    let (tr, wr) = golden_max(env, lo, hi, 1e-13 * hi.max(1.0));
    let refined_acq = if wr > acq.welfare {
        GridOptimum {
            tau: Precision::Finite(tr),
            welfare: wr,
        }
    } else {
        acq
    };
    DisclosureGrid {
        grid,
        refined: best([refined_acq, zero]),
    }
}

/// Grid search for Fisher-cost disclosure: the best `W^F₊` over `Γ(τ)` on
/// `[τ_θ, τ̄]` against `W₀` on `[f(0), ∞]`.
pub fn fisher_grid_optimum(
    w: &WelfareCoeffs,
    fp: &FisherParams,
    p: &GameParams,
    n: usize,
) -> GridOptimum {
    let acq: Vec<GridOptimum> = acquisition_grid(p, n)
        .par_iter()
        .map(|&t| {
            let set = equilibrium::branch_set(Precision::Finite(t), p);
            let v = [Branch::Hi, Branch::Lo]
                .iter()
                .filter_map(|&b| set.get(b))
                .filter_map(|g| variants::fisher_welfare(g, w, fp, p).ok())
                .fold(f64::NEG_INFINITY, f64::max);
            GridOptimum {
                tau: Precision::Finite(t),
                welfare: v,
            }
        })
        .collect();
    let zero = no_acquisition_best(|t| welfare::w_zero(t, w, p), p, n);
    best(acq.into_iter().chain([zero]))
}
