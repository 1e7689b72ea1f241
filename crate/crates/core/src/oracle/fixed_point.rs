//! Equilibria found without the closed-form inverse of `f`.
//!
//! Given opponents' fraction `γ'`, the aggregate law
//! `A − E[A|θ̃] = βγ'(θ−θ̃)/(1−αγ')` makes the target variance
//! `β²/((1−αγ')²τ)`. The rate-distortion rule then leaves residual variance
//! `λ/2`, so the responder's fraction is `max(0, 1 − λτ(1−αγ')²/(2β²))`.

use crate::equilibrium::BOUNDARY_RTOL;
use crate::params::GameParams;
use crate::roots::{bisect, golden_max};

pub const DEFAULT_SEEDS: [f64; 3] = [0.01, 0.5, 0.99];
/// Points at which the displacement is scanned for sign changes.
const SCAN_POINTS: usize = 4000;
const ITER_TOL: f64 = 1e-15;
const MAX_ITER: usize = 20_000;
/// Two fixed points closer than this are the same point.
const MERGE_TOL: f64 = 1e-9;

pub fn best_response(gamma_opp: f64, tau: f64, p: &GameParams) -> f64 {
    let d = 1.0 - p.alpha * gamma_opp;
    (1.0 - p.lambda * tau * d * d / (2.0 * p.beta * p.beta)).max(0.0)
}

fn displacement(g: f64, tau: f64, p: &GameParams) -> f64 {
    best_response(g, tau, p) - g
}

/// Damped iteration `γ ← (1−ω)γ + ω·BR(γ)`, halving `ω` whenever a run fails
/// to settle. Returns `None` if no damping converges.
pub fn iterate_best_response(seed: f64, tau: f64, p: &GameParams) -> Option<f64> {
    let mut omega = if p.alpha.abs() > 0.6 { 0.5 } else { 1.0 };
    while omega >= 1.0 / 256.0 {
        let mut g = seed;
        for _ in 0..MAX_ITER {
            let next = (1.0 - omega) * g + omega * best_response(g, tau, p);
            if (next - g).abs() <= ITER_TOL {
                return Some(next);
            }
            g = next;
        }
        omega *= 0.5;
    }
    None
}

/// Fixed points of the best-response map at finite `τ`: limits of damped
/// iteration from `seeds`, roots of the displacement `BR(γ) − γ` located by
/// scanning and bisection, and `γ = 0` when it is a fixed point.
pub fn best_response_fixed_points(tau: f64, p: &GameParams, seeds: &[f64]) -> Vec<f64> {
    let mut found: Vec<f64> = Vec::new();
    if best_response(0.0, tau, p) == 0.0 {
        found.push(0.0);
    }
    let top = 1.0 - 1e-15;
    let grid: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| top * i as f64 / SCAN_POINTS as f64)
        .collect();
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (da, db) = (displacement(a, tau, p), displacement(b, tau, p));
        if da == 0.0 && a > 0.0 {
            found.push(a);
        } else if da * db < 0.0 {
            if let Ok(r) = bisect(|g| displacement(g, tau, p), a, b, 0.0) {
                found.push(r);
            }
        }
    }
    for &s in seeds {
        if let Some(g) = iterate_best_response(s, tau, p) {
            found.push(g);
        }
    }
    found.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for g in found {
        match out.last() {
            Some(&last) if (g - last).abs() <= MERGE_TOL => {}
            _ => out.push(g),
        }
    }
    out
}

/// Acquiring solutions of `τ = f(γ)` by bisection on the two monotone pieces
/// of `f`, with the maximiser of `f` located by golden-section search.
/// Solutions within `1e−12` relative of the maximum, or on a rising piece
/// shorter than `1e−6`, are not resolved.
pub fn bisection_roots(tau: f64, p: &GameParams) -> Vec<f64> {
    let f = |g: f64| {
        let d = 1.0 - p.alpha * g;
        2.0 * p.beta * p.beta * (1.0 - g) / (p.lambda * d * d)
    };
    let top = 1.0 - 1e-16;
    // A rise too short to show at 1e−6 is treated as none.
    let (peak, fmax) = if f(1e-6) <= f(0.0) {
        (0.0, f(0.0))
    } else {
        golden_max(f, 0.0, top, 1e-13)
    };
    let h = |g: f64| f(g) - tau;
    let mut out = Vec::new();
    if tau > fmax * (1.0 + BOUNDARY_RTOL) {
        return out;
    }
    if peak > 0.0 && tau < f(0.0) {
        // No solution on the rising piece.
    } else if peak > 0.0 {
        if let Ok(r) = bisect(h, 0.0, peak, 0.0) {
            if r > 0.0 {
                out.push(r);
            }
        }
    }
    if let Ok(r) = bisect(h, peak, top, 0.0) {
        if r > 0.0 && out.last().is_none_or(|&l| (r - l).abs() > MERGE_TOL) {
            out.push(r);
        }
    }
    out
}
