//! Optimal precision of public information.
//!
//! Two candidate optima matter. Under acquisition the best precision is
//! `τ*₊ = f(γ*₊)`. Without acquisition `W₀` is monotone in `τ`, so the best
//! precision is `f(0)` or full disclosure. The statistic
//! `χ = ζ − 1 − 2η/(1−α) − log(1/(1−γ*₊))` compares the two.

use serde::Serialize;

use crate::equilibrium;
use crate::params::{GameParams, Precision, WelfareCoeffs};
use crate::welfare::{self, GammaStar};

/// `|χ|` below this is a knife edge.
pub const CHI_TOL: f64 = 1e-10;
/// `|η|` below this is a knife edge.
pub const ETA_TOL: f64 = 1e-12;

/// Optimal precision without information acquisition, `T₀*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TZeroStar {
    /// `{f(0)}`, when `η < 0`.
    AtFZero { tau: f64 },
    /// `[f(0), ∞]`, when `η = 0`.
    Interval { from: f64 },
    /// `{∞}`, when `η > 0`.
    Infinity,
}

pub fn t_zero_star(w: &WelfareCoeffs, p: &GameParams) -> TZeroStar {
    if w.eta.abs() <= ETA_TOL {
        TZeroStar::Interval { from: p.f_zero() }
    } else if w.eta < 0.0 {
        TZeroStar::AtFZero { tau: p.f_zero() }
    } else {
        TZeroStar::Infinity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TPlusStar {
    pub tau: f64,
    pub gamma_star: GammaStar,
    /// `τ_θ ≥ τ*₊`: the prior is already more precise than the optimum, so
    /// the acquisition optimum is the constrained corner `τ_θ`.
    pub assumption_violated: bool,
}

pub fn t_plus_star(w: &WelfareCoeffs, p: &GameParams) -> TPlusStar {
    let gamma_star = welfare::gamma_star(w, p.alpha);
    let tau = equilibrium::f_unchecked(gamma_star.value, p);
    TPlusStar {
        tau,
        gamma_star,
        assumption_violated: p.tau_theta >= tau,
    }
}

/// `χ = ζ − 1 − 2η/(1−α) − log(1/(1−γ*₊))`.
pub fn chi(w: &WelfareCoeffs, alpha: f64) -> f64 {
    let g = welfare::gamma_star(w, alpha).value;
    w.zeta - 1.0 - 2.0 * w.eta / (1.0 - alpha) + (1.0 - g).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OptimalTag {
    /// Full disclosure is uniquely optimal.
    Full,
    /// `τ*₊` is uniquely optimal.
    Partial,
    /// Both are optimal.
    KnifeEdge,
}

impl OptimalTag {
    pub fn as_str(self) -> &'static str {
        match self {
            OptimalTag::Full => "FULL",
            OptimalTag::Partial => "PARTIAL",
            OptimalTag::KnifeEdge => "KNIFE_EDGE",
        }
    }
}

/// Selection between `τ*₊` and full disclosure. The welfare gap
/// `W̄₊(τ*₊) − W₀(∞)` is `(λ/2)χ` when `γ*₊ > 0` and `−(λ/2)η/(1−α)²` when
/// `γ*₊ = 0`, so only the sign of `χ` (resp. `η`) matters.
pub fn optimal_tag(w: &WelfareCoeffs, alpha: f64) -> OptimalTag {
    let gs = welfare::gamma_star(w, alpha);
    let decisive = if gs.interior { chi(w, alpha) } else { -w.eta };
    let tol = if gs.interior { CHI_TOL } else { ETA_TOL };
    if decisive.abs() <= tol {
        OptimalTag::KnifeEdge
    } else if decisive > 0.0 {
        OptimalTag::Partial
    } else {
        OptimalTag::Full
    }
}

/// `W̄₊(τ*₊) − W₀(∞)` in closed form.
pub fn welfare_gap(w: &WelfareCoeffs, p: &GameParams) -> f64 {
    let s = 1.0 - p.alpha;
    if welfare::gamma_star(w, p.alpha).interior {
        0.5 * p.lambda * chi(w, p.alpha)
    } else {
        -0.5 * p.lambda * w.eta / (s * s)
    }
}

/// Set of optimal precisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Optimum {
    Single {
        tau: Precision,
    },
    Pair {
        first: Precision,
        second: Precision,
    },
    /// Every precision in `[from, ∞]`.
    Interval {
        from: f64,
    },
}

impl Optimum {
    pub fn contains(&self, tau: Precision) -> bool {
        match *self {
            Optimum::Single { tau: t } => t == tau,
            Optimum::Pair { first, second } => first == tau || second == tau,
            Optimum::Interval { from } => tau.value() >= from,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisclosureSolution {
    pub t_plus: Precision,
    pub gamma_star: GammaStar,
    pub t_zero: TZeroStar,
    pub chi: f64,
    pub tag: OptimalTag,
    pub optimum: Optimum,
    /// `W̄₊(τ*₊)` computed through the envelope.
    pub w_at_tplus: f64,
    pub w_at_infinity: f64,
    /// Closed-form `W̄₊(τ*₊) − W₀(∞)`.
    pub gap: f64,
    pub assumption_violated: bool,
}

/// Optimal public-information precision.
///
/// When `τ_θ ≥ τ*₊` the selection is made among the constrained candidates
/// instead (the envelope at `τ_θ` against the best no-acquisition precision)
/// and `assumption_violated` is set; `chi` and `gap` are still reported.
pub fn optimal_disclosure(w: &WelfareCoeffs, p: &GameParams) -> DisclosureSolution {
    let tp = t_plus_star(w, p);
    let t_zero = t_zero_star(w, p);
    let chi = chi(w, p.alpha);
    let w_at_infinity = welfare::w_zero(Precision::Infinite, w, p);
    let gap = welfare_gap(w, p);

    if tp.assumption_violated {
        return constrained(w, p, tp, t_zero, chi, gap, w_at_infinity);
    }

    let t_plus = Precision::Finite(tp.tau);
    let w_at_tplus = welfare::envelope(t_plus, w, p)
        .map(|e| e.welfare)
        .unwrap_or_else(|_| welfare::w_plus(tp.gamma_star.value, w, p));
    let tag = optimal_tag(w, p.alpha);

    // The selection must agree with a direct comparison of the two values.
    let direct = w_at_tplus - w_at_infinity;
    let slack = 1e-9 * w_at_infinity.abs().max(1.0);
    debug_assert!(
        match tag {
            OptimalTag::Partial => direct >= -slack,
            OptimalTag::Full => direct <= slack,
            OptimalTag::KnifeEdge => direct.abs() <= slack,
        },
        "chi rule {tag:?} disagrees with direct gap {direct}"
    );

    let optimum = match tag {
        OptimalTag::Full => Optimum::Single {
            tau: Precision::Infinite,
        },
        OptimalTag::Partial => Optimum::Single { tau: t_plus },
        OptimalTag::KnifeEdge if !tp.gamma_star.interior => Optimum::Interval { from: tp.tau },
        OptimalTag::KnifeEdge => Optimum::Pair {
            first: t_plus,
            second: Precision::Infinite,
        },
    };
    DisclosureSolution {
        t_plus,
        gamma_star: tp.gamma_star,
        t_zero,
        chi,
        tag,
        optimum,
        w_at_tplus,
        w_at_infinity,
        gap,
        assumption_violated: false,
    }
}

fn constrained(
    w: &WelfareCoeffs,
    p: &GameParams,
    tp: TPlusStar,
    t_zero: TZeroStar,
    chi: f64,
    gap: f64,
    w_at_infinity: f64,
) -> DisclosureSolution {
    let prior = Precision::Finite(p.tau_theta);
    let plus = welfare::envelope(prior, w, p).ok().map(|e| e.welfare);
    // Best no-acquisition candidate on [max(f(0), τ_θ), ∞].
    let lo = p.f_zero().max(p.tau_theta);
    let (zero_opt, zero_val) = match t_zero {
        TZeroStar::Infinity => (
            Optimum::Single {
                tau: Precision::Infinite,
            },
            w_at_infinity,
        ),
        TZeroStar::AtFZero { .. } => (
            Optimum::Single {
                tau: Precision::Finite(lo),
            },
            welfare::w_zero(Precision::Finite(lo), w, p),
        ),
        TZeroStar::Interval { .. } => (Optimum::Interval { from: lo }, 0.0),
    };
    let (tag, optimum, w_plus_val) = match plus {
        None => (OptimalTag::Full, zero_opt, f64::NEG_INFINITY),
        Some(v) if (v - zero_val).abs() <= 1e-12 * v.abs().max(1.0) => {
            let zero_tau = match zero_opt {
                Optimum::Single { tau } => tau,
                _ => Precision::Infinite,
            };
            (
                OptimalTag::KnifeEdge,
                Optimum::Pair {
                    first: prior,
                    second: zero_tau,
                },
                v,
            )
        }
        Some(v) if v > zero_val => (OptimalTag::Partial, Optimum::Single { tau: prior }, v),
        Some(v) => (OptimalTag::Full, zero_opt, v),
    };
    DisclosureSolution {
        t_plus: prior,
        gamma_star: tp.gamma_star,
        t_zero,
        chi,
        tag,
        optimum,
        w_at_tplus: w_plus_val,
        w_at_infinity,
        gap,
        assumption_violated: true,
    }
}

/// Optimal disclosure when private information is exogenous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExogenousClass {
    /// Full disclosure: `η > max{0, (1−α)ζ/2}`.
    Full,
    /// No disclosure: `η < min{0, 2(1−α)ζ/3}`.
    None,
    /// Depends on the precision of private information (boundaries included).
    Depends,
}

pub fn exogenous_benchmark(w: &WelfareCoeffs, alpha: f64) -> ExogenousClass {
    if w.eta > 0f64.max((1.0 - alpha) * w.zeta / 2.0) {
        ExogenousClass::Full
    } else if w.eta < 0f64.min(2.0 * (1.0 - alpha) * w.zeta / 3.0) {
        ExogenousClass::None
    } else {
        ExogenousClass::Depends
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HarmTag {
    /// `ζ − (1−2α)η/(1−α)² > 1`: welfare can fall with public information.
    Possible,
    Impossible,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionOptimal {
    Full,
    Partial,
    KnifeEdge,
    /// Within the raster tolerance of the FULL/PARTIAL boundary.
    Boundary,
}

impl RegionOptimal {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionOptimal::Full => "FULL",
            RegionOptimal::Partial => "PARTIAL",
            RegionOptimal::KnifeEdge => "KNIFE_EDGE",
            RegionOptimal::Boundary => "BOUNDARY",
        }
    }
}

impl HarmTag {
    pub fn as_str(self) -> &'static str {
        match self {
            HarmTag::Possible => "true",
            HarmTag::Impossible => "false",
            HarmTag::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionTags {
    pub harm_possible: HarmTag,
    pub optimal: RegionOptimal,
}

/// Region of the `(ζ, η)` plane at slope `α`, with exact knife edges only.
pub fn region_classify(w: &WelfareCoeffs, alpha: f64) -> RegionTags {
    let harm = if w.harm_criterion(alpha) > 1.0 {
        HarmTag::Possible
    } else {
        HarmTag::Impossible
    };
    let optimal = match optimal_tag(w, alpha) {
        OptimalTag::Full => RegionOptimal::Full,
        OptimalTag::Partial => RegionOptimal::Partial,
        OptimalTag::KnifeEdge => RegionOptimal::KnifeEdge,
    };
    RegionTags {
        harm_possible: harm,
        optimal,
    }
}

/// Raster variant: cells whose decisive statistic is within `tol` of zero
/// are tagged as boundary cells.
pub fn region_classify_raster(w: &WelfareCoeffs, alpha: f64, tol: f64) -> RegionTags {
    let k = w.harm_criterion(alpha);
    let harm = if (k - 1.0).abs() < tol {
        HarmTag::Boundary
    } else if k > 1.0 {
        HarmTag::Possible
    } else {
        HarmTag::Impossible
    };
    let gs = welfare::gamma_star(w, alpha);
    let decisive = if gs.interior { chi(w, alpha) } else { -w.eta };
    let optimal = if decisive.abs() < tol {
        RegionOptimal::Boundary
    } else if decisive > 0.0 {
        RegionOptimal::Partial
    } else {
        RegionOptimal::Full
    };
    RegionTags {
        harm_possible: harm,
        optimal,
    }
}
