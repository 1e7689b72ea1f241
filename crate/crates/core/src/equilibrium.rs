//! The second-period equilibrium correspondence.
//!
//! An equilibrium with information acquisition has information fraction `γ`
//! solving `τ = f(γ) = 2β²(1−γ) / (λ(1−αγ)²)`. For `α ≤ 1/2` the map is
//! strictly decreasing; for `α > 1/2` it rises to a peak at `(2α−1)/α` and then
//! falls, so a precision can have two acquiring equilibria: the upper branch
//! `φ̄(τ)` and the lower branch `φ_(τ)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{GameParams, Precision};

/// Relative tolerance for deciding that `τ` sits exactly on `f(0)` or `τ̄`.
pub const BOUNDARY_RTOL: f64 = 1e-12;

/// Relative tolerance of the `(γ, τ)` consistency check.
pub const PAIR_RTOL: f64 = 1e-8;

pub fn f_of_gamma(gamma: f64, p: &GameParams) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain {
            what: "gamma",
            value: gamma,
            expected: "[0, 1)",
        });
    }
    Ok(f_unchecked(gamma, p))
}

#[inline]
pub(crate) fn f_unchecked(gamma: f64, p: &GameParams) -> f64 {
    let d = 1.0 - p.alpha * gamma;
    2.0 * p.beta * p.beta * (1.0 - gamma) / (p.lambda * d * d)
}

/// Information fraction at which `f` peaks: `max{0, (2α−1)/α}`.
pub fn peak_fraction(alpha: f64) -> f64 {
    if alpha > 0.5 {
        (2.0 * alpha - 1.0) / alpha
    } else {
        0.0
    }
}

/// `τ̄ = max f`, the largest precision at which agents still acquire information.
pub fn max_precision(p: &GameParams) -> f64 {
    if p.alpha > 0.5 {
        p.beta * p.beta / (2.0 * p.alpha * (1.0 - p.alpha) * p.lambda)
    } else {
        p.f_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Hi,
    Lo,
}

/// The acquiring equilibria at a precision, plus whether `γ = 0` is one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchSet {
    pub phi_hi: Option<f64>,
    pub phi_lo: Option<f64>,
    pub includes_zero: bool,
}

impl BranchSet {
    pub fn get(&self, b: Branch) -> Option<f64> {
        match b {
            Branch::Hi => self.phi_hi,
            Branch::Lo => self.phi_lo,
        }
    }

    /// Members of `Γ(τ)` (solutions of `τ = f(γ)`), deduplicated, descending.
    pub fn acquiring(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.phi_hi.into_iter().chain(self.phi_lo).collect();
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        v
    }

    /// Every equilibrium information fraction, ascending and deduplicated.
    pub fn equilibria(&self) -> Vec<f64> {
        let mut v = self.acquiring();
        if self.includes_zero {
            v.push(0.0);
        }
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        v
    }
}

/// Upper branch in a form that stays accurate as `α → 0`:
/// `φ̄ = 2(β s − (1−α)λτ) / s²` with `s = β + √(β² − 2(1−α)αλτ)`.
/// Algebraically identical to `(αλτ − β² + β√D) / (α²λτ)`.
fn phi_hi_closed(tau: f64, p: &GameParams) -> f64 {
    let disc = (p.beta * p.beta - 2.0 * (1.0 - p.alpha) * p.alpha * p.lambda * tau).max(0.0);
    let s = p.beta + disc.sqrt();
    2.0 * (p.beta * s - (1.0 - p.alpha) * p.lambda * tau) / (s * s)
}

/// Lower branch from the product of the two roots of
/// `α²λτγ² + 2(β² − αλτ)γ + (λτ − 2β²) = 0`. Only used for `α > 1/2`.
fn phi_lo_closed(tau: f64, hi: f64, p: &GameParams) -> f64 {
    let a2 = p.alpha * p.alpha * p.lambda * tau;
    (p.lambda * tau - 2.0 * p.beta * p.beta) / (a2 * hi)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_RTOL * b.abs().max(1.0)
}

/// `Γ(τ)` split into its branches.
pub fn branch_set(tau: Precision, p: &GameParams) -> BranchSet {
    let t = match tau {
        Precision::Infinite => {
            return BranchSet {
                phi_hi: None,
                phi_lo: None,
                includes_zero: true,
            }
        }
        Precision::Finite(t) => t,
    };
    let f0 = p.f_zero();
    let tbar = max_precision(p);
    let at_f0 = near(t, f0);
    let includes_zero = t >= f0 || at_f0;

    let mut out = BranchSet {
        phi_hi: None,
        phi_lo: None,
        includes_zero,
    };
    if t < f0 && !at_f0 {
        out.phi_hi = Some(phi_hi_closed(t, p));
    } else if p.alpha <= 0.5 {
        if at_f0 {
            out.phi_hi = Some(0.0);
        }
    } else if near(t, tbar) {
        let peak = peak_fraction(p.alpha);
        out.phi_hi = Some(peak);
        out.phi_lo = Some(peak);
    } else if t < tbar {
        let hi = phi_hi_closed(t, p);
        out.phi_hi = Some(hi);
        out.phi_lo = Some(if at_f0 { 0.0 } else { phi_lo_closed(t, hi, p) });
    }

    #[cfg(debug_assertions)]
    cross_check(t, &out, p);
    out
}

/// Debug-build check of the closed forms against bisection of `τ = f(γ)` on
/// the monotone pieces of `f`.
#[cfg(debug_assertions)]
fn cross_check(t: f64, set: &BranchSet, p: &GameParams) {
    let peak = peak_fraction(p.alpha);
    let check = |gamma: f64, lo: f64, hi: f64| {
        if near(gamma, peak) && p.alpha > 0.5 {
            return;
        }
        let root = crate::roots::bisect(|g| f_unchecked(g, p) - t, lo, hi, 0.0);
        if let Ok(root) = root {
            let residual = (f_unchecked(gamma, p) - t).abs();
            debug_assert!(
                (root - gamma).abs() <= 1e-12 * gamma.max(1.0)
                    || residual <= 8.0 * f64::EPSILON * t,
                "closed-form branch {gamma} disagrees with bisection root {root} at tau {t}"
            );
        }
    };
    let top = 1.0 - 1e-15;
    if let Some(h) = set.phi_hi {
        if h > 0.0 {
            check(h, peak, top);
        }
    }
    if let Some(l) = set.phi_lo {
        if l > 0.0 {
            check(l, 0.0, peak);
        }
    }
}

pub fn branch_value(branch: Branch, tau: Precision, p: &GameParams) -> Option<f64> {
    branch_set(tau, p).get(branch)
}

/// Case labels for the equilibrium count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// `α ≤ 1/2`: always unique.
    #[serde(rename = "(i)")]
    I,
    /// `α > 1/2`, `τ < f(0)` or `τ > τ̄`: unique.
    #[serde(rename = "(ii-a)")]
    IIa,
    /// `α > 1/2`, `τ = f(0)` or `τ = τ̄`: two.
    #[serde(rename = "(ii-b)")]
    IIb,
    /// `α > 1/2`, `f(0) < τ < τ̄`: three.
    #[serde(rename = "(ii-c)")]
    IIc,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseTag::I => "(i)",
            CaseTag::IIa => "(ii-a)",
            CaseTag::IIb => "(ii-b)",
            CaseTag::IIc => "(ii-c)",
        })
    }
}

pub fn count_equilibria(tau: Precision, p: &GameParams) -> (usize, CaseTag) {
    let n = branch_set(tau, p).equilibria().len();
    if p.alpha <= 0.5 {
        return (n, CaseTag::I);
    }
    let tag = match tau {
        Precision::Infinite => CaseTag::IIa,
        Precision::Finite(t) => {
            let (f0, tbar) = (p.f_zero(), max_precision(p));
            if near(t, f0) || near(t, tbar) {
                CaseTag::IIb
            } else if t > f0 && t < tbar {
                CaseTag::IIc
            } else {
                CaseTag::IIa
            }
        }
    };
    (n, tag)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    Acquiring,
    NoAcquisition,
}

/// An equilibrium together with its conditional second moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumPoint {
    pub gamma: f64,
    pub regime: Regime,
    pub var_ai: f64,
    #[serde(rename = "var_A")]
    pub var_a: f64,
    #[serde(rename = "cov_ai_A")]
    pub cov_ai_a: f64,
    pub cov_ai_theta: f64,
    pub cost: f64,
}

impl EquilibriumPoint {
    fn no_acquisition() -> Self {
        EquilibriumPoint {
            gamma: 0.0,
            regime: Regime::NoAcquisition,
            var_ai: 0.0,
            var_a: 0.0,
            cov_ai_a: 0.0,
            cov_ai_theta: 0.0,
            cost: 0.0,
        }
    }

    fn acquiring(gamma: f64, p: &GameParams) -> Self {
        let var_ai = p.lambda * gamma / (2.0 * (1.0 - gamma));
        let var_a = gamma * var_ai;
        EquilibriumPoint {
            gamma,
            regime: Regime::Acquiring,
            var_ai,
            var_a,
            cov_ai_a: var_a,
            cov_ai_theta: p.lambda * gamma * (1.0 - p.alpha * gamma)
                / (2.0 * p.beta * (1.0 - gamma)),
            cost: -0.5 * p.lambda * (1.0 - gamma).ln(),
        }
    }
}

/// Checks that `(γ, τ)` is an equilibrium pair: either `|f(γ) − τ| ≤ 1e−8·max(1, τ)`
/// or `γ = 0` with `τ ≥ f(0)`.
pub fn check_pair(gamma: f64, tau: Precision, p: &GameParams) -> Result<Regime> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain {
            what: "gamma",
            value: gamma,
            expected: "[0, 1)",
        });
    }
    let f_gamma = f_unchecked(gamma, p);
    match tau {
        Precision::Infinite if gamma == 0.0 => Ok(Regime::NoAcquisition),
        Precision::Finite(t) if gamma == 0.0 && (t >= p.f_zero() || near(t, p.f_zero())) => {
            Ok(Regime::NoAcquisition)
        }
        Precision::Finite(t) if (f_gamma - t).abs() <= PAIR_RTOL * t.max(1.0) => {
            Ok(Regime::Acquiring)
        }
        _ => Err(Error::Inconsistent {
            gamma,
            tau: tau.value(),
            f_gamma,
        }),
    }
}

pub fn equilibrium_point(gamma: f64, tau: Precision, p: &GameParams) -> Result<EquilibriumPoint> {
    Ok(match check_pair(gamma, tau, p)? {
        Regime::NoAcquisition => EquilibriumPoint::no_acquisition(),
        Regime::Acquiring => EquilibriumPoint::acquiring(gamma, p),
    })
}

/// Every equilibrium at `τ`, ascending in `γ`.
pub fn equilibria(tau: Precision, p: &GameParams) -> Vec<EquilibriumPoint> {
    branch_set(tau, p)
        .equilibria()
        .into_iter()
        .map(|g| {
            if g == 0.0 {
                EquilibriumPoint::no_acquisition()
            } else {
                EquilibriumPoint::acquiring(g, p)
            }
        })
        .collect()
}

/// Derivative of a branch with respect to `τ` by the implicit function
/// theorem: `φ′ = 1/f′(φ) = λ(1−αφ)³ / (2β²((2−φ)α − 1))`.
///
/// The upper branch is defined for `τ < τ̄`, the lower one for
/// `f(0) ≤ τ < τ̄` when `α > 1/2`.
pub fn branch_derivative(branch: Branch, tau: Precision, p: &GameParams) -> Result<f64> {
    let t = tau.finite().ok_or(Error::Domain {
        what: "tau",
        value: f64::INFINITY,
        expected: "finite and below the maximum precision",
    })?;
    let tbar = max_precision(p);
    if t >= tbar || near(t, tbar) {
        return Err(Error::Domain {
            what: "tau",
            value: t,
            expected: "strictly below the maximum precision",
        });
    }
    let phi = branch_value(branch, tau, p).ok_or(Error::Domain {
        what: "tau",
        value: t,
        expected: "inside the branch's domain",
    })?;
    let d = 1.0 - p.alpha * phi;
    Ok(p.lambda * d * d * d / (2.0 * p.beta * p.beta * ((2.0 - phi) * p.alpha - 1.0)))
}

pub fn phi_hi_derivative(tau: Precision, p: &GameParams) -> Result<f64> {
    branch_derivative(Branch::Hi, tau, p)
}
