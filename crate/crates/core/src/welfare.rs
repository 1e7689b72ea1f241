//! Expected welfare (up to its constant) as dispersion, volatility and cost.
//!
//! On an acquiring equilibrium welfare depends on `γ` alone:
//! `W₊(γ) = ζλγ/2 + η(β²/τ_θ − λ((1−2α)γ+1)/2)/(1−α)² − (λ/2)log(1/(1−γ))`.
//! Without acquisition it depends on `τ` alone: `W₀(τ) = ηβ²(1/τ_θ − 1/τ)/(1−α)²`.

use serde::Serialize;

use crate::equilibrium::{self, Branch, Regime};
use crate::error::{Error, Result};
use crate::params::{GameParams, Precision, WelfareCoeffs};

/// Envelope ties closer than this go to the larger `γ`.
pub const TIE_TOL: f64 = 1e-12;

/// `|ζ − (1−2α)η/(1−α)² − 1/(1−φ̄)|` below this is reported as a zero slope.
pub const SLOPE_ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WelfareBreakdown {
    pub regime: Regime,
    pub dispersion: f64,
    pub volatility: f64,
    pub cost: f64,
    pub total: f64,
}

pub fn dispersion_plus(gamma: f64, p: &GameParams) -> f64 {
    p.lambda * gamma / 2.0
}

pub fn volatility_plus(gamma: f64, p: &GameParams) -> f64 {
    let s = 1.0 - p.alpha;
    (p.beta * p.beta / p.tau_theta - 0.5 * p.lambda * ((1.0 - 2.0 * p.alpha) * gamma + 1.0))
        / (s * s)
}

pub fn volatility_zero(tau: Precision, p: &GameParams) -> f64 {
    let s = 1.0 - p.alpha;
    p.beta * p.beta * (1.0 / p.tau_theta - tau.variance()) / (s * s)
}

pub fn info_cost(gamma: f64, p: &GameParams) -> f64 {
    -0.5 * p.lambda * (1.0 - gamma).ln()
}

pub fn w_plus(gamma: f64, w: &WelfareCoeffs, p: &GameParams) -> f64 {
    w.zeta * dispersion_plus(gamma, p) + w.eta * volatility_plus(gamma, p) - info_cost(gamma, p)
}

pub fn w_zero(tau: Precision, w: &WelfareCoeffs, p: &GameParams) -> f64 {
    w.eta * volatility_zero(tau, p)
}

/// `dW₊/dγ = (λ/2)(ζ − η(1−2α)/(1−α)² − 1/(1−γ))`.
pub fn dw_plus_dgamma(gamma: f64, w: &WelfareCoeffs, p: &GameParams) -> f64 {
    0.5 * p.lambda * (w.harm_criterion(p.alpha) - 1.0 / (1.0 - gamma))
}

pub fn welfare_breakdown(
    tau: Precision,
    gamma: f64,
    w: &WelfareCoeffs,
    p: &GameParams,
) -> Result<WelfareBreakdown> {
    let regime = equilibrium::check_pair(gamma, tau, p)?;
    let (dispersion, volatility, cost) = match regime {
        Regime::Acquiring => (
            dispersion_plus(gamma, p),
            volatility_plus(gamma, p),
            info_cost(gamma, p),
        ),
        Regime::NoAcquisition => (0.0, volatility_zero(tau, p), 0.0),
    };
    Ok(WelfareBreakdown {
        regime,
        dispersion,
        volatility,
        cost,
        total: w.zeta * dispersion + w.eta * volatility - cost,
    })
}

/// Welfare-maximising information fraction over `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaStar {
    pub value: f64,
    pub interior: bool,
}

pub fn gamma_star(w: &WelfareCoeffs, alpha: f64) -> GammaStar {
    let k = w.harm_criterion(alpha);
    if k > 1.0 {
        GammaStar {
            value: 1.0 - 1.0 / k,
            interior: true,
        }
    } else {
        GammaStar {
            value: 0.0,
            interior: false,
        }
    }
}

/// Sender-optimal welfare among acquiring equilibria at `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub welfare: f64,
    pub gamma: f64,
    pub branch: Branch,
}

/// `W̄₊(τ) = max_{γ ∈ Γ(τ)} W₊(γ)`, evaluated at the exact branch values.
pub fn envelope(tau: Precision, w: &WelfareCoeffs, p: &GameParams) -> Result<Envelope> {
    let set = equilibrium::branch_set(tau, p);
    let mut best: Option<Envelope> = None;
    for branch in [Branch::Hi, Branch::Lo] {
        if let Some(g) = set.get(branch) {
            let cand = Envelope {
                welfare: w_plus(g, w, p),
                gamma: g,
                branch,
            };
            best = match best {
                None => Some(cand),
                Some(b) if cand.welfare > b.welfare + TIE_TOL => Some(cand),
                Some(b) if (cand.welfare - b.welfare).abs() <= TIE_TOL && cand.gamma > b.gamma => {
                    Some(cand)
                }
                keep => keep,
            };
        }
    }
    best.ok_or(Error::EmptyEquilibriumSet {
        tau: tau.value(),
        tau_bar: equilibrium::max_precision(p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: f64, tol: f64) -> Sign {
        if x.abs() <= tol {
            Sign::Zero
        } else if x > 0.0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Neg => "NEG",
            Sign::Zero => "ZERO",
            Sign::Pos => "POS",
        }
    }
}

/// Sign of `∂W̄₊/∂τ` for `τ < f(0)`, where the equilibrium is unique and
/// `φ̄′ < 0`: the opposite sign of `ζ − (1−2α)η/(1−α)² − 1/(1−φ̄(τ))`.
pub fn envelope_slope_sign(tau: Precision, w: &WelfareCoeffs, p: &GameParams) -> Result<Sign> {
    let t = tau.finite().unwrap_or(f64::INFINITY);
    if t.is_nan()
        || t >= p.f_zero()
        || (t - p.f_zero()).abs() <= equilibrium::BOUNDARY_RTOL * p.f_zero()
    {
        return Err(Error::Domain {
            what: "tau",
            value: t,
            expected: "< f(0)",
        });
    }
    let phi =
        equilibrium::branch_value(Branch::Hi, tau, p).expect("tau < f(0) has an upper branch");
    let k = w.harm_criterion(p.alpha);
    let crit = k - 1.0 / (1.0 - phi);
    let sign = match Sign::of(crit, SLOPE_ZERO_TOL) {
        Sign::Pos => Sign::Neg,
        Sign::Neg => Sign::Pos,
        Sign::Zero => Sign::Zero,
    };
    debug_assert!(sign != Sign::Neg || k > 1.0);
    Ok(sign)
}

/// `dW/dτ` along the welfare-relevant equilibrium at `τ`: the envelope's
/// branch while acquisition equilibria exist, `W₀` beyond `τ̄`.
/// `None` where the slope is undefined (at `τ̄` itself).
pub fn welfare_slope(tau: Precision, w: &WelfareCoeffs, p: &GameParams) -> Option<f64> {
    match envelope(tau, w, p) {
        Ok(env) => {
            let dphi = equilibrium::branch_derivative(env.branch, tau, p).ok()?;
            Some(dw_plus_dgamma(env.gamma, w, p) * dphi)
        }
        Err(_) => {
            let s = 1.0 - p.alpha;
            Some(w.eta * p.beta * p.beta * tau.variance().powi(2) / (s * s))
        }
    }
}
