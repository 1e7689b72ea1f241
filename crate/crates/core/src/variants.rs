//! Alternative information technologies.
//!
//! *Fisher cost*: attention costs `c` per unit of expected Fisher information.
//! Equilibria coincide with the mutual-information model at `λ = √c`, but the
//! equilibrium cost is linear in `γ`, so welfare optima sit at corners.
//!
//! *Rigid acquisition*: agents only choose the precision `τᵢ` of a Gaussian
//! private signal at linear cost `cτᵢ`.

use serde::Serialize;

use crate::disclosure::Optimum;
use crate::equilibrium::{self, Branch};
use crate::error::{Error, Result};
use crate::information;
use crate::oracle::grid_search;
use crate::params::{GameParams, Precision, WelfareCoeffs};
use crate::welfare;

/// `|K − 1|` (and comparable welfare gaps) below this count as ties.
pub const FISHER_TIE_TOL: f64 = 1e-12;

/// Grid size used to settle ambiguous Fisher disclosure cases.
pub const FISHER_GRID_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherParams {
    pub c: f64,
    /// `√c`, the mutual-information cost with the same equilibria.
    pub lambda_equiv: f64,
}

impl FisherParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Domain {
                what: "c",
                value: c,
                expected: "finite and > 0",
            });
        }
        Ok(FisherParams {
            c,
            lambda_equiv: c.sqrt(),
        })
    }

    /// Parameters whose equivalent `λ` is exactly `lambda`.
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        let fp = Self::new(lambda * lambda)?;
        Ok(FisherParams {
            lambda_equiv: lambda,
            ..fp
        })
    }

    /// `p` with `λ` replaced by `√c`.
    pub fn game_params(&self, p: &GameParams) -> GameParams {
        GameParams {
            lambda: self.lambda_equiv,
            ..*p
        }
    }

    fn check(&self, p: &GameParams) -> Result<()> {
        if (p.lambda - self.lambda_equiv).abs() <= 4.0 * f64::EPSILON * self.lambda_equiv {
            Ok(())
        } else {
            Err(Error::Mismatch(format!(
                "lambda = {} but sqrt(c) = {}",
                p.lambda, self.lambda_equiv
            )))
        }
    }
}

/// Equilibrium Fisher cost `λγ/2`.
pub fn fisher_cost(gamma: f64, fp: &FisherParams) -> f64 {
    0.5 * fp.lambda_equiv * gamma
}

/// Fisher cost through the target variance, `λ/2 − λ²/(4 var_θ̃[αA+βθ])`.
/// At an acquiring equilibrium `(γ, τ)` the target variance is
/// `β²/((1−αγ)²τ)`.
pub fn fisher_cost_from_target(gamma: f64, tau: f64, fp: &FisherParams, p: &GameParams) -> f64 {
    let d = 1.0 - p.alpha * gamma;
    let var_target = p.beta * p.beta / (d * d * tau);
    let l = fp.lambda_equiv;
    0.5 * l - l * l / (4.0 * var_target)
}

/// `W^F₊(γ) = ζD₊(γ) + ηV₊(γ) − λγ/2`.
pub fn fisher_welfare(
    gamma: f64,
    w: &WelfareCoeffs,
    fp: &FisherParams,
    p: &GameParams,
) -> Result<f64> {
    fp.check(p)?;
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain {
            what: "gamma",
            value: gamma,
            expected: "[0, 1)",
        });
    }
    Ok(
        w.zeta * welfare::dispersion_plus(gamma, p) + w.eta * welfare::volatility_plus(gamma, p)
            - fisher_cost(gamma, fp),
    )
}

/// `dW^F₊/dγ = (λ/2)(K − 1)`, constant in `γ`.
pub fn fisher_welfare_slope(w: &WelfareCoeffs, fp: &FisherParams, alpha: f64) -> f64 {
    0.5 * fp.lambda_equiv * (w.harm_criterion(alpha) - 1.0)
}

/// Maximiser of the linear objective `W^F₊` over `γ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FisherGammaStar {
    Zero,
    One,
    /// Every `γ ∈ [0, 1]`.
    Any,
}

pub fn fisher_gamma_star(w: &WelfareCoeffs, alpha: f64) -> FisherGammaStar {
    let k = w.harm_criterion(alpha) - 1.0;
    if k.abs() <= FISHER_TIE_TOL {
        FisherGammaStar::Any
    } else if k > 0.0 {
        FisherGammaStar::One
    } else {
        FisherGammaStar::Zero
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FisherTag {
    Infinity,
    /// `τ = τ_θ`.
    NoDisclosure,
    FZero,
    /// A tie between candidates; the reported precision comes from a grid search.
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherDisclosure {
    pub tag: FisherTag,
    /// A representative optimal precision.
    pub tau: Precision,
    pub optimum: Optimum,
    pub welfare: f64,
    /// `φ̄(τ_θ)`.
    pub gamma_bar: f64,
}

/// Optimal disclosure under the Fisher cost.
///
/// The acquisition welfare is linear in `γ`, and the fractions reachable
/// with `τ ≥ τ_θ` fill `[0, γ̄]`, so only three candidates matter: no
/// disclosure (`γ̄`), `f(0)` and full disclosure. They are compared pairwise
/// by the closed-form gaps; ties are flagged [`FisherTag::Ambiguous`].
pub fn fisher_optimal_disclosure(
    w: &WelfareCoeffs,
    fp: &FisherParams,
    p: &GameParams,
) -> Result<FisherDisclosure> {
    fp.check(p)?;
    let f0 = p.f_zero();
    if p.tau_theta >= f0 {
        return Err(Error::Domain {
            what: "tau_theta",
            value: p.tau_theta,
            expected: "< f(0)",
        });
    }
    let gb = equilibrium::branch_value(Branch::Hi, Precision::Finite(p.tau_theta), p)
        .expect("upper branch exists below f(0)");
    let l = fp.lambda_equiv;
    let s2 = (1.0 - p.alpha) * (1.0 - p.alpha);
    let k1 = w.harm_criterion(p.alpha) - 1.0;

    let w_none = fisher_welfare(gb, w, fp, p)?;
    let w_f0 = welfare::w_zero(Precision::Finite(f0), w, p);
    let w_inf = welfare::w_zero(Precision::Infinite, w, p);
    let none = Precision::Finite(p.tau_theta);
    let at_f0 = Precision::Finite(f0);

    let tie = |x: f64| x.abs() <= FISHER_TIE_TOL * l.max(1.0);
    let single = |tau| Optimum::Single { tau };

    let (tag, optimum, value) = if w.eta.abs() <= FISHER_TIE_TOL {
        // W₀ is flat on [f(0), ∞].
        let d = 0.5 * l * gb * k1;
        if tie(d) {
            (
                FisherTag::Ambiguous,
                Optimum::Interval { from: p.tau_theta },
                w_none,
            )
        } else if d > 0.0 {
            (FisherTag::NoDisclosure, single(none), w_none)
        } else {
            (FisherTag::Ambiguous, Optimum::Interval { from: f0 }, w_f0)
        }
    } else if w.eta > 0.0 {
        // W₀(∞) − W^F₊(γ̄).
        let d = 0.5 * l * ((1.0 + gb * (1.0 - 2.0 * p.alpha)) * w.eta / s2 - gb * w.zeta + gb);
        if tie(d) {
            let pair = Optimum::Pair {
                first: none,
                second: Precision::Infinite,
            };
            (FisherTag::Ambiguous, pair, w_inf)
        } else if d > 0.0 {
            (FisherTag::Infinity, single(Precision::Infinite), w_inf)
        } else {
            (FisherTag::NoDisclosure, single(none), w_none)
        }
    } else {
        // W₀(f(0)) − W^F₊(γ̄).
        let d = -0.5 * l * gb * k1;
        if tie(d) {
            let pair = Optimum::Pair {
                first: none,
                second: at_f0,
            };
            (FisherTag::Ambiguous, pair, w_f0)
        } else if d > 0.0 {
            (FisherTag::FZero, single(at_f0), w_f0)
        } else {
            (FisherTag::NoDisclosure, single(none), w_none)
        }
    };

    let tau = match (tag, optimum) {
        (FisherTag::Ambiguous, _) => {
            grid_search::fisher_grid_optimum(w, fp, p, FISHER_GRID_POINTS).tau
        }
        (_, Optimum::Single { tau }) => tau,
        _ => unreachable!("unambiguous optima are single points"),
    };
    Ok(FisherDisclosure {
        tag,
        tau,
        optimum,
        welfare: value,
        gamma_bar: gb,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidParams {
    pub c: f64,
    /// `β/√c`: public precision at which private acquisition stops.
    pub cutoff: f64,
}

impl RigidParams {
    pub fn new(c: f64, beta: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Domain {
                what: "c",
                value: c,
                expected: "finite and > 0",
            });
        }
        Ok(RigidParams {
            c,
            cutoff: beta / c.sqrt(),
        })
    }
}

/// `ψ_c(τ) = (β/√c − τ)/(1−α)` below the cutoff, else 0.
pub fn rigid_private_precision(tau: Precision, rp: &RigidParams, p: &GameParams) -> f64 {
    match tau {
        Precision::Finite(t) if t < rp.cutoff => (rp.cutoff - t) / (1.0 - p.alpha),
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidInfo {
    /// `I_c(τ) = ½ log((τ + ψ_c(τ))/τ_θ)`.
    pub nats: f64,
    /// `dI_c/dτ = −α/(2(1−α)(τ+ψ_c))`, below the cutoff only.
    pub derivative: Option<f64>,
}

pub fn rigid_total_info(tau: Precision, rp: &RigidParams, p: &GameParams) -> RigidInfo {
    let t = tau.value();
    let total = t + rigid_private_precision(tau, rp, p);
    let derivative = match tau {
        Precision::Finite(t) if t < rp.cutoff => Some(-p.alpha / (2.0 * (1.0 - p.alpha) * total)),
        _ => None,
    };
    RigidInfo {
        nats: 0.5 * (total / p.tau_theta).ln(),
        derivative,
    }
}

/// The rigid cost `c` at which `I_c(τ) = I_φ̄(τ)`, from `τ + ψ_c(τ) = τ/(1−φ̄)`:
/// `√c = β(1−φ̄)/(τ(1−αφ̄))`.
pub fn calibrate_rigid(tau: Precision, p: &GameParams) -> Result<RigidParams> {
    let phi = match tau {
        Precision::Finite(_) => equilibrium::branch_value(Branch::Hi, tau, p),
        Precision::Infinite => None,
    };
    let (t, phi) = match (tau, phi) {
        (Precision::Finite(t), Some(phi)) if phi > 0.0 => (t, phi),
        _ => {
            return Err(Error::Domain {
                what: "tau",
                value: tau.value(),
                expected: "a precision with an acquiring upper-branch equilibrium",
            })
        }
    };
    let sqrt_c = p.beta * (1.0 - phi) / (t * (1.0 - p.alpha * phi));
    RigidParams::new(sqrt_c * sqrt_c, p.beta)
}

/// `dI_φ̄/dτ − dI_c/dτ = λα(αγ−1)³ / (4(1−α)β²(1−(2−γ)α))` with `γ = φ̄(τ)`,
/// valid when `rp` matches the two information levels at `τ`.
pub fn flexible_vs_rigid_gap(tau: Precision, rp: &RigidParams, p: &GameParams) -> Result<f64> {
    equilibrium::phi_hi_derivative(tau, p)?;
    let g = equilibrium::branch_value(Branch::Hi, tau, p).expect("checked above");
    let flexible = information::public_info(tau.value(), p) + information::private_info(g);
    let rigid = rigid_total_info(tau, rp, p);
    if rigid.derivative.is_none() {
        return Err(Error::Domain {
            what: "tau",
            value: tau.value(),
            expected: "below the rigid cutoff",
        });
    }
    if (flexible - rigid.nats).abs() > 1e-9 * flexible.abs().max(1.0) {
        return Err(Error::Mismatch(format!(
            "information not matched at tau = {}: flexible {flexible}, rigid {}",
            tau.value(),
            rigid.nats
        )));
    }
    let a = p.alpha;
    let d = a * g - 1.0;
    Ok(p.lambda * a * d * d * d / (4.0 * (1.0 - a) * p.beta * p.beta * (1.0 - (2.0 - g) * a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::branch_set;

    fn gp(alpha: f64, tau_theta: f64) -> GameParams {
        GameParams::new(alpha, 1.0, 1.0, tau_theta).unwrap()
    }

    #[test]
    fn fisher_params() {
        let fp = FisherParams::new(4.0).unwrap();
        assert_eq!(fp.lambda_equiv * fp.lambda_equiv, fp.c);
        let fp = FisherParams::from_lambda(0.3).unwrap();
        assert_eq!(fp.lambda_equiv, 0.3);
        assert!(FisherParams::new(0.0).is_err());
        assert!(FisherParams::new(f64::NAN).is_err());
    }

    #[test]
    fn fisher_welfare_values() {
        let p = gp(0.5, 0.25);
        let fp = FisherParams::from_lambda(1.0).unwrap();
        let w = WelfareCoeffs::new(2.0, 1.0);
        let v0 = fisher_welfare(0.0, &w, &fp, &p).unwrap();
        assert!((v0 - (4.0 - 0.5) / 0.25).abs() < 1e-12);
        for g in [0.1, 0.5, 0.9] {
            let diff = welfare::w_plus(g, &w, &p) - fisher_welfare(g, &w, &fp, &p).unwrap();
            assert!((diff - 0.5 * (g + (1.0 - g).ln())).abs() < 1e-12);
            assert!(diff <= 0.0);
        }
        let h = 1e-6;
        let fd = (fisher_welfare(0.4 + h, &w, &fp, &p).unwrap()
            - fisher_welfare(0.4 - h, &w, &fp, &p).unwrap())
            / (2.0 * h);
        assert!((fd - fisher_welfare_slope(&w, &fp, p.alpha)).abs() < 1e-6);
    }

    #[test]
    fn fisher_welfare_mismatch() {
        let fp = FisherParams::new(4.0).unwrap();
        let w = WelfareCoeffs::new(1.0, 1.0);
        assert!(matches!(
            fisher_welfare(0.1, &w, &fp, &gp(0.0, 0.1)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn fisher_cost_forms_agree() {
        let fp = FisherParams::new(2.25).unwrap();
        let p = fp.game_params(&gp(0.6, 0.1));
        for g in [0.1, 0.4, 0.7] {
            let t = equilibrium::f_of_gamma(g, &p).unwrap();
            assert!((fisher_cost(g, &fp) - fisher_cost_from_target(g, t, &fp, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn fisher_equilibria_match_substitution() {
        let fp = FisherParams::new(0.49).unwrap();
        let base = GameParams::new(0.75, 1.0, 0.7, 0.1).unwrap();
        let p = fp.game_params(&base);
        let t = Precision::Finite(2.0);
        assert_eq!(branch_set(t, &p), branch_set(t, &base));
    }

    #[test]
    fn fisher_corners() {
        let w = WelfareCoeffs::new(1.0, 1.0);
        assert_eq!(fisher_gamma_star(&w, -1.0), FisherGammaStar::Zero);
        assert_eq!(fisher_gamma_star(&w, 0.75), FisherGammaStar::One);
        assert_eq!(
            fisher_gamma_star(&WelfareCoeffs::new(1.0, 0.0), 0.3),
            FisherGammaStar::Any
        );
    }

    #[test]
    fn fisher_disclosure_cases() {
        let fp = FisherParams::from_lambda(1.0).unwrap();
        // γ̄ = 0.5; W₀(∞) − W^F₊(γ̄) = (1 + 0.5)/2 − 0 + 0.25 > 0.
        let d =
            fisher_optimal_disclosure(&WelfareCoeffs::new(0.0, 1.0), &fp, &gp(0.0, 1.0)).unwrap();
        assert!((d.gamma_bar - 0.5).abs() < 1e-15);
        assert_eq!(d.tag, FisherTag::Infinity);
        assert_eq!(d.tau, Precision::Infinite);

        let d =
            fisher_optimal_disclosure(&WelfareCoeffs::new(5.0, -1.0), &fp, &gp(0.0, 1.0)).unwrap();
        assert_eq!(d.tag, FisherTag::NoDisclosure);
        assert_eq!(d.tau, Precision::Finite(1.0));

        let d =
            fisher_optimal_disclosure(&WelfareCoeffs::new(-1.0, -1.0), &fp, &gp(0.0, 1.0)).unwrap();
        assert_eq!(d.tag, FisherTag::FZero);
        assert_eq!(d.tau, Precision::Finite(2.0));

        let d =
            fisher_optimal_disclosure(&WelfareCoeffs::new(0.5, 0.0), &fp, &gp(0.0, 1.0)).unwrap();
        assert_eq!(d.tag, FisherTag::Ambiguous);
        assert_eq!(d.optimum, Optimum::Interval { from: 2.0 });
        assert!(d.tau.value() >= 2.0);

        assert!(
            fisher_optimal_disclosure(&WelfareCoeffs::new(1.0, 1.0), &fp, &gp(0.0, 2.0)).is_err()
        );
    }

    #[test]
    fn rigid_values() {
        let p = gp(0.5, 1.0);
        let rp = RigidParams::new(0.01, 1.0).unwrap();
        assert!((rp.cutoff - 10.0).abs() < 1e-14);
        assert!((rigid_private_precision(Precision::Finite(4.0), &rp, &p) - 12.0).abs() < 1e-12);
        assert_eq!(
            rigid_private_precision(Precision::Finite(rp.cutoff), &rp, &p),
            0.0
        );
        assert_eq!(rigid_private_precision(Precision::Infinite, &rp, &p), 0.0);
        let info = rigid_total_info(Precision::Finite(4.0), &rp, &p);
        assert!((info.nats - 0.5 * 16f64.ln()).abs() < 1e-12);
        assert!(info.derivative.unwrap() < 0.0);
        assert_eq!(
            rigid_total_info(Precision::Finite(4.0), &rp, &gp(0.0, 1.0)).derivative,
            Some(-0.0)
        );
        assert_eq!(
            rigid_total_info(Precision::Finite(11.0), &rp, &p).derivative,
            None
        );
    }

    #[test]
    fn rigid_slope_falls_with_alpha() {
        let rp = RigidParams::new(0.01, 1.0).unwrap();
        let slope = |a: f64| {
            let p = gp(a, 1.0);
            rigid_private_precision(Precision::Finite(3.0), &rp, &p)
                - rigid_private_precision(Precision::Finite(2.0), &rp, &p)
        };
        assert!(slope(-1.0) > slope(0.0) && slope(0.0) > slope(0.5));
    }

    #[test]
    fn calibration_round_trip() {
        for a in [-1.0, 0.0, 0.5, 0.75] {
            let p = gp(a, 0.1);
            let tau = Precision::Finite(1.0);
            let rp = calibrate_rigid(tau, &p).unwrap();
            let g = branch_set(tau, &p).phi_hi.unwrap();
            let flex = information::public_info(1.0, &p) + information::private_info(g);
            assert!((flex - rigid_total_info(tau, &rp, &p).nats).abs() < 1e-12);
        }
        assert!(calibrate_rigid(Precision::Finite(3.0), &gp(0.25, 0.1)).is_err());
        assert!(calibrate_rigid(Precision::Infinite, &gp(0.25, 0.1)).is_err());
    }

    #[test]
    fn gap_matches_derivative_difference() {
        let tau = Precision::Finite(1.0);
        for (a, sign) in [(0.5, -1.0), (-1.0, 1.0), (0.0, 0.0)] {
            let p = gp(a, 0.1);
            let rp = calibrate_rigid(tau, &p).unwrap();
            let gap = flexible_vs_rigid_gap(tau, &rp, &p).unwrap();
            let direct = information::total_info_derivative(tau, Branch::Hi, &p).unwrap()
                - rigid_total_info(tau, &rp, &p).derivative.unwrap();
            assert!((gap - direct).abs() < 1e-10, "alpha {a}");
            assert_eq!(if gap == 0.0 { 0.0 } else { gap.signum() }, sign);
        }
        let p = gp(0.5, 0.1);
        let off = RigidParams::new(0.02, 1.0).unwrap();
        assert!(matches!(
            flexible_vs_rigid_gap(tau, &off, &p),
            Err(Error::Mismatch(_))
        ));
    }
}
