//! Mutual-information accounting, in nats.

use serde::Serialize;

use crate::equilibrium::{self, Branch};
use crate::error::{Error, Result};
use crate::params::{GameParams, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoBreakdown {
    /// `I(θ̃; θ) = ½ log(τ/τ_θ)`.
    pub public_nats: f64,
    /// `I_θ̃(aᵢ; θ) = −½ log(1−γ)`.
    pub private_nats: f64,
    pub total_nats: f64,
}

pub fn public_info(tau: f64, p: &GameParams) -> f64 {
    0.5 * (tau / p.tau_theta).ln()
}

pub fn private_info(gamma: f64) -> f64 {
    -0.5 * (1.0 - gamma).ln()
}

/// Total information on an acquiring equilibrium written without `τ`:
/// `½(log(2β²/(λ(1−αγ)²)) − log τ_θ)`.
pub fn total_info_from_gamma(gamma: f64, p: &GameParams) -> f64 {
    let d = 1.0 - p.alpha * gamma;
    0.5 * ((2.0 * p.beta * p.beta / (p.lambda * d * d)).ln() - p.tau_theta.ln())
}

pub fn info_breakdown(tau: Precision, gamma: f64, p: &GameParams) -> Result<InfoBreakdown> {
    let t = tau.finite().ok_or(Error::Domain {
        what: "tau",
        value: f64::INFINITY,
        expected: "finite",
    })?;
    if t < p.tau_theta {
        return Err(Error::Domain {
            what: "tau",
            value: t,
            expected: ">= tau_theta",
        });
    }
    equilibrium::check_pair(gamma, tau, p)?;
    let public_nats = public_info(t, p);
    let private_nats = private_info(gamma);
    Ok(InfoBreakdown {
        public_nats,
        private_nats,
        total_nats: public_nats + private_nats,
    })
}

/// `dI/dτ = αφ′(τ) / (1 − αφ(τ))` along the given branch.
pub fn total_info_derivative(tau: Precision, branch: Branch, p: &GameParams) -> Result<f64> {
    let dphi = equilibrium::branch_derivative(branch, tau, p)?;
    let phi = equilibrium::branch_value(branch, tau, p).expect("derivative implies branch exists");
    Ok(p.alpha * dphi / (1.0 - p.alpha * phi))
}

/// Marginal rate of substitution of public for private information on the
/// upper branch, `μ₁(α, τ) = 1 − 2ατφ̄′/(1 − αφ̄)`.
///
/// Evaluated as `μ₂(α, φ̄(τ))`, which is the same quantity and regular at
/// `α = 0`.
pub fn mrs_of_tau(tau: Precision, p: &GameParams) -> Result<f64> {
    // Domain check shared with the derivative.
    equilibrium::phi_hi_derivative(tau, p)?;
    let phi = equilibrium::branch_value(Branch::Hi, tau, p).expect("checked above");
    mrs_of_gamma(p.alpha, phi)
}

/// `μ₂(α, γ) = (1−αγ) / (1 − α(2−γ))`.
pub fn mrs_of_gamma(alpha: f64, gamma: f64) -> Result<f64> {
    let den = 1.0 - alpha * (2.0 - gamma);
    if den.abs() <= 1e-14 {
        return Err(Error::Singular { alpha, gamma });
    }
    Ok((1.0 - alpha * gamma) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{branch_set, f_of_gamma, phi_hi_derivative};

    fn gp(alpha: f64, tau_theta: f64) -> GameParams {
        GameParams::new(alpha, 1.0, 1.0, tau_theta).unwrap()
    }

    #[test]
    fn no_information_at_prior() {
        let p = GameParams::new(0.5, 1.0, 1.0, 3.0).unwrap();
        let b = info_breakdown(Precision::Finite(3.0), 0.0, &p).unwrap();
        assert_eq!(
            (b.public_nats, b.private_nats, b.total_nats),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn total_constant_without_strategic_interaction() {
        let p = gp(0.0, 0.5);
        for t in [0.5, 1.0, 1.5] {
            let g = branch_set(Precision::Finite(t), &p).phi_hi.unwrap();
            let b = info_breakdown(Precision::Finite(t), g, &p).unwrap();
            assert!((b.total_nats - 0.5 * 4f64.ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn total_two_forms_agree() {
        let p = gp(0.75, 1.0);
        let b = info_breakdown(Precision::Finite(2.5), 0.8, &p).unwrap();
        assert!((b.total_nats - 0.5 * 12.5f64.ln()).abs() < 1e-15);
        assert!((total_info_from_gamma(0.8, &p) - 0.5 * 12.5f64.ln()).abs() < 1e-15);
        assert_eq!(b.total_nats, b.public_nats + b.private_nats);
    }

    #[test]
    fn breakdown_errors() {
        let p = gp(0.5, 1.0);
        assert!(info_breakdown(Precision::Finite(0.5), 0.0, &p).is_err());
        assert!(info_breakdown(Precision::Infinite, 0.0, &p).is_err());
        assert!(info_breakdown(Precision::Finite(1.2), 0.3, &p).is_err());
    }

    #[test]
    fn derivative_signs() {
        assert_eq!(
            total_info_derivative(Precision::Finite(1.0), Branch::Hi, &gp(0.0, 0.1)).unwrap(),
            0.0
        );
        assert!(
            total_info_derivative(Precision::Finite(1.0), Branch::Hi, &gp(0.5, 0.1)).unwrap() < 0.0
        );
        assert!(
            total_info_derivative(Precision::Finite(1.0), Branch::Hi, &gp(-1.0, 0.1)).unwrap()
                > 0.0
        );
        assert!(
            total_info_derivative(Precision::Finite(2.5), Branch::Lo, &gp(0.75, 0.1)).unwrap()
                > 0.0
        );
        assert!(total_info_derivative(Precision::Finite(2.5), Branch::Lo, &gp(0.25, 0.1)).is_err());
    }

    #[test]
    fn mrs_examples() {
        assert_eq!(
            mrs_of_tau(Precision::Finite(1.0), &gp(0.0, 0.1)).unwrap(),
            1.0
        );
        assert!(mrs_of_tau(Precision::Finite(1.0), &gp(0.5, 0.1)).unwrap() > 1.0);
        let m = mrs_of_tau(Precision::Finite(0.5), &gp(-1.0, 0.1)).unwrap();
        assert!(m > 0.0 && m < 1.0);
        assert_eq!(mrs_of_gamma(0.0, 0.5).unwrap(), 1.0);
        assert!((mrs_of_gamma(0.5, 0.5).unwrap() - 3.0).abs() < 1e-15);
        assert!(matches!(
            mrs_of_gamma(0.75, 2.0 / 3.0),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn mu_one_literal_form_matches_mu_two() {
        for alpha in [-2.0, -0.5, 0.3, 0.5, 0.75, 0.9] {
            let p = gp(alpha, 0.01);
            for gamma in [0.97, 0.95, 0.92] {
                let t = f_of_gamma(gamma, &p).unwrap();
                let tau = Precision::Finite(t);
                let phi = branch_set(tau, &p).phi_hi.unwrap();
                let dphi = phi_hi_derivative(tau, &p).unwrap();
                let mu1 = 1.0 - 2.0 * alpha * t * dphi / (1.0 - alpha * phi);
                let mu2 = mrs_of_gamma(alpha, gamma).unwrap();
                assert!(
                    (mu1 - mu2).abs() < 1e-9 * mu2.abs(),
                    "alpha {alpha}: {mu1} vs {mu2}"
                );
            }
        }
    }
}
