use thiserror::Error;

use crate::params::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<Violation>),

    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("(gamma = {gamma}, tau = {tau}) is not an equilibrium pair: f(gamma) = {f_gamma}")]
    Inconsistent { gamma: f64, tau: f64, f_gamma: f64 },

    #[error("no acquisition equilibrium exists at tau = {tau} (maximum precision {tau_bar})")]
    EmptyEquilibriumSet { tau: f64, tau_bar: f64 },

    #[error("mu_2 is singular at alpha = {alpha}, gamma = {gamma}")]
    Singular { alpha: f64, gamma: f64 },

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error("no sign change of the bracketed function on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("scenario: {0}")]
    Scenario(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
