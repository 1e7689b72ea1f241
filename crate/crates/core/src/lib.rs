//! Equilibria, information flows, welfare and optimal public disclosure for
//! symmetric linear-quadratic-Gaussian games in which agents acquire private
//! information flexibly at a mutual-information cost.
//!
//! The second-period subgame is summarised by the *information fraction*
//! `γ = var[aᵢ] / var[αA + βθ]` (conditional on the public signal). Every
//! equilibrium either acquires information, with `τ = f(γ)`, or acquires
//! none (`γ = 0`, `τ ≥ f(0)`). The modules build on that correspondence:
//!
//! - [`params`]: primitives, validation, scenario files.
//! - [`equilibrium`]: `f`, its inverse branches and the moment profile.
//! - [`information`]: public/private/total information and substitution rates.
//! - [`welfare`]: dispersion/volatility/cost decomposition and the envelope.
//! - [`disclosure`]: the optimal precision of public information.
//! - [`variants`]: Fisher-information costs and rigid acquisition.
//! - [`oracle`]: brute-force checks of the closed forms.

pub mod disclosure;
pub mod equilibrium;
pub mod error;
pub mod information;
pub mod oracle;
pub mod params;
pub mod roots;
pub mod variants;
pub mod welfare;

pub use error::{Error, Result};
pub use params::{GameParams, Precision, WelfareCoeffs};
