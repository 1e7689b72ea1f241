//! Model primitives, their validation, and scenario files.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Primitives of the symmetric LQG game with rational inattention.
///
/// `alpha` is the slope of the best response, `beta` the loading on the state,
/// `lambda` the cost per nat of mutual information and `tau_theta` the prior
/// precision of the state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub tau_theta: f64,
}

/// A hard violation of a [`GameParams`] invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NotFinite(&'static str),
    AlphaNotBelowOne(f64),
    BetaNotPositive(f64),
    LambdaNotPositive(f64),
    TauThetaNotPositive(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotFinite(name) => write!(f, "{name} is not finite"),
            Violation::AlphaNotBelowOne(a) => write!(f, "alpha = {a} must be < 1"),
            Violation::BetaNotPositive(b) => write!(f, "beta = {b} must be > 0"),
            Violation::LambdaNotPositive(l) => write!(f, "lambda = {l} must be > 0"),
            Violation::TauThetaNotPositive(t) => write!(f, "tau_theta = {t} must be > 0"),
        }
    }
}

/// A non-fatal finding: the parameters are a valid model but fall outside the
/// standing assumption used by the welfare and disclosure results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Warning {
    /// `tau_theta >= f(0)`: agents acquire nothing even without disclosure.
    PriorPrecisionNotSmall { tau_theta: f64, f_zero: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::PriorPrecisionNotSmall { tau_theta, f_zero } => {
                write!(f, "tau_theta = {tau_theta} is not below f(0) = {f_zero}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationResult {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationResult {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Whether the standing assumption `tau_theta < f(0)` holds.
    pub fn prior_precision_small(&self) -> bool {
        !self
            .warnings
            .iter()
            .any(|w| matches!(w, Warning::PriorPrecisionNotSmall { .. }))
    }
}

pub fn validate_params(p: &GameParams) -> ValidationResult {
    let mut out = ValidationResult::default();
    for (name, v) in [
        ("alpha", p.alpha),
        ("beta", p.beta),
        ("lambda", p.lambda),
        ("tau_theta", p.tau_theta),
    ] {
        if !v.is_finite() {
            out.violations.push(Violation::NotFinite(name));
        }
    }
    if !out.violations.is_empty() {
        return out;
    }
    if p.alpha >= 1.0 {
        out.violations.push(Violation::AlphaNotBelowOne(p.alpha));
    }
    if p.beta <= 0.0 {
        out.violations.push(Violation::BetaNotPositive(p.beta));
    }
    if p.lambda <= 0.0 {
        out.violations.push(Violation::LambdaNotPositive(p.lambda));
    }
    if p.tau_theta <= 0.0 {
        out.violations
            .push(Violation::TauThetaNotPositive(p.tau_theta));
    }
    if out.violations.is_empty() {
        let f_zero = p.f_zero();
        if !f_zero.is_finite() || f_zero <= 0.0 {
            out.violations
                .push(Violation::NotFinite("2 beta^2 / lambda"));
        } else if p.tau_theta >= f_zero {
            out.warnings.push(Warning::PriorPrecisionNotSmall {
                tau_theta: p.tau_theta,
                f_zero,
            });
        }
    }
    out
}

impl GameParams {
    /// Builds validated parameters; warnings are dropped (see [`validate_params`]).
    pub fn new(alpha: f64, beta: f64, lambda: f64, tau_theta: f64) -> Result<Self> {
        let p = GameParams {
            alpha,
            beta,
            lambda,
            tau_theta,
        };
        let v = validate_params(&p);
        if v.is_ok() {
            Ok(p)
        } else {
            Err(Error::InvalidParams(v.violations))
        }
    }

    /// `f(0) = 2β²/λ`, the precision above which no-acquisition is an equilibrium.
    pub fn f_zero(&self) -> f64 {
        2.0 * self.beta * self.beta / self.lambda
    }
}

/// Precision of public information, `τ ≥ τ_θ`. Full disclosure is the tagged
/// value [`Precision::Infinite`], handled everywhere through the variance `1/τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Precision {
    Finite(f64),
    Infinite,
}

impl Precision {
    pub fn variance(self) -> f64 {
        match self {
            Precision::Finite(t) => 1.0 / t,
            Precision::Infinite => 0.0,
        }
    }

    /// `τ` as a float, with [`f64::INFINITY`] for full disclosure.
    pub fn value(self) -> f64 {
        match self {
            Precision::Finite(t) => t,
            Precision::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Precision::Finite(t) => Some(t),
            Precision::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Precision::Infinite)
    }
}

impl From<f64> for Precision {
    fn from(t: f64) -> Self {
        if t == f64::INFINITY {
            Precision::Infinite
        } else {
            Precision::Finite(t)
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(t) => write!(f, "{t}"),
            Precision::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Precision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Precision::Finite(t) => s.serialize_f64(*t),
            Precision::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Welfare weights on dispersion `var[aᵢ − A]` and volatility `var[A]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelfareCoeffs {
    pub zeta: f64,
    pub eta: f64,
}

/// Raw coefficients of the quadratic welfare function
/// `c₁∫aⱼ² + c₂A² + c₃θA + c₄A + c₅`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawWelfare {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Only shifts the welfare constant.
    pub c4: f64,
    /// Only shifts the welfare constant.
    pub c5: f64,
}

impl WelfareCoeffs {
    pub fn new(zeta: f64, eta: f64) -> Self {
        WelfareCoeffs { zeta, eta }
    }

    /// `ζ − (1−2α)η/(1−α)²`: welfare can fall with public information only
    /// when this exceeds one.
    pub fn harm_criterion(&self, alpha: f64) -> f64 {
        self.zeta - (1.0 - 2.0 * alpha) * self.eta / ((1.0 - alpha) * (1.0 - alpha))
    }
}

/// `ζ = c₁ + c₃/β`, `η = c₁ + c₂ + (1−α)c₃/β`.
pub fn welfare_coeffs_from_raw(raw: &RawWelfare, p: &GameParams) -> WelfareCoeffs {
    WelfareCoeffs {
        zeta: raw.c1 + raw.c3 / p.beta,
        eta: raw.c1 + raw.c2 + (1.0 - p.alpha) * raw.c3 / p.beta,
    }
}

/// Named applications. Each fixes `(α, β)` and the welfare weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Preset {
    /// Cournot competition with inverse demand `θ − δA`.
    Cournot { delta: f64 },
    /// Investment game with return `rA + (1−r)θ`.
    Investment { r: f64 },
    /// Beauty contest with target `(1−r)θ + rA`.
    Beauty { r: f64 },
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::Scenario(format!("preset '{s}' must look like kind:value")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Scenario(format!("preset value '{value}' is not a number")))?;
        let preset = match kind.trim() {
            "cournot" => Preset::Cournot { delta: v },
            "investment" => Preset::Investment { r: v },
            "beauty" => Preset::Beauty { r: v },
            other => return Err(Error::Scenario(format!("unknown preset '{other}'"))),
        };
        preset.check()?;
        Ok(preset)
    }

    fn check(&self) -> Result<()> {
        match *self {
            Preset::Cournot { delta } if !(delta > 0.0 && delta.is_finite()) => Err(
                Error::Scenario(format!("cournot delta = {delta} must be > 0")),
            ),
            Preset::Investment { r } | Preset::Beauty { r } if !(r > 0.0 && r < 1.0) => {
                Err(Error::Scenario(format!("r = {r} must lie in (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            Preset::Cournot { delta } => -delta,
            Preset::Investment { r } | Preset::Beauty { r } => r,
        }
    }

    pub fn beta(&self) -> f64 {
        match *self {
            Preset::Cournot { .. } => 1.0,
            Preset::Investment { r } | Preset::Beauty { r } => 1.0 - r,
        }
    }

    /// Raw welfare coefficients. Cournot and investment use twice the
    /// aggregate profit (the normalisation that makes the best response
    /// `αA + βθ`); the beauty contest uses the loss `−(1−r)E[(aᵢ−θ)²]`.
    pub fn raw_welfare(&self) -> RawWelfare {
        let (c1, c2, c3) = match *self {
            Preset::Cournot { delta } => (-1.0, -2.0 * delta, 2.0),
            Preset::Investment { r } => (-1.0, 2.0 * r, 2.0 * (1.0 - r)),
            Preset::Beauty { r } => (-(1.0 - r), 0.0, 2.0 * (1.0 - r)),
        };
        RawWelfare {
            c1,
            c2,
            c3,
            c4: 0.0,
            c5: 0.0,
        }
    }

    /// `(ζ, η)`: `(1, 1)` for Cournot and investment, `(1+r, 1−r)` for the
    /// beauty contest.
    pub fn welfare(&self) -> WelfareCoeffs {
        match *self {
            Preset::Cournot { .. } | Preset::Investment { .. } => WelfareCoeffs::new(1.0, 1.0),
            Preset::Beauty { r } => WelfareCoeffs::new(1.0 + r, 1.0 - r),
        }
    }
}

/// A fully resolved scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub params: GameParams,
    pub welfare: WelfareCoeffs,
    pub raw: Option<RawWelfare>,
    pub preset: Option<Preset>,
    #[serde(skip)]
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    alpha: Option<f64>,
    beta: Option<f64>,
    lambda: Option<f64>,
    tau_theta: Option<f64>,
    zeta: Option<f64>,
    eta: Option<f64>,
    c1: Option<f64>,
    c2: Option<f64>,
    c3: Option<f64>,
    c4: Option<f64>,
    c5: Option<f64>,
    preset: Option<String>,
}

impl Scenario {
    /// Parses a scenario document of `key = value` lines.
    ///
    /// Keys: `alpha`, `beta`, `lambda`, `tau_theta`, then either `zeta` and
    /// `eta` or `c1`..`c5` (`c4`, `c5` default to zero), plus an optional
    /// `preset = "cournot:δ" | "investment:r" | "beauty:r"`. A preset fixes
    /// `alpha`, `beta` and the welfare weights, so those keys may not appear
    /// with it. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::Scenario(e.message().to_string()))?;
        let lambda = file
            .lambda
            .ok_or_else(|| Error::Scenario("missing key 'lambda'".into()))?;
        let tau_theta = file
            .tau_theta
            .ok_or_else(|| Error::Scenario("missing key 'tau_theta'".into()))?;

        let has_direct = file.zeta.is_some() || file.eta.is_some();
        let has_raw = [file.c1, file.c2, file.c3, file.c4, file.c5]
            .iter()
            .any(Option::is_some);

        if let Some(spec) = &file.preset {
            let preset = Preset::parse(spec)?;
            for (key, present) in [
                ("alpha", file.alpha.is_some()),
                ("beta", file.beta.is_some()),
                ("zeta/eta", has_direct),
                ("c1..c5", has_raw),
            ] {
                if present {
                    return Err(Error::Scenario(format!(
                        "key {key} is fixed by the preset and may not be given"
                    )));
                }
            }
            let params = GameParams::new(preset.alpha(), preset.beta(), lambda, tau_theta)?;
            return Ok(Scenario {
                params,
                welfare: preset.welfare(),
                raw: Some(preset.raw_welfare()),
                preset: Some(preset),
                warnings: validate_params(&params).warnings,
            });
        }

        let alpha = file
            .alpha
            .ok_or_else(|| Error::Scenario("missing key 'alpha'".into()))?;
        let beta = file
            .beta
            .ok_or_else(|| Error::Scenario("missing key 'beta'".into()))?;
        let params = GameParams::new(alpha, beta, lambda, tau_theta)?;

        let (welfare, raw) = match (has_direct, has_raw) {
            (true, true) => {
                return Err(Error::Scenario(
                    "give either zeta/eta or c1..c5, not both".into(),
                ))
            }
            (false, false) => {
                return Err(Error::Scenario(
                    "missing welfare weights (zeta/eta or c1..c5)".into(),
                ))
            }
            (true, false) => {
                let zeta = file
                    .zeta
                    .ok_or_else(|| Error::Scenario("missing key 'zeta'".into()))?;
                let eta = file
                    .eta
                    .ok_or_else(|| Error::Scenario("missing key 'eta'".into()))?;
                (WelfareCoeffs::new(zeta, eta), None)
            }
            (false, true) => {
                let need = |v: Option<f64>, k: &str| {
                    v.ok_or_else(|| Error::Scenario(format!("missing key '{k}'")))
                };
                let raw = RawWelfare {
                    c1: need(file.c1, "c1")?,
                    c2: need(file.c2, "c2")?,
                    c3: need(file.c3, "c3")?,
                    c4: file.c4.unwrap_or(0.0),
                    c5: file.c5.unwrap_or(0.0),
                };
                (welfare_coeffs_from_raw(&raw, &params), Some(raw))
            }
        };
        for (k, v) in [("zeta", welfare.zeta), ("eta", welfare.eta)] {
            if !v.is_finite() {
                return Err(Error::Scenario(format!("{k} is not finite")));
            }
        }
        Ok(Scenario {
            params,
            welfare,
            raw,
            preset: None,
            warnings: validate_params(&params).warnings,
        })
    }
}
