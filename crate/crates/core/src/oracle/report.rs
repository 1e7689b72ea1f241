use serde::Serialize;

/// How an [`OracleReport`] tolerance is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TolKind {
    Relative,
    /// Used for near-zero targets and for statistical half-widths.
    Absolute,
}

/// A closed-form value set against its oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle_value: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub tol_kind: TolKind,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl OracleReport {
    pub fn new(
        quantity: impl Into<String>,
        closed_form: f64,
        oracle_value: f64,
        tolerance: f64,
        tol_kind: TolKind,
    ) -> Self {
        let abs_err = (closed_form - oracle_value).abs();
        let rel_err = if closed_form == 0.0 {
            if abs_err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            abs_err / closed_form.abs()
        };
        let err = match tol_kind {
            TolKind::Relative => rel_err,
            TolKind::Absolute => abs_err,
        };
        OracleReport {
            quantity: quantity.into(),
            closed_form,
            oracle_value,
            abs_err,
            rel_err,
            tolerance,
            tol_kind,
            pass: err <= tolerance,
            seed: None,
        }
    }

    pub fn relative(
        quantity: impl Into<String>,
        closed_form: f64,
        oracle_value: f64,
        tol: f64,
    ) -> Self {
        Self::new(quantity, closed_form, oracle_value, tol, TolKind::Relative)
    }

    pub fn absolute(
        quantity: impl Into<String>,
        closed_form: f64,
        oracle_value: f64,
        tol: f64,
    ) -> Self {
        Self::new(quantity, closed_form, oracle_value, tol, TolKind::Absolute)
    }

    /// Relative tolerance, switching to the same tolerance in absolute terms
    /// when `|closed_form| < floor`.
    pub fn relative_or_absolute(
        quantity: impl Into<String>,
        closed_form: f64,
        oracle_value: f64,
        tol: f64,
        floor: f64,
    ) -> Self {
        let kind = if closed_form.abs() < floor {
            TolKind::Absolute
        } else {
            TolKind::Relative
        };
        Self::new(quantity, closed_form, oracle_value, tol, kind)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// A report for a boolean property: the closed form is `1`, the oracle
    /// value is `1` when the property holds.
    pub fn check(quantity: impl Into<String>, holds: bool) -> Self {
        Self::absolute(quantity, 1.0, if holds { 1.0 } else { 0.0 }, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(OracleReport::relative("x", 2.0, 2.001, 1e-3).pass);
        assert!(!OracleReport::relative("x", 2.0, 2.01, 1e-3).pass);
        let r = OracleReport::relative("x", 0.0, 1e-9, 1e-3);
        assert!(r.rel_err.is_infinite() && !r.pass);
        assert!(OracleReport::relative_or_absolute("x", 0.0, 1e-4, 1e-3, 1e-6).pass);
        assert!(OracleReport::absolute("x", 1.0, 1.5, 0.5).pass);
        assert!(OracleReport::check("ok", true).pass);
        assert!(!OracleReport::check("ok", false).pass);
        assert_eq!(OracleReport::check("ok", true).with_seed(7).seed, Some(7));
    }
}
