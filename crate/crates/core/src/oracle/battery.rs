//! The full set of oracle checks, grouped by scope.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::{self, Branch};
use crate::error::{Error, Result};
use crate::information;
use crate::oracle::finite_diff::{finite_difference, try_finite_difference};
use crate::oracle::fixed_point::{best_response_fixed_points, bisection_roots, DEFAULT_SEEDS};
use crate::oracle::grid_ri::{gaussian_rd, solve_grid_ri, GridRIProblem, DEFAULT_POINTS};
use crate::oracle::monte_carlo::monte_carlo_moments;
use crate::oracle::report::OracleReport;
use crate::params::{GameParams, Precision, WelfareCoeffs};
use crate::variants::{calibrate_rigid, rigid_total_info};
use crate::welfare;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    All,
    Equilibrium,
    Ri,
    Mc,
    Fd,
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Scope::All),
            "equilibrium" => Ok(Scope::Equilibrium),
            "ri" => Ok(Scope::Ri),
            "mc" => Ok(Scope::Mc),
            "fd" => Ok(Scope::Fd),
            _ => Err(Error::Scenario(format!(
                "unknown scope {s:?} (expected all, equilibrium, ri, mc or fd)"
            ))),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::All => "all",
            Scope::Equilibrium => "equilibrium",
            Scope::Ri => "ri",
            Scope::Mc => "mc",
            Scope::Fd => "fd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryConfig {
    pub seed: u64,
    pub mc_samples: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            seed: 1,
            mc_samples: 1_000_000,
        }
    }
}

pub const RI_VARIANCES: [f64; 3] = [0.25, 1.0, 4.0];
pub const RI_LAMBDAS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
pub const RI_TOL: f64 = 1e-3;
pub const ROOT_RTOL: f64 = 1e-10;
pub const FIXED_POINT_TOL: f64 = 1e-8;
pub const FD_RTOL: f64 = 1e-6;

/// `(α, γ)` pairs for the Monte Carlo checks, with `β = λ = 1`.
pub const MC_POINTS: [(f64, f64); 6] = [
    (0.5, 0.5),
    (-1.0, 0.3),
    (0.75, 0.8),
    (0.75, 0.5),
    (-2.0, 0.6),
    (0.25, 1e-4),
];

pub fn run_battery(scope: Scope, cfg: BatteryConfig) -> Vec<OracleReport> {
    let mut out = Vec::new();
    if matches!(scope, Scope::All | Scope::Equilibrium) {
        out.extend(equilibrium_reports());
    }
    if matches!(scope, Scope::All | Scope::Ri) {
        out.extend(ri_reports());
    }
    if matches!(scope, Scope::All | Scope::Mc) {
        out.extend(mc_reports(cfg.seed, cfg.mc_samples));
    }
    if matches!(scope, Scope::All | Scope::Fd) {
        out.extend(fd_reports());
    }
    out
}

/// Closed-form branches against bisection roots and best-response fixed points.
pub fn equilibrium_reports_for(p: &GameParams, taus: &[f64]) -> Vec<OracleReport> {
    let mut out = Vec::new();
    for &t in taus {
        let tau = Precision::Finite(t);
        let set = equilibrium::branch_set(tau, p);
        let tag = format!(
            "alpha={} beta={} lambda={} tau={t}",
            p.alpha, p.beta, p.lambda
        );

        let mut closed: Vec<f64> = set.acquiring().into_iter().filter(|&g| g > 0.0).collect();
        closed.sort_by(f64::total_cmp);
        let roots = bisection_roots(t, p);
        out.push(OracleReport::absolute(
            format!("equilibrium/acquiring_count {tag}"),
            closed.len() as f64,
            roots.len() as f64,
            0.0,
        ));
        for (c, r) in closed.iter().zip(&roots) {
            out.push(OracleReport::relative(
                format!("equilibrium/root {tag}"),
                *c,
                *r,
                ROOT_RTOL,
            ));
        }

        let all = set.equilibria();
        let fps = best_response_fixed_points(t, p, &DEFAULT_SEEDS);
        let (count, _) = equilibrium::count_equilibria(tau, p);
        out.push(OracleReport::absolute(
            format!("equilibrium/count {tag}"),
            count as f64,
            fps.len() as f64,
            0.0,
        ));
        for (c, r) in all.iter().zip(&fps) {
            out.push(OracleReport::absolute(
                format!("equilibrium/fixed_point {tag}"),
                *c,
                *r,
                FIXED_POINT_TOL,
            ));
        }
    }
    out
}

fn equilibrium_reports() -> Vec<OracleReport> {
    [-2.0, -0.5, 0.0, 0.25, 0.5, 0.75, 0.9]
        .par_iter()
        .flat_map(|&a| {
            let p = GameParams::new(a, 1.0, 1.0, 0.01).expect("valid");
            let tbar = equilibrium::max_precision(&p);
            let mut taus: Vec<f64> = (0..10)
                .map(|i| 0.05 + (0.99 * tbar - 0.05) * i as f64 / 9.0)
                .collect();
            taus.push(p.f_zero());
            taus.push(1.5 * tbar);
            equilibrium_reports_for(&p, &taus)
        })
        .collect()
}

/// Grid solution of the rate-distortion problem against its Gaussian closed form.
pub fn ri_report(variance: f64, lambda: f64) -> Vec<OracleReport> {
    let tag = format!("sigma2={variance} lambda={lambda}");
    let prob = GridRIProblem::gaussian(0.0, variance, lambda, DEFAULT_POINTS).expect("valid grid");
    let sol = solve_grid_ri(&prob).expect("valid grid");
    let (info, mse) = gaussian_rd(variance, lambda);
    vec![
        OracleReport::relative_or_absolute(
            format!("ri/mutual_info {tag}"),
            info,
            sol.mutual_info,
            RI_TOL,
            1e-12,
        ),
        OracleReport::relative(format!("ri/mse {tag}"), mse, sol.mse, RI_TOL),
        OracleReport::check(
            format!("ri/monotone {tag}"),
            sol.max_increase <= 1e-12 * mse.max(1.0),
        ),
    ]
}

fn ri_reports() -> Vec<OracleReport> {
    RI_VARIANCES
        .iter()
        .flat_map(|&v| RI_LAMBDAS.iter().map(move |&l| (v, l)))
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map(|&(v, l)| ri_report(v, l))
        .collect()
}

fn mc_reports(seed: u64, n: usize) -> Vec<OracleReport> {
    MC_POINTS
        .iter()
        .flat_map(|&(a, g)| {
            let p = GameParams::new(a, 1.0, 1.0, 0.01).expect("valid");
            let tau = Precision::Finite(equilibrium::f_of_gamma(g, &p).expect("valid"));
            let e = equilibrium::equilibrium_point(g, tau, &p).expect("on the curve");
            monte_carlo_moments(&e, tau, &p, n, seed)
                .expect("acquiring")
                .into_iter()
                .map(move |mut r| {
                    r.quantity = format!("{} alpha={a} gamma={g}", r.quantity);
                    r
                })
        })
        .collect()
}

/// Closed-form derivatives against central differences at `h = 1e−6·x`.
pub fn fd_reports_for(p: &GameParams, tau: f64, w: &WelfareCoeffs) -> Vec<OracleReport> {
    let tag = format!("alpha={} tau={tau}", p.alpha);
    let h = 1e-6 * tau;
    let mut out = Vec::new();
    let phi = |t: f64| {
        equilibrium::branch_value(Branch::Hi, Precision::Finite(t), p).ok_or(Error::Domain {
            what: "tau",
            value: t,
            expected: "in the upper branch domain",
        })
    };
    if let (Ok(cf), Ok(fd)) = (
        equilibrium::phi_hi_derivative(Precision::Finite(tau), p),
        try_finite_difference(phi, tau, h),
    ) {
        out.push(OracleReport::relative_or_absolute(
            format!("fd/phi_hi {tag}"),
            cf,
            fd,
            FD_RTOL,
            1e-9,
        ));
    }
    let info =
        |t: f64| phi(t).map(|g| information::public_info(t, p) + information::private_info(g));
    if let (Ok(cf), Ok(fd)) = (
        information::total_info_derivative(Precision::Finite(tau), Branch::Hi, p),
        try_finite_difference(info, tau, h),
    ) {
        out.push(OracleReport::relative_or_absolute(
            format!("fd/info_hi {tag}"),
            cf,
            fd,
            FD_RTOL,
            1e-9,
        ));
    }
    if let Ok(rp) = calibrate_rigid(Precision::Finite(tau), p) {
        let ic = |t: f64| rigid_total_info(Precision::Finite(t), &rp, p).nats;
        if let Some(cf) = rigid_total_info(Precision::Finite(tau), &rp, p).derivative {
            let fd = finite_difference(ic, tau, h);
            out.push(OracleReport::relative_or_absolute(
                format!("fd/info_rigid {tag}"),
                cf,
                fd,
                FD_RTOL,
                1e-9,
            ));
        }
    }
    if let Some(g) = equilibrium::branch_value(Branch::Hi, Precision::Finite(tau), p) {
        if g > 0.0 {
            let cf = welfare::dw_plus_dgamma(g, w, p);
            let fd = finite_difference(|x| welfare::w_plus(x, w, p), g, 1e-6 * g);
            out.push(OracleReport::relative_or_absolute(
                format!("fd/dw_plus {tag}"),
                cf,
                fd,
                FD_RTOL,
                1e-6,
            ));
        }
    }
    out
}

fn fd_reports() -> Vec<OracleReport> {
    let w = WelfareCoeffs::new(2.0, 0.5);
    let mut out = Vec::new();
    for a in [-1.0, 0.0, 0.5, 0.75] {
        let p = GameParams::new(a, 1.0, 1.0, 0.01).expect("valid");
        for t in [0.25, 1.0, 1.5] {
            out.extend(fd_reports_for(&p, t, &w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope_round_trip() {
        for s in ["all", "equilibrium", "ri", "mc", "fd"] {
            assert_eq!(s.parse::<Scope>().unwrap().to_string(), s);
        }
        assert!("bogus".parse::<Scope>().is_err());
    }

    #[test]
    fn equilibrium_and_fd_scopes_pass() {
        for scope in [Scope::Equilibrium, Scope::Fd] {
            let r = run_battery(scope, BatteryConfig::default());
            assert!(!r.is_empty());
            let failed: Vec<_> = r.iter().filter(|x| !x.pass).collect();
            assert!(failed.is_empty(), "{failed:#?}");
        }
    }
}
