//! Parameter sweeps and the rows behind the info, welfare and region reports.

use clap::ValueEnum;
use lqg_ri::disclosure::{region_classify_raster, t_plus_star};
use lqg_ri::equilibrium::{self, branch_derivative, branch_set, max_precision, Branch};
use lqg_ri::information::{mrs_of_gamma, private_info, public_info};
use lqg_ri::params::{welfare_coeffs_from_raw, Preset, Scenario};
use lqg_ri::variants::{fisher_cost, fisher_welfare_slope, FisherParams};
use lqg_ri::welfare::{self, Sign, SLOPE_ZERO_TOL, TIE_TOL};
use lqg_ri::{GameParams, Precision, WelfareCoeffs};
use rayon::prelude::*;

use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    Tau,
    Alpha,
    Zeta,
    Eta,
    Gamma,
    R,
}

impl SweepVar {
    fn name(self) -> &'static str {
        match self {
            SweepVar::Tau => "tau",
            SweepVar::Alpha => "alpha",
            SweepVar::Zeta => "zeta",
            SweepVar::Eta => "eta",
            SweepVar::Gamma => "gamma",
            SweepVar::R => "r",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Info,
    Welfare,
    Regions,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if self.from >= self.to {
            return Err(format!(
                "--from {} must be below --to {}",
                self.from, self.to
            ));
        }
        if self.steps < 2 {
            return Err(format!("--steps {} must be at least 2", self.steps));
        }
        if self.log && self.from <= 0.0 {
            return Err("--log requires --from > 0".into());
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                let s = i as f64 / n as f64;
                if i == 0 {
                    self.from
                } else if i == n {
                    self.to
                } else if self.log {
                    (self.from.ln() + s * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + s * (self.to - self.from)
                }
            })
            .collect()
    }
}

/// How information is paid for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostModel {
    MutualInfo,
    Fisher(FisherParams),
}

/// The equilibrium a row reports on.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Selected {
    tau: Precision,
    gamma: f64,
    branch: Option<Branch>,
}

impl Selected {
    fn no_acquisition(tau: Precision) -> Self {
        Selected {
            tau,
            gamma: 0.0,
            branch: None,
        }
    }

    fn regime(&self) -> &'static str {
        if self.gamma > 0.0 {
            "ACQUIRING"
        } else {
            "NO_ACQUISITION"
        }
    }
}

impl CostModel {
    fn acquiring_welfare(&self, g: f64, w: &WelfareCoeffs, p: &GameParams) -> f64 {
        match self {
            CostModel::MutualInfo => welfare::w_plus(g, w, p),
            CostModel::Fisher(fp) => {
                w.zeta * welfare::dispersion_plus(g, p) + w.eta * welfare::volatility_plus(g, p)
                    - fisher_cost(g, fp)
            }
        }
    }

    fn cost(&self, g: f64, p: &GameParams) -> f64 {
        match self {
            CostModel::MutualInfo => welfare::info_cost(g, p),
            CostModel::Fisher(fp) => fisher_cost(g, fp),
        }
    }

    fn dw_dgamma(&self, g: f64, w: &WelfareCoeffs, p: &GameParams) -> f64 {
        match self {
            CostModel::MutualInfo => welfare::dw_plus_dgamma(g, w, p),
            CostModel::Fisher(fp) => fisher_welfare_slope(w, fp, p.alpha),
        }
    }

    /// Sender-optimal acquiring equilibrium, ties to the larger fraction;
    /// the no-acquisition equilibrium when none exists.
    fn select(&self, tau: Precision, w: &WelfareCoeffs, p: &GameParams) -> Selected {
        if let CostModel::MutualInfo = self {
            return match welfare::envelope(tau, w, p) {
                Ok(env) => Selected {
                    tau,
                    gamma: env.gamma,
                    branch: Some(env.branch),
                },
                Err(_) => Selected::no_acquisition(tau),
            };
        }
        let set = branch_set(tau, p);
        let mut best: Option<(f64, Selected)> = None;
        for branch in [Branch::Hi, Branch::Lo] {
            let Some(g) = set.get(branch) else { continue };
            let v = self.acquiring_welfare(g, w, p);
            let cand = Selected {
                tau,
                gamma: g,
                branch: Some(branch),
            };
            best = match best {
                Some((bv, b))
                    if !(v > bv + TIE_TOL || ((v - bv).abs() <= TIE_TOL && g > b.gamma)) =>
                {
                    Some((bv, b))
                }
                _ => Some((v, cand)),
            };
        }
        best.map_or(Selected::no_acquisition(tau), |(_, s)| s)
    }
}

fn welfare_header() -> [&'static str; 8] {
    [
        "regime",
        "gamma",
        "dispersion",
        "volatility",
        "cost",
        "welfare",
        "w_zero",
        "slope_sign",
    ]
}

fn welfare_cells(s: &Selected, model: &CostModel, w: &WelfareCoeffs, p: &GameParams) -> Vec<Cell> {
    let w0 = match s.tau {
        Precision::Finite(t) if t < p.f_zero() => Cell::Missing,
        tau => welfare::w_zero(tau, w, p).into(),
    };
    let slope = slope_along(s, model, w, p);
    let sign = slope.map_or(Cell::Missing, |x| {
        Cell::Text(Sign::of(x, SLOPE_ZERO_TOL).as_str())
    });
    let (d, v, c, total) = match s.branch {
        Some(_) => (
            welfare::dispersion_plus(s.gamma, p),
            welfare::volatility_plus(s.gamma, p),
            model.cost(s.gamma, p),
            model.acquiring_welfare(s.gamma, w, p),
        ),
        None => {
            let v = welfare::volatility_zero(s.tau, p);
            (0.0, v, 0.0, w.eta * v)
        }
    };
    vec![
        Cell::Text(s.regime()),
        s.gamma.into(),
        d.into(),
        v.into(),
        c.into(),
        total.into(),
        w0,
        sign,
    ]
}

/// `dW/dτ` along the selected equilibrium.
fn slope_along(s: &Selected, model: &CostModel, w: &WelfareCoeffs, p: &GameParams) -> Option<f64> {
    match s.branch {
        Some(b) => {
            let dphi = branch_derivative(b, s.tau, p).ok()?;
            Some(model.dw_dgamma(s.gamma, w, p) * dphi)
        }
        None => {
            let k = 1.0 - p.alpha;
            Some(w.eta * p.beta * p.beta * s.tau.variance().powi(2) / (k * k))
        }
    }
}

fn info_header(bits: bool) -> [&'static str; 6] {
    if bits {
        [
            "regime",
            "gamma",
            "public_bits",
            "private_bits",
            "total_bits",
            "mu",
        ]
    } else {
        [
            "regime",
            "gamma",
            "public_nats",
            "private_nats",
            "total_nats",
            "mu",
        ]
    }
}

fn info_cells(s: &Selected, p: &GameParams, bits: bool) -> Vec<Cell> {
    let scale = if bits { std::f64::consts::LOG2_E } else { 1.0 };
    let public = public_info(s.tau.value(), p) * scale;
    let private = private_info(s.gamma) * scale;
    let mu = match s.branch {
        Some(Branch::Hi) if s.gamma > 0.0 => mrs_of_gamma(p.alpha, s.gamma).ok().into(),
        _ => Cell::Missing,
    };
    vec![
        Cell::Text(s.regime()),
        s.gamma.into(),
        public.into(),
        private.into(),
        (public + private).into(),
        mu,
    ]
}

/// Model inputs for one row of a sweep over `var`.
fn vary(sc: &Scenario, var: SweepVar, x: f64) -> Result<(GameParams, WelfareCoeffs), String> {
    let p = sc.params;
    let w = sc.welfare;
    match var {
        SweepVar::Tau | SweepVar::Gamma => Ok((p, w)),
        SweepVar::Zeta => Ok((p, WelfareCoeffs::new(x, w.eta))),
        SweepVar::Eta => Ok((p, WelfareCoeffs::new(w.zeta, x))),
        SweepVar::Alpha => {
            if sc.preset.is_some() {
                return Err("alpha is fixed by the preset; sweep r instead".into());
            }
            let q = GameParams::new(x, p.beta, p.lambda, p.tau_theta).map_err(|e| e.to_string())?;
            let w = sc.raw.map_or(w, |raw| welfare_coeffs_from_raw(&raw, &q));
            Ok((q, w))
        }
        SweepVar::R => {
            let kind = match sc.preset {
                Some(Preset::Investment { .. }) => "investment",
                Some(Preset::Beauty { .. }) => "beauty",
                _ => return Err("sweeping r needs an investment or beauty preset".into()),
            };
            let preset = Preset::parse(&format!("{kind}:{x}")).map_err(|e| e.to_string())?;
            let q = GameParams::new(preset.alpha(), preset.beta(), p.lambda, p.tau_theta)
                .map_err(|e| e.to_string())?;
            Ok((q, preset.welfare()))
        }
    }
}

pub fn with_breakpoints(points: Vec<f64>, extra: &[f64], from: f64, to: f64) -> Vec<f64> {
    let mut all = points;
    all.extend(extra.iter().copied().filter(|&b| b > from && b < to));
    all.sort_by(f64::total_cmp);
    all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    all
}

/// Rows for an info or welfare report.
pub fn sweep_table(
    sc: &Scenario,
    spec: &SweepSpec,
    report: Report,
    fixed_tau: Option<Precision>,
    model: CostModel,
    bits: bool,
) -> Result<Table, String> {
    spec.validate()?;
    let p0 = match model {
        CostModel::Fisher(fp) => fp.game_params(&sc.params),
        CostModel::MutualInfo => sc.params,
    };
    let mut points = spec.points();
    if spec.var == SweepVar::Tau {
        if spec.from < p0.tau_theta {
            return Err(format!(
                "tau sweep starts at {} below tau_theta = {}",
                spec.from, p0.tau_theta
            ));
        }
        let mut extra = vec![p0.f_zero(), max_precision(&p0)];
        if model == CostModel::MutualInfo {
            extra.push(t_plus_star(&sc.welfare, &p0).tau);
        }
        points = with_breakpoints(points, &extra, spec.from, spec.to);
    }
    if spec.var == SweepVar::Gamma && (spec.from < 0.0 || spec.to >= 1.0) {
        return Err("gamma must lie in [0, 1)".into());
    }
    let needs_tau = !matches!(spec.var, SweepVar::Tau | SweepVar::Gamma);
    let tau = match (needs_tau, fixed_tau) {
        (true, None) => return Err(format!("sweeping {} needs --tau", spec.var.name())),
        (_, t) => t,
    };

    let inputs: Vec<(f64, GameParams, WelfareCoeffs)> = points
        .iter()
        .map(|&x| vary(sc, spec.var, x).map(|(p, w)| (x, p, w)))
        .collect::<Result<_, _>>()?;
    if let Some(Precision::Finite(t)) = tau {
        if t < p0.tau_theta {
            return Err(format!("--tau {t} is below tau_theta = {}", p0.tau_theta));
        }
    }

    let rows: Vec<Vec<Vec<Cell>>> = inputs
        .par_iter()
        .map(|&(x, p, w)| {
            let p = match model {
                CostModel::Fisher(fp) => fp.game_params(&p),
                CostModel::MutualInfo => p,
            };
            let selections: Vec<Selected> = match spec.var {
                SweepVar::Tau => {
                    let t = Precision::Finite(x);
                    let s = model.select(t, &w, &p);
                    let tbar = max_precision(&p);
                    // Both one-sided values at the jump where acquisition stops.
                    if p.alpha > 0.5 && (x - tbar).abs() <= 1e-12 * tbar && s.branch.is_some() {
                        vec![s, Selected::no_acquisition(t)]
                    } else {
                        vec![s]
                    }
                }
                SweepVar::Gamma => {
                    let t = equilibrium::f_of_gamma(x, &p).expect("gamma checked");
                    let branch = if x >= equilibrium::peak_fraction(p.alpha) {
                        Branch::Hi
                    } else {
                        Branch::Lo
                    };
                    vec![Selected {
                        tau: Precision::Finite(t),
                        gamma: x,
                        branch: Some(branch),
                    }]
                }
                _ => vec![model.select(tau.expect("checked"), &w, &p)],
            };
            selections
                .into_iter()
                .map(|s| {
                    let mut row = Vec::new();
                    if !matches!(spec.var, SweepVar::Tau | SweepVar::Gamma) {
                        row.push(Cell::Num(x));
                    }
                    row.push(s.tau.into());
                    match report {
                        Report::Welfare => row.extend(welfare_cells(&s, &model, &w, &p)),
                        _ => row.extend(info_cells(&s, &p, bits)),
                    }
                    row
                })
                .collect()
        })
        .collect();

    let mut columns = Vec::new();
    if !matches!(spec.var, SweepVar::Tau | SweepVar::Gamma) {
        columns.push(spec.var.name());
    }
    columns.push("tau");
    match report {
        Report::Welfare => columns.extend(welfare_header()),
        _ => columns.extend(info_header(bits)),
    }
    let mut table = Table::new(columns);
    table.rows = rows.into_iter().flatten().collect();
    Ok(table)
}

/// `(ζ, η)` raster on `[from, to]²` with `steps` points per axis.
pub fn regions_table(
    alpha: f64,
    from: f64,
    to: f64,
    steps: usize,
    tol: f64,
) -> Result<Table, String> {
    if !(alpha.is_finite() && alpha < 1.0) {
        return Err(format!("alpha = {alpha} must be < 1"));
    }
    let spec = SweepSpec {
        var: SweepVar::Zeta,
        from,
        to,
        steps,
        log: false,
    };
    spec.validate()?;
    let axis = spec.points();
    let rows: Vec<Vec<Cell>> = axis
        .par_iter()
        .flat_map_iter(|&z| {
            axis.iter().map(move |&e| {
                let tags = region_classify_raster(&WelfareCoeffs::new(z, e), alpha, tol);
                vec![
                    Cell::Num(z),
                    Cell::Num(e),
                    Cell::Text(tags.harm_possible.as_str()),
                    Cell::Text(tags.optimal.as_str()),
                ]
            })
        })
        .collect();
    let mut table = Table::new(["zeta", "eta", "harm_possible", "optimal_tag"]);
    table.rows = rows;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(text: &str) -> Scenario {
        Scenario::parse(text).unwrap()
    }

    #[test]
    fn spec_validation() {
        let ok = SweepSpec {
            var: SweepVar::Tau,
            from: 0.1,
            to: 1.0,
            steps: 10,
            log: true,
        };
        assert!(ok.validate().is_ok());
        assert!(SweepSpec { from: 1.0, ..ok }.validate().is_err());
        assert!(SweepSpec { steps: 1, ..ok }.validate().is_err());
        assert!(SweepSpec { from: 0.0, ..ok }.validate().is_err());
        let pts = ok.points();
        assert_eq!((pts[0], pts[9]), (0.1, 1.0));
    }

    #[test]
    fn double_row_at_max_precision() {
        let sc = scenario("preset = \"investment:0.75\"\nlambda = 1\ntau_theta = 0.001\n");
        let tbar = max_precision(&sc.params);
        let spec = SweepSpec {
            var: SweepVar::Tau,
            from: 0.001,
            to: 2.0 * tbar,
            steps: 11,
            log: false,
        };
        let t = sweep_table(
            &sc,
            &spec,
            Report::Welfare,
            None,
            CostModel::MutualInfo,
            false,
        )
        .unwrap();
        let at: Vec<_> = t.rows.iter().filter(|r| r[0] == Cell::Num(tbar)).collect();
        assert_eq!(at.len(), 2);
        assert_eq!(at[0][1], Cell::Text("ACQUIRING"));
        assert_eq!(at[1][1], Cell::Text("NO_ACQUISITION"));
    }

    #[test]
    fn fisher_selection_prefers_higher_welfare() {
        let sc = scenario("preset = \"investment:0.75\"\nlambda = 1\ntau_theta = 0.001\n");
        let fp = FisherParams::new(1.0).unwrap();
        let p = fp.game_params(&sc.params);
        let t = Precision::Finite(0.5 * (p.f_zero() + max_precision(&p)));
        let s = CostModel::Fisher(fp).select(t, &sc.welfare, &p);
        let set = branch_set(t, &p);
        let best = set
            .acquiring()
            .into_iter()
            .map(|g| CostModel::Fisher(fp).acquiring_welfare(g, &sc.welfare, &p))
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(
            CostModel::Fisher(fp).acquiring_welfare(s.gamma, &sc.welfare, &p),
            best
        );
    }
}
