mod output;
mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lqg_ri::disclosure::{optimal_disclosure, Optimum};
use lqg_ri::equilibrium::{self, count_equilibria, max_precision, Branch};
use lqg_ri::information::total_info_derivative;
use lqg_ri::oracle::battery::{run_battery, BatteryConfig, Scope};
use lqg_ri::oracle::OracleReport;
use lqg_ri::params::Scenario;
use lqg_ri::variants::{
    calibrate_rigid, fisher_optimal_disclosure, flexible_vs_rigid_gap, rigid_private_precision,
    rigid_total_info, FisherParams, RigidParams,
};
use lqg_ri::Precision;
use serde_json::{json, Value};

use output::{emit, num, pretty, Cell, Table};
use sweep::{regions_table, sweep_table, with_breakpoints, CostModel, Report, SweepSpec, SweepVar};

/// Equilibria, information and optimal public disclosure in LQG games with
/// rationally inattentive players.
#[derive(Debug, Parser)]
#[command(name = "lqg-ri", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (`key = value` lines).
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,
    /// Machine-readable JSON instead of the default output.
    #[arg(long)]
    json: bool,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long = "var", value_enum, default_value_t = SweepVar::Tau)]
    var: SweepVar,
    /// Start of the sweep; for tau defaults to tau_theta.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    /// End of the sweep; for tau defaults to four times the larger of f(0)
    /// and the maximum acquisition precision.
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long, default_value_t = 201)]
    steps: usize,
    /// Geometric spacing.
    #[arg(long)]
    log: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Equilibrium set at one public precision.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Public precision; `inf` for full disclosure.
        #[arg(long, value_parser = parse_precision)]
        tau: Precision,
    },
    /// CSV sweep for the info, welfare or regions report.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum)]
        report: Report,
        /// Fixed precision when sweeping something other than tau or gamma.
        #[arg(long, value_parser = parse_precision)]
        tau: Option<Precision>,
        /// Information in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Optimal public disclosure.
    Optimal {
        #[command(flatten)]
        common: Common,
    },
    /// Public, private and total information over a sweep.
    Info {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_parser = parse_precision)]
        tau: Option<Precision>,
        #[arg(long)]
        bits: bool,
    },
    /// Welfare decomposition over a sweep.
    Welfare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_parser = parse_precision)]
        tau: Option<Precision>,
    },
    /// Classification of the (zeta, eta) plane.
    Regions {
        /// Take alpha from this scenario.
        #[arg(long, value_name = "PATH", required_unless_present = "alpha")]
        scenario: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "scenario")]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        from: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        to: f64,
        #[arg(long, default_value_t = 61)]
        steps: usize,
        /// Cells this close to a boundary are tagged as boundary cells.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Alternative information technologies.
    #[command(subcommand)]
    Variant(Variant),
    /// Run the oracle battery.
    Verify {
        #[arg(long, default_value = "all")]
        scope: Scope,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: usize,
        /// Print the report list as JSON; the summary goes to stderr.
        #[arg(long)]
        json: bool,
        /// Also write the report list as JSON here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FisherReport {
    Optimal,
    Welfare,
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RigidReport {
    Info,
    Gap,
}

#[derive(Debug, Subcommand)]
enum Variant {
    /// Costs proportional to Fisher information.
    Fisher {
        #[command(flatten)]
        common: Common,
        /// Cost scale; defaults to the square of the scenario's lambda.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, value_enum, default_value_t = FisherReport::Optimal)]
        report: FisherReport,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_parser = parse_precision)]
        tau: Option<Precision>,
    },
    /// Rigid acquisition with linear costs.
    Rigid {
        #[command(flatten)]
        common: Common,
        /// Cost per unit of private precision; calibrated at --tau if absent.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, value_enum, default_value_t = RigidReport::Info)]
        report: RigidReport,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_parser = parse_precision)]
        tau: Option<Precision>,
    },
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    match s.trim() {
        "inf" | "infinity" => Ok(Precision::Infinite),
        t => {
            let x: f64 = t.parse().map_err(|_| format!("'{t}' is not a number"))?;
            if x.is_finite() && x > 0.0 {
                Ok(Precision::Finite(x))
            } else {
                Err(format!("precision {x} must be positive"))
            }
        }
    }
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Input(String),
    Verification,
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Input(s)
    }
}

impl From<lqg_ri::Error> for Failure {
    fn from(e: lqg_ri::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let sc = Scenario::parse(&text)?;
    for w in &sc.warnings {
        eprintln!("warning: {w}");
    }
    Ok(sc)
}

fn precision_json(t: Precision) -> Value {
    match t {
        Precision::Finite(x) => json!(x),
        Precision::Infinite => json!("inf"),
    }
}

fn precision_text(t: Precision) -> String {
    match t {
        Precision::Finite(x) => x.to_string(),
        Precision::Infinite => "inf".into(),
    }
}

fn optimum_text(o: &Optimum) -> String {
    match *o {
        Optimum::Single { tau } => precision_text(tau),
        Optimum::Pair { first, second } => {
            format!("{} and {}", precision_text(first), precision_text(second))
        }
        Optimum::Interval { from } => format!("[{from}, inf]"),
    }
}

/// Human rendering of a flat JSON object, one `key: value` per line.
fn key_values(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            let text = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {text}\n"));
        }
    }
    out
}

fn sweep_spec(args: &SweepArgs, sc: &Scenario) -> Result<SweepSpec, Failure> {
    let p = sc.params;
    let (from, to) = match args.var {
        SweepVar::Tau => (
            args.from.unwrap_or(p.tau_theta),
            args.to.unwrap_or(4.0 * p.f_zero().max(max_precision(&p))),
        ),
        var => (
            args.from
                .ok_or_else(|| format!("sweeping {var:?} needs --from"))?,
            args.to
                .ok_or_else(|| format!("sweeping {var:?} needs --to"))?,
        ),
    };
    Ok(SweepSpec {
        var: args.var,
        from,
        to,
        steps: args.steps,
        log: args.log,
    })
}

fn table_out(t: &Table, json_out: bool, out: Option<&Path>) -> Result<(), Failure> {
    let text = if json_out {
        pretty(&t.to_json())
    } else {
        t.to_csv()
    };
    emit(&text, out)?;
    Ok(())
}

fn object_out(v: &Value, json_out: bool, out: Option<&Path>) -> Result<(), Failure> {
    let text = if json_out { pretty(v) } else { key_values(v) };
    emit(&text, out)?;
    Ok(())
}

fn cmd_solve(common: &Common, tau: Precision) -> Result<(), Failure> {
    let sc = load(&common.scenario)?;
    let p = sc.params;
    if tau.value() < p.tau_theta {
        return Err(format!("tau = {} is below tau_theta = {}", tau.value(), p.tau_theta).into());
    }
    let (count, case) = count_equilibria(tau, &p);
    let points = equilibrium::equilibria(tau, &p);
    let points_json = serde_json::to_value(&points).expect("points serialize");
    let text = if common.json {
        pretty(&json!({
            "tau": precision_json(tau),
            "count": count,
            "case": case.to_string(),
            "equilibria": points_json,
        }))
    } else {
        let mut s = format!(
            "tau: {}\ncount: {count}\ncase: {case}\n",
            precision_text(tau)
        );
        for pt in &points {
            s.push_str(&serde_json::to_string(pt).expect("points serialize"));
            s.push('\n');
        }
        s
    };
    emit(&text, common.out.as_deref())?;
    Ok(())
}

fn cmd_sweep(
    common: &Common,
    args: &SweepArgs,
    report: Report,
    tau: Option<Precision>,
    bits: bool,
) -> Result<(), Failure> {
    let sc = load(&common.scenario)?;
    let table = if report == Report::Regions {
        if !matches!(args.var, SweepVar::Tau | SweepVar::Zeta | SweepVar::Eta) {
            return Err("the regions report sweeps zeta and eta".to_string().into());
        }
        regions_table(
            sc.params.alpha,
            args.from.unwrap_or(-3.0),
            args.to.unwrap_or(3.0),
            args.steps,
            1e-9,
        )?
    } else {
        let spec = sweep_spec(args, &sc)?;
        sweep_table(&sc, &spec, report, tau, CostModel::MutualInfo, bits)?
    };
    table_out(&table, common.json, common.out.as_deref())
}

fn cmd_optimal(common: &Common) -> Result<(), Failure> {
    let sc = load(&common.scenario)?;
    let sol = optimal_disclosure(&sc.welfare, &sc.params);
    let text = if common.json {
        pretty(&serde_json::to_value(sol).expect("solution serializes"))
    } else {
        format!(
            "tag: {}\noptimum: {}\nt_plus: {}\ngamma_star: {}\nchi: {}\ngap: {}\nw_at_tplus: {}\nw_at_infinity: {}\nassumption_violated: {}\n",
            sol.tag.as_str(),
            optimum_text(&sol.optimum),
            precision_text(sol.t_plus),
            sol.gamma_star.value,
            sol.chi,
            sol.gap,
            sol.w_at_tplus,
            sol.w_at_infinity,
            sol.assumption_violated,
        )
    };
    emit(&text, common.out.as_deref())?;
    Ok(())
}

fn cmd_regions(
    scenario: Option<&Path>,
    alpha: Option<f64>,
    (from, to, steps, tol): (f64, f64, usize, f64),
    json_out: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let alpha = match (scenario, alpha) {
        (_, Some(a)) => a,
        (Some(path), None) => load(path)?.params.alpha,
        (None, None) => return Err("give --scenario or --alpha".to_string().into()),
    };
    let table = regions_table(alpha, from, to, steps, tol)?;
    table_out(&table, json_out, out)
}

fn cmd_fisher(
    common: &Common,
    c: Option<f64>,
    report: FisherReport,
    args: &SweepArgs,
    tau: Option<Precision>,
) -> Result<(), Failure> {
    let sc = load(&common.scenario)?;
    let fp = match c {
        Some(c) => FisherParams::new(c)?,
        None => FisherParams::from_lambda(sc.params.lambda)?,
    };
    let p = fp.game_params(&sc.params);
    match report {
        FisherReport::Optimal => {
            let sol = fisher_optimal_disclosure(&sc.welfare, &fp, &p)?;
            let mut v = serde_json::to_value(sol).expect("solution serializes");
            v["c"] = json!(fp.c);
            v["lambda_equiv"] = json!(fp.lambda_equiv);
            if !common.json {
                v["optimum"] = json!(optimum_text(&sol.optimum));
                v["tau"] = json!(precision_text(sol.tau));
            }
            object_out(&v, common.json, common.out.as_deref())
        }
        FisherReport::Welfare | FisherReport::Info => {
            let sc = Scenario { params: p, ..sc };
            let spec = sweep_spec(args, &sc)?;
            let kind = if report == FisherReport::Welfare {
                Report::Welfare
            } else {
                Report::Info
            };
            let table = sweep_table(&sc, &spec, kind, tau, CostModel::Fisher(fp), false)?;
            table_out(&table, common.json, common.out.as_deref())
        }
    }
}

fn cmd_rigid(
    common: &Common,
    c: Option<f64>,
    report: RigidReport,
    args: &SweepArgs,
    tau: Option<Precision>,
) -> Result<(), Failure> {
    let sc = load(&common.scenario)?;
    let p = sc.params;
    let rp = match (c, tau) {
        (Some(c), _) => RigidParams::new(c, p.beta)?,
        (None, Some(t)) => calibrate_rigid(t, &p)?,
        (None, None) => return Err("give --c or --tau to calibrate at".to_string().into()),
    };
    match report {
        RigidReport::Gap => {
            let t = tau.ok_or_else(|| "the gap report needs --tau".to_string())?;
            let gap = flexible_vs_rigid_gap(t, &rp, &p)?;
            let flexible = total_info_derivative(t, Branch::Hi, &p)?;
            let rigid = rigid_total_info(t, &rp, &p);
            let v = json!({
                "tau": precision_json(t),
                "c": rp.c,
                "cutoff": rp.cutoff,
                "flexible_slope": flexible,
                "rigid_slope": rigid.derivative,
                "gap": gap,
            });
            object_out(&v, common.json, common.out.as_deref())
        }
        RigidReport::Info => {
            let spec = sweep_spec(args, &sc)?;
            if spec.var != SweepVar::Tau {
                return Err("the rigid info report sweeps tau".to_string().into());
            }
            spec.validate()?;
            if spec.from < p.tau_theta {
                return Err(format!("tau sweep starts below tau_theta = {}", p.tau_theta).into());
            }
            let mut table = Table::new([
                "tau",
                "psi",
                "rigid_nats",
                "rigid_slope",
                "flexible_nats",
                "flexible_slope",
            ]);
            let breaks = [rp.cutoff, p.f_zero(), max_precision(&p)];
            for t in with_breakpoints(spec.points(), &breaks, spec.from, spec.to) {
                let tau = Precision::Finite(t);
                let rigid = rigid_total_info(tau, &rp, &p);
                let flexible = equilibrium::branch_value(Branch::Hi, tau, &p)
                    .filter(|&g| g > 0.0)
                    .map(|g| 0.5 * (t / p.tau_theta).ln() - 0.5 * (1.0 - g).ln());
                let flexible_slope =
                    flexible.and_then(|_| total_info_derivative(tau, Branch::Hi, &p).ok());
                table.rows.push(vec![
                    Cell::Num(t),
                    Cell::Num(rigid_private_precision(tau, &rp, &p)),
                    Cell::Num(rigid.nats),
                    rigid.derivative.into(),
                    flexible.into(),
                    flexible_slope.into(),
                ]);
            }
            table_out(&table, common.json, common.out.as_deref())
        }
    }
}

fn report_line(r: &OracleReport) -> String {
    format!(
        "{} {} closed_form={} oracle={} abs_err={} rel_err={} tolerance={}{}",
        if r.pass { "PASS" } else { "FAIL" },
        r.quantity,
        num(r.closed_form),
        num(r.oracle_value),
        num(r.abs_err),
        num(r.rel_err),
        num(r.tolerance),
        r.seed.map(|s| format!(" seed={s}")).unwrap_or_default(),
    )
}

fn cmd_verify(
    scope: Scope,
    seed: u64,
    mc_samples: usize,
    json_out: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if mc_samples < 2 {
        return Err("--mc-samples must be at least 2".to_string().into());
    }
    let reports = run_battery(scope, BatteryConfig { seed, mc_samples });
    let failed = reports.iter().filter(|r| !r.pass).count();
    let mut summary = String::new();
    for r in &reports {
        summary.push_str(&report_line(r));
        summary.push('\n');
    }
    summary.push_str(&format!(
        "scope {scope}: {} of {} checks passed\n",
        reports.len() - failed,
        reports.len()
    ));
    let list = pretty(&serde_json::to_value(&reports).expect("reports serialize"));
    if let Some(path) = out {
        fs::write(path, &list)?;
    }
    if json_out {
        eprint!("{summary}");
        emit(&list, None)?;
    } else {
        emit(&summary, None)?;
    }
    if failed > 0 {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { common, tau } => cmd_solve(&common, tau),
        Command::Sweep {
            common,
            sweep,
            report,
            tau,
            bits,
        } => cmd_sweep(&common, &sweep, report, tau, bits),
        Command::Optimal { common } => cmd_optimal(&common),
        Command::Info {
            common,
            sweep,
            tau,
            bits,
        } => cmd_sweep(&common, &sweep, Report::Info, tau, bits),
        Command::Welfare { common, sweep, tau } => {
            cmd_sweep(&common, &sweep, Report::Welfare, tau, false)
        }
        Command::Regions {
            scenario,
            alpha,
            from,
            to,
            steps,
            tol,
            json,
            out,
        } => cmd_regions(
            scenario.as_deref(),
            alpha,
            (from, to, steps, tol),
            json,
            out.as_deref(),
        ),
        Command::Variant(Variant::Fisher {
            common,
            c,
            report,
            sweep,
            tau,
        }) => cmd_fisher(&common, c, report, &sweep, tau),
        Command::Variant(Variant::Rigid {
            common,
            c,
            report,
            sweep,
            tau,
        }) => cmd_rigid(&common, c, report, &sweep, tau),
        Command::Verify {
            scope,
            seed,
            mc_samples,
            json,
            out,
        } => cmd_verify(scope, seed, mc_samples, json, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
