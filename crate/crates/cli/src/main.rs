//! Command-line front end for the `ultradiff` library.
//!
//! Every subcommand parses its flags, calls exactly one library entry point
//! and prints a JSON or CSV report; the CLI itself adds no arithmetic.
//! Exit status: 0 when the computation passes, 1 when a verification fails,
//! 2 on usage errors.

// `!(x > 0.0)` guards are deliberate: unlike `x <= 0.0` they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ultradiff::experiments::{
    convergence_table, default_prop3_grid, default_semigroup_grid, mc_bridge_exit, mc_exit_prob,
    mc_translation_check, verify_conditional_props, verify_prop3, verify_prop4_small_m,
    verify_semigroup, verify_thm6, ConvergenceRow, InequalityReport, McEstimate,
};
use ultradiff::padic::PAdic;
use ultradiff::radial::{
    ball_mass, density_origin, density_radial, exact_exit_prob, grid_sup_prob, ProcessParams,
    SeriesTolerance,
};
use ultradiff::sampler::BridgeSpec;

/// Exact and Monte Carlo calculations for diffusion on the p-adic numbers.
#[derive(Parser)]
#[command(name = "ultradiff", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct Common {
    /// Absolute truncation tolerance for the radial series.
    #[arg(long, global = true, default_value_t = 1e-14)]
    tol: f64,
    /// RNG seed (environment variable UD_SEED overrides the default).
    #[arg(long, global = true, env = "UD_SEED", default_value_t = 1729)]
    seed: u64,
    /// Resolved digits per sampled p-adic value.
    #[arg(long, global = true, default_value_t = 24)]
    depth: usize,
    /// Digit-window width when echoing p-adic values.
    #[arg(long, global = true, default_value_t = 32)]
    digits: usize,
    /// Worker threads for Monte Carlo runs (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Process parameters, required by every subcommand.
#[derive(Args)]
struct ParamArgs {
    /// Prime of the underlying field.
    #[arg(short, long)]
    p: u32,
    /// Exponent of the generator.
    #[arg(short, long, default_value_t = 1.0)]
    b: f64,
    /// Diffusion coefficient.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
}

impl ParamArgs {
    fn build(&self) -> Result<ProcessParams, String> {
        ProcessParams::new(self.p, self.b, self.sigma).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the exit-rate constant alpha.
    Alpha {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Density of the time-t law at radius p^m (at the origin when --m is
    /// omitted).
    Density {
        #[command(flatten)]
        params: ParamArgs,
        /// Time.
        #[arg(long)]
        t: f64,
        /// Radius exponent of the evaluation point.
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// Mass of the ball B_a(0) under the time-t law.
    Cdf {
        #[command(flatten)]
        params: ParamArgs,
        /// Time.
        #[arg(long)]
        t: f64,
        /// Ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
    },
    /// Closed-form probability that the path stays in B_a(0) up to time T.
    ExitExact {
        #[command(flatten)]
        params: ParamArgs,
        /// Time horizon.
        #[arg(long = "T")]
        t_total: f64,
        /// Ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
    },
    /// Exact probability that all m grid positions stay in B_a(0).
    GridSup {
        #[command(flatten)]
        params: ParamArgs,
        /// Time horizon.
        #[arg(long = "T")]
        t_total: f64,
        /// Ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Number of grid steps.
        #[arg(long, default_value_t = 64)]
        m: u32,
    },
    /// Monte Carlo estimate of the grid containment probability, checked
    /// against the exact finite-m formula within 4 standard errors.
    ExitMc {
        #[command(flatten)]
        params: ParamArgs,
        /// Time horizon.
        #[arg(long = "T")]
        t_total: f64,
        /// Ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Number of grid steps.
        #[arg(long, default_value_t = 64)]
        m: u32,
        /// Sample count.
        #[arg(long, default_value_t = 200_000)]
        n: u64,
    },
    /// Monte Carlo containment probability for a path pinned to y at
    /// --t-pin and free afterwards, checked one-sidedly against the
    /// unpinned closed form minus 3 standard errors.
    BridgeMc {
        #[command(flatten)]
        params: ParamArgs,
        /// Total time horizon.
        #[arg(long = "T")]
        t_total: f64,
        /// Pinning time (must not exceed the horizon).
        #[arg(long)]
        t_pin: f64,
        /// Ball radius exponent (around --x).
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Start point (p-adic literal, default zero).
        #[arg(long, value_parser = parse_padic)]
        x: Option<PAdic>,
        /// Pinned endpoint (p-adic literal, default zero).
        #[arg(long, value_parser = parse_padic)]
        y: Option<PAdic>,
        /// Number of grid steps.
        #[arg(long, default_value_t = 64)]
        m: u32,
        /// Sample count.
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
    /// Grid containment probability against the closed form for a list of
    /// grid sizes, with error-shrink ratios.
    Convergence {
        #[command(flatten)]
        params: ParamArgs,
        /// Time horizon.
        #[arg(long = "T")]
        t_total: f64,
        /// Ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Strictly increasing grid sizes.
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
        m_list: Vec<u32>,
    },
    /// Verification suites; exit status 1 when any case fails.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Convolution over a ball strictly beats its factored lower bounds
    /// (deterministic series check).
    Prop3 {
        #[command(flatten)]
        params: ParamArgs,
        /// Cases as "t,t',z,a;..." (z, a radius exponents); built-in
        /// 81-point grid when omitted.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Joint containment-and-endpoint probability strictly beats the
    /// factored product (exact, one or two intermediate steps).
    Prop4 {
        #[command(flatten)]
        params: ParamArgs,
        /// Two or three time steps.
        #[arg(long, value_delimiter = ',')]
        t_list: Vec<f64>,
        /// Containment ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Endpoint ball center (p-adic literal, default zero).
        #[arg(long, value_parser = parse_padic)]
        y: Option<PAdic>,
        /// Endpoint ball radius is p^(-n_cond).
        #[arg(long, default_value_t = 2)]
        n_cond: u32,
    },
    /// Conditioning on containment raises the endpoint-ball probability
    /// and vice versa (Monte Carlo, 3-standard-error margin).
    Conditionals {
        #[command(flatten)]
        params: ParamArgs,
        /// Time horizon.
        #[arg(long)]
        t: f64,
        /// Containment ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Endpoint ball center (p-adic literal, default zero).
        #[arg(long, value_parser = parse_padic)]
        y: Option<PAdic>,
        /// Endpoint ball radius is p^(-n_cond).
        #[arg(long, default_value_t = 2)]
        n_cond: u32,
        /// One or two grid sizes, each dividing the largest.
        #[arg(long, value_delimiter = ',', default_value = "4,16")]
        m_list: Vec<u32>,
        /// Sample count.
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
    /// Pinned paths stay inside the ball at least as often as free ones
    /// (Monte Carlo over six pin/endpoint cases).
    Thm6 {
        #[command(flatten)]
        params: ParamArgs,
        /// Total time horizon.
        #[arg(long = "T")]
        t_total: f64,
        /// Ball radius exponent.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Number of grid steps.
        #[arg(long, default_value_t = 16)]
        m: u32,
        /// Sample count per case.
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
    /// Convolving over a huge ball reproduces the one-step density
    /// (composition law of the kernel family).
    Semigroup {
        #[command(flatten)]
        params: ParamArgs,
        /// Cases as "t,t',z;..." (z a radius exponent); built-in 27-point
        /// grid when omitted.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Containment probability is blind to translation and to the choice
    /// of ball center (Monte Carlo against the closed form).
    Translation {
        #[command(flatten)]
        params: ParamArgs,
        /// Time horizon.
        #[arg(long = "T")]
        t_total: f64,
        /// Ball radius exponent (around --x).
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Start point (p-adic literal, default zero).
        #[arg(long, value_parser = parse_padic)]
        x: Option<PAdic>,
        /// Number of grid steps.
        #[arg(long, default_value_t = 64)]
        m: u32,
        /// Sample count.
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
}

fn parse_padic(s: &str) -> Result<PAdic, String> {
    PAdic::from_str(s).map_err(|e| e.to_string())
}

/// Echo of a p-adic value with the digit window capped at `digits`.
fn echo_padic(x: &PAdic, digits: usize) -> String {
    match x.abs_exponent() {
        None => format!("{}:zero", x.prime()),
        Some(e) => {
            let sep = if x.prime() >= 10 { "," } else { "" };
            let ds: Vec<String> =
                x.digits().iter().take(digits).map(|d| d.to_string()).collect();
            format!("{}:{}:{}", x.prime(), -e, ds.join(sep))
        }
    }
}

/// A finished report: the JSON body plus the overall verdict that decides
/// the exit status.
struct Report {
    body: Value,
    csv: String,
    pass: bool,
}

fn float_csv(x: f64) -> String {
    // Shortest round-trip formatting keeps CSV output byte-stable.
    format!("{x}")
}

fn scalar_report(op: &str, params: &ParamArgs, config: Value, value: f64, seed: u64) -> Report {
    let body = json!({
        "op": op,
        "params": { "p": params.p, "b": params.b, "sigma": params.sigma },
        "config": config,
        "estimate": value,
        "seed": seed,
        "pass": true,
    });
    let csv = format!("estimate\n{}\n", float_csv(value));
    Report { body, csv, pass: true }
}

fn estimate_report(
    op: &str,
    params: &ParamArgs,
    config: Value,
    est: &McEstimate,
    pass: bool,
) -> Report {
    let body = json!({
        "op": op,
        "params": { "p": params.p, "b": params.b, "sigma": params.sigma },
        "config": config,
        "estimate": est.estimate,
        "ci95": [est.ci95.0, est.ci95.1],
        "n": est.n,
        "seed": est.seed,
        "pass": pass,
    });
    let csv = format!(
        "estimate,n,std_error,ci_lo,ci_hi,seed,pass\n{},{},{},{},{},{},{}\n",
        float_csv(est.estimate),
        est.n,
        float_csv(est.std_error),
        float_csv(est.ci95.0),
        float_csv(est.ci95.1),
        est.seed,
        pass,
    );
    Report { body, csv, pass }
}

fn cases_report(
    op: &str,
    params: &ParamArgs,
    config: Value,
    report: &InequalityReport,
    seed: Option<u64>,
    n: Option<u64>,
) -> Report {
    let cases: Vec<Value> = report
        .cases
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "lhs": c.lhs,
                "rhs": c.rhs,
                "margin": c.margin,
                "pass": c.pass,
            })
        })
        .collect();
    let mut body = json!({
        "op": op,
        "params": { "p": params.p, "b": params.b, "sigma": params.sigma },
        "config": config,
        "cases": cases,
        "pass": report.all_pass,
    });
    if let Some(s) = seed {
        body["seed"] = json!(s);
    }
    if let Some(n) = n {
        body["n"] = json!(n);
    }
    let mut csv = String::from("label,lhs,rhs,margin,pass\n");
    for c in &report.cases {
        csv.push_str(&format!(
            "\"{}\",{},{},{},{}\n",
            c.label,
            float_csv(c.lhs),
            float_csv(c.rhs),
            float_csv(c.margin),
            c.pass,
        ));
    }
    Report { body, csv, pass: report.all_pass }
}

fn rows_report(op: &str, params: &ParamArgs, config: Value, rows: &[ConvergenceRow]) -> Report {
    // Informational table; the declared verdict is that refinement helped.
    let pass = rows.len() < 2
        || rows.last().expect("nonempty").abs_error < rows.first().expect("nonempty").abs_error;
    let cases: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "m": r.m,
                "grid_prob": r.grid_prob,
                "exact": r.exact,
                "abs_error": r.abs_error,
                "ratio": r.ratio,
            })
        })
        .collect();
    let body = json!({
        "op": op,
        "params": { "p": params.p, "b": params.b, "sigma": params.sigma },
        "config": config,
        "cases": cases,
        "pass": pass,
    });
    let mut csv = String::from("m,grid_prob,exact,abs_error,ratio\n");
    for r in rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.m,
            float_csv(r.grid_prob),
            float_csv(r.exact),
            float_csv(r.abs_error),
            r.ratio.map(float_csv).unwrap_or_default(),
        ));
    }
    Report { body, csv, pass }
}

fn parse_grid4(s: &str) -> Result<Vec<(f64, f64, i64, i64)>, String> {
    s.split(';')
        .map(|case| {
            let parts: Vec<&str> = case.split(',').collect();
            if parts.len() != 4 {
                return Err(format!("expected t,t',z,a in {case:?}"));
            }
            Ok((
                parts[0].trim().parse().map_err(|e| format!("{e}: {case:?}"))?,
                parts[1].trim().parse().map_err(|e| format!("{e}: {case:?}"))?,
                parts[2].trim().parse().map_err(|e| format!("{e}: {case:?}"))?,
                parts[3].trim().parse().map_err(|e| format!("{e}: {case:?}"))?,
            ))
        })
        .collect()
}

fn parse_grid3(s: &str) -> Result<Vec<(f64, f64, i64)>, String> {
    s.split(';')
        .map(|case| {
            let parts: Vec<&str> = case.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("expected t,t',z in {case:?}"));
            }
            Ok((
                parts[0].trim().parse().map_err(|e| format!("{e}: {case:?}"))?,
                parts[1].trim().parse().map_err(|e| format!("{e}: {case:?}"))?,
                parts[2].trim().parse().map_err(|e| format!("{e}: {case:?}"))?,
            ))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Report, String> {
    let c = &cli.common;
    if !(c.tol > 0.0) {
        return Err(format!("--tol must be positive, got {}", c.tol));
    }
    let tol = SeriesTolerance { eps: c.tol, ..SeriesTolerance::default() };
    let err = |e: ultradiff::Error| e.to_string();
    match &cli.cmd {
        Cmd::Alpha { params } => {
            let pp = params.build()?;
            Ok(scalar_report("alpha", params, json!({}), pp.alpha(), c.seed))
        }
        Cmd::Density { params, t, m } => {
            let pp = params.build()?;
            let value = match m {
                Some(m) => density_radial(pp, *t, *m, tol).map_err(err)?.value,
                None => density_origin(pp, *t, tol).map_err(err)?.value,
            };
            let config = json!({ "t": t, "m": m, "tol": c.tol });
            Ok(scalar_report("density", params, config, value, c.seed))
        }
        Cmd::Cdf { params, t, a } => {
            let pp = params.build()?;
            let value = ball_mass(pp, *t, *a, tol).map_err(err)?.value;
            let config = json!({ "t": t, "a": a, "tol": c.tol });
            Ok(scalar_report("cdf", params, config, value, c.seed))
        }
        Cmd::ExitExact { params, t_total, a } => {
            let pp = params.build()?;
            let value = exact_exit_prob(pp, *t_total, *a).map_err(err)?;
            let config = json!({ "T": t_total, "a": a });
            Ok(scalar_report("exit-exact", params, config, value, c.seed))
        }
        Cmd::GridSup { params, t_total, a, m } => {
            let pp = params.build()?;
            let value = grid_sup_prob(pp, *t_total, *a, *m, tol).map_err(err)?;
            let config = json!({ "T": t_total, "a": a, "m": m, "tol": c.tol });
            Ok(scalar_report("grid-sup", params, config, value, c.seed))
        }
        Cmd::ExitMc { params, t_total, a, m, n } => {
            let pp = params.build()?;
            let est =
                mc_exit_prob(pp, *t_total, *a, *m, *n, c.seed, c.depth, tol).map_err(err)?;
            // The exact finite-m probability is the discretization-free
            // target for this estimate.
            let target = if *t_total > 0.0 {
                grid_sup_prob(pp, *t_total, *a, *m, tol).map_err(err)?
            } else {
                1.0
            };
            let pass = (est.estimate - target).abs() <= 4.0 * est.std_error;
            let config = json!({
                "T": t_total, "a": a, "m": m, "depth": c.depth, "tol": c.tol,
                "grid_target": target,
            });
            Ok(estimate_report("exit-mc", params, config, &est, pass))
        }
        Cmd::BridgeMc { params, t_total, t_pin, a, x, y, m, n } => {
            let pp = params.build()?;
            let x = x.clone().unwrap_or_else(|| PAdic::zero(params.p));
            let y = y.clone().unwrap_or_else(|| PAdic::zero(params.p));
            let spec = BridgeSpec::new(*t_pin, x.clone(), y.clone()).map_err(err)?;
            let est = mc_bridge_exit(pp, &spec, *t_total, *a, *m, *n, c.seed, c.depth, tol)
                .map_err(err)?;
            // Pinning inside the ball can only help containment, so the
            // estimate must reach the unpinned closed form up to noise.
            let closed = exact_exit_prob(pp, *t_total, *a).map_err(err)?;
            let pass = est.estimate >= closed - 3.0 * est.std_error;
            let config = json!({
                "T": t_total, "t_pin": t_pin, "a": a,
                "x": echo_padic(&x, c.digits), "y": echo_padic(&y, c.digits),
                "m": m, "depth": c.depth, "tol": c.tol, "closed_form": closed,
            });
            Ok(estimate_report("bridge-mc", params, config, &est, pass))
        }
        Cmd::Convergence { params, t_total, a, m_list } => {
            let pp = params.build()?;
            let rows = convergence_table(pp, *t_total, *a, m_list, tol).map_err(err)?;
            let config = json!({ "T": t_total, "a": a, "m_list": m_list, "tol": c.tol });
            Ok(rows_report("convergence", params, config, &rows))
        }
        Cmd::Verify { which } => run_verify(which, c, tol),
    }
}

fn run_verify(which: &VerifyCmd, c: &Common, tol: SeriesTolerance) -> Result<Report, String> {
    let err = |e: ultradiff::Error| e.to_string();
    match which {
        VerifyCmd::Prop3 { params, grid } => {
            let pp = params.build()?;
            let cases = match grid {
                Some(s) => parse_grid4(s)?,
                None => default_prop3_grid(),
            };
            let report = verify_prop3(pp, &cases, tol).map_err(err)?;
            let config = json!({ "grid_points": cases.len(), "tol": c.tol });
            Ok(cases_report("verify-prop3", params, config, &report, None, None))
        }
        VerifyCmd::Prop4 { params, t_list, a, y, n_cond } => {
            let pp = params.build()?;
            // The law is radial, so only |y| enters the exact evaluation.
            let y = y.clone().unwrap_or_else(|| PAdic::zero(params.p));
            if y.prime() != params.p {
                return Err(format!("--y has prime {}, expected {}", y.prime(), params.p));
            }
            let y_exp = y.abs_exponent();
            let report =
                verify_prop4_small_m(pp, t_list, *a, y_exp, *n_cond, tol).map_err(err)?;
            let config = json!({
                "t_list": t_list, "a": a, "y": echo_padic(&y, c.digits),
                "n_cond": n_cond, "tol": c.tol,
            });
            Ok(cases_report("verify-prop4", params, config, &report, None, None))
        }
        VerifyCmd::Conditionals { params, t, a, y, n_cond, m_list, n } => {
            let pp = params.build()?;
            let y = y.clone().unwrap_or_else(|| PAdic::zero(params.p));
            if y.prime() != params.p {
                return Err(format!("--y has prime {}, expected {}", y.prime(), params.p));
            }
            let y_exp = y.abs_exponent();
            let report = verify_conditional_props(
                pp, *t, *a, y_exp, *n_cond, m_list, *n, c.seed, c.depth, tol,
            )
            .map_err(err)?;
            let config = json!({
                "t": t, "a": a, "y": echo_padic(&y, c.digits), "n_cond": n_cond,
                "m_list": m_list, "depth": c.depth, "tol": c.tol,
            });
            Ok(cases_report("verify-conditionals", params, config, &report, Some(c.seed), Some(*n)))
        }
        VerifyCmd::Thm6 { params, t_total, a, m, n } => {
            let pp = params.build()?;
            let report =
                verify_thm6(pp, *t_total, *a, *m, *n, c.seed, c.depth, tol).map_err(err)?;
            let config = json!({
                "T": t_total, "a": a, "m": m, "depth": c.depth, "tol": c.tol,
            });
            Ok(cases_report("verify-thm6", params, config, &report, Some(c.seed), Some(*n)))
        }
        VerifyCmd::Semigroup { params, grid } => {
            let pp = params.build()?;
            let cases = match grid {
                Some(s) => parse_grid3(s)?,
                None => default_semigroup_grid(),
            };
            let report = verify_semigroup(pp, &cases, tol).map_err(err)?;
            let config = json!({ "grid_points": cases.len(), "tol": c.tol });
            Ok(cases_report("verify-semigroup", params, config, &report, None, None))
        }
        VerifyCmd::Translation { params, t_total, a, x, m, n } => {
            let pp = params.build()?;
            let x = x.clone().unwrap_or_else(|| PAdic::zero(params.p));
            let report =
                mc_translation_check(pp, *t_total, *a, &x, *m, *n, c.seed, c.depth, tol)
                    .map_err(err)?;
            let config = json!({
                "T": t_total, "a": a, "x": echo_padic(&x, c.digits), "m": m,
                "depth": c.depth, "tol": c.tol,
            });
            Ok(cases_report("verify-translation", params, config, &report, Some(c.seed), Some(*n)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.common.workers {
        // First caller wins; a rebuilt pool is not an error for us.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    match run(&cli) {
        Ok(report) => {
            let text = match cli.common.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.body)
                        .expect("report serializes");
                    s.push('\n');
                    s
                }
                Format::Csv => report.csv,
            };
            if let Some(path) = &cli.common.out {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
