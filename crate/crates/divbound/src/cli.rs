//! `divbound`: command-line access to every module.
//!
//! Scalar results print as JSON by default and curves as CSV; `--json` and
//! `--csv` override either way. Exit status is 0 on success, 1 when `verify`
//! finds a failing criterion and 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use divbound_core::binary::{check_condition_with_tol, DEFAULT_GRID, TOL_COND};
use divbound_core::inequalities::{
    bhattacharyya_relation, hellinger_td_bound, hellinger_td_rhs, js_td_bound, IneqReport,
};
use divbound_core::oracle::{min_symmetrized_given_moments, min_symmetrized_given_td, SearchOutcome};
use divbound_core::thermo::{evolve, rate_samples, report_for_trajectory};
use divbound_core::{
    align, catalog, make_binary, theorem1_bound, theorem2_bound, theorem2_s, tv_bound,
    BinaryFunction, BoundResult, DiscreteDist, FGenerator, Generator, MomentSpec,
};
use serde_json::{json, Value};

use crate::acceptance::{run_all, Config};
use crate::io::{parse_dist, parse_system, read_source};
use crate::output::{num, nums, pair, scalar_table, LogBase, Table};

#[derive(Debug, Parser)]
#[command(name = "divbound", version, about = "Tight lower bounds for symmetric f-divergences")]
pub struct Cli {
    /// Base in which log-dependent divergences (KL, JS) are displayed.
    #[arg(long, global = true, value_enum, default_value = "e")]
    pub log_base: LogBase,
    /// Seed for the randomized sweeps of `verify`.
    #[arg(long, global = true, default_value_t = Config::default().seed)]
    pub seed: u64,
    /// Tolerance of the condition check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long, global = true)]
    pub csv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check `t g''(t) - g'(t) ≥ 0` for a generator's binary divergence.
    Condition {
        #[arg(value_parser = parse_generator)]
        generator: FGenerator,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Bound under a fixed triangular discrimination.
    T1 {
        #[arg(value_parser = parse_generator)]
        generator: FGenerator,
        #[arg(long)]
        delta: f64,
    },
    /// Bound under fixed means and standard deviations.
    T2 {
        #[arg(value_parser = parse_generator)]
        generator: FGenerator,
        #[command(flatten)]
        moments: MomentArgs,
    },
    /// Bound under a fixed total variation distance.
    Tv {
        #[arg(value_parser = parse_generator)]
        generator: FGenerator,
        #[arg(long = "tv")]
        tv: f64,
    },
    /// Evaluate a derived inequality on a pair, or sweep it over binary pairs.
    Ineq {
        name: IneqName,
        #[arg(long)]
        dist_p: Option<String>,
        #[arg(long)]
        dist_q: Option<String>,
        /// Sweep resolution.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Brute-force minimum compared with the closed-form bound.
    Oracle {
        #[command(subcommand)]
        kind: OracleCommand,
    },
    /// Entropy production of a Markov jump process.
    Thermo {
        /// System JSON: inline, a file path, or `-` for stdin.
        #[arg(long)]
        system: String,
        /// Also write the per-step rates to this CSV file.
        #[arg(long)]
        steps_csv: Option<PathBuf>,
    },
    /// Bound curves as CSV.
    Sweep {
        curve: Curve,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Run the acceptance suite.
    Verify,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub mp: f64,
    #[arg(long)]
    pub sp: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mq: f64,
    #[arg(long)]
    pub sq: f64,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Minimize over pairs with `Δ(P,Q) = delta`.
    Td {
        #[arg(value_parser = parse_generator)]
        generator: FGenerator,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 2)]
        support: usize,
        #[arg(long, default_value_t = 60)]
        resolution: usize,
    },
    /// Minimize over pairs with the given means and common deviation.
    Moments {
        #[arg(value_parser = parse_generator)]
        generator: FGenerator,
        #[arg(long, allow_hyphen_values = true)]
        mp: f64,
        #[arg(long, allow_hyphen_values = true)]
        mq: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 2)]
        support: usize,
        #[arg(long, default_value_t = 40)]
        resolution: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IneqName {
    Hellinger,
    Bhattacharyya,
    Js,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// `generator,t,g` for every catalog generator.
    Binary,
    /// `generator,d,bound` with `bound = g(√d)`.
    T1,
    /// `ineq,d,rhs,prior_rhs` for the bounds in terms of `Δ`.
    Ineq,
}

fn parse_generator(s: &str) -> Result<FGenerator, String> {
    FGenerator::from_name(s).ok_or_else(|| {
        let names: Vec<_> = FGenerator::ALL.iter().map(|g| g.short_name()).collect();
        format!("unknown generator {s:?}; expected one of {}", names.join(", "))
    })
}

enum Output {
    Record(Value),
    Table(Table),
    /// Human-readable lines plus the JSON form, for `verify`.
    Report(Vec<String>, Value),
}

/// Result of one invocation: what to print and the exit status.
pub struct Run {
    pub stdout: Vec<u8>,
    pub code: u8,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let _ = e.print();
            return Run { stdout: Vec::new(), code };
        }
    };
    let mut stdout = Vec::new();
    match execute(&cli, &mut stdout) {
        Ok(code) => Run { stdout, code },
        Err(e) => {
            eprintln!("error: {e:#}");
            Run { stdout, code: 2 }
        }
    }
}

pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let r = run(args);
    let mut out = std::io::stdout().lock();
    if out.write_all(&r.stdout).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(r.code)
}

fn execute(cli: &Cli, out: &mut Vec<u8>) -> Result<u8> {
    let (output, code) = match &cli.command {
        Command::Condition { generator, grid } => (condition(cli, *generator, *grid)?, 0),
        Command::T1 { generator, delta } => {
            let bd = make_binary(*generator);
            (bound_record(cli, *generator, &theorem1_bound(&bd, *delta)?), 0)
        }
        Command::T2 { generator, moments } => {
            let spec = MomentSpec::new(moments.mp, moments.sp, moments.mq, moments.sq)?;
            let bd = make_binary(*generator);
            let mut rec = bound_record(cli, *generator, &theorem2_bound(&bd, &spec)?);
            if let Output::Record(Value::Object(m)) = &mut rec {
                m.insert("s".into(), num(theorem2_s(&spec)));
            }
            (rec, 0)
        }
        Command::Tv { generator, tv } => {
            let bd = make_binary(*generator);
            (bound_record(cli, *generator, &tv_bound(&bd, *tv)?), 0)
        }
        Command::Ineq { name, dist_p, dist_q, points } => {
            (ineq(cli, *name, dist_p.as_deref(), dist_q.as_deref(), *points)?, 0)
        }
        Command::Oracle { kind } => (oracle(cli, kind)?, 0),
        Command::Thermo { system, steps_csv } => (thermo(cli, system, steps_csv.as_ref())?, 0),
        Command::Sweep { curve, points } => (sweep(cli, *curve, *points)?, 0),
        Command::Verify => {
            let config = Config {
                seed: cli.seed,
                ..Config::default()
            };
            let outcomes = run_all(&config);
            let ok = outcomes.iter().all(|o| o.passed);
            let lines = outcomes.iter().map(|o| o.to_string()).collect();
            let value = Value::Array(
                outcomes
                    .iter()
                    .map(|o| {
                        json!({
                            "id": o.id,
                            "name": o.name,
                            "passed": o.passed,
                            "detail": o.detail,
                        })
                    })
                    .collect(),
            );
            (Output::Report(lines, value), if ok { 0 } else { 1 })
        }
    };
    render(cli, output, out)?;
    Ok(code)
}

fn render(cli: &Cli, output: Output, out: &mut Vec<u8>) -> Result<()> {
    match output {
        Output::Record(v) if cli.csv => scalar_table(&v).write_csv(&mut *out)?,
        Output::Record(v) => writeln!(out, "{v}")?,
        Output::Table(t) if cli.json => writeln!(out, "{}", t.to_json())?,
        Output::Table(t) => t.write_csv(&mut *out)?,
        Output::Report(_, v) if cli.json => writeln!(out, "{v}")?,
        Output::Report(lines, _) => {
            for l in lines {
                writeln!(out, "{l}")?;
            }
        }
    }
    Ok(())
}

/// Display multiplier for values of `gen`'s divergence.
fn factor(cli: &Cli, gen: FGenerator) -> f64 {
    if gen.uses_log() {
        cli.log_base.factor()
    } else {
        1.0
    }
}

fn condition(cli: &Cli, gen: FGenerator, grid: usize) -> Result<Output> {
    let tol = cli.tol.unwrap_or(TOL_COND);
    let cert = check_condition_with_tol(&make_binary(gen), grid, tol)?;
    Ok(Output::Record(json!({
        "generator": gen.short_name(),
        "satisfied": cert.satisfied,
        "min_margin": num(cert.min_margin * factor(cli, gen)),
        "witness": num(cert.witness),
        "ratio_monotone": cert.ratio_monotone,
        "tolerance": num(cert.tolerance),
        "grid_size": cert.grid.len(),
    })))
}

fn bound_record(cli: &Cli, gen: FGenerator, r: &BoundResult) -> Output {
    Output::Record(json!({
        "generator": gen.short_name(),
        "bound": num(r.bound_value * factor(cli, gen)),
        "argument": num(r.argument),
        "tight": r.tight,
        "basis": r.basis.as_str(),
        "attained_pair": r.attained_pair.as_ref().map(|(p, q)| pair(p, q)),
    }))
}

fn load_pair(p: Option<&str>, q: Option<&str>) -> Result<(DiscreteDist, DiscreteDist)> {
    let p = p.context("--dist-p is required")?;
    let q = q.context("--dist-q is required")?;
    if p == "-" && q == "-" {
        anyhow::bail!("only one of --dist-p and --dist-q can read stdin");
    }
    let p = parse_dist(&read_source(p)?).context("--dist-p")?;
    let q = parse_dist(&read_source(q)?).context("--dist-q")?;
    Ok(align(&p, &q))
}

fn ineq_record(name: &str, r: &IneqReport, scale: f64, tol: f64) -> Value {
    json!({
        "inequality": name,
        "lhs": num(r.lhs * scale),
        "rhs": num(r.rhs * scale),
        "slack": num(r.slack * scale),
        "prior_rhs": num(r.prior_rhs * scale),
        "improvement": num(r.improvement * scale),
        "form_gap": num(r.form_gap * scale),
        "holds": r.holds(tol),
    })
}

fn ineq(
    cli: &Cli,
    name: IneqName,
    p: Option<&str>,
    q: Option<&str>,
    points: usize,
) -> Result<Output> {
    let js_scale = cli.log_base.factor();
    let tol = cli.tol.unwrap_or(1e-10);
    if name == IneqName::Sweep {
        anyhow::ensure!(points > 0, "--points must be positive");
        let mut t = Table::new(&["ineq", "t", "lhs", "rhs", "prior_rhs"]);
        for i in 0..=points {
            let x = i as f64 / points as f64;
            let (a, b) = DiscreteDist::binary_pair(x)?;
            let rows = [
                ("hellinger", hellinger_td_bound(&a, &b)?, 1.0),
                ("bhattacharyya", bhattacharyya_relation(&a, &b)?, 1.0),
                ("js", js_td_bound(&a, &b)?, js_scale),
            ];
            for (label, r, s) in rows {
                t.push(vec![
                    json!(label),
                    num(x),
                    num(r.lhs * s),
                    num(r.rhs * s),
                    num(r.prior_rhs * s),
                ]);
            }
        }
        return Ok(Output::Table(t));
    }
    let (a, b) = load_pair(p, q)?;
    let rec = match name {
        IneqName::Hellinger => ineq_record("hellinger", &hellinger_td_bound(&a, &b)?, 1.0, tol),
        IneqName::Bhattacharyya => {
            ineq_record("bhattacharyya", &bhattacharyya_relation(&a, &b)?, 1.0, tol)
        }
        IneqName::Js => ineq_record("js", &js_td_bound(&a, &b)?, js_scale, tol),
        IneqName::Sweep => unreachable!(),
    };
    Ok(Output::Record(rec))
}

fn oracle_record(cli: &Cli, gen: FGenerator, found: &SearchOutcome, bound: f64) -> Value {
    let s = factor(cli, gen);
    json!({
        "generator": gen.short_name(),
        "oracle_value": num(found.value * s),
        "bound": num(bound * s),
        "gap": num((found.value - bound) * s),
        "minimizer": {
            "support": nums(&found.support),
            "p": nums(&found.p),
            "q": nums(&found.q),
        },
    })
}

fn oracle(cli: &Cli, kind: &OracleCommand) -> Result<Output> {
    let rec = match *kind {
        OracleCommand::Td { generator, delta, support, resolution } => {
            let found = min_symmetrized_given_td(&generator, delta, support, resolution)?;
            let bound = theorem1_bound(&make_binary(generator), delta)?.bound_value;
            let mut v = oracle_record(cli, generator, &found, bound);
            v["delta"] = num(delta);
            v["support_size"] = json!(support);
            v["resolution"] = json!(resolution);
            v
        }
        OracleCommand::Moments { generator, mp, mq, sigma, support, resolution } => {
            let spec = MomentSpec::equal_variance(mp, mq, sigma)?;
            let found = min_symmetrized_given_moments(&generator, &spec, support, resolution)?;
            let bound = theorem2_bound(&make_binary(generator), &spec)?.bound_value;
            let mut v = oracle_record(cli, generator, &found, bound);
            v["s"] = num(theorem2_s(&spec));
            v["support_size"] = json!(support);
            v["resolution"] = json!(resolution);
            v
        }
    };
    Ok(Output::Record(rec))
}

fn thermo(cli: &Cli, system: &str, steps_csv: Option<&PathBuf>) -> Result<Output> {
    let sys = parse_system(&read_source(system)?)?;
    let traj = evolve(&sys)?;
    let r = report_for_trajectory(&sys, &traj)?;
    let mut steps = Table::new(&["t", "sigma_rate", "activity_rate", "sigma_ps_rate"]);
    for s in rate_samples(&sys, &traj) {
        steps.push(vec![num(s.t), num(s.sigma_rate), num(s.activity_rate), num(s.sigma_ps_rate)]);
    }
    if let Some(path) = steps_csv {
        let file = std::fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        steps.write_csv(file)?;
    }
    if cli.csv {
        return Ok(Output::Table(steps));
    }
    Ok(Output::Record(json!({
        "n_states": sys.n_states(),
        "tau": num(sys.tau()),
        "dt": num(sys.dt()),
        "sigma": num(r.sigma),
        "sigma_ps": num(r.sigma_ps),
        "activity": num(r.activity),
        "kl_identity_gap": num(r.kl_identity_gap),
        "td_identity_gap": num(r.td_identity_gap),
        "bound_rhs": num(r.bound_rhs),
        "bound_slack": num(r.bound_slack),
        "kl_forward": num(r.kl_forward),
        "kl_backward": num(r.kl_backward),
        "td_path": num(r.td_path),
    })))
}

fn sweep(cli: &Cli, curve: Curve, points: usize) -> Result<Output> {
    anyhow::ensure!(points > 0, "--points must be positive");
    let grid = (0..=points).map(|i| i as f64 / points as f64);
    let t = match curve {
        Curve::Binary | Curve::T1 => {
            let header = if curve == Curve::Binary {
                ["generator", "t", "g"]
            } else {
                ["generator", "d", "bound"]
            };
            let mut t = Table::new(&header);
            for gen in catalog() {
                let bd = make_binary(gen);
                let s = factor(cli, gen);
                for x in grid.clone() {
                    let y = if curve == Curve::Binary { bd.g(x) } else { bd.g(x.sqrt()) };
                    t.push(vec![json!(gen.short_name()), num(x), num(y * s)]);
                }
            }
            t
        }
        Curve::Ineq => {
            let js = make_binary(FGenerator::JensenShannon);
            let s = cli.log_base.factor();
            let mut t = Table::new(&["ineq", "d", "rhs", "prior_rhs"]);
            for d in grid {
                t.push(vec![json!("hellinger"), num(d), num(hellinger_td_rhs(d)), num(0.5 * d)]);
                t.push(vec![json!("js"), num(d), num(js.g(d.sqrt()) * s), num(0.5 * d * s)]);
                // upper bounds on Z: √(1 - Δ) against 1 - Δ/2
                t.push(vec![
                    json!("bhattacharyya"),
                    num(d),
                    num((1.0 - d).sqrt()),
                    num(1.0 - 0.5 * d),
                ]);
            }
            t
        }
    };
    Ok(Output::Table(t))
}
