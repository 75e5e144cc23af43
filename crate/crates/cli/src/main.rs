//! `lsimp`: JSON reports on labelled spaces and subshifts.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when an answer is
//! undecided within the horizon.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lsimp_core::invsemi::{idempotent_leq, product, Triple};
use lsimp_core::lspace::LabelledSpace;
use lsimp_core::paction::{has_nontrivial_isotropy, orbit};
use lsimp_core::shift::dynamics::{oracle_cost, sft_cost, Cost};
use lsimp_core::shift::verdict::{counterexample_report, shift_simplicity, NAIVE_DEPTH};
use lsimp_core::shift::{parse_letters, Decision, Point, Subshift, DEFAULT_HORIZON};
use lsimp_core::simp::{hereditary_saturated_closure, simplicity_verdict};
use lsimp_core::tight::{enumerate_tight, TightFilter};
use lsimp_core::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lsimp", version, about = "Simplicity of labelled-space and subshift C*-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a labelled space is normal.
    Validate { space: String },
    /// Decide simplicity of a labelled space.
    Simplicity {
        space: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Smallest hereditary saturated set containing a family member.
    Closure {
        space: String,
        /// Comma-separated vertex names.
        #[arg(long)]
        set: String,
    },
    /// Enumerate tight filters.
    Tight {
        space: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Orbit of a tight filter under group elements of bounded length.
    Orbit {
        space: String,
        /// Filter notation, e.g. "(a)^inf : [{1}] ([{1}])^inf".
        #[arg(long)]
        filter: String,
        #[arg(long, default_value_t = 2)]
        max_word: usize,
    },
    /// Multiply two inverse-semigroup elements written `(α,{v,...},β)` or `0`.
    Semigroup {
        space: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Subshift analyses.
    Shift {
        #[command(subcommand)]
        command: ShiftCommand,
    },
}

#[derive(Args)]
struct Bounds {
    #[arg(long, default_value_t = 3)]
    max_prefix: usize,
    #[arg(long, default_value_t = 3)]
    max_period: usize,
}

#[derive(Subcommand)]
enum ShiftCommand {
    /// Hyper cofinality, condition (L) and the simplicity verdict.
    Simplicity {
        shift: String,
        #[arg(long)]
        horizon: Option<usize>,
        /// Depth of the bounded past-equivalence checks.
        #[arg(long, default_value_t = NAIVE_DEPTH)]
        depth: usize,
    },
    /// Cost of rewriting a point past a set of words.
    Cost {
        shift: String,
        /// Comma-separated words.
        #[arg(long)]
        past: String,
        /// Eventually periodic point, e.g. "ab(a)^inf".
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Costs of the doubling family in the gap-word shift.
    Counterexample {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
}

/// A report and whether it settles the question asked.
struct Report {
    body: Value,
    decided: bool,
}

impl Report {
    fn decided(body: Value) -> Self {
        Report { body, decided: true }
    }
}

/// Failure carrying the JSON printed on standard output.
struct Failure(Value);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(json!({ "error": e.to_string() }))
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(json!({ "error": format!("cannot read {path}: {e}") })))
}

fn load_space(path: &str) -> Result<LabelledSpace, Failure> {
    Ok(LabelledSpace::from_json_str(&read(path)?)?)
}

/// A space that must pass validation before analysis.
fn load_normal_space(path: &str) -> Result<LabelledSpace, Failure> {
    let space = load_space(path)?;
    let report = space.validate_normal();
    if !report.is_valid() {
        return Err(invalid_space(&space, &report.violations));
    }
    Ok(space)
}

fn invalid_space(space: &LabelledSpace, violations: &[lsimp_core::lspace::Violation]) -> Failure {
    let witnesses: Vec<String> = violations.iter().map(|v| space.describe_violation(v)).collect();
    Failure(json!({ "error": "not a normal labelled space", "violations": witnesses }))
}

fn set_names(space: &LabelledSpace, set: u64) -> Value {
    Value::from(space.set_names(set))
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Validate { space } => {
            let s = load_space(&space)?;
            let report = s.validate_normal();
            if !report.is_valid() {
                return Err(invalid_space(&s, &report.violations));
            }
            Ok(Report::decided(json!({
                "valid": true,
                "vertices": s.graph().vertex_count(),
                "letters": s.graph().letters().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "family_atoms": s.family().all_atoms().iter().map(|&a| set_names(&s, a)).collect::<Vec<_>>(),
            })))
        }
        Command::Simplicity { space, bounds } => {
            let s = load_normal_space(&space)?;
            let verdict = simplicity_verdict(&s, bounds.max_prefix, bounds.max_period)?;
            Ok(Report::decided(verdict.to_json(&s)))
        }
        Command::Closure { space, set } => {
            let s = load_normal_space(&space)?;
            let generator = s.parse_set_text(&set)?;
            let closure = hereditary_saturated_closure(&s, &[generator])?;
            Ok(Report::decided(json!({
                "generator": set_names(&s, generator),
                "top": set_names(&s, closure.top),
                "members": closure.members(&s).into_iter().map(|m| set_names(&s, m)).collect::<Vec<_>>(),
                "whole_family": closure.top == s.family().top(),
            })))
        }
        Command::Tight { space, bounds } => {
            let s = load_normal_space(&space)?;
            let filters = enumerate_tight(&s, bounds.max_prefix, bounds.max_period);
            Ok(Report::decided(json!({
                "max_prefix": bounds.max_prefix,
                "max_period": bounds.max_period,
                "count": filters.len(),
                "filters": filters.iter().map(|f| f.display(&s)).collect::<Vec<_>>(),
            })))
        }
        Command::Orbit { space, filter, max_word } => {
            let s = load_normal_space(&space)?;
            let xi = TightFilter::parse(&s, &filter)?;
            let points = orbit(&s, &xi, max_word);
            let isotropy = has_nontrivial_isotropy(&s, &xi)
                .map(|w| json!({ "beta": s.fmt_word(&w.beta), "gamma": s.fmt_word(&w.gamma) }));
            Ok(Report::decided(json!({
                "filter": xi.display(&s),
                "max_word": max_word,
                "orbit": points.iter().map(|f| f.display(&s)).collect::<Vec<_>>(),
                "nontrivial_isotropy": isotropy,
            })))
        }
        Command::Semigroup { space, left, right } => {
            let s = load_normal_space(&space)?;
            let (x, y) = (Triple::parse(&s, &left)?, Triple::parse(&s, &right)?);
            let xy = product(&s, &x, &y);
            let both_idempotent = (x.is_zero() || x.is_idempotent()) && (y.is_zero() || y.is_idempotent());
            Ok(Report::decided(json!({
                "left": x.display(&s),
                "right": y.display(&s),
                "product": xy.display(&s),
                "left_star": x.star().display(&s),
                "right_star": y.star().display(&s),
                "left_leq_right": both_idempotent.then(|| idempotent_leq(&s, &x, &y)),
            })))
        }
        Command::Shift { command } => run_shift(command),
    }
}

fn run_shift(command: ShiftCommand) -> Result<Report, Failure> {
    match command {
        ShiftCommand::Simplicity { shift, horizon, depth } => {
            let x = Subshift::from_json_str(&read(&shift)?, horizon)?;
            let verdict = shift_simplicity(&x, depth)?;
            Ok(Report { decided: verdict.simple != Decision::Unknown, body: verdict.to_json(x.system().alphabet()) })
        }
        ShiftCommand::Cost { shift, past, point, horizon } => {
            let x = Subshift::from_json_str(&read(&shift)?, Some(horizon))?;
            let alphabet = x.system().alphabet().to_vec();
            let words = past
                .split(',')
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(|w| parse_letters(&alphabet, w))
                .collect::<Result<Vec<_>, _>>()?;
            let p = Point::parse(&alphabet, &point)?;
            let cost = match &x {
                Subshift::Sft(sft) => sft_cost(sft, &words, &p, horizon)?,
                Subshift::Oracle(o) => oracle_cost(o, &words, &p, horizon)?,
            };
            Ok(Report {
                decided: !matches!(cost, Cost::Unresolved { .. }),
                body: json!({
                    "P": words.iter().map(|w| lsimp_core::shift::fmt_letters(&alphabet, w)).collect::<Vec<_>>(),
                    "x": p.display(&alphabet),
                    "horizon": horizon,
                    "cost": cost.to_json(),
                }),
            })
        }
        ShiftCommand::Counterexample { max_n, horizon } => {
            let report = counterexample_report(max_n, horizon)?;
            Ok(Report { decided: report.resolved() && report.simple != Decision::Unknown, body: report.to_json() })
        }
    }
}

fn print(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e.render());
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(report) => {
            print(&report.body);
            if report.decided {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure(body)) => {
            print(&body);
            ExitCode::from(1)
        }
    }
}
