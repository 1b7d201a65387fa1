//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::arith::Prime;
use crate::error::Error;
use crate::oracle::{oracle_act, parse_oracle_element, random_oracle_element};
use crate::registry::{exit_status, sweep, CheckRegistry};
use crate::secondary::{divisibility_report, ThetaFamily};
use crate::steenrod::parse_expression;
use crate::thom::{parse_thom_element, strategy_by_name, thom_act};

#[derive(Parser, Debug)]
#[command(name = "kappadiv", version, about = "Steenrod algebra rewriting and kappa-class divisibility checks")]
struct Cli {
    /// Emit JSON (one object per line) instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the admissible normal form of an expression
    Reduce {
        expr: String,
        #[arg(short, long)]
        p: u32,
        /// Accept P^i and b at p = 2 (read as Sq^{2i} and Sq^1)
        #[arg(long)]
        dictionary: bool,
    },
    /// Apply an operation to an element of a test module
    Act {
        expr: String,
        #[arg(long, value_enum)]
        target: Target,
        /// Element to act on; for the oracle target `random:<degree>` draws one
        #[arg(long)]
        on: String,
        #[arg(short, long)]
        p: u32,
        #[arg(long)]
        dictionary: bool,
        /// Number of generators of the oracle module
        #[arg(long)]
        generators: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Thom-module action strategy
        #[arg(long, default_value = "closed")]
        strategy: String,
        /// Series truncation for the cartan strategy
        #[arg(long)]
        truncation: Option<u64>,
    },
    /// Print theta_s, v_s and w_s
    Theta {
        #[arg(short, long)]
        p: u32,
        #[arg(short, long)]
        s: u32,
    },
    /// Run a named check for s = 1..=s-max
    Verify {
        check: String,
        #[arg(short, long)]
        p: u32,
        #[arg(long)]
        s_max: u32,
    },
    /// Print a table
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(short, long)]
        p: u32,
        #[arg(long)]
        max_i: u32,
        #[arg(long, default_value_t = 2)]
        max_v: u32,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Target {
    Oracle,
    Thom,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum TableKind {
    Divisibility,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: msg.into() }
    }
}

/// Runs with the built-in checks.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_registry(args, &CheckRegistry::builtin())
}

pub fn run_with_registry<I, T>(args: I, registry: &CheckRegistry) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome::usage(text)
            };
        }
    };
    match dispatch(&cli, registry) {
        Ok(o) => o,
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}

fn prime(p: u32) -> Result<Prime, Error> {
    Prime::new(p)
}

fn dispatch(cli: &Cli, registry: &CheckRegistry) -> Result<Outcome, Error> {
    let mut out = String::new();
    let mut code = 0;
    match &cli.command {
        Command::Reduce { expr, p, dictionary } => {
            let p = prime(*p)?;
            let el = parse_expression(expr, p, *dictionary)?.reduce()?;
            if cli.json {
                let v = json!({
                    "prime": p.get(),
                    "input": expr,
                    "normal_form": el.to_string(),
                    "degree": el.degree(),
                });
                writeln!(out, "{v}").unwrap();
            } else {
                writeln!(out, "{el}").unwrap();
            }
        }
        Command::Act { expr, target, on, p, dictionary, generators, seed, strategy, truncation } => {
            let p = prime(*p)?;
            let op = parse_expression(expr, p, *dictionary)?.reduce()?;
            let (input, result) = match target {
                Target::Oracle => {
                    let x = match on.strip_prefix("random:") {
                        Some(d) => {
                            let d = d.trim().parse::<u64>().map_err(|_| Error::parse(8, "expected a degree"))?;
                            random_oracle_element(p, generators.unwrap_or(3), d, *seed)?
                        }
                        None => parse_oracle_element(on, p, *generators)?,
                    };
                    let y = oracle_act(&op, &x)?;
                    (x.to_string(), y.to_string())
                }
                Target::Thom => {
                    let x = parse_thom_element(on, p)?;
                    let strat = strategy_by_name(strategy, *truncation)?;
                    let y = thom_act(strat.as_ref(), &op, &x)?;
                    (x.to_string(), y.to_string())
                }
            };
            if cli.json {
                let v = json!({
                    "prime": p.get(),
                    "target": match target { Target::Oracle => "oracle", Target::Thom => "thom" },
                    "operation": op.to_string(),
                    "on": input,
                    "result": result,
                });
                writeln!(out, "{v}").unwrap();
            } else {
                writeln!(out, "{result}").unwrap();
            }
        }
        Command::Theta { p, s } => {
            let p = prime(*p)?;
            let fam = ThetaFamily::new(*s, p);
            if cli.json {
                let v = json!({
                    "prime": p.get(),
                    "s": s,
                    "theta": fam.theta.to_string(),
                    "v": fam.v.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "w": fam.w.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                });
                writeln!(out, "{v}").unwrap();
            } else {
                writeln!(out, "theta = {}", fam.theta).unwrap();
                writeln!(out, "v = {}", fam.v).unwrap();
                writeln!(out, "w = {}", fam.w).unwrap();
            }
        }
        Command::Verify { check, p, s_max } => {
            let p = prime(*p)?;
            let Some(c) = registry.get(check) else {
                return Ok(Outcome::usage(format!(
                    "error: unknown check `{check}` (available: {})\n",
                    registry.names().join(", ")
                )));
            };
            let reports = sweep(c, p, *s_max);
            for r in &reports {
                if cli.json {
                    writeln!(out, "{}", serde_json::to_string(r).expect("serializable")).unwrap();
                } else {
                    writeln!(out, "{r}").unwrap();
                }
            }
            code = exit_status(&reports);
        }
        Command::Table { kind: TableKind::Divisibility, p, max_i, max_v } => {
            let p = prime(*p)?;
            for entry in divisibility_report(p, *max_i, *max_v) {
                let r = entry.to_report();
                if cli.json {
                    let mut v = serde_json::to_value(&r).expect("serializable");
                    v["entry"] = serde_json::to_value(&entry).expect("serializable");
                    writeln!(out, "{v}").unwrap();
                } else {
                    writeln!(out, "{r}").unwrap();
                }
            }
        }
    }
    Ok(Outcome { code, stdout: out, stderr: String::new() })
}
