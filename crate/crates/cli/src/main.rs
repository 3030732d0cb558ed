//! `gjs`: verification runs, expression evaluation, enumeration and norm
//! estimates from the command line.
//!
//! Exit codes: 0 on success, 1 when a gated check fails, 2 on any usage,
//! configuration, input or evaluation error.

mod eval;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gjs_core::error::Error;
use gjs_core::fock::{CreationSymbol, FockVector, DEFAULT_DEPTH};
use gjs_core::gjs::{Gjs, DEFAULT_BOTTOM_BUDGET};
use gjs_core::json::{element_from_json, fock_from_json, fock_to_json, pairing_to_json, scalar_to_json};
use gjs_core::planar::PlanarPairing;
use gjs_core::scalar::LoopParameter;
use gjs_core::verify::{dimension_table, run_suites, SuiteConfig};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gjs", version, about = "Exact Temperley-Lieb GJS algebras, Fock modules and bimodules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and write a JSON-lines report.
    Check {
        #[arg(long, default_value = "5/2")]
        delta: String,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        #[arg(long, default_value_t = 3)]
        max_bottom: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-7)]
        float_tol: f64,
        #[arg(long, default_value_t = 64)]
        moment_p_max: usize,
        /// Suite to run; repeat for several. All suites when omitted.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Evaluate a JSON expression tree exactly.
    Eval {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long, default_value = "5/2")]
        delta: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Hom-space dimensions dim V_{b,l,r} for b + l + r <= 2 max_n.
    Dims {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Enumerate the planar pairings with the given boundary.
    Nc {
        #[arg(long, default_value_t = 0)]
        bottom: usize,
        #[arg(long)]
        left: usize,
        #[arg(long, default_value_t = 0)]
        right: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Moment estimates of the norm of an element of a corner (n, n).
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        p_max: usize,
        #[arg(long, default_value = "5/2")]
        delta: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Creation, annihilation and inner products on the Fock module.
    Fock {
        #[arg(long, value_enum)]
        op: FockOp,
        /// Element with one bottom string (create, annihilate).
        #[arg(long)]
        symbol: Option<PathBuf>,
        /// Fock vector or plain element.
        #[arg(long)]
        vector: PathBuf,
        /// Second vector (inner).
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value = "5/2")]
        delta: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FockOp {
    Create,
    Annihilate,
    Inner,
}

enum Failure {
    /// Gated checks failed; the report was still written.
    Gates,
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<eval::EvalError> for Failure {
    fn from(e: eval::EvalError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Gates) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn bottom_budget() -> Result<usize, Failure> {
    match std::env::var("GJS_BOTTOM_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("GJS_BOTTOM_BUDGET must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BOTTOM_BUDGET),
    }
}

fn gjs(delta: &str) -> Result<Gjs, Failure> {
    Ok(Gjs::new(LoopParameter::parse(delta)?).with_bottom_budget(bottom_budget()?))
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(out: &str, text: &str) -> Result<(), Failure> {
    let result = if out == "-" {
        std::io::stdout().lock().write_all(text.as_bytes())
    } else {
        fs::write(out, text)
    };
    result.map_err(|e| Failure::Input(format!("{out}: {e}")))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Check {
            delta,
            max_level,
            max_bottom,
            seed,
            float_tol,
            moment_p_max,
            suites,
            out,
        } => {
            let cfg = SuiteConfig {
                max_level,
                max_bottom,
                seed,
                float_tol,
                moment_p_max,
                bottom_budget: bottom_budget()?,
                ..SuiteConfig::new(&delta)?
            }
            .with_suite_names(&suites)?;
            cfg.validate()?;
            let report = run_suites(&cfg)?;
            write_out(&out, &report.to_json_lines())?;
            let failed: Vec<&str> = report.failures().map(|r| r.name.as_str()).collect();
            let errored = report.records.iter().filter(|r| r.error.is_some()).count();
            eprintln!(
                "{} checks, {} gated failures{}",
                report.records.len(),
                failed.len(),
                if errored > 0 { format!(", {errored} with errors") } else { String::new() }
            );
            if failed.is_empty() {
                Ok(())
            } else {
                eprintln!("failed: {}", failed.join(", "));
                Err(Failure::Gates)
            }
        }
        Command::Eval { expr, delta, out } => {
            let g = gjs(&delta)?;
            let tree = read_json(&expr)?;
            let value = eval::evaluate(&g, &tree)?;
            write_out(&out, &format!("{}\n", value.to_json(&g)))
        }
        Command::Dims { max_n, out } => {
            let rows = dimension_table(max_n)?;
            let mut text = String::new();
            for row in rows {
                text.push_str(&serde_json::to_string(&row).expect("plain data"));
                text.push('\n');
            }
            write_out(&out, &text)
        }
        Command::Nc { bottom, left, right, out } => {
            if (bottom + left + right) % 2 == 1 {
                return Err(Error::OddBoundary(bottom + left + right).into());
            }
            let mut text = String::new();
            for p in PlanarPairing::enumerate(bottom, left + right) {
                text.push_str(&pairing_to_json(&p, left, right).to_string());
                text.push('\n');
            }
            write_out(&out, &text)
        }
        Command::Norm { input, p_max, delta, out } => {
            let g = gjs(&delta)?;
            let parsed = element_from_json(&read_json(&input)?)?;
            if let Some(d) = &parsed.delta {
                if d != g.delta() {
                    return Err(Failure::Input(format!("input is tagged with delta {d} but --delta is {}", g.delta())));
                }
            }
            let x = parsed.element;
            let estimates = g.norm_estimate(&x, p_max)?;
            let mut result = json!({
                "delta": g.delta().to_string(),
                "estimates": estimates.iter().map(|m| json!({"p": m.p, "estimate": m.estimate})).collect::<Vec<_>>(),
            });
            if x.max_bottom() == 0 {
                let (n, _) = x.corner_shape().unwrap_or((0, 0));
                result["gns_norm"] = json!(g.ground_operator_norm(&x, n)?);
            }
            write_out(&out, &format!("{result}\n"))
        }
        Command::Fock {
            op,
            symbol,
            vector,
            other,
            depth,
            delta,
            out,
        } => {
            let g = gjs(&delta)?;
            let read_vector = |path: &PathBuf| -> Result<FockVector, Failure> {
                let v = read_json(path)?;
                if v.get("sectors").is_some() {
                    Ok(fock_from_json(&v)?)
                } else {
                    Ok(FockVector::from_element(depth, &element_from_json(&v)?.element))
                }
            };
            let v = read_vector(&vector)?;
            let result = match op {
                FockOp::Create | FockOp::Annihilate => {
                    let path = symbol.ok_or_else(|| Failure::Input("--symbol is required for create and annihilate".into()))?;
                    let xi = CreationSymbol::new(element_from_json(&read_json(&path)?)?.element)?;
                    let w = if matches!(op, FockOp::Create) { g.create(&xi, &v) } else { g.annihilate(&xi, &v) };
                    fock_to_json(&w, g.delta())
                }
                FockOp::Inner => {
                    let path = other.ok_or_else(|| Failure::Input("--other is required for inner".into()))?;
                    let w = read_vector(&path)?;
                    scalar_to_json(&g.fock_inner(&v, &w), g.delta())
                }
            };
            write_out(&out, &format!("{result}\n"))
        }
    }
}
