//! `dvg`: command-line front end for the dieudonne library.
//!
//! Exit codes: 0 on success, 1 when a verdict contradicts the expectation,
//! 2 on malformed input or invalid parameters.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dieudonne::constructions::{build_from_blocks, witness_twist};
use dieudonne::formula_one::{a_number, np_via_cyclic_vector};
use dieudonne::harness::{
    default_precision, run_table, verify_cutoff_upper_with, witness_lower, Verdict, WitnessOptions,
};
use dieudonne::json::{module_from_json, module_to_json, polygon_from_json, qx_to_json};
use dieudonne::newton::{bounds, np_enumerate, np_of_module};
use dieudonne::{RingParams, WittRing};

#[derive(Parser)]
#[command(
    name = "dvg",
    version,
    about = "Dieudonne modules, Newton polygons and isogeny cutoffs"
)]
struct Cli {
    #[command(flatten)]
    io: Io,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input file (default: stdin).
    #[arg(long = "in", global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long = "out", global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon of a module.
    Np,
    /// a-number of a module.
    Anumber,
    /// Annihilating relation of a cyclic vector and the polygon it yields.
    Qx {
        #[arg(long, default_value_t = 256)]
        budget: usize,
    },
    /// Minimal module of a polygon.
    Minimal {
        /// Polygon JSON.
        #[arg(long, conflicts_with = "ci_di", required_unless_present = "ci_di")]
        np: Option<String>,
        /// Simple blocks as "c,d;c,d;...".
        #[arg(long = "ci-di")]
        ci_di: Option<String>,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Witness pair showing the cutoff bound is attained.
    Witness {
        #[arg(long)]
        c: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        ring: RingArgs,
        /// Random level-(j-1) trials reported next to the injected twist.
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print one module of the pair instead of the report.
        #[arg(long, value_enum)]
        emit_module: Option<Which>,
    },
    /// Perturb a module at a level and compare Newton polygons.
    Verify {
        /// Default: max(j, 1) for the module's (c, d).
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Use the witness twist for the module's (c, d) as trial 0.
        #[arg(long)]
        inject_twist: bool,
        #[arg(long, value_enum, default_value_t = Expect::Stable)]
        expect: Expect,
    },
    /// Dieudonne module of the Cartier dual.
    Dual,
    /// All Newton polygons of codimension c and dimension d.
    Enumerate {
        #[arg(long)]
        c: u32,
        #[arg(long)]
        d: u32,
    },
    /// Table of cutoff bounds.
    Bounds {
        #[arg(long)]
        cmax: u32,
        #[arg(long)]
        dmax: u32,
    },
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    deg: usize,
    /// Default: deg * d + j + 4.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Base,
    Twisted,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Stable,
    Counterexample,
}

enum Failure {
    Input(String),
    Verdict(String, Value),
}

impl From<dieudonne::Error> for Failure {
    fn from(e: dieudonne::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_json(io: &Io) -> Result<Value, Failure> {
    let mut text = String::new();
    match &io.input {
        Some(path) => {
            text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")))
}

fn write_json(io: &Io, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match &io.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_blocks(text: &str) -> Result<Vec<(u32, u32)>, Failure> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (c, d) = pair
                .split_once(',')
                .ok_or_else(|| Failure::Input(format!("expected \"c,d\", got {pair:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Failure::Input(format!("bad block {pair:?}")))
            };
            Ok((parse(c)?, parse(d)?))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let io = &cli.io;
    match &cli.command {
        Command::Np => {
            let (module, _) = module_from_json(&read_json(io)?)?;
            Ok(serde_json::to_value(np_of_module(&module)?).expect("polygon serializes"))
        }
        Command::Anumber => {
            let (module, _) = module_from_json(&read_json(io)?)?;
            Ok(json!({ "a_number": a_number(&module)? }))
        }
        Command::Qx { budget } => {
            let (module, _) = module_from_json(&read_json(io)?)?;
            let (cv, qx) = np_via_cyclic_vector(&module, *budget)?;
            Ok(qx_to_json(&qx, Some(&cv)))
        }
        Command::Minimal { np, ci_di, ring } => {
            let blocks = match (np, ci_di) {
                (Some(text), _) => {
                    let value: Value = serde_json::from_str(text)
                        .map_err(|e| Failure::Input(format!("invalid polygon JSON: {e}")))?;
                    polygon_from_json(&value)?.to_simple_blocks()
                }
                (None, Some(text)) => parse_blocks(text)?,
                (None, None) => return Err(Failure::Input("give --np or --ci-di".into())),
            };
            let c: u32 = blocks.iter().map(|b| b.0).sum();
            let d: u32 = blocks.iter().map(|b| b.1).sum();
            if c + d == 0 {
                return Err(Failure::Input("empty polygon".into()));
            }
            let precision = ring
                .precision
                .unwrap_or_else(|| default_precision(c, d, ring.deg));
            let w = Arc::new(WittRing::new(RingParams::new(ring.p, ring.deg, precision))?);
            let module = build_from_blocks(&w, &blocks)?;
            Ok(module_to_json(&module, Some("minimal")))
        }
        Command::Witness {
            c,
            d,
            ring,
            trials,
            seed,
            emit_module,
        } => {
            let options = WitnessOptions {
                p: ring.p,
                deg: ring.deg,
                precision: ring.precision,
                observational_trials: *trials,
                seed: *seed,
            };
            let report = witness_lower(*c, *d, options)?;
            let value = match emit_module {
                Some(Which::Base) => module_to_json(&report.base, Some("traverso-witness-base")),
                Some(Which::Twisted) => {
                    module_to_json(&report.twisted, Some("traverso-witness-twisted"))
                }
                None => serde_json::to_value(&report).expect("report serializes"),
            };
            if report.passed() {
                Ok(value)
            } else {
                Err(Failure::Verdict("witness checks failed".into(), value))
            }
        }
        Command::Verify {
            level,
            trials,
            seed,
            inject_twist,
            expect,
        } => {
            let (module, provenance) = module_from_json(&read_json(io)?)?;
            let (c, d) = (module.codim(), module.dim());
            let level = level.unwrap_or_else(|| bounds(c, d).j.max(1));
            let injected = if *inject_twist {
                vec![witness_twist(module.ring_arc(), c, d)?]
            } else {
                Vec::new()
            };
            let provenance = provenance.unwrap_or_else(|| "input".to_string());
            let report =
                verify_cutoff_upper_with(&module, &provenance, level, *trials, *seed, &injected)?;
            let value = serde_json::to_value(&report).expect("report serializes");
            let wanted = match expect {
                Expect::Stable => Verdict::AllStable,
                Expect::Counterexample => Verdict::CounterexampleFound,
            };
            if report.verdict() == wanted {
                Ok(value)
            } else {
                Err(Failure::Verdict(
                    format!("verdict {:?}, expected {wanted:?}", report.verdict()),
                    value,
                ))
            }
        }
        Command::Dual => {
            let (module, provenance) = module_from_json(&read_json(io)?)?;
            let tag = format!("dual({})", provenance.as_deref().unwrap_or("input"));
            Ok(module_to_json(&module.dual()?, Some(&tag)))
        }
        Command::Enumerate { c, d } => {
            if c + d == 0 {
                return Err(Failure::Input("c + d must be positive".into()));
            }
            Ok(serde_json::to_value(np_enumerate(*c, *d)).expect("polygons serialize"))
        }
        Command::Bounds { cmax, dmax } => {
            Ok(serde_json::to_value(run_table(*cmax, *dmax)?).expect("table serializes"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => match write_json(&cli.io, &value) {
            Ok(()) => ExitCode::SUCCESS,
            Err(Failure::Input(msg) | Failure::Verdict(msg, _)) => {
                eprintln!("dvg: {msg}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Input(msg)) => {
            eprintln!("dvg: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verdict(msg, value)) => {
            let _ = write_json(&cli.io, &value);
            eprintln!("dvg: {msg}");
            ExitCode::from(1)
        }
    }
}
