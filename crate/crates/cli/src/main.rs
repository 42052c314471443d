//! `combfock`: species counts, Fock bases, operator matrices, identity checks
//! and pair-partition functions from the command line.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use combfock::dsl::species;
use combfock::fock::FockSpace;
use combfock::operators::{unit_color, Op, OperatorMatrix};
use combfock::pairpart::{enumerate, fock_t, moments_for, space_for_t, PairPartition};
use combfock::relations::{run_named, CheckConfig, Construction, NamedArgs};
use combfock::weights::parse_weight;
use combfock::Complex64;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "combfock", version, about = "Weighted Fock spaces of combinatorial species")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Labeled structures of a species expression.
    #[command(subcommand)]
    Species(SpeciesCmd),
    /// Orbit basis of a truncated Fock space.
    #[command(subcommand)]
    Fock(FockCmd),
    /// Operator matrices.
    #[command(subcommand)]
    Op(OpCmd),
    /// Verify a named operator identity; exits 1 when it fails.
    Check(CheckArgs),
    /// Vacuum moments of `a(e) + a*(e)`.
    Moments {
        weight: String,
        #[arg(long)]
        order: usize,
        /// Appended as `:q` to a bare weight name.
        #[arg(long)]
        q: Option<f64>,
    },
    /// Pair partitions.
    #[command(subcommand)]
    Pairpart(PairpartCmd),
}

#[derive(Subcommand, Debug)]
enum SpeciesCmd {
    /// Number of labeled structures on each level up to `--max-level`.
    Count {
        expr: String,
        #[arg(long, default_value_t = 5)]
        max_level: usize,
    },
    /// Every structure on one level.
    List {
        expr: String,
        #[arg(long)]
        level: usize,
    },
}

#[derive(Subcommand, Debug)]
enum FockCmd {
    Basis {
        expr: String,
        #[arg(long, default_value_t = 1)]
        colors: usize,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        /// Use the one-point structure as vacuum.
        #[arg(long)]
        seeded: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OpKind {
    Annihilate,
    Create,
    Number,
}

#[derive(Subcommand, Debug)]
enum OpCmd {
    /// Nonzero entries as (row, col, re, im) over the global orbit order.
    Matrix {
        weight: String,
        #[arg(long, value_enum)]
        kind: OpKind,
        /// Color of the test vector `e_j`.
        #[arg(long, default_value_t = 0)]
        color: usize,
        #[arg(long, default_value_t = 1)]
        colors: usize,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    Forest,
    Tree,
}

#[derive(Args, Debug)]
struct CheckArgs {
    name: String,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Polynomial coefficients, constant term first.
    #[arg(long, value_delimiter = ',')]
    poly: Option<Vec<f64>>,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long, default_value_t = 2)]
    colors: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = ConstructionArg::Forest)]
    construction: ConstructionArg,
}

#[derive(Subcommand, Debug)]
enum PairpartCmd {
    /// `t(V)` for every pair partition with `--r` pairs.
    T {
        weight: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Pair partitions with `--r` pairs and their crossing status.
    Enum {
        #[arg(long)]
        r: usize,
    },
}

enum Failure {
    Usage(String),
    Identity,
}

impl From<combfock::Error> for Failure {
    fn from(e: combfock::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Serialize)]
struct BasisRecord {
    level: usize,
    representative_encoding: String,
    coloring: Vec<u8>,
    orbit_size: u64,
    norm_sq: u64,
}

fn with_q(weight: &str, q: Option<f64>) -> Result<String, Failure> {
    match q {
        None => Ok(weight.to_string()),
        Some(q) if !weight.contains(':') && !weight.contains('(') => Ok(format!("{weight}:{q}")),
        Some(_) => Err(Failure::Usage(format!("--q given but `{weight}` already carries its parameters"))),
    }
}

fn execute(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let json = |default: Format| cli.format.unwrap_or(default) == Format::Json;
    match cli.command {
        Command::Species(SpeciesCmd::Count { expr, max_level }) => {
            let s = species(&expr)?;
            let counts: Vec<usize> = (0..=max_level).map(|n| s.enumerate(n).len()).collect();
            if json(Format::Csv) {
                writeln!(out, "{}", serde_json::json!({ "species": s.name(), "counts": counts }))?;
            } else {
                writeln!(out, "level,count")?;
                for (n, c) in counts.iter().enumerate() {
                    writeln!(out, "{n},{c}")?;
                }
            }
        }
        Command::Species(SpeciesCmd::List { expr, level }) => {
            let s = species(&expr)?;
            let all: Vec<String> = s.enumerate(level).iter().map(|x| x.to_string()).collect();
            if json(Format::Csv) {
                writeln!(out, "{}", serde_json::to_string(&all)?)?;
            } else {
                for x in all {
                    writeln!(out, "{x}")?;
                }
            }
        }
        Command::Fock(FockCmd::Basis { expr, colors, max_level, seeded }) => {
            let s = species(&expr)?;
            let space =
                if seeded { FockSpace::seeded(s, colors, max_level)? } else { FockSpace::new(s, colors, max_level)? };
            let csv = !json(Format::Json);
            if csv {
                writeln!(out, "level,representative_encoding,coloring,orbit_size,norm_sq")?;
            }
            for b in space.basis_upto(max_level)? {
                let record = BasisRecord {
                    level: b.level(),
                    representative_encoding: b.structure.to_string(),
                    coloring: b.coloring.clone(),
                    orbit_size: b.orbit_size,
                    norm_sq: b.norm_sq,
                };
                if csv {
                    let c: Vec<String> = record.coloring.iter().map(|x| x.to_string()).collect();
                    writeln!(
                        out,
                        "{},\"{}\",{},{},{}",
                        record.level,
                        record.representative_encoding,
                        c.join(" "),
                        record.orbit_size,
                        record.norm_sq
                    )?;
                } else {
                    writeln!(out, "{}", serde_json::to_string(&record)?)?;
                }
            }
        }
        Command::Op(OpCmd::Matrix { weight, kind, color, colors, max_level }) => {
            let w = parse_weight(&weight)?;
            let space = FockSpace::new(w.species(), colors, max_level)?;
            if color >= colors {
                return Err(Failure::Usage(format!("--color {color} is out of range for --colors {colors}")));
            }
            let h = unit_color(colors, color);
            let op = match kind {
                OpKind::Annihilate => Op::annihilator(&space, &w, &h)?,
                OpKind::Create => Op::creator(&space, &w, &h)?,
                OpKind::Number => Op::Number,
            };
            let m = OperatorMatrix::build(&space, &op)?;
            let entries = m.entries();
            if json(Format::Csv) {
                let rows: Vec<(usize, usize, f64, f64)> = entries.iter().map(|(i, j, x)| (*i, *j, x.re, x.im)).collect();
                writeln!(out, "{}", serde_json::json!({ "dim": m.dim(), "entries": rows }))?;
            } else {
                writeln!(out, "row,col,re,im")?;
                for (i, j, x) in entries {
                    writeln!(out, "{i},{j},{:e},{:e}", x.re, x.im)?;
                }
            }
        }
        Command::Check(args) => {
            let named = NamedArgs {
                q: args.q,
                c: args.c,
                poly: args.poly,
                construction: match args.construction {
                    ConstructionArg::Forest => Construction::Forest,
                    ConstructionArg::Tree => Construction::Tree,
                },
            };
            let report = run_named(&args.name, &named, CheckConfig::new(args.colors, args.levels, args.tol))?;
            if json(Format::Json) {
                writeln!(out, "{}", serde_json::to_string(&report)?)?;
            } else {
                writeln!(out, "name,weight,deviation,tol,pass")?;
                writeln!(out, "{},{},{:e},{:e},{}", report.name, report.weight, report.deviation, report.tol, report.pass)?;
            }
            if !report.pass {
                return Err(Failure::Identity);
            }
        }
        Command::Moments { weight, order, q } => {
            let table = moments_for(&with_q(&weight, q)?, order)?;
            if json(Format::Csv) {
                writeln!(out, "{}", serde_json::to_string(&table)?)?;
            } else {
                writeln!(out, "order,value")?;
                for (n, v) in table.values.iter().enumerate() {
                    writeln!(out, "{n},{v}")?;
                }
            }
        }
        Command::Pairpart(PairpartCmd::T { weight, r, q }) => {
            let (space, w) = space_for_t(&with_q(&weight, q)?, r)?;
            let rows: Vec<(String, Complex64)> = enumerate(r)
                .into_iter()
                .map(|v| Ok((v.to_string(), fock_t(&space, &w, &v)?)))
                .collect::<combfock::Result<_>>()?;
            if json(Format::Csv) {
                let records: Vec<_> =
                    rows.iter().map(|(v, t)| serde_json::json!({ "V": v, "re": t.re, "im": t.im })).collect();
                writeln!(out, "{}", serde_json::Value::Array(records))?;
            } else {
                writeln!(out, "V,re,im")?;
                for (v, t) in rows {
                    writeln!(out, "\"{v}\",{},{}", t.re, t.im)?;
                }
            }
        }
        Command::Pairpart(PairpartCmd::Enum { r }) => {
            let all: Vec<PairPartition> = enumerate(r);
            if json(Format::Csv) {
                let records: Vec<_> = all
                    .iter()
                    .map(|v| serde_json::json!({ "V": v.to_string(), "noncrossing": v.is_noncrossing() }))
                    .collect();
                writeln!(out, "{}", serde_json::Value::Array(records))?;
            } else {
                writeln!(out, "V,noncrossing")?;
                for v in all {
                    writeln!(out, "\"{v}\",{}", v.is_noncrossing())?;
                }
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `argv` and returns the process exit code: 0 on success,
/// 1 when an identity check fails, 2 on usage errors.
fn run(argv: impl IntoIterator<Item = String>) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code as u8;
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(cli, &mut out) {
        Ok(()) => 0,
        Err(Failure::Identity) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args()))
}
