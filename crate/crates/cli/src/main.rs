//! `seatplan`: seat-arrangement instances, stability checks and Hamiltonian
//! path reductions from the command line.
//!
//! Exit codes: 0 success or property holds, 1 property fails / no solution /
//! no path, 2 malformed input or internal contradiction, 3 budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use seatplan::digraph::{hamiltonian_path, Digraph};
use seatplan::formats::{self, InstanceFile};
use seatplan::reductions::{extract_path, forward_witness, reduce, ReducedInstance, Theorem};
use seatplan::solver::{self, SolveOptions, Status, Strategy};
use seatplan::{Arrangement, Instance, Stability};

const SUCCESS: u8 = 0;
const FAILURE: u8 = 1;
const INVALID: u8 = 2;
const UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "seatplan", version, about = "Seat arrangement stability and Hamiltonian-path reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a digraph into a gadget seating instance.
    Reduce {
        digraph: PathBuf,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        /// Grid height for efa-grid (>= 3) and esa-grid (>= 4).
        #[arg(long)]
        rows: Option<usize>,
        /// Append a universal sink first if the digraph lacks one.
        #[arg(long)]
        auto_star: bool,
        #[arg(short, long)]
        out: PathBuf,
        /// Also write a certified witness seating built from a Hamiltonian path.
        #[arg(long, value_name = "FILE")]
        emit_witness: Option<PathBuf>,
    },
    /// Check an arrangement for envy-freeness or exchange-stability.
    Check {
        #[arg(value_enum)]
        mode: Mode,
        instance: PathBuf,
        arrangement: PathBuf,
    },
    /// Decide whether an envy-free or exchange-stable arrangement exists.
    Solve {
        #[arg(value_enum)]
        mode: Mode,
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "backtrack")]
        strategy: StrategyArg,
        /// Search-node cap for the backtracking strategy.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Where to write the witness; printed to stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Read a Hamiltonian path of the source digraph off a reduced instance's seating.
    ExtractPath { instance: PathBuf, arrangement: PathBuf },
    /// Reduce, solve the source exactly, build and check the witness, and map it back.
    Roundtrip {
        digraph: PathBuf,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        auto_star: bool,
    },
    /// Find a Hamiltonian path (lexicographically smallest) exactly.
    Hampath { digraph: PathBuf },
    /// Generate a random digraph.
    Gen {
        #[arg(long)]
        n: usize,
        /// Probability of each ordered arc.
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append a universal sink.
        #[arg(long)]
        star: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print a grid seating with each agent's utility.
    Render { instance: PathBuf, arrangement: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Efa2,
    EfaGrid,
    Esa2,
    Esa3,
    EsaGrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(alias = "efa", alias = "ef")]
    EnvyFree,
    #[value(alias = "esa", alias = "es")]
    ExchangeStable,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Naive,
    Backtrack,
}

impl TheoremArg {
    fn resolve(self, rows: Option<usize>) -> Result<Theorem> {
        let name = match self {
            TheoremArg::Efa2 => "efa2",
            TheoremArg::EfaGrid => "efa-grid",
            TheoremArg::Esa2 => "esa2",
            TheoremArg::Esa3 => "esa3",
            TheoremArg::EsaGrid => "esa-grid",
        };
        Ok(Theorem::from_name(name, rows)?)
    }
}

impl From<Mode> for Stability {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::EnvyFree => Stability::EnvyFree,
            Mode::ExchangeStable => Stability::ExchangeStable,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_digraph(path: &Path) -> Result<Digraph> {
    formats::digraph_from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance_file(path: &Path) -> Result<InstanceFile> {
    formats::instance_file_from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    load_instance_file(path)?
        .to_instance()
        .with_context(|| format!("parsing {}", path.display()))
}

fn load_arrangement(path: &Path, instance: &Instance) -> Result<Arrangement> {
    formats::arrangement_from_json(&read(path)?, instance).with_context(|| format!("parsing {}", path.display()))
}

fn prepare_source(d: Digraph, auto_star: bool) -> Result<Digraph> {
    if d.is_dhp_star() {
        Ok(d)
    } else if auto_star {
        Ok(d.with_universal_sink())
    } else {
        bail!("the digraph has no universal sink at v_{}; pass --auto-star to append one", d.len())
    }
}

fn path_string(path: &[usize]) -> String {
    path.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_reduce(
    digraph: &Path,
    theorem: Theorem,
    auto_star: bool,
    out: &Path,
    emit_witness: Option<&Path>,
) -> Result<u8> {
    let source = prepare_source(load_digraph(digraph)?, auto_star)?;
    let ri = reduce(&source, theorem)?;
    write(out, &formats::reduced_to_json(&ri))?;
    let (rows, cols) = ri.instance().seats().dims().expect("reductions build grids");
    println!("{}: {} agents on {rows}x{cols}", theorem, ri.instance().len());
    let Some(witness_path) = emit_witness else {
        return Ok(SUCCESS);
    };
    match hamiltonian_path(&source)? {
        Some(path) => {
            let pi = forward_witness(&ri, &path)?;
            write(witness_path, &formats::arrangement_to_json(ri.instance(), &pi))?;
            println!("witness from path {}", path_string(&path));
            Ok(SUCCESS)
        }
        None => {
            println!("no Hamiltonian path; no witness written");
            Ok(FAILURE)
        }
    }
}

fn cmd_check(mode: Mode, instance: &Path, arrangement: &Path) -> Result<u8> {
    let inst = load_instance(instance)?;
    let pi = load_arrangement(arrangement, &inst)?;
    let report = inst.report(&pi)?;
    let p = inst.profile();
    let holds = match mode {
        Mode::EnvyFree => {
            for &(i, j) in &report.envies {
                println!("envy: {} -> {}", p.name(i), p.name(j));
            }
            println!("envy-free: {}", yes_no(report.is_envy_free()));
            report.is_envy_free()
        }
        Mode::ExchangeStable => {
            for &(i, j) in &report.blocking_pairs {
                println!("blocking pair: {} <-> {}", p.name(i), p.name(j));
            }
            println!("exchange-stable: {}", yes_no(report.is_exchange_stable()));
            report.is_exchange_stable()
        }
    };
    Ok(if holds { SUCCESS } else { FAILURE })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_solve(mode: Mode, instance: &Path, options: SolveOptions, out: Option<&Path>) -> Result<u8> {
    let inst = load_instance(instance)?;
    let outcome = solver::solve(&inst, mode.into(), options)?;
    let label = match outcome.status {
        Status::Yes(_) => "YES",
        Status::No => "NO",
        Status::Unknown => "UNKNOWN",
    };
    println!("status: {label}");
    println!("nodes: {}", outcome.nodes_explored);
    println!("elapsed: {:.3}s", outcome.elapsed.as_secs_f64());
    match outcome.status {
        Status::Yes(pi) => {
            let json = formats::arrangement_to_json(&inst, &pi);
            match out {
                Some(path) => write(path, &json)?,
                None => print!("{json}"),
            }
            Ok(SUCCESS)
        }
        Status::No => Ok(FAILURE),
        Status::Unknown => Ok(UNKNOWN),
    }
}

fn load_reduced(path: &Path) -> Result<ReducedInstance> {
    let file = load_instance_file(path)?;
    match file.to_reduced().with_context(|| format!("parsing {}", path.display()))? {
        Some(ri) => Ok(ri),
        None => bail!("{} has no reduction block", path.display()),
    }
}

fn cmd_extract_path(instance: &Path, arrangement: &Path) -> Result<u8> {
    let ri = load_reduced(instance)?;
    let pi = load_arrangement(arrangement, ri.instance())?;
    match extract_path(&ri, &pi) {
        Ok(path) => {
            println!("{}", path_string(&path));
            Ok(SUCCESS)
        }
        Err(e) => {
            println!("extraction failed: {e}");
            Ok(FAILURE)
        }
    }
}

/// Runs every stage and cross-checks them. Any disagreement is an internal
/// contradiction and is reported as an error.
fn cmd_roundtrip(digraph: &Path, theorem: Theorem, auto_star: bool) -> Result<u8> {
    let source = prepare_source(load_digraph(digraph)?, auto_star)?;
    let ri = reduce(&source, theorem)?;
    println!("reduce: {} agents", ri.instance().len());
    let Some(path) = hamiltonian_path(&source)? else {
        println!("hampath: no Hamiltonian path");
        return Ok(FAILURE);
    };
    println!("hampath: {}", path_string(&path));
    let pi = forward_witness(&ri, &path).context("forward witness")?;
    let notion = theorem.target();
    if !ri.instance().satisfies(&pi, notion)? {
        bail!("contradiction: the forward witness fails the {notion:?} check");
    }
    println!("check: {notion:?} holds");
    let back = extract_path(&ri, &pi).context("contradiction: extraction from a certified witness failed")?;
    if !source.is_hamiltonian_path(&back) {
        bail!("contradiction: extracted sequence {} is not a Hamiltonian path", path_string(&back));
    }
    println!("extract: {}", path_string(&back));
    Ok(SUCCESS)
}

fn cmd_hampath(digraph: &Path) -> Result<u8> {
    let d = load_digraph(digraph)?;
    match hamiltonian_path(&d)? {
        Some(path) => {
            println!("{}", path_string(&path));
            Ok(SUCCESS)
        }
        None => {
            println!("no Hamiltonian path");
            Ok(FAILURE)
        }
    }
}

fn cmd_gen(n: usize, p: f64, seed: u64, star: bool, out: Option<&Path>) -> Result<u8> {
    if !(0.0..=1.0).contains(&p) {
        bail!("arc probability {p} is outside [0, 1]");
    }
    let mut d = Digraph::random(n, p, seed)?;
    if star {
        d = d.with_universal_sink();
    }
    let json = formats::digraph_to_json(&d);
    match out {
        Some(path) => write(path, &json)?,
        None => print!("{json}"),
    }
    Ok(SUCCESS)
}

fn cmd_render(instance: &Path, arrangement: &Path) -> Result<u8> {
    let inst = load_instance(instance)?;
    let pi = load_arrangement(arrangement, &inst)?;
    let utilities = inst.utilities(&pi)?;
    let p = inst.profile();
    let label = |seat: usize| {
        let a = pi.occupant(seat);
        (p.name(a).to_string(), utilities[a.index()].to_string())
    };
    match inst.seats().dims() {
        Some((rows, cols)) => {
            let cells: Vec<(String, String)> = (0..rows * cols).map(label).collect();
            let width = cells.iter().map(|(n, u)| n.len().max(u.len())).max().unwrap_or(1);
            for r in 0..rows {
                let row = &cells[r * cols..(r + 1) * cols];
                let line = |pick: fn(&(String, String)) -> &String| {
                    row.iter()
                        .map(|c| format!("{:<width$}", pick(c)))
                        .collect::<Vec<_>>()
                        .join(" ")
                        .trim_end()
                        .to_string()
                };
                println!("{}", line(|c| &c.0));
                println!("{}", line(|c| &c.1));
            }
        }
        None => {
            for seat in 0..inst.len() {
                let (name, utility) = label(seat);
                let neighbours = inst.seats().neighbors(seat)?;
                println!("seat {seat}: {name} (utility {utility}) next to {neighbours:?}");
            }
        }
    }
    Ok(SUCCESS)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Reduce {
            digraph,
            theorem,
            rows,
            auto_star,
            out,
            emit_witness,
        } => cmd_reduce(&digraph, theorem.resolve(rows)?, auto_star, &out, emit_witness.as_deref()),
        Command::Check {
            mode,
            instance,
            arrangement,
        } => cmd_check(mode, &instance, &arrangement),
        Command::Solve {
            mode,
            instance,
            strategy,
            budget,
            workers,
            out,
        } => {
            let strategy = match strategy {
                StrategyArg::Naive => Strategy::Naive,
                StrategyArg::Backtrack => Strategy::Backtrack,
            };
            let options = SolveOptions {
                strategy,
                budget,
                workers,
            };
            cmd_solve(mode, &instance, options, out.as_deref())
        }
        Command::ExtractPath { instance, arrangement } => cmd_extract_path(&instance, &arrangement),
        Command::Roundtrip {
            digraph,
            theorem,
            rows,
            auto_star,
        } => cmd_roundtrip(&digraph, theorem.resolve(rows)?, auto_star),
        Command::Hampath { digraph } => cmd_hampath(&digraph),
        Command::Gen { n, p, seed, star, out } => cmd_gen(n, p, seed, star, out.as_deref()),
        Command::Render { instance, arrangement } => cmd_render(&instance, &arrangement),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INVALID)
        }
    }
}
