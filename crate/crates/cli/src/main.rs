//! `nss`: explore, evaluate and verify NSS crystals from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nss_core::crystalgraph::{
    census_table, check_axioms, explore, export, import_json, kostant, CrystalGraph, Format,
};
use nss_core::maya::{canonical_diagrams, Kind, MayaDiagram};
use nss_core::mvoracle::{compare, Mode as OracleMode};
use nss_core::nss::{eval, theta, CartanData, NssDatum};
use nss_core::par::{self, Execution};

#[derive(Parser)]
#[command(name = "nss", version, about = "NSS crystals for affine sl_n")]
struct Cli {
    /// Cap the number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every data-parallel step sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Explore the crystal from O and write the graph.
    Explore(ExploreArgs),
    /// Print the value of a word's NSS datum at one Maya diagram.
    Eval(EvalArgs),
    /// Check the crystal axioms and the census against Kostant.
    Verify(VerifyArgs),
    /// Compare NSS values with the Fock-space oracle.
    OracleCheck(OracleArgs),
    /// Print the Kostant partition function at a root-lattice vector.
    Kostant(KostantArgs),
}

#[derive(Args)]
struct Rank {
    /// The n of affine sl_n (at least 2).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    rank: u32,
}

#[derive(Args)]
struct ExploreArgs {
    #[command(flatten)]
    rank: Rank,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Box bound for deduplication; defaults to rank * (depth + 1).
    #[arg(long)]
    max_boxes: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    rank: Rank,
    /// Comma-separated residues, oldest first; empty for O.
    #[arg(long, default_value = "")]
    word: String,
    /// JSON file holding a Maya diagram. Right-black diagrams are evaluated through theta.
    #[arg(long)]
    diagram: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Required unless --graph is given.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..), required_unless_present = "graph")]
    rank: Option<u32>,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long)]
    max_boxes: Option<usize>,
    /// Verify a previously exported JSON graph instead of exploring.
    #[arg(long, conflicts_with_all = ["rank", "max_boxes"])]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    rank: Rank,
    #[arg(long, default_value = "")]
    word: String,
    #[arg(long, default_value_t = 6)]
    max_boxes: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Symbolic)]
    mode: ModeArg,
    /// Seed for random mode (required there, rejected otherwise).
    #[arg(long, required_if_eq("mode", "random"))]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct KostantArgs {
    #[command(flatten)]
    rank: Rank,
    /// Comma-separated coefficients over the simple roots.
    #[arg(long)]
    beta: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Symbolic,
    Random,
}

enum Failure {
    Verification(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn cartan(rank: u32) -> Result<CartanData, Failure> {
    CartanData::new(rank as usize).map_err(usage)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::Usage(format!("invalid {what} entry {t:?}"))))
        .collect()
}

fn datum(cartan: CartanData, word: &str) -> Result<NssDatum, Failure> {
    let word: Vec<usize> = parse_list(word, "word")?;
    NssDatum::from_word(cartan, &word).map_err(usage)
}

fn write_out(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_explore(args: &ExploreArgs, exec: Execution) -> CmdResult {
    let c = cartan(args.rank.rank)?;
    let max_boxes = args.max_boxes.unwrap_or(c.rank() * (args.depth + 1));
    let g = explore(c, args.depth, max_boxes, exec).map_err(usage)?;
    let format = match args.format {
        FormatArg::Dot => Format::Dot,
        FormatArg::Json => Format::Json,
    };
    write_out(args.output.as_deref(), &export(&g, format).map_err(usage)?)
}

fn cmd_eval(args: &EvalArgs) -> CmdResult {
    let m = datum(cartan(args.rank.rank)?, &args.word)?;
    let d: MayaDiagram = serde_json::from_str(&read_file(&args.diagram)?).map_err(usage)?;
    let value = match d.kind() {
        Kind::LeftBlack => eval(&m, &d),
        Kind::RightBlack => theta(&m, &d),
    }
    .map_err(usage)?;
    println!("{value}");
    Ok(())
}

fn report_graph(g: &CrystalGraph) -> CmdResult {
    let violations = check_axioms(g);
    let rows = census_table(g, g.depth as u64).map_err(usage)?;
    println!("{:<20} {:>8} {:>8}  status", "beta", "nodes", "kostant");
    for row in &rows {
        let beta = format!("{:?}", row.beta);
        println!(
            "{beta:<20} {:>8} {:>8}  {}",
            row.nodes,
            row.kostant,
            if row.ok() { "ok" } else { "MISMATCH" }
        );
    }
    for v in &violations {
        println!("violation: {v}");
    }
    let mismatches = rows.iter().filter(|r| !r.ok()).count();
    println!(
        "n={} depth={} nodes={} edges={}: {} axiom violations, {} census mismatches",
        g.n,
        g.depth,
        g.len(),
        g.edges.len(),
        violations.len(),
        mismatches
    );
    if violations.is_empty() && mismatches == 0 {
        println!("PASS");
        Ok(())
    } else {
        Err(Failure::Verification("FAIL".into()))
    }
}

fn cmd_verify(args: &VerifyArgs, exec: Execution) -> CmdResult {
    let g = match (&args.graph, args.rank) {
        (Some(path), _) => import_json(&read_file(path)?).map_err(usage)?,
        (None, Some(rank)) => {
            let c = cartan(rank)?;
            let max_boxes = args.max_boxes.unwrap_or(c.rank() * (args.depth + 1));
            explore(c, args.depth, max_boxes, exec).map_err(usage)?
        }
        (None, None) => return Err(usage("either --rank or --graph is required")),
    };
    report_graph(&g)
}

fn cmd_oracle_check(args: &OracleArgs, exec: Execution) -> CmdResult {
    let c = cartan(args.rank.rank)?;
    let m = datum(c, &args.word)?;
    let mode = match (args.mode, args.seed) {
        (ModeArg::Symbolic, None) => OracleMode::Symbolic,
        (ModeArg::Random, Some(seed)) => OracleMode::Random { seed },
        (ModeArg::Symbolic, Some(_)) => return Err(usage("--seed is only valid with --mode random")),
        (ModeArg::Random, None) => return Err(usage("--mode random needs --seed")),
    };
    let gammas = canonical_diagrams(c.rank(), args.max_boxes);
    let report = compare(&m, &gammas, mode, exec).map_err(usage)?;
    if let Some(path) = &args.output {
        let json = serde_json::to_string_pretty(&report).map_err(usage)? + "\n";
        write_out(Some(path), &json)?;
    }
    let bad: Vec<_> = report.mismatches().collect();
    for r in &bad {
        println!("mismatch: {}  nss={} oracle={}", r.diagram, r.nss, r.oracle);
    }
    println!(
        "word={:?} diagrams={} mismatches={}: {}",
        report.word,
        report.results.len(),
        bad.len(),
        if report.pass { "PASS" } else { "FAIL" }
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification("FAIL".into()))
    }
}

fn cmd_kostant(args: &KostantArgs) -> CmdResult {
    let c = cartan(args.rank.rank)?;
    let beta: Vec<u64> = parse_list(&args.beta, "beta")?;
    if beta.len() != c.rank() {
        return Err(usage(format!("beta needs {} entries, got {}", c.rank(), beta.len())));
    }
    println!("{}", kostant(c, &beta));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = par::configure_threads(t) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let result = match &cli.command {
        Command::Explore(a) => cmd_explore(a, exec),
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a, exec),
        Command::OracleCheck(a) => cmd_oracle_check(a, exec),
        Command::Kostant(a) => cmd_kostant(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Verification(msg) => eprintln!("{msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
