use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyperprox::cli::{cmd_compare, cmd_relations, cmd_search, cmd_validate, exit_code, Options, PairSelection};
use hyperprox::search::{CandidateKind, Mode, SearchTarget, TargetName};
use hyperprox::Error;

/// Finite proximity spaces and hyperspace topologies.
#[derive(Parser, Debug)]
#[command(name = "hyperprox", version)]
struct Cli {
    /// Emit reports as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest ground set accepted (pair routines stay capped at 10).
    #[arg(long, global = true, value_name = "N")]
    cap_n: Option<usize>,
    /// Largest hyperspace CL(X) accepted.
    #[arg(long, global = true, value_name = "N")]
    cap_hyper: Option<usize>,
    /// Omit the generation timestamp for byte-stable output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Topology axioms, T1, proximity axioms and classification, compatibility.
    Validate { file: String },
    /// Near / far / strongly-far / hat-strongly-far table for subset pairs.
    Relations {
        file: String,
        /// `A:B` with named subsets or `{p,q}` literals, or `all` (n ≤ 6).
        /// Defaults to every pair of named subsets.
        #[arg(long)]
        pairs: Vec<String>,
    },
    /// Compare two hypertopologies: vietoris, fell, fell:all, hitmiss:X+Y,
    /// far_miss, sf_miss, far_miss_only, sf_miss_only, trivial.
    Compare {
        file: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Search small models for a witness.
    Search {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Relation evaluations allowed.
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Comma-separated subset of overlap,point_relation,alexandroff,gap,table.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<String>,
        /// Also accept proximities that fail P0–P3.
        #[arg(long)]
        allow_non_basic: bool,
        /// Where to write the witness model.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Randomized,
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidSpec(format!("cannot read {path}: {e}")))
}

fn run(cli: Cli) -> Result<String, Error> {
    let mut opts = Options::with_caps(cli.cap_n, cli.cap_hyper);
    opts.timestamp = !cli.no_timestamp;
    let report = match cli.command {
        Command::Validate { file } => cmd_validate(&read(&file)?, &opts)?,
        Command::Relations { file, pairs } => {
            let selection = match pairs.as_slice() {
                [] => PairSelection::Named,
                [one] if one == "all" => PairSelection::All,
                list => PairSelection::List(list.to_vec()),
            };
            cmd_relations(&read(&file)?, &selection, &opts)?
        }
        Command::Compare { file, left, right } => cmd_compare(&read(&file)?, &left, &right, &opts)?,
        Command::Search { target, min_n, max_n, budget, seed, mode, kinds, allow_non_basic, out } => {
            let mut t = SearchTarget::new(target.parse::<TargetName>()?);
            t.min_n = min_n;
            t.max_n = max_n;
            t.mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Randomized => Mode::Randomized,
            };
            if !kinds.is_empty() {
                t.kinds = kinds.iter().map(|k| k.parse::<CandidateKind>()).collect::<Result<_, _>>()?;
            }
            t.require_basic = !allow_non_basic;
            let (report, witness) = cmd_search(&t, budget, seed, out.as_deref(), &opts)?;
            if let (Some(path), Some(text)) = (&out, &witness) {
                std::fs::write(path, text).map_err(|e| Error::InvalidSpec(format!("cannot write {path}: {e}")))?;
            }
            report
        }
    };
    Ok(report.render(cli.json))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
