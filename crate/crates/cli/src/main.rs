//! `medalg`: exact computations on finite median algebras, JSON in and out.
//!
//! Exit codes: 0 success, 1 a check failed (witness in the output),
//! 2 usage or input error, 3 a size limit refused the computation.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "medalg", version, about = "Exact computations on finite median algebras")]
struct Cli {
    /// Omit runtime fields so output is byte-stable.
    #[arg(long, global = true)]
    stable: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the median axioms; exits 1 with the first failing tuple.
    Verify {
        algebra: PathBuf,
        /// Tuples per sampled axiom family when the carrier is too large to scan.
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank by maximum crossing family, by cube embedding, or both.
    Rank {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value_t = RankMethod::Both)]
        method: RankMethod,
    },
    /// Halfspaces, walls, crossing graph and rank.
    Walls {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value_t = RankMethod::Clique)]
        method: RankMethod,
        /// Enumerate halfspaces by subset scan instead of from edges.
        #[arg(long)]
        brute: bool,
    },
    /// Independence number of a set system or of a function family.
    Ind(IndArgs),
    /// VC dimension of a set system or of its dual.
    Vc {
        #[arg(long)]
        sets: PathBuf,
        #[arg(long)]
        dual: bool,
    },
    /// The embedding into the cube over all halfspaces, with its checks.
    Roller { algebra: PathBuf },
    /// Edge-sum, total, or chain variation of a function.
    Variation {
        algebra: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, value_enum, default_value_t = VariationMode::Chain)]
        mode: VariationMode,
        /// `all`, `coord:<axis>` or `file:<halfspaces.json>` (chain mode).
        #[arg(long, default_value = "all")]
        halfspaces: String,
    },
    /// The automorphism group, or the group generated by given automorphisms.
    Auts {
        algebra: PathBuf,
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// The orbit of a function under the automorphism group.
    Orbit {
        algebra: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Use this group instead of the full automorphism group.
        #[arg(long)]
        generators: Option<PathBuf>,
        /// Check that the orbit's independence number is at most the rank.
        #[arg(long)]
        check_tameness: bool,
    },
    /// Write algebra JSON for a generated family.
    Gen {
        #[command(subcommand)]
        family: commands::GenFamily,
        /// Emit the materialized median table instead of the recipe.
        #[arg(long, global = true)]
        table: bool,
    },
    /// Run every applicable check on one algebra.
    Report {
        algebra: PathBuf,
        /// Seed for the sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct IndArgs {
    #[arg(long)]
    sets: Option<PathBuf>,
    #[arg(long)]
    functions: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankMethod {
    Clique,
    Embed,
    Both,
}

impl RankMethod {
    pub fn name(self) -> &'static str {
        match self {
            RankMethod::Clique => "clique",
            RankMethod::Embed => "embed",
            RankMethod::Both => "both",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariationMode {
    Edge,
    Total,
    Chain,
}

/// Why a command stopped; each kind has its own exit code.
#[derive(Debug)]
pub enum CliError {
    Core(medalg::Error),
    Input(String),
}

impl From<medalg::Error> for CliError {
    fn from(e: medalg::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_refusal() => 3,
            CliError::Core(medalg::Error::Invariant(_)) => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(medalg::Error::Refused { .. }) => "refused",
            CliError::Core(medalg::Error::Invariant(_)) => "invariant",
            CliError::Core(medalg::Error::Precondition(_)) => "precondition",
            CliError::Core(medalg::Error::Malformed(_)) | CliError::Input(_) => "input",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Input(m) => m.clone(),
        }
    }
}

/// A command's JSON and whether its checks passed.
pub struct Output {
    pub body: Value,
    pub ok: bool,
}

impl Output {
    pub fn ok(body: Value) -> Self {
        Output { body, ok: true }
    }

    pub fn checked(body: Value, ok: bool) -> Self {
        Output { body, ok }
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    use commands as c;
    match &cli.command {
        Command::Verify { algebra, trials, seed } => c::verify(algebra, *trials, *seed),
        Command::Rank { algebra, method } => c::rank(algebra, *method),
        Command::Walls { algebra, method, brute } => c::walls(algebra, *method, *brute),
        Command::Ind(args) => match (&args.sets, &args.functions) {
            (Some(sets), _) => c::ind_sets(sets),
            (_, Some(functions)) => c::ind_functions(functions),
            _ => unreachable!("clap requires exactly one source"),
        },
        Command::Vc { sets, dual } => c::vc(sets, *dual),
        Command::Roller { algebra } => c::roller(algebra),
        Command::Variation {
            algebra,
            function,
            mode,
            halfspaces,
        } => c::variation(algebra, function, *mode, halfspaces),
        Command::Auts { algebra, generators } => c::auts(algebra, generators.as_deref()),
        Command::Orbit {
            algebra,
            function,
            generators,
            check_tameness,
        } => c::orbit(algebra, function, generators.as_deref(), *check_tameness),
        Command::Gen { family, table } => c::gen(family, *table),
        Command::Report { algebra, seed } => report::run(algebra, *seed, cli.stable),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let (mut body, code) = match run(&cli) {
        Ok(out) => (out.body, if out.ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("medalg: {}", e.message());
            (json!({"error": {"kind": e.kind(), "message": e.message()}}), e.exit_code())
        }
    };
    // Generated algebra files stay loadable: no extra fields, one line.
    let is_gen = matches!(cli.command, Command::Gen { .. });
    if !cli.stable && !is_gen {
        if let Value::Object(map) = &mut body {
            map.insert("runtime_ms".into(), json!(start.elapsed().as_millis() as u64));
        }
    }
    let text = if is_gen && code == 0 {
        serde_json::to_string(&body)
    } else {
        serde_json::to_string_pretty(&body)
    };
    println!("{}", text.expect("JSON values serialize"));
    ExitCode::from(code)
}
