use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "stuffle", version, about = "Exact weak shuffle and weak stuffle products on words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the product comes from. At most one source may be given.
#[derive(Args, Clone, Debug, Default)]
pub struct SpecArgs {
    /// JSON spec file: an explicit table or a built-in reference.
    #[arg(long, conflicts_with_all = ["builtin", "tuple"])]
    pub spec: Option<PathBuf>,
    /// Built-in product: shuffle, stuffle, hoffman_ihara, sz, bz or null.
    #[arg(long, conflicts_with = "tuple")]
    pub builtin: Option<String>,
    /// Truncation bound for countable built-ins.
    #[arg(long, requires = "builtin")]
    pub max_index: Option<u32>,
    /// Comma-separated tuple of a 2- or 3-letter table, e.g. `1,0,1,1,1,1`.
    #[arg(long)]
    pub tuple: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Comm,
    Assoc,
    Char,
    Dendriform,
    Quadri,
    End,
    Hopf,
    StuffleRelations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    #[value(name = "01")]
    Bool,
    Ext,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Psi,
    Phi1,
    Phi2,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two words.
    Product {
        #[command(flatten)]
        spec: SpecArgs,
        /// Use the end product (recursion on last letters).
        #[arg(long)]
        end: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        u: String,
        v: String,
    },
    /// Check a law up to a total word length.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Alphabet of the classical shuffle when `quadri` runs without a spec.
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        /// Candidate values for the `end` table search.
        #[arg(long, value_enum, default_value = "01")]
        grid: Grid,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List valid tables on a small alphabet.
    Enumerate {
        #[command(subcommand)]
        what: EnumerateKind,
    },
    /// Degree-n elements with vanishing square.
    Kernel {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Leading-word statement and square-zero certificate for the C9 product.
    Statement {
        #[arg(long)]
        degree: usize,
        /// Give up after this many seconds.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Diagonal isomorphisms between table products.
    Iso {
        #[command(subcommand)]
        what: IsoKind,
    },
}

#[derive(Subcommand)]
enum EnumerateKind {
    /// Tables with empty f3 satisfying the characterization.
    Shuffles {
        #[arg(long)]
        alphabet: usize,
        #[arg(long, value_enum, default_value = "01")]
        grid: Grid,
        /// Print every table instead of one per relabelling class.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Commutative and associative contraction maps.
    F3 {
        #[arg(long)]
        alphabet: usize,
        #[arg(long, value_enum, default_value = "01")]
        grid: Grid,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum IsoKind {
    /// Check `map(u □ v) = map(u) □' map(v)` up to a total length.
    Verify {
        #[arg(long, value_enum)]
        map: MapKind,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn configure_threads() {
    let Ok(value) = std::env::var("STUFFLE_THREADS") else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring STUFFLE_THREADS={value}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match cli.command {
        Command::Product { spec, end, format, u, v } => commands::product(&spec, end, format, &u, &v),
        Command::Check { which, spec, max_len, alphabet, grid, format } => {
            commands::check(which, &spec, max_len, alphabet, grid, format)
        }
        Command::Enumerate { what } => match what {
            EnumerateKind::Shuffles { alphabet, grid, all, format } => {
                commands::enumerate_shuffles(alphabet, grid, all, format)
            }
            EnumerateKind::F3 { alphabet, grid, format } => commands::enumerate_f3(alphabet, grid, format),
        },
        Command::Kernel { spec, degree, format } => commands::kernel(&spec, degree, format),
        Command::Statement { degree, budget, format } => commands::statement(degree, budget, format),
        Command::Iso { what } => match what {
            IsoKind::Verify { map, from, to, max_len, format } => commands::iso_verify(map, &from, &to, max_len, format),
        },
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.output);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
