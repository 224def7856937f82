use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use algpat::cli::{load, run, Command, Flags, EXIT_INPUT, EXIT_IO};

/// Exhaustive checks on finite models of algebraic patterns.
///
/// Inputs are `.toml`/`.json` documents or inline fixtures such as
/// `fin_star:k=3` or `span_g:group=c2,orbits=2`.
///
/// Exit status: 0 all checks hold, 1 some check fails, 2 some check is
/// undecided, 3 malformed input, 4 the report could not be written.
#[derive(Parser, Debug)]
#[command(name = "algpat", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// seed for the sampling drivers
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// number of random samples
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// candidate budget for enumeration
    #[arg(long, global = true, default_value_t = 1 << 22)]
    budget: usize,
    /// cardinality cap for enumeration
    #[arg(long, global = true, default_value_t = 2)]
    cap: usize,
    /// largest simplex dimension used by homology
    #[arg(long = "dim-cap", global = true, default_value_t = 8)]
    dim_cap: usize,
    /// expected class count for `enumerate`
    #[arg(long, global = true)]
    expect: Option<usize>,
    /// add wall-clock times (reports are then no longer byte-identical)
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// category axioms and the inert-active factorization system
    Validate { input: String },
    /// factorization of each morphism
    Factor {
        input: String,
        #[arg(long)]
        morphism: Option<String>,
    },
    /// soundness
    Sound { input: String },
    /// extendability
    Extendable { input: String },
    /// Segal condition for a `[diagram]`, or random samples
    Segal { input: String },
    /// relative Segal condition for a `[transformation]`, or random samples
    RelativeSegal { input: String },
    /// fibrousness of a projection, with the induced pattern structure
    Fibrous { input: String },
    /// free fibration, roundtrip and equifiberedness of the envelope
    Envelope { input: String },
    /// equifiberedness of a `[model]`
    Equifibered { input: String },
    /// hypotheses of the comparison criterion for a `[morphism]`
    Compare { input: String },
    /// pull a fibrous projection back along a `[morphism]`
    Transport { morphism: String, fibrous: String },
    /// Segal sets up to isomorphism with values of size at most `--cap`
    Enumerate { input: String },
    /// contractibility of a `[category]`
    Homotopy { input: String },
    /// beat points against homology on random posets
    RandomPosets,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let mut flags = Flags {
        seed: cli.seed,
        samples: cli.samples,
        budget: cli.budget,
        cap: cli.cap,
        dim_cap: cli.dim_cap,
        morphism: None,
        expect: cli.expect,
        timing: cli.timing,
    };
    let (cmd, args): (Command, Vec<String>) = match cli.command {
        Cmd::Validate { input } => (Command::Validate, vec![input]),
        Cmd::Factor { input, morphism } => {
            flags.morphism = morphism;
            (Command::Factor, vec![input])
        }
        Cmd::Sound { input } => (Command::Sound, vec![input]),
        Cmd::Extendable { input } => (Command::Extendable, vec![input]),
        Cmd::Segal { input } => (Command::Segal, vec![input]),
        Cmd::RelativeSegal { input } => (Command::RelativeSegal, vec![input]),
        Cmd::Fibrous { input } => (Command::Fibrous, vec![input]),
        Cmd::Envelope { input } => (Command::Envelope, vec![input]),
        Cmd::Equifibered { input } => (Command::Equifibered, vec![input]),
        Cmd::Compare { input } => (Command::Compare, vec![input]),
        Cmd::Transport { morphism, fibrous } => (Command::Transport, vec![morphism, fibrous]),
        Cmd::Enumerate { input } => (Command::Enumerate, vec![input]),
        Cmd::Homotopy { input } => (Command::Homotopy, vec![input]),
        Cmd::RandomPosets => (Command::RandomPosets, vec![]),
    };
    let report = args.iter().map(|a| load(a)).collect::<Result<Vec<_>, _>>().and_then(|docs| run(cmd, &docs, &flags));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cli.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(EXIT_IO as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
