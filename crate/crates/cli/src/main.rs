use std::path::{Path, PathBuf};
use std::process::ExitCode;

use assay_core::report::{render, Format, RenderOptions};
use assay_core::runtime::{RunOptions, DEFAULT_RESAMPLES, DEFAULT_SEED};
use assay_core::solver::{build_knowledge_base, knowledge_base_json};
use assay_core::speclang::load_spec;
use clap::{Parser, Subcommand, ValueEnum};

/// Selects and runs the statistical tests whose preconditions hold for a
/// declared analysis.
#[derive(Parser)]
#[command(name = "assay", version)]
struct Cli {
    /// Print the knowledge base as JSON and exit.
    #[arg(long, global = true)]
    kb: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analysis a spec describes.
    Analyze(AnalyzeArgs),
    /// Parse and validate a spec without reading its data.
    Validate { spec: PathBuf },
    /// Print the knowledge base as JSON.
    Kb,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Seed for the bootstrap.
    #[arg(long, env = "ASSAY_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Bootstrap resamples.
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    resamples: usize,
    /// List every precondition behind each test in the text report.
    #[arg(long)]
    evidence: bool,
    /// Exit with status 2 when the data contradict a stated assumption.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(1)
}

fn print_kb() -> ExitCode {
    println!("{}", knowledge_base_json(&build_knowledge_base()));
    ExitCode::SUCCESS
}

fn validate(spec: &Path) -> ExitCode {
    match load_spec(spec) {
        Ok(v) => {
            for w in &v.warnings {
                eprintln!("warning: {w}");
            }
            println!("ok: {}", v.spec.hypothesis);
            ExitCode::SUCCESS
        }
        Err(e) => fail(format_args!("{}: {e}", spec.display())),
    }
}

fn analyze(args: &AnalyzeArgs) -> ExitCode {
    let options = RunOptions { seed: args.seed, resamples: args.resamples };
    let report = match assay_core::analyze_file(&args.spec, &options) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let doc = render(&report, format, &RenderOptions { all_evidence: args.evidence });
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, doc) {
                return fail(format_args!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{doc}"),
    }
    if args.strict && !report.warnings.is_empty() {
        for w in &report.warnings {
            eprintln!("conflict: {}", w.message);
        }
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if cli.kb {
        return print_kb();
    }
    match &cli.command {
        Some(Command::Analyze(args)) => analyze(args),
        Some(Command::Validate { spec }) => validate(spec),
        Some(Command::Kb) => print_kb(),
        None => fail("no command given; try `assay --help`"),
    }
}
