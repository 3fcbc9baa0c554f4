//! Command-line front end: parse a model document and run one command
//! against it. Results go to stdout, diagnostics to stderr; the exit code
//! is 0 on success, 1 on diagnostics, 2 for inconclusive verdicts under
//! --strict.

use clap::{Parser, Subcommand};
use hofix::cli::{self, Command, Config, OutputFormat};
use hofix::dsl;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hofix",
    about = "Exact Sullivan models of homotopy fixed point sets",
    version
)]
struct Args {
    /// Output format: text or structured. HOFIX_FORMAT sets the default.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Exit with status 2 on inconclusive verdicts.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Cli,
}

#[derive(Subcommand)]
enum Cli {
    /// Build the section-space model of the document's fibration.
    SectionModel {
        /// Use the pointed variant (duals of the augmentation ideal only).
        #[arg(long)]
        pointed: bool,
        /// Input file, or - for stdin.
        file: String,
    },
    /// Enumerate retractions and print one model per path component.
    Components { file: String },
    /// Exact cohomology of the document's CDGA up to a degree bound.
    Cohomology {
        #[arg(long, default_value_t = 8)]
        max_degree: i64,
        file: String,
    },
    /// Search nilpotence witnesses for every even generator.
    Elliptic {
        #[arg(long, default_value_t = 16)]
        ncap: u32,
        /// Search with the associated pure differential instead.
        #[arg(long)]
        pure: bool,
        file: String,
    },
    /// Model of the inclusion of fixed points into homotopy fixed points.
    KModel { file: String },
    /// The linear part of the differential over the untruncated base.
    Indecomposables { file: String },
    /// Compare localized indecomposables with the fixed side.
    LocalizeCheck { file: String },
    /// Simplify the document's CDGA and match it against the catalog.
    Identify { file: String },
    /// Certify every path component elliptic through lifted witnesses.
    CertifyElliptic {
        #[arg(long, default_value_t = 16)]
        ncap: u32,
        file: String,
    },
    /// Run the command named by the document's `command` directive.
    Run { file: String },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = Config::default();
    let format = args
        .format
        .or_else(|| std::env::var("HOFIX_FORMAT").ok());
    match format.as_deref() {
        Some("structured") => config.format = OutputFormat::Structured,
        Some("text") | None => config.format = OutputFormat::Text,
        Some(other) => {
            eprintln!("error: unknown format `{other}` (expected text or structured)");
            return ExitCode::from(1);
        }
    }
    config.strict = args.strict;

    let (command, file) = match &args.command {
        Cli::SectionModel { pointed, file } => {
            config.pointed = *pointed;
            (Some(Command::SectionModel), file.clone())
        }
        Cli::Components { file } => (Some(Command::Components), file.clone()),
        Cli::Cohomology { max_degree, file } => {
            config.max_degree = *max_degree;
            (Some(Command::Cohomology), file.clone())
        }
        Cli::Elliptic { ncap, pure, file } => {
            config.n_cap = *ncap;
            config.pure = *pure;
            (Some(Command::Elliptic), file.clone())
        }
        Cli::KModel { file } => (Some(Command::KModel), file.clone()),
        Cli::Indecomposables { file } => (Some(Command::Indecomposables), file.clone()),
        Cli::LocalizeCheck { file } => (Some(Command::LocalizeCheck), file.clone()),
        Cli::Identify { file } => (Some(Command::Identify), file.clone()),
        Cli::CertifyElliptic { ncap, file } => {
            config.n_cap = *ncap;
            (Some(Command::CertifyElliptic), file.clone())
        }
        Cli::Run { file } => (None, file.clone()),
    };

    let input = match read_input(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let doc = match dsl::parse(&input) {
        Ok(doc) => doc,
        Err(diagnostics) => {
            for d in diagnostics {
                eprintln!("{d}");
            }
            return ExitCode::from(1);
        }
    };
    let command = match command {
        Some(c) => c,
        None => match &doc.command {
            Some((name, span)) => match Command::from_name(name) {
                Some(c) => c,
                None => {
                    eprintln!("{span}: error: unknown command directive `{name}`");
                    return ExitCode::from(1);
                }
            },
            None => {
                eprintln!("error: document has no `command` directive");
                return ExitCode::from(1);
            }
        },
    };

    match cli::run(command, &doc, &config) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.exit_code as u8)
        }
        Err(diagnostics) => {
            for d in diagnostics {
                eprintln!("{d}");
            }
            ExitCode::from(1)
        }
    }
}
