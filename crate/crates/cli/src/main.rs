use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use blocklie_cli::{execute, CliError, Format, EXIT_INPUT, EXIT_INTERNAL};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

/// Verify and classify structures of Block type Lie algebras from a job config.
#[derive(Debug, Parser)]
#[command(name = "blocklie", version)]
struct Args {
    /// Job configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Report destination; overrides `output` in the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random draws; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads. Reports do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

fn write_report(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Write {
            path: "stdout".into(),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL as u8);
        }
    }
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Machine => Format::Machine,
    };
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(|| {
        let (config, report, text) = execute(&args.config, args.seed, format)?;
        write_report(args.out.as_ref().or(config.output.as_ref()), &text)?;
        Ok::<_, CliError>(report.outcome.exit_code())
    });
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    let code = match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
        Err(_) => EXIT_INTERNAL,
    };
    ExitCode::from(code as u8)
}
