//! `kleinforge`: command-line front end. File formats are described in
//! FORMATS.md at the repository root.

mod commands;
mod error;
mod io;
mod svg;

use clap::{Parser, Subcommand};

use crate::error::{CliError, Result};
use crate::io::Run;

const THREADS_ENV: &str = "KLEINFORGE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "kleinforge",
    version,
    about = "Generalised Klein bottles: spaces, symmetric fields, Fourier bases, flows, spiking networks and ISI topology",
    after_help = "File schemas are documented in FORMATS.md. KLEINFORGE_THREADS sets the worker count when --threads is absent."
)]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect a space file.
    #[command(subcommand)]
    Space(commands::space::SpaceCmd),
    /// Sample and check fields.
    #[command(subcommand)]
    Field(commands::field::FieldCmd),
    /// Fourier bases of symmetric fields.
    #[command(subcommand)]
    Harmonics(commands::harmonics::HarmonicsCmd),
    /// Streamlines of symmetric vector fields.
    #[command(subcommand)]
    Flow(commands::flow::FlowCmd),
    /// Spiking networks.
    #[command(subcommand)]
    Sds(commands::sds::SdsCmd),
    /// Embedding, dimension and persistence of interval sequences.
    #[command(subcommand)]
    Isi(commands::isi::IsiCmd),
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                CliError::Invalid(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Invalid("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    Ok(())
}

fn dispatch(cli: Cli, run: &mut Run) -> Result<()> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Space(c) => commands::space::run(c, run),
        Command::Field(c) => commands::field::run(c, run),
        Command::Harmonics(c) => commands::harmonics::run(c, run),
        Command::Flow(c) => commands::flow::run(c, run),
        Command::Sds(c) => commands::sds::run(c, run),
        Command::Isi(c) => commands::isi::run(c, run),
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let mut run = Run::new(argv);
    let result = dispatch(cli, &mut run);
    // Whatever was written still gets its manifest.
    let result = result.and(run.finish());
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
