use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toro_cli::{analyze, factor, run_file, verify, RunOptions};

#[derive(Parser)]
#[command(name = "toro", version, about = "Toroidalize morphism germs between log-smooth surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a germ file and print its ramification data and subcase.
    Analyze { file: PathBuf },
    /// Run the algorithm to a toroidal atlas.
    Run {
        file: PathBuf,
        /// Step limit; defaults to the file, then TORO_MAX_STEPS, then 64.
        #[arg(long)]
        max_steps: Option<usize>,
        /// Write the JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the source blowup forest (DOT) here.
        #[arg(long)]
        dot_x: Option<PathBuf>,
        /// Write the target blowup forest (DOT) here.
        #[arg(long)]
        dot_y: Option<PathBuf>,
    },
    /// Check a germ file or every `.toml` in a directory, comparing against
    /// `<name>.trace.json` where present.
    Verify { path: PathBuf },
    /// Factor the map between two smooth fans into blowups and blowdowns.
    Factor {
        fan_a: PathBuf,
        fan_b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match &cli.command {
        Command::Analyze { file } => analyze(file, &mut out),
        Command::Run { file, max_steps, trace, dot_x, dot_y } => {
            let opts = RunOptions {
                max_steps: *max_steps,
                trace: trace.clone(),
                dot_x: dot_x.clone(),
                dot_y: dot_y.clone(),
            };
            run_file(file, &opts, &mut out)
        }
        Command::Verify { path } => verify(path, &mut out, &mut io::stderr()),
        Command::Factor { fan_a, fan_b, out: path } => factor(fan_a, fan_b, path.as_deref(), &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
