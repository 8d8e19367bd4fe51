use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use zeno_lab::experiment::{run, validate_file, ExperimentConfig, OutputFormat, RunOptions};

#[derive(Parser)]
#[command(name = "zeno-lab", version, about = "Quantum Zeno dynamics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        quiet: bool,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("ZENO_LAB_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring ZENO_LAB_THREADS={v:?}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match cli.command {
        Command::Validate { config } => {
            let diag = validate_file(&config);
            if diag.is_empty() {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            } else {
                for d in &diag {
                    eprintln!("{}: {d}", config.display());
                }
                ExitCode::from(2)
            }
        }
        Command::Run { config, out, format, seed, quiet } => {
            let opts = RunOptions {
                out_dir: out,
                format: format.map(|f| match f {
                    Format::Csv => OutputFormat::Csv,
                    Format::Json => OutputFormat::Json,
                }),
                seed,
            };
            let result = ExperimentConfig::load(&config).and_then(|c| run(&c, &opts));
            match result {
                Ok(summary) => {
                    if !quiet {
                        println!("{}", summary.line);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
