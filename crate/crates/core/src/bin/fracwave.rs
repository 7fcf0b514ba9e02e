use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracwave::cli;

#[derive(Parser)]
#[command(name = "fracwave", version, about = "Run fractional-damping wave experiments from TOML configs")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment named in a config file.
    Run {
        config: PathBuf,
        /// Where reports go (default: `output_dir` from the config, else out/<experiment>).
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Override a config value, e.g. `--override integrator.dt=5e-4`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List the available presets.
    ListPresets,
    /// Print the config template of a preset.
    Template { name: String },
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.command {
        Command::Run { config, output_dir, overrides } => {
            let (code, msg) = cli::run_file(&config, output_dir.as_deref(), &overrides);
            if code == cli::EXIT_PASS {
                println!("{msg}");
            } else {
                eprintln!("{msg}");
            }
            ExitCode::from(code as u8)
        }
        Command::ListPresets => {
            println!("{}", cli::preset_listing());
            ExitCode::SUCCESS
        }
        Command::Template { name } => match cli::find(&name) {
            Some(p) => {
                print!("{}", p.template);
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("unknown preset '{name}' (see list-presets)");
                ExitCode::from(cli::EXIT_CONFIG as u8)
            }
        },
    }
}
