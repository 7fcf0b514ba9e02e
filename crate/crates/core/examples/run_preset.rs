//! Runs a named preset in-process, as the `fracwave` binary would.
//!
//! `cargo run --release --example run_preset -- energy-equality integrator.t_final=1.0`

use fracwave::cli::{self, RunConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "norm-identity".into());
    let overrides: Vec<String> = args.collect();
    let Some(preset) = cli::find(&name) else {
        eprintln!("unknown preset '{name}'\n{}", cli::preset_listing());
        std::process::exit(cli::EXIT_CONFIG);
    };
    let cfg = match RunConfig::parse(preset.template, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(cli::EXIT_CONFIG);
        }
    };
    let dir = std::env::temp_dir().join("fracwave").join(&name);
    match cli::execute(&cfg, &dir) {
        Ok((report, files)) => {
            for c in &report.checks {
                println!("{}", c.summary());
            }
            for f in files {
                println!("wrote {}", f.display());
            }
            std::process::exit(if report.pass { cli::EXIT_PASS } else { cli::EXIT_CHECK_FAILED });
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(cli::exit_code(&e));
        }
    }
}
