use std::process::ExitCode;

use clap::Parser;

use sectorroots_cli::{render, run, write_outputs, Cli, EXIT_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let result = pool.install(|| {
        let report = run(&cli)?;
        if let Some(dir) = &cli.out {
            write_outputs(dir, &report)?;
        }
        anyhow::Ok(report)
    });
    match result {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", render(&report));
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
