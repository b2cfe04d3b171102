use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use ddesim::config::resolved_pairs;
use ddesim::executor::Parallel;
use ddesim::output::{parameter_map, sidecar_path, write_metadata, Metadata};
use ddesim::{load_config, run, Command, RunError};

#[derive(Parser)]
#[command(
    name = "ddesim",
    version,
    about = "Driven dissipative two-emitter simulator"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Flat `key = value` config file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// CSV output path; the metadata goes next to it as `.json`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Sweep threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Report map periods in units of 1/(pi gamma_a).
    #[arg(long)]
    pi_units: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ddesim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, RunError> {
    let start = Instant::now();
    let mut config = load_config(cli.config.as_deref(), &cli.set)?;
    config.pi_units |= cli.pi_units;
    let exec = Parallel::new(cli.workers).map_err(|e| std::io::Error::other(e.to_string()))?;
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cli.command.name())));

    let report = run(cli.command, &config, &exec)?;

    let mut table = report.table;
    let mut header = vec![format!(
        "ddesim {} {}",
        env!("CARGO_PKG_VERSION"),
        cli.command.name()
    )];
    header.extend(
        resolved_pairs(&config)
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}")),
    );
    header.append(&mut table.comments);
    table.comments = header;
    table.write_file(&out)?;

    for note in &report.notes {
        eprintln!("ddesim: {note}");
    }
    let meta = Metadata {
        tool: "ddesim",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name().into(),
        parameters: parameter_map(&resolved_pairs(&config)),
        n_max: config.params.n_max,
        workers: exec.workers(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        cell_seconds: report.cell_seconds,
        notes: report.notes,
    };
    write_metadata(&sidecar_path(&out), &meta)?;

    if report.failed_checks > 0 {
        eprintln!("ddesim: {} validation checks failed", report.failed_checks);
        return Ok(3);
    }
    Ok(0)
}
