use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use odh_cli::{parse_range, run_rendered, Action, CliError, JobSpec, Mode, OutputFormat};
use odh_core::surfaces::DEFAULT_H_CAP;

/// Order-degree-height surfaces: predicted bounds and actual minimal heights.
///
/// Set ODH_MAX_CELL_SECONDS to bound the time spent on each grid cell; cells
/// that exceed it are reported as absent with a note.
#[derive(Parser, Debug)]
#[command(name = "odh", version)]
struct Args {
    mode: Mode,
    action: Action,
    /// Problem description in JSON.
    #[arg(long)]
    input: PathBuf,
    /// Orders to tabulate, `A..B` inclusive.
    #[arg(long = "r", value_parser = parse_range, default_value = "0..10")]
    r_range: std::ops::RangeInclusive<u32>,
    /// Degrees to tabulate, `A..B` inclusive.
    #[arg(long = "d", value_parser = parse_range, default_value = "0..10")]
    d_range: std::ops::RangeInclusive<u32>,
    /// Largest height tried per cell.
    #[arg(long, default_value_t = DEFAULT_H_CAP)]
    hcap: u32,
    /// Widening of the certificate degree bounds in telescoper searches.
    #[arg(long, default_value_t = 0)]
    slack: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Worker threads (0 uses every core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let job = JobSpec {
        mode: args.mode,
        action: args.action,
        r_range: args.r_range,
        d_range: args.d_range,
        h_cap: args.hcap,
        slack: args.slack,
        input: args.input,
        format: args.format,
        jobs: args.jobs,
    };
    let result = run_rendered(&job).and_then(|text| match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("odh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
