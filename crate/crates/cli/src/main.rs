use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use fibnorm::budget::PROGRESS_INTERVAL;
use fibnorm::Budget;
use fibnorm_cli::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::InvalidInput.exit_code()),
            };
        }
    };
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("fibnorm: {e}");
            return ExitCode::from(Status::InvalidInput.exit_code());
        }
    }
    let mut budget = Budget::new(cli.global.budget);
    if !cli.global.quiet {
        budget = budget.with_progress(PROGRESS_INTERVAL, |steps| {
            eprintln!("fibnorm: {steps} steps into the current scan");
        });
    }

    let start = Instant::now();
    let report = run(&cli, &budget);
    let out = report.render(cli.global.format);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
        return ExitCode::FAILURE;
    }
    if !cli.global.quiet {
        eprintln!("fibnorm: {} finished in {:.3}s", report.command, start.elapsed().as_secs_f64());
    }
    for e in &report.errors {
        eprintln!("fibnorm: {e}");
    }
    ExitCode::from(report.status.exit_code())
}
