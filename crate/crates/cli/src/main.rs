mod cli;
mod output;
mod run;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use cli::{Cli, Format};
use output::{spectrum_csv, write_atomic};
use run::{execute, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("usage error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("could not size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(pass) => ExitCode::from(if pass { 0 } else { 1 }),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let started = Instant::now();
    let mut outcome = execute(cli)?;
    outcome.doc.elapsed_seconds = started.elapsed().as_secs_f64();
    let doc = &outcome.doc;

    if let Some(path) = &cli.global.out {
        let bytes = match (cli.global.format, &outcome.spectrum) {
            (Format::Json, _) => doc.to_json().into_bytes(),
            (Format::Csv, Some(rows)) => spectrum_csv(rows)?,
            (Format::Csv, None) => doc.checks_csv()?,
        };
        write_atomic(path, &bytes)?;
    }

    let mut out = io::stdout().lock();
    let failed: Vec<_> = doc.checks.iter().filter(|c| !c.pass).collect();
    for c in &failed {
        let value = c.value.map_or_else(|| "non-finite".to_string(), |v| format!("{v:.3e}"));
        eprintln!(
            "FAIL {}: value {value}, tolerance {:.1e} ({})",
            c.name, c.tolerance, c.details
        );
    }
    let mut printed = outcome.summary.iter().try_for_each(|line| writeln!(out, "{line}"));
    printed = printed.and_then(|_| {
        writeln!(
            out,
            "{} {}: {} of {} checks pass [{:.2}s]",
            if doc.pass { "PASS" } else { "FAIL" },
            doc.command,
            doc.checks.len() - failed.len(),
            doc.checks.len(),
            doc.elapsed_seconds
        )
    });
    match printed {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(doc.pass),
    }
}
