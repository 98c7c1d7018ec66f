mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use fermidim::Error;

use args::{Cli, Command, Format};
use config::Config;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::InvalidParameter(_) | Error::SizeCap { .. } | Error::Dimension(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Config::default(),
    };
    let bits = match config::precision_bits(cli.precision_bits, &cfg) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let format = cli.format.or(cfg.format).unwrap_or(Format::Json);

    let outcome = match cli.command {
        Command::Count { lattice, m, n } => commands::count(lattice, m, n, bits),
        Command::Spectrum { n, u, tol } => commands::spectrum(n, u, tol),
        Command::Verify {
            what,
            n,
            u,
            points,
            seed,
        } => {
            let points = points.or(cfg.points).unwrap_or(commands::DEFAULT_POINTS);
            let seed = seed.or(cfg.seed).unwrap_or(commands::DEFAULT_SEED);
            commands::verify(what, n, u, points, seed)
        }
        Command::Qseries { kind } => commands::qseries(kind),
        Command::Jordan { n, exact, tol } => commands::jordan(n, exact, tol),
        Command::Entropy => commands::entropy(),
        Command::Growth { max } => commands::growth(max),
    };

    match outcome {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = out.write(format, &mut stdout) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(EXIT_FAIL);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_FAIL })
        }
    }
}
