use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use carousel_cli::{
    render_svg, run_fuzz, run_oracle_check, run_repro3d, run_scenario, run_sweep, to_json, CliError, FuzzKind,
    Scenario,
};
use clap::{Parser, Subcommand};

/// Checks, sweeps, fuzzes and draws carousel instances.
#[derive(Parser)]
#[command(name = "carousel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file; exit 0 verified, 1 refuted, 2 bad input.
    Check { scenario: PathBuf },
    /// Seeded random campaign.
    Fuzz {
        #[arg(long, value_enum)]
        kind: FuzzKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for reproduction scenarios of failing trials.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
    /// Compare the containment engine with the sampling oracle.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Trace the scale sweep for one (j, k) pair.
    Sweep {
        scenario: PathBuf,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Reproduce a sphere counterexample.
    Repro3d {
        #[arg(long)]
        example: String,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        side: Option<f64>,
        #[arg(long)]
        factor: Option<f64>,
    },
    /// Draw a scenario as SVG.
    Render {
        scenario: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check { scenario } => {
            let report = run_scenario(&Scenario::load(&scenario)?)?;
            print!("{}", to_json(&report));
            eprintln!("{}", report.summary);
            Ok(report.exit_code())
        }
        Command::Fuzz {
            kind,
            n,
            seed,
            dump_dir,
        } => {
            let start = Instant::now();
            let report = run_fuzz(kind, n, seed, dump_dir.as_deref())?;
            print!("{}", to_json(&report));
            eprintln!(
                "{} trials, {} failures, {:.2}s",
                report.trials,
                report.failures.len(),
                start.elapsed().as_secs_f64()
            );
            Ok(report.exit_code())
        }
        Command::Oracle { n, seed } => {
            let report = run_oracle_check(n, seed)?;
            print!("{}", to_json(&report));
            eprintln!(
                "agreement {:.4}, {} disagreements outside the band",
                report.agreement_rate(),
                report.outside_band
            );
            Ok(report.exit_code())
        }
        Command::Sweep { scenario, j, k, tol } => {
            let report = run_sweep(&Scenario::load(&scenario)?, j, k, tol)?;
            print!("{}", to_json(&report));
            eprintln!("{}", report.summary);
            Ok(report.exit_code())
        }
        Command::Repro3d {
            example,
            t,
            r,
            side,
            factor,
        } => {
            let report = run_repro3d(&example, t, r, side, factor)?;
            print!("{}", to_json(&report));
            eprintln!("{}", report.summary);
            Ok(report.exit_code())
        }
        Command::Render { scenario, output } => {
            let svg = render_svg(&Scenario::load(&scenario)?)?;
            std::fs::write(&output, svg).map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
