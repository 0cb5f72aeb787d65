//! `effrate` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod figures;
mod output;
mod svg;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use effrate::montecarlo::MIN_SAMPLES;
use effrate::{AlphaMuParams, Execution, McConfig, Method, MisoLink};

use crate::error::{CliError, CliResult};
use crate::output::{Axis, Format};
use crate::sweep::{parse_range, SweepSpec};

#[derive(Parser)]
#[command(
    name = "effrate",
    version,
    about = "Effective rate of MISO links over alpha-mu fading"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Effective rate at one SNR or over an SNR range.
    #[command(allow_negative_numbers = true)]
    Rate(RateArgs),
    /// Fit a single alpha-mu law to the sum of the branch SNRs.
    #[command(allow_negative_numbers = true)]
    FitSum(FitArgs),
    /// Cross-check every method against the others and against simulation.
    Verify(verify::VerifyArgs),
    /// Write the CSV curves and SVG overlay for one figure.
    SweepFigures(figures::FigureArgs),
}

/// Branch law and antenna count.
#[derive(Args, Debug, Clone)]
struct LinkArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    mu: f64,
    /// Number of transmit antennas.
    #[arg(long, default_value_t = 1)]
    nt: u32,
    /// Mean SNR of each branch.
    #[arg(long, default_value_t = 1.0)]
    mean_snr: f64,
}

impl LinkArgs {
    fn branch(&self) -> CliResult<AlphaMuParams> {
        Ok(AlphaMuParams::new(self.alpha, self.mu, self.mean_snr)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Foxh,
    Meijerg,
    Quadrature,
    Nakagami,
    HighSnr,
    MonteCarlo,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Foxh => Method::FoxH,
            MethodArg::Meijerg => Method::MeijerG,
            MethodArg::Quadrature => Method::Quadrature,
            MethodArg::Nakagami => Method::NakagamiClosed,
            MethodArg::HighSnr => Method::HighSnr,
            MethodArg::MonteCarlo => Method::MonteCarlo,
        }
    }
}

/// Seed and size of a simulation.
#[derive(Args, Debug, Clone)]
pub struct McArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of channel realizations per SNR point.
    #[arg(long)]
    samples: Option<u64>,
    /// Independent random streams; results depend on this, not on the thread count.
    #[arg(long, default_value_t = 16)]
    streams: u32,
}

impl McArgs {
    pub fn config(&self, default_samples: u64) -> CliResult<McConfig> {
        let samples = self.samples.unwrap_or(default_samples);
        if samples < MIN_SAMPLES {
            return Err(CliError::param(format!(
                "--samples must be at least {MIN_SAMPLES}, got {samples}"
            )));
        }
        Ok(McConfig::new(samples, self.seed, self.streams)?)
    }
}

#[derive(Args, Debug)]
struct RateArgs {
    #[command(flatten)]
    link: LinkArgs,
    /// Delay exponent A (QoS parameter).
    #[arg(long)]
    delay_a: f64,
    /// Single SNR in dB.
    #[arg(long, conflicts_with = "snr_db_range", required_unless_present = "snr_db_range")]
    snr_db: Option<f64>,
    /// SNR sweep in dB as start:stop:points.
    #[arg(long, allow_hyphen_values = true)]
    snr_db_range: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Foxh)]
    method: MethodArg,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    link: LinkArgs,
    #[arg(long, value_enum, default_value_t = FitFormat::Text)]
    format: FitFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitFormat {
    Text,
    Json,
}

fn exec() -> Execution {
    Execution::default()
}

fn cmd_rate(args: &RateArgs) -> CliResult<()> {
    let link = MisoLink::new(args.link.branch()?, args.link.nt, args.delay_a)?;
    link.fit().map_err(|e| CliError::from_fit(e.clone()))?;
    let method = Method::from(args.method);
    let mc = match method {
        Method::MonteCarlo => Some(args.mc.config(100_000)?),
        _ => None,
    };
    let rows = match (args.snr_db, &args.snr_db_range) {
        (Some(db), _) => sweep::snr_rows(&link, &[db], method, mc.as_ref(), exec())?,
        (None, Some(range)) => {
            let spec = SweepSpec::new(Axis::SnrDb, parse_range(range)?, link, vec![method], mc)?;
            spec.run(exec())?.remove(0)
        }
        (None, None) => return Err(CliError::param("one of --snr-db or --snr-db-range is required")),
    };
    output::write_rows(args.out.as_deref(), args.format, Axis::SnrDb, &rows)
}

fn cmd_fit_sum(args: &FitArgs) -> CliResult<()> {
    let fit = effrate::fit_sum(&args.link.branch()?, args.link.nt).map_err(CliError::from_fit)?;
    let p = &fit.fitted;
    match args.format {
        FitFormat::Text => {
            println!("alpha={:.6}", p.alpha());
            println!("mu={:.6}", p.mu());
            println!("mean_snr={:.6}", p.mean_snr());
            println!("residual_1={:.3e}", fit.residuals[0]);
            println!("residual_2={:.3e}", fit.residuals[1]);
            println!("iterations={}", fit.iterations);
        }
        FitFormat::Json => {
            let v = serde_json::json!({
                "alpha": p.alpha(),
                "mu": p.mu(),
                "mean_snr": p.mean_snr(),
                "residuals": fit.residuals,
                "iterations": fit.iterations,
            });
            println!("{v}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Rate(a) => cmd_rate(&a),
        Command::FitSum(a) => cmd_fit_sum(&a),
        Command::Verify(a) => verify::cmd_verify(&a),
        Command::SweepFigures(a) => figures::cmd_sweep_figures(&a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::param(e.to_string().trim());
            eprintln!("{}", err.to_line());
            return ExitCode::from(err.kind.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_line());
            ExitCode::from(err.kind.exit_code() as u8)
        }
    }
}
