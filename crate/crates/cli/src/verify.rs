//! Cross-checks of every evaluation path, printed as one table row per grid
//! point and check.

use std::f64::consts::LN_2;
use std::time::Instant;

use clap::Args;
use effrate::effective_rate::asymptotic::{high_snr_check, rate_high_snr, rate_low_snr, wideband_metrics};
use effrate::effective_rate::exact::{rate_exact_foxh, rate_exact_meijerg, rate_exact_quadrature, rate_nakagami};
use effrate::effective_rate::{db_to_linear, linear_to_db, linspace};
use effrate::montecarlo::simulate_curve;
use effrate::special::ln_gamma;
use effrate::{fit_sum, AlphaMuParams, Error, McConfig, MisoLink};

use crate::error::{CliError, CliResult, Kind};
use crate::exec;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// 10^5 realizations per simulated point (the default).
    #[arg(long, conflicts_with = "full")]
    fast: bool,
    /// 10^7 realizations per simulated point.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    streams: u32,
    /// Negative control: give the analytic side of the simulation check a
    /// scale parameter built with the wrong moment exponent.
    #[arg(long)]
    inject_beta_fault: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    /// Out of tolerance where the slack is known and documented.
    Warn,
    Fail,
}

struct Check {
    group: &'static str,
    point: String,
    value: f64,
    reference: f64,
    tolerance: String,
    status: Status,
}

#[derive(Default)]
struct Report {
    checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, group: &'static str, point: String, value: f64, reference: f64, tolerance: String, ok: bool) {
        self.checks.push(Check {
            group,
            point,
            value,
            reference,
            tolerance,
            status: if ok { Status::Pass } else { Status::Fail },
        });
    }

    fn relative(&mut self, group: &'static str, point: String, value: f64, reference: f64, tol: f64) {
        let ok = (value - reference).abs() <= tol * reference.abs();
        self.push(group, point, value, reference, format!("rel {tol:.0e}"), ok);
    }

    fn absolute(&mut self, group: &'static str, point: String, value: f64, reference: f64, tol: f64) {
        let ok = (value - reference).abs() <= tol;
        self.push(group, point, value, reference, format!("abs {tol:.0e}"), ok);
    }

    fn record_error(&mut self, group: &'static str, point: String, e: &Error) {
        self.checks.push(Check {
            group,
            point: format!("{point} [{e}]"),
            value: f64::NAN,
            reference: f64::NAN,
            tolerance: "-".into(),
            status: Status::Fail,
        });
    }

    fn print(&self) {
        println!(
            "{:<10} {:<46} {:>14} {:>14} {:>10} {:>16} status",
            "check", "point", "value", "reference", "|delta|", "tolerance"
        );
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Warn => "WARN",
                Status::Fail => "FAIL",
            };
            println!(
                "{:<10} {:<46} {:>14.8} {:>14.8} {:>10.2e} {:>16} {status}",
                c.group,
                c.point,
                c.value,
                c.reference,
                (c.value - c.reference).abs(),
                c.tolerance
            );
        }
    }

    fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }
}

const ALPHAS: [f64; 3] = [0.8, 2.0, 4.0];
const MUS: [f64; 2] = [1.0, 2.0];
const NTS: [u32; 3] = [1, 2, 4];
const AS: [f64; 3] = [0.5, 1.0, 2.0];

fn unit_link(alpha: f64, mu: f64, n_t: u32, a: f64) -> Result<MisoLink, Error> {
    MisoLink::new(AlphaMuParams::unit(alpha, mu)?, n_t, a)
}

fn methods(report: &mut Report) {
    for alpha in ALPHAS {
        for mu in MUS {
            for n_t in NTS {
                for a in AS {
                    let link = match unit_link(alpha, mu, n_t, a) {
                        Ok(l) => l,
                        Err(e) => {
                            report.record_error("methods", format!("a={alpha} m={mu} n={n_t} A={a}"), &e);
                            continue;
                        }
                    };
                    for rho in [0.1, 1.0, 10.0, 100.0] {
                        let point = format!("a={alpha} m={mu} n={n_t} A={a} rho={rho}");
                        let quad = match rate_exact_quadrature(&link, rho) {
                            Ok(q) => q,
                            Err(e) => {
                                report.record_error("methods", point, &e);
                                continue;
                            }
                        };
                        match rate_exact_foxh(&link, rho) {
                            Ok(v) => report.relative("fox_h", point.clone(), v, quad, 1e-6),
                            Err(e) => report.record_error("fox_h", point.clone(), &e),
                        }
                        match rate_exact_meijerg(&link, rho) {
                            Ok(v) => report.relative("meijer_g", point, v, quad, 1e-6),
                            Err(Error::RationalizationCap { .. }) => {}
                            Err(e) => report.record_error("meijer_g", point, &e),
                        }
                    }
                }
            }
        }
    }
}

fn nakagami(report: &mut Report) {
    for m in [0.5, 1.0, 2.0, 3.5] {
        for n_t in [1, 2] {
            for a in [0.5, 1.0] {
                for rho in [1.0, 10.0] {
                    let point = format!("m={m} n={n_t} A={a} rho={rho}");
                    let r = unit_link(2.0, m, n_t, a)
                        .and_then(|l| Ok((rate_exact_foxh(&l, rho)?, rate_nakagami(m, 1.0, n_t, a, rho)?)));
                    match r {
                        Ok((fox, closed)) => report.relative("nakagami", point, fox, closed, 1e-8),
                        Err(e) => report.record_error("nakagami", point, &e),
                    }
                }
            }
        }
    }
}

fn gamma_closure(report: &mut Report) {
    for mu in [0.5, 1.0, 2.5] {
        for n_t in [2, 4, 8] {
            let point = format!("alpha=2 mu={mu} n={n_t}");
            match AlphaMuParams::unit(2.0, mu).and_then(|b| fit_sum(&b, n_t)) {
                Ok(fit) => {
                    report.absolute("fit", format!("{point} alpha"), fit.fitted.alpha(), 2.0, 1e-6);
                    report.absolute("fit", format!("{point} mu"), fit.fitted.mu(), n_t as f64 * mu, 1e-6);
                }
                Err(e) => report.record_error("fit", point, &e),
            }
        }
    }
}

/// Unit-mean branch whose mean is recomputed from a scale built with the
/// first, not the second, moment exponent.
fn faulty_branch(alpha: f64, mu: f64) -> Result<AlphaMuParams, Error> {
    let shift = ln_gamma(mu + 2.0 / alpha) - ln_gamma(mu + 1.0 / alpha);
    AlphaMuParams::new(alpha, mu, shift.exp())
}

fn simulation(report: &mut Report, cfg: &McConfig, fault: bool) -> Result<(), Error> {
    let grid = linspace(0.0, 20.0, 11);
    let families: [(&str, Vec<(f64, f64)>); 2] = [
        ("fig1", ALPHAS.iter().chain(&[8.0]).map(|&a| (a, 2.0)).collect()),
        ("fig2", [1.0, 2.0, 4.0].iter().map(|&m| (4.0, m)).collect()),
    ];
    for (name, family) in families {
        let mut previous: Option<Vec<f64>> = None;
        for (alpha, mu) in family {
            let truth = MisoLink::new(AlphaMuParams::unit(alpha, mu)?, 2, 0.5)?;
            let analytic_branch = if fault {
                faulty_branch(alpha, mu)?
            } else {
                *truth.branch()
            };
            let analytic = MisoLink::new(analytic_branch, 2, 0.5)?;
            let sim = simulate_curve(&truth, &grid, cfg, exec())?;
            let mut exact = Vec::with_capacity(grid.len());
            for p in sim.points() {
                let value = rate_exact_foxh(&analytic, db_to_linear(p.snr_db))?;
                let ci = p.ci_halfwidth.unwrap_or(0.0);
                let delta = (p.rate - value).abs();
                report.push(
                    "simulate",
                    format!("{name} a={alpha} m={mu} {} dB", p.snr_db),
                    p.rate,
                    value,
                    format!("2% or ci {ci:.1e}"),
                    delta <= 0.02 * value || delta <= ci,
                );
                exact.push(value);
            }
            if let Some(prev) = previous {
                let gap = exact
                    .iter()
                    .zip(&prev)
                    .map(|(b, a)| b - a)
                    .fold(f64::INFINITY, f64::min);
                report.push(
                    "ordering",
                    format!("{name} a={alpha} m={mu} min gain"),
                    gap,
                    0.0,
                    "> 0".into(),
                    gap > 0.0,
                );
            }
            previous = Some(exact);
        }
    }
    Ok(())
}

fn high_snr(report: &mut Report) {
    for alpha in ALPHAS {
        for mu in MUS {
            for n_t in NTS {
                for a in AS {
                    let point = format!("a={alpha} m={mu} n={n_t} A={a}");
                    let run = || -> Result<Option<(f64, f64, bool)>, Error> {
                        let l = unit_link(alpha, mu, n_t, a)?;
                        let check = high_snr_check(&l)?;
                        if !check.converges {
                            return Ok(None);
                        }
                        let step = 2f64.sqrt();
                        let slope = rate_exact_foxh(&l, 1e5 * step)? - rate_exact_foxh(&l, 1e5 / step)?;
                        let gap = rate_exact_foxh(&l, 1e6)? - rate_high_snr(&l, 1e6)?;
                        Ok(Some((slope, gap, check.conservative)))
                    };
                    match run() {
                        Ok(None) => {}
                        Ok(Some((slope, gap, conservative))) => {
                            report.absolute("high_snr", format!("{point} slope"), slope, 1.0, 1e-2);
                            report.absolute("high_snr", format!("{point} gap@60dB"), gap, 0.0, 1e-2);
                            // Inside one unit of the convergence bound the asymptote is
                            // approached too slowly for a 60 dB check to be meaningful.
                            if !conservative {
                                for c in report.checks.iter_mut().rev().take(2) {
                                    if c.status == Status::Fail {
                                        c.status = Status::Warn;
                                    }
                                }
                            }
                        }
                        Err(e) => report.record_error("high_snr", point, &e),
                    }
                }
            }
        }
    }
}

fn wideband(report: &mut Report) -> Result<(), Error> {
    for a in AS {
        let l = unit_link(2.0, 2.0, 2, a)?;
        let m = wideband_metrics(&l)?;
        report.absolute("wideband", format!("EbN0 min A={a}"), m.eb_n0_min, LN_2, 1e-12);
        let rho = 1e-4;
        let intercept = linear_to_db(rho / rate_exact_foxh(&l, rho)?);
        report.absolute(
            "wideband",
            format!("intercept dB A={a}"),
            intercept,
            m.eb_n0_min_db(),
            0.05,
        );
        for db in (-30..=5).map(f64::from) {
            let rho = db_to_linear(db);
            let exact = rate_exact_foxh(&l, rho)?;
            if exact > 0.3 {
                break;
            }
            let approx = rate_low_snr(&l, rho / exact)?.rate;
            report.relative("low_snr", format!("A={a} {db} dB, R={exact:.3}"), approx, exact, 0.05);
        }
    }
    for m in [1.0, 2.0] {
        for n_t in [1, 2] {
            for a in [0.5, 1.0] {
                let l = unit_link(2.0, m, n_t, a)?;
                let nm = m * n_t as f64;
                report.relative(
                    "s0",
                    format!("m={m} n={n_t} A={a}"),
                    wideband_metrics(&l)?.s0,
                    2.0 * nm / (a + 1.0 + nm),
                    1e-10,
                );
            }
        }
    }
    let l = unit_link(2.0, 1e4, 1, 1.0)?;
    report.absolute("s0", "mu=1e4 limit".into(), wideband_metrics(&l)?.s0, 2.0, 1e-3);
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let samples = if args.full { 10_000_000 } else { 100_000 };
    let cfg = McConfig::new(samples, args.seed, args.streams)?;
    let start = Instant::now();
    let mut report = Report::default();
    methods(&mut report);
    nakagami(&mut report);
    gamma_closure(&mut report);
    simulation(&mut report, &cfg, args.inject_beta_fault)?;
    high_snr(&mut report);
    wideband(&mut report)?;
    report.print();

    let (pass, warn, fail) = (
        report.count(Status::Pass),
        report.count(Status::Warn),
        report.count(Status::Fail),
    );
    let verdict = if fail == 0 { "PASS" } else { "FAIL" };
    println!(
        "{verdict}: {} checks, {pass} passed, {warn} warned, {fail} failed ({samples} samples per simulated point, {:.1} s)",
        report.checks.len(),
        start.elapsed().as_secs_f64()
    );
    if fail == 0 {
        return Ok(());
    }
    let failing: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| format!("{} {}", c.group, c.point))
        .collect();
    let shown = failing.iter().take(8).cloned().collect::<Vec<_>>().join("; ");
    let more = failing.len().saturating_sub(8);
    let suffix = if more > 0 {
        format!("; and {more} more")
    } else {
        String::new()
    };
    Err(CliError::new(
        Kind::Verify,
        format!("{fail} checks failed: {shown}{suffix}"),
    ))
}
