//! Curve sets for the three published figures, written as CSV files plus an
//! SVG overlay.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use effrate::effective_rate::asymptotic::{high_snr_check, wideband_metrics};
use effrate::effective_rate::db_to_linear;
use effrate::{AlphaMuParams, McConfig, Method, MisoLink};

use crate::error::{CliError, CliResult};
use crate::output::{write_csv, Axis, Row};
use crate::svg::{Chart, Series, Style, BLACK};
use crate::sweep::{snr_rows, to_eb_n0, SweepSpec};
use crate::{exec, McArgs};

/// Default sample count per Monte Carlo point.
const DEFAULT_SAMPLES: u64 = 1_000_000;

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Which figure to reproduce.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    figure: u8,
    /// Directory for the CSV and SVG files.
    #[arg(long, env = "EFFRATE_OUT_DIR", default_value = "figures")]
    out_dir: PathBuf,
    #[command(flatten)]
    mc: McArgs,
}

const N_T: u32 = 2;
const FIG12_A: f64 = 0.5;
const FIG3_A: [f64; 3] = [0.5, 1.0, 2.0];

/// One labelled curve destined for its own CSV file.
struct Curve {
    file: String,
    legend: String,
    axis: Axis,
    rows: Vec<Row>,
    style: Style,
    color: usize,
}

fn link(alpha: f64, mu: f64, a: f64) -> CliResult<MisoLink> {
    let l = MisoLink::new(AlphaMuParams::unit(alpha, mu)?, N_T, a)?;
    l.fit().map_err(|e| CliError::from_fit(e.clone()))?;
    Ok(l)
}

fn fig12(number: u8, cfg: &McConfig) -> CliResult<Vec<Curve>> {
    let family: Vec<(String, f64, f64)> = if number == 1 {
        [0.8, 2.0, 4.0, 8.0]
            .iter()
            .map(|&a| (format!("alpha_{a}"), a, 2.0))
            .collect()
    } else {
        [1.0, 2.0, 4.0].iter().map(|&m| (format!("mu_{m}"), 4.0, m)).collect()
    };
    let mut curves = Vec::new();
    for (i, (tag, alpha, mu)) in family.into_iter().enumerate() {
        let l = link(alpha, mu, FIG12_A)?;
        let legend = if number == 1 {
            format!("alpha={alpha}")
        } else {
            format!("mu={mu}")
        };
        let runs = [
            ("exact", Method::FoxH, (0.0, 20.0, 41), Style::Solid),
            ("mc", Method::MonteCarlo, (0.0, 20.0, 11), Style::Markers),
        ];
        for (kind, method, range, style) in runs {
            let spec = SweepSpec::new(Axis::SnrDb, range, l.clone(), vec![method], Some(*cfg))?;
            curves.push(Curve {
                file: format!("fig{number}_{tag}_{kind}.csv"),
                legend: format!("{legend} ({kind})"),
                axis: Axis::SnrDb,
                rows: spec.run(exec())?.remove(0),
                style,
                color: i,
            });
        }
        if high_snr_check(&l)?.converges {
            let spec = SweepSpec::new(Axis::SnrDb, (10.0, 20.0, 11), l, vec![Method::HighSnr], None)?;
            curves.push(Curve {
                file: format!("fig{number}_{tag}_asymptote.csv"),
                legend: format!("{legend} (asymptote)"),
                axis: Axis::SnrDb,
                rows: spec.run(exec())?.remove(0),
                style: Style::Dashed,
                color: i,
            });
        } else {
            log::warn!("no high-SNR asymptote for {legend}: A is not below alpha*mu/2");
        }
    }
    let awgn = effrate::effective_rate::linspace(0.0, 20.0, 41)
        .into_iter()
        .map(|db| Row {
            x: db,
            rate: db_to_linear(db).ln_1p() / std::f64::consts::LN_2,
            method: "awgn".to_string(),
            ci_halfwidth: None,
        })
        .collect();
    curves.push(Curve {
        file: format!("fig{number}_awgn.csv"),
        legend: "AWGN".to_string(),
        axis: Axis::SnrDb,
        rows: awgn,
        style: Style::Solid,
        color: BLACK,
    });
    Ok(curves)
}

fn strictly_increasing(rows: &[Row]) -> bool {
    rows.windows(2).all(|w| w[1].x > w[0].x)
}

fn fig3(cfg: &McConfig) -> CliResult<Vec<Curve>> {
    let mut curves = Vec::new();
    for (i, a) in FIG3_A.into_iter().enumerate() {
        let l = link(2.0, 2.0, a)?;
        let tag = format!("a_{a}");
        let legend = format!("A={a}");

        let grid = effrate::effective_rate::linspace(-30.0, 20.0, 51);
        let exact = to_eb_n0(&snr_rows(&l, &grid, Method::FoxH, None, exec())?);
        let mc_grid = effrate::effective_rate::linspace(-10.0, 20.0, 7);
        let mc = to_eb_n0(&snr_rows(&l, &mc_grid, Method::MonteCarlo, Some(cfg), exec())?);
        for (kind, rows) in [("exact", &exact), ("mc", &mc)] {
            if !strictly_increasing(rows) {
                return Err(CliError::new(
                    crate::error::Kind::Io,
                    format!("the {kind} Eb/N0 curve for {legend} is not monotone"),
                ));
            }
        }

        let min_db = wideband_metrics(&l)?.eb_n0_min_db();
        let spec = SweepSpec::new(
            Axis::EbN0Db,
            (min_db, min_db + 5.0, 21),
            l,
            vec![Method::LowSnrWideband],
            None,
        )?;
        let low = spec.run(exec())?.remove(0);

        let parts = [
            ("exact", exact, Style::Solid),
            ("mc", mc, Style::Markers),
            ("low_snr", low, Style::Dashed),
        ];
        for (kind, rows, style) in parts {
            curves.push(Curve {
                file: format!("fig3_{tag}_{kind}.csv"),
                legend: format!("{legend} ({kind})"),
                axis: Axis::EbN0Db,
                rows,
                style,
                color: i,
            });
        }
    }
    Ok(curves)
}

fn chart(number: u8, curves: &[Curve]) -> Chart {
    let (title, x_label) = match number {
        1 => ("N_t=2, A=0.5, mu=2", "SNR (dB)"),
        2 => ("N_t=2, A=0.5, alpha=4", "SNR (dB)"),
        _ => ("N_t=2, alpha=2, mu=2", "Eb/N0 (dB)"),
    };
    Chart {
        title: title.to_string(),
        x_label: x_label.to_string(),
        y_label: "Effective rate (bit/s/Hz)".to_string(),
        series: curves
            .iter()
            .map(|c| Series {
                label: c.legend.clone(),
                points: c.rows.iter().map(|r| (r.x, r.rate)).collect(),
                errors: c.rows.iter().map(|r| r.ci_halfwidth).collect::<Option<Vec<f64>>>(),
                style: c.style,
                color: c.color,
            })
            .collect(),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::new(crate::error::Kind::Io, format!("{}: {e}", path.display())))
}

pub fn cmd_sweep_figures(args: &FigureArgs) -> CliResult<()> {
    let cfg = args.mc.config(DEFAULT_SAMPLES)?;
    let curves = match args.figure {
        1 | 2 => fig12(args.figure, &cfg)?,
        _ => fig3(&cfg)?,
    };
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::new(crate::error::Kind::Io, format!("{}: {e}", args.out_dir.display())))?;
    for c in &curves {
        let mut buf = Vec::new();
        write_csv(&mut buf, c.axis, &c.rows)?;
        let path = args.out_dir.join(&c.file);
        write_file(&path, &buf)?;
        println!("{}", path.display());
    }
    let svg_path = args.out_dir.join(format!("fig{}.svg", args.figure));
    write_file(&svg_path, chart(args.figure, &curves).render().as_bytes())?;
    println!("{}", svg_path.display());
    Ok(())
}
