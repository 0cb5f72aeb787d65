//! Sweep descriptions and their evaluation.

use effrate::effective_rate::asymptotic::rate_low_snr;
use effrate::effective_rate::{db_to_linear, linear_to_db, linspace, rate_curve};
use effrate::montecarlo::simulate_curve;
use effrate::{Execution, McConfig, Method, MisoLink};

use crate::error::{CliError, CliResult};
use crate::output::{rows_of, Axis, Row};

/// A grid in dB plus everything needed to evaluate curves over it.
#[derive(Debug)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub link: MisoLink,
    pub methods: Vec<Method>,
    pub mc: Option<McConfig>,
}

/// Parse `start:stop:points`.
pub fn parse_range(text: &str) -> CliResult<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(CliError::param(format!(
            "range '{text}' must look like start:stop:points"
        )));
    };
    let num = |s: &str| -> CliResult<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::param(format!("'{s}' in range '{text}' is not a finite number")))
    };
    let points = n
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::param(format!("'{n}' in range '{text}' is not a point count")))?;
    Ok((num(a)?, num(b)?, points))
}

impl SweepSpec {
    pub fn new(
        axis: Axis,
        (start, stop, points): (f64, f64, usize),
        link: MisoLink,
        methods: Vec<Method>,
        mc: Option<McConfig>,
    ) -> CliResult<Self> {
        if !(start < stop) {
            return Err(CliError::param(format!(
                "sweep needs start < stop, got {start} and {stop}"
            )));
        }
        if points < 2 {
            return Err(CliError::param(format!("sweep needs at least 2 points, got {points}")));
        }
        if methods.contains(&Method::MonteCarlo) && mc.is_none() {
            return Err(CliError::param("a Monte Carlo curve needs a sampling configuration"));
        }
        Ok(Self {
            axis,
            start,
            stop,
            points,
            link,
            methods,
            mc,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }

    /// One row set per requested method, in request order.
    pub fn run(&self, exec: Execution) -> CliResult<Vec<Vec<Row>>> {
        let grid = self.grid();
        self.methods.iter().map(|&m| self.run_one(m, &grid, exec)).collect()
    }

    fn run_one(&self, method: Method, grid: &[f64], exec: Execution) -> CliResult<Vec<Row>> {
        match (self.axis, method) {
            (Axis::EbN0Db, Method::LowSnrWideband) => grid
                .iter()
                .map(|&db| {
                    let r = rate_low_snr(&self.link, db_to_linear(db))?;
                    Ok(Row {
                        x: db,
                        rate: r.rate,
                        method: method.label().to_string(),
                        ci_halfwidth: None,
                    })
                })
                .collect(),
            (Axis::EbN0Db, _) | (Axis::SnrDb, Method::LowSnrWideband) => Err(CliError::param(format!(
                "method {method} cannot be tabulated against {}",
                self.axis.header()
            ))),
            (Axis::SnrDb, _) => snr_rows(&self.link, grid, method, self.mc.as_ref(), exec),
        }
    }
}

/// Rows for one method over an arbitrary increasing SNR grid in dB.
pub fn snr_rows(
    link: &MisoLink,
    grid: &[f64],
    method: Method,
    mc: Option<&McConfig>,
    exec: Execution,
) -> CliResult<Vec<Row>> {
    let curve = match (method, mc) {
        (Method::MonteCarlo, Some(cfg)) => simulate_curve(link, grid, cfg, exec)?,
        (Method::MonteCarlo, None) => {
            return Err(CliError::param("a Monte Carlo curve needs a sampling configuration"))
        }
        _ => rate_curve(link, grid, method, exec)?,
    };
    Ok(rows_of(&curve))
}

/// Re-express SNR-axis rows on the Eb/N0 axis, `Eb/N0 = rho / R`.
pub fn to_eb_n0(rows: &[Row]) -> Vec<Row> {
    rows.iter()
        .map(|r| Row {
            x: linear_to_db(db_to_linear(r.x) / r.rate),
            ..r.clone()
        })
        .collect()
}
