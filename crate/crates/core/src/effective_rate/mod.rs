//! Effective rate of a MISO link over i.i.d. alpha-mu fading.
//!
//! With `n_t` transmit antennas, equal power per antenna, transmit SNR `rho`
//! and delay exponent `A = theta T B / ln 2`, the effective rate in bit/s/Hz is
//!
//! ```text
//! R(rho) = -(1/A) log2 E[(1 + rho * gamma / n_t)^(-A)]
//! ```
//!
//! where `gamma` is the sum of the branch SNRs. Every analytic method here
//! replaces that sum by its moment-matched alpha-mu law (see
//! [`crate::sum_matching`]). Exact forms live in [`exact`], high- and low-SNR
//! approximations in [`asymptotic`].

pub mod asymptotic;
pub mod exact;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::alpha_mu::AlphaMuParams;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sum_matching::{fit_sum, SumFit};

pub use asymptotic::{
    channel_power_moments, high_snr_check, rate_high_snr, rate_low_snr, wideband_metrics, HighSnrCheck, LowSnrRate,
    WidebandMetrics,
};
pub use exact::{
    ergodic_capacity, rate_exact_foxh, rate_exact_meijerg, rate_exact_quadrature, rate_nakagami,
    rationalize_half_alpha, MEIJER_DENOMINATOR_CAP,
};

/// A MISO link: branch fading, antenna count and delay exponent.
///
/// The moment-matched sum law is computed on first use and cached; clones
/// made afterwards share the cached value.
#[derive(Debug, Clone)]
pub struct MisoLink {
    n_t: u32,
    delay_a: f64,
    branch: AlphaMuParams,
    fit: OnceLock<std::result::Result<SumFit, Error>>,
}

impl MisoLink {
    pub fn new(branch: AlphaMuParams, n_t: u32, delay_a: f64) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::Domain("n_t must be at least 1".into()));
        }
        if !(delay_a > 0.0) || !delay_a.is_finite() {
            return Err(Error::Domain(format!(
                "delay exponent A must be positive and finite, got {delay_a}"
            )));
        }
        Ok(Self {
            n_t,
            delay_a,
            branch,
            fit: OnceLock::new(),
        })
    }

    pub fn n_t(&self) -> u32 {
        self.n_t
    }

    pub fn delay_a(&self) -> f64 {
        self.delay_a
    }

    pub fn branch(&self) -> &AlphaMuParams {
        &self.branch
    }

    /// Same fading and antennas with another delay exponent. The sum fit does
    /// not depend on `A`, so an already computed fit is carried over.
    pub fn with_delay_a(&self, delay_a: f64) -> Result<Self> {
        let link = Self::new(self.branch, self.n_t, delay_a)?;
        if let Some(done) = self.fit.get() {
            let _ = link.fit.set(done.clone());
        }
        Ok(link)
    }

    /// The moment-matched law of the summed SNR.
    pub fn fit(&self) -> Result<&SumFit> {
        self.fit
            .get_or_init(|| fit_sum(&self.branch, self.n_t))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn fitted(&self) -> Result<AlphaMuParams> {
        self.fit().map(|f| f.fitted)
    }
}

/// Evaluation method, doubling as the provenance label of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    FoxH,
    MeijerG,
    Quadrature,
    NakagamiClosed,
    HighSnr,
    LowSnrWideband,
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::FoxH,
        Method::MeijerG,
        Method::Quadrature,
        Method::NakagamiClosed,
        Method::HighSnr,
        Method::LowSnrWideband,
        Method::MonteCarlo,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::FoxH => "fox_h",
            Method::MeijerG => "meijer_g",
            Method::Quadrature => "quadrature",
            Method::NakagamiClosed => "nakagami_closed",
            Method::HighSnr => "high_snr",
            Method::LowSnrWideband => "low_snr_wideband",
            Method::MonteCarlo => "monte_carlo",
        }
    }

    /// Approximations may legitimately leave the non-negative range.
    pub fn allows_negative(self) -> bool {
        matches!(self, Method::HighSnr)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method label '{s}'")))
    }
}

/// Evaluate one analytic method at linear SNR `rho`.
///
/// Returns the value and the method actually used: a Meijer-G request whose
/// `alpha/2` has no small rational form is answered by the Fox-H path.
pub fn evaluate(link: &MisoLink, rho: f64, method: Method) -> Result<(f64, Method)> {
    match method {
        Method::FoxH => rate_exact_foxh(link, rho).map(|r| (r, method)),
        Method::Quadrature => rate_exact_quadrature(link, rho).map(|r| (r, method)),
        Method::HighSnr => rate_high_snr(link, rho).map(|r| (r, method)),
        Method::MeijerG => match rate_exact_meijerg(link, rho) {
            Ok(r) => Ok((r, method)),
            Err(Error::RationalizationCap { ratio, cap }) => {
                log::warn!("alpha/2 = {ratio} has no rational form with denominator <= {cap}; using the Fox-H path");
                rate_exact_foxh(link, rho).map(|r| (r, Method::FoxH))
            }
            Err(e) => Err(e),
        },
        Method::NakagamiClosed => {
            let b = link.branch();
            if b.alpha() != 2.0 {
                return Err(Error::Domain(format!(
                    "the Nakagami closed form needs alpha = 2, got {}",
                    b.alpha()
                )));
            }
            rate_nakagami(b.mu(), b.mean_snr(), link.n_t(), link.delay_a(), rho).map(|r| (r, method))
        }
        Method::LowSnrWideband | Method::MonteCarlo => {
            Err(Error::Domain(format!("method {method} is not a function of rho alone")))
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// One point of a rate curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub snr_db: f64,
    pub rate: f64,
    pub ci_halfwidth: Option<f64>,
}

/// A labelled rate-versus-SNR curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    method: Method,
    points: Vec<RatePoint>,
}

impl RateCurve {
    /// Checks that abscissae increase strictly and, for exact methods, that
    /// rates are non-negative.
    pub fn new(method: Method, points: Vec<RatePoint>) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| !(w[1].snr_db > w[0].snr_db)) {
            return Err(Error::Domain(format!(
                "curve abscissae must increase strictly ({} then {})",
                w[0].snr_db, w[1].snr_db
            )));
        }
        for p in &points {
            if !p.rate.is_finite() || (!method.allows_negative() && p.rate < 0.0) {
                return Err(Error::Domain(format!(
                    "rate {} at {} dB is not a valid {method} value",
                    p.rate, p.snr_db
                )));
            }
        }
        Ok(Self { method, points })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn points(&self) -> &[RatePoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<RatePoint> {
        self.points
    }
}

/// Analytic curve over a grid of SNRs in dB.
pub fn rate_curve(link: &MisoLink, snr_db: &[f64], method: Method, exec: Execution) -> Result<RateCurve> {
    // Fit once up front so worker threads only read it.
    link.fit()?;
    let values = exec.map(snr_db, |&db| evaluate(link, db_to_linear(db), method));
    let mut used = method;
    let mut points = Vec::with_capacity(snr_db.len());
    for (&db, v) in snr_db.iter().zip(values) {
        let (rate, m) = v?;
        used = m;
        points.push(RatePoint {
            snr_db: db,
            rate,
            ci_halfwidth: None,
        });
    }
    RateCurve::new(used, points)
}

/// `points` values evenly spaced over `[start, stop]`.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
