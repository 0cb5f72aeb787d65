//! Monte Carlo estimation of the effective rate.
//!
//! Branch SNRs are drawn with the exact Gamma power-transform sampler and
//! summed over the `n_t` antennas, so this path never touches the
//! moment-matched approximation. The sample index space is cut into a fixed
//! number of streams. Stream `s` owns a ChaCha8 generator seeded with `seed`
//! on stream `s`, accumulates its own running mean and variance, and the
//! partial results are merged in stream order. Output is therefore
//! bit-identical for a given `(samples, seed, streams)` whatever the thread
//! schedule.
//!
//! The estimator `-(1/A) log2(mean)` is biased by O(1/M); at the sample sizes
//! used here that bias sits far below the reported confidence half-width.

use std::f64::consts::LN_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::effective_rate::{db_to_linear, Method, MisoLink, RateCurve, RatePoint};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Smallest accepted sample count.
pub const MIN_SAMPLES: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    samples: u64,
    seed: u64,
    streams: u32,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, streams: u32) -> Result<Self> {
        if samples < MIN_SAMPLES {
            return Err(Error::Config(format!(
                "need at least {MIN_SAMPLES} samples, got {samples}"
            )));
        }
        if streams == 0 || u64::from(streams) > samples {
            return Err(Error::Config(format!(
                "streams must lie in 1..={samples}, got {streams}"
            )));
        }
        Ok(Self { samples, seed, streams })
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn streams(&self) -> u32 {
        self.streams
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    /// Draws assigned to stream `s`; the first `samples % streams` streams
    /// take one extra.
    fn stream_len(&self, s: u32) -> u64 {
        let n = u64::from(self.streams);
        self.samples / n + u64::from(u64::from(s) < self.samples % n)
    }

    fn rng(&self, s: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(s));
        rng
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Moments {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * w,
        }
    }

    fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }
}

/// A Monte Carlo estimate with its 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub ci_halfwidth: f64,
    pub samples: u64,
}

// Accumulate f(summed SNR) over all streams, merged in stream order.
fn accumulate<F>(link: &MisoLink, cfg: &McConfig, exec: Execution, f: F) -> Moments
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let sampler = link.branch().sampler();
    let n_t = link.n_t();
    let parts = exec.map_range(cfg.streams as usize, |s| {
        let s = s as u32;
        let mut rng = cfg.rng(s);
        let mut acc = Moments::default();
        for _ in 0..cfg.stream_len(s) {
            let gamma: f64 = (0..n_t).map(|_| sampler.sample(&mut rng)).sum();
            acc.push(f(gamma));
        }
        acc
    });
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("rho must be positive and finite, got {rho}")))
    }
}

/// Simulated effective rate at linear SNR `rho`, using all available threads.
pub fn simulate_rate(link: &MisoLink, rho: f64, cfg: &McConfig) -> Result<McEstimate> {
    simulate_rate_with(link, rho, cfg, Execution::Parallel)
}

/// [`simulate_rate`] with an explicit execution strategy.
///
/// Each draw contributes `d = (1 + rho gamma / n_t)^{-A} - 1`, evaluated as
/// `expm1(-A ln1p(.))` so that tiny SNRs keep their digits. The half-width
/// comes from the delta method: `z sd(d) / sqrt(M) / (A ln2 (1 + mean d))`.
pub fn simulate_rate_with(link: &MisoLink, rho: f64, cfg: &McConfig, exec: Execution) -> Result<McEstimate> {
    check_rho(rho)?;
    let x = rho / link.n_t() as f64;
    let a = link.delay_a();
    let m = accumulate(link, cfg, exec, |g| (-a * (x * g).ln_1p()).exp_m1());
    let scale = a * LN_2;
    let value = (-m.mean.ln_1p() / scale).max(0.0);
    let se = (m.variance() / m.n as f64).sqrt();
    Ok(McEstimate {
        value,
        ci_halfwidth: Z_95 * se / (scale * (1.0 + m.mean)),
        samples: m.n,
    })
}

/// Simulated ergodic capacity `E[log2(1 + rho gamma / n_t)]`.
pub fn simulate_ergodic_capacity(link: &MisoLink, rho: f64, cfg: &McConfig) -> Result<McEstimate> {
    check_rho(rho)?;
    let x = rho / link.n_t() as f64;
    let m = accumulate(link, cfg, Execution::Parallel, |g| (x * g).ln_1p() / LN_2);
    Ok(McEstimate {
        value: m.mean,
        ci_halfwidth: Z_95 * (m.variance() / m.n as f64).sqrt(),
        samples: m.n,
    })
}

/// Raw draws of the summed SNR, in stream order.
pub fn sample_sum_snr(link: &MisoLink, cfg: &McConfig) -> Vec<f64> {
    let sampler = link.branch().sampler();
    let n_t = link.n_t();
    Execution::Parallel
        .map_range(cfg.streams as usize, |s| {
            let s = s as u32;
            let mut rng = cfg.rng(s);
            (0..cfg.stream_len(s))
                .map(|_| (0..n_t).map(|_| sampler.sample(&mut rng)).sum::<f64>())
                .collect::<Vec<f64>>()
        })
        .concat()
}

/// Simulated rate curve; every point reuses the same random streams.
pub fn simulate_curve(link: &MisoLink, snr_db: &[f64], cfg: &McConfig, exec: Execution) -> Result<RateCurve> {
    let points = exec
        .map(snr_db, |&db| {
            // Points already run concurrently; keep each point's streams on one thread.
            let inner = if exec.is_parallel() && snr_db.len() > 1 {
                Execution::Sequential
            } else {
                exec
            };
            simulate_rate_with(link, db_to_linear(db), cfg, inner).map(|e| RatePoint {
                snr_db: db,
                rate: e.value,
                ci_halfwidth: Some(e.ci_halfwidth),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    RateCurve::new(Method::MonteCarlo, points)
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic KS critical value at level `alpha` for effective size `n`.
pub fn ks_critical(n: f64, level: f64) -> f64 {
    (-0.5 * (0.5 * level).ln()).sqrt() / n.sqrt()
}
