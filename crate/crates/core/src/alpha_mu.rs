//! The alpha-mu law of the instantaneous SNR.
//!
//! `gamma = beta * W^{2/alpha}` with `W ~ Gamma(mu, 1)`, so `(gamma/beta)^{alpha/2}`
//! is standard Gamma distributed and
//!
//! ```text
//! f(g) = alpha g^{alpha mu/2 - 1} / (2 beta^{alpha mu/2} Gamma(mu)) exp(-(g/beta)^{alpha/2})
//! beta = E[g] Gamma(mu) / Gamma(mu + 2/alpha)
//! ```

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Fading parameters of one branch (or of a fitted sum).
///
/// `beta` is always derived from `(alpha, mu, mean_snr)`; it is never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMuParams {
    alpha: f64,
    mu: f64,
    mean_snr: f64,
}

/// Named classical models contained in the alpha-mu family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialCase {
    /// alpha = 2, mu = 1: exponential SNR.
    Rayleigh,
    /// alpha = 2, mu = 1/2.
    OneSidedGaussian,
    NakagamiM {
        m: f64,
    },
    /// alpha = 1, mu = 1: exponentially distributed envelope.
    Exponential,
    Weibull {
        alpha: f64,
    },
    /// alpha = 1: Gamma-distributed envelope.
    Gamma {
        shape: f64,
    },
    General,
}

impl std::fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecialCase::Rayleigh => write!(f, "Rayleigh"),
            SpecialCase::OneSidedGaussian => write!(f, "one-sided Gaussian"),
            SpecialCase::NakagamiM { m } => write!(f, "Nakagami-m (m = {m})"),
            SpecialCase::Exponential => write!(f, "exponential"),
            SpecialCase::Weibull { alpha } => write!(f, "Weibull (alpha = {alpha})"),
            SpecialCase::Gamma { shape } => write!(f, "Gamma (shape = {shape})"),
            SpecialCase::General => write!(f, "general"),
        }
    }
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, mean_snr: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("mu", mu), ("mean_snr", mean_snr)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { alpha, mu, mean_snr })
    }

    /// Unit mean SNR.
    pub fn unit(alpha: f64, mu: f64) -> Result<Self> {
        Self::new(alpha, mu, 1.0)
    }

    /// Build from the alpha-root mean envelope value `r_hat`.
    pub fn from_rhat(alpha: f64, mu: f64, rhat: f64) -> Result<Self> {
        let probe = Self::new(alpha, mu, 1.0)?;
        let ln_mean = 2.0 * rhat.ln() + probe.ln_gamma_ratio(2.0) - (2.0 / alpha) * mu.ln();
        Self::new(alpha, mu, ln_mean.exp())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    /// Same shape, different mean SNR.
    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self> {
        Self::new(self.alpha, self.mu, mean_snr)
    }

    // ln[Gamma(mu + k/alpha) / Gamma(mu)]
    fn ln_gamma_ratio(&self, k: f64) -> f64 {
        ln_gamma(self.mu + k / self.alpha) - ln_gamma(self.mu)
    }

    pub fn ln_beta(&self) -> f64 {
        self.mean_snr.ln() - self.ln_gamma_ratio(2.0)
    }

    pub fn beta(&self) -> f64 {
        self.ln_beta().exp()
    }

    /// alpha-root mean value of the envelope; bookkeeping only.
    pub fn rhat(&self) -> f64 {
        let ln_r2 = self.mean_snr.ln() + (2.0 / self.alpha) * self.mu.ln() - self.ln_gamma_ratio(2.0);
        (0.5 * ln_r2).exp()
    }

    pub fn ln_pdf(&self, gamma: f64) -> Result<f64> {
        if !(gamma > 0.0) {
            return Err(Error::Domain(format!("pdf needs gamma > 0, got {gamma}")));
        }
        let (a, m) = (self.alpha, self.mu);
        let half_am = 0.5 * a * m;
        let ln_ratio = gamma.ln() - self.ln_beta();
        Ok(
            a.ln() - std::f64::consts::LN_2 - ln_gamma(m) + (half_am - 1.0) * gamma.ln()
                - half_am * self.ln_beta()
                - (0.5 * a * ln_ratio).exp(),
        )
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        self.ln_pdf(gamma).map(f64::exp)
    }

    /// Continuous extension of the density at `gamma = 0`.
    pub fn density_at_origin(&self) -> f64 {
        let e = 0.5 * self.alpha * self.mu - 1.0;
        if e > 0.0 {
            0.0
        } else if e < 0.0 {
            f64::INFINITY
        } else {
            // alpha mu = 2
            (self.alpha.ln() - std::f64::consts::LN_2 - ln_gamma(self.mu) - self.ln_beta()).exp()
        }
    }

    /// `P(gamma <= x)`: regularized lower incomplete gamma at `(x/beta)^{alpha/2}`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let w = (0.5 * self.alpha * (x.ln() - self.ln_beta())).exp();
        if w.is_infinite() {
            return 1.0;
        }
        statrs::function::gamma::gamma_lr(self.mu, w)
    }

    /// `ln E[gamma^n]`; `n` may be fractional or negative while `mu + 2n/alpha > 0`.
    pub fn ln_moment(&self, n: f64) -> Result<f64> {
        let shifted = self.mu + 2.0 * n / self.alpha;
        if !(shifted > 0.0) {
            return Err(Error::Domain(format!(
                "moment of order {n} diverges: mu + 2n/alpha = {shifted} <= 0"
            )));
        }
        Ok(n * self.ln_beta() + self.ln_gamma_ratio(2.0 * n))
    }

    /// `E[gamma^n] = beta^n Gamma(mu + 2n/alpha) / Gamma(mu)`.
    pub fn moment(&self, n: f64) -> Result<f64> {
        if n == 0.0 {
            return Ok(1.0);
        }
        if n == 1.0 {
            return Ok(self.mean_snr);
        }
        self.ln_moment(n).map(f64::exp)
    }

    pub fn special_case(&self) -> SpecialCase {
        let (a, m) = (self.alpha, self.mu);
        if a == 2.0 && m == 1.0 {
            SpecialCase::Rayleigh
        } else if a == 2.0 && m == 0.5 {
            SpecialCase::OneSidedGaussian
        } else if a == 2.0 {
            SpecialCase::NakagamiM { m }
        } else if a == 1.0 && m == 1.0 {
            SpecialCase::Exponential
        } else if m == 1.0 {
            SpecialCase::Weibull { alpha: a }
        } else if a == 1.0 {
            SpecialCase::Gamma { shape: m }
        } else {
            SpecialCase::General
        }
    }

    /// Reusable exact sampler for this law.
    pub fn sampler(&self) -> AlphaMuSampler {
        AlphaMuSampler {
            gamma: Gamma::new(self.mu, 1.0).expect("mu validated positive"),
            beta: self.beta(),
            power: 2.0 / self.alpha,
        }
    }

    /// One draw; for repeated draws use [`Self::sampler`].
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

/// Power transform of a standard Gamma variate: `beta * W^{2/alpha}`.
#[derive(Debug, Clone, Copy)]
pub struct AlphaMuSampler {
    gamma: Gamma<f64>,
    beta: f64,
    power: f64,
}

impl Distribution<f64> for AlphaMuSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let w: f64 = self.gamma.sample(rng);
        self.beta * w.powf(self.power)
    }
}
