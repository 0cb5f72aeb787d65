//! High-SNR and wideband (low-SNR) approximations, plus channel power moments.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

use super::MisoLink;

/// Validity of the high-SNR closed form for a given link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrCheck {
    /// `alpha mu / 2` of the fitted sum law.
    pub bound: f64,
    /// `A < alpha mu / 2`: the limiting integral converges and the asymptote exists.
    pub converges: bool,
    /// `A < alpha mu / 2 - 1`: the more conservative margin.
    pub conservative: bool,
}

pub fn high_snr_check(link: &MisoLink) -> Result<HighSnrCheck> {
    let p = link.fitted()?;
    let bound = 0.5 * p.alpha() * p.mu();
    let a = link.delay_a();
    Ok(HighSnrCheck {
        bound,
        converges: a < bound,
        conservative: a < bound - 1.0,
    })
}

/// High-SNR asymptote, affine in `log2 rho` with unit slope:
///
/// `R ~ log2(beta rho / n_t) - (1/A) log2(G(mu - 2A/alpha) / G(mu))`
///
/// using the fitted sum parameters. Fails when `A >= alpha mu / 2`, and logs
/// a warning when `A` falls inside one unit of that bound.
pub fn rate_high_snr(link: &MisoLink, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("rho must be positive and finite, got {rho}")));
    }
    let check = high_snr_check(link)?;
    let a = link.delay_a();
    if !check.converges {
        return Err(Error::HighSnrValidity {
            delay_a: a,
            bound: check.bound,
        });
    }
    if !check.conservative {
        log::warn!(
            "A = {a} lies within one unit of alpha*mu/2 = {}; the high-SNR asymptote converges slowly here",
            check.bound
        );
    }
    let p = link.fitted()?;
    let shift = ln_gamma(p.mu() - 2.0 * a / p.alpha()) - ln_gamma(p.mu());
    Ok((p.ln_beta() + rho.ln() - (link.n_t() as f64).ln() - shift / a) / LN_2)
}

/// Low-SNR figures of merit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidebandMetrics {
    /// Minimum energy per bit, linear.
    pub eb_n0_min: f64,
    /// Wideband slope in bit/s/Hz per 3 dB.
    pub s0: f64,
}

impl WidebandMetrics {
    pub fn eb_n0_min_db(&self) -> f64 {
        10.0 * self.eb_n0_min.log10()
    }
}

/// `(Eb/N0)_min = G(mu) ln 2 / (beta G(mu + 2/alpha))` from the branch law,
/// which is `ln 2 / E[gamma_branch]` and does not depend on `A`.
///
/// `S0 = 2 / ((A + 1) kappa - A)` with `kappa = G(mu) G(mu + 4/alpha) / G^2(mu + 2/alpha)`
/// taken from the fitted sum law.
pub fn wideband_metrics(link: &MisoLink) -> Result<WidebandMetrics> {
    let b = link.branch();
    let eb_n0_min = (ln_gamma(b.mu()) - b.ln_beta() - ln_gamma(b.mu() + 2.0 / b.alpha())).exp() * LN_2;
    let p = link.fitted()?;
    let (alpha, mu) = (p.alpha(), p.mu());
    // kappa - 1 directly, so that S0 -> 2 keeps its digits for huge mu
    let kappa_m1 = (ln_gamma(mu) + ln_gamma(mu + 4.0 / alpha) - 2.0 * ln_gamma(mu + 2.0 / alpha)).exp_m1();
    let a = link.delay_a();
    let s0 = 2.0 / (1.0 + (a + 1.0) * kappa_m1);
    Ok(WidebandMetrics { eb_n0_min, s0 })
}

/// Wideband approximation value at `eb_n0` (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowSnrRate {
    pub rate: f64,
    /// Set when `eb_n0` was below the minimum and the rate was clamped to 0.
    pub clamped: bool,
}

/// `R ~ S0 log2(eb_n0 / eb_n0_min)`.
pub fn rate_low_snr(link: &MisoLink, eb_n0: f64) -> Result<LowSnrRate> {
    if !(eb_n0 > 0.0) || !eb_n0.is_finite() {
        return Err(Error::Domain(format!("Eb/N0 must be positive and finite, got {eb_n0}")));
    }
    let m = wideband_metrics(link)?;
    if eb_n0 < m.eb_n0_min {
        return Ok(LowSnrRate {
            rate: 0.0,
            clamped: true,
        });
    }
    Ok(LowSnrRate {
        rate: m.s0 * (eb_n0 / m.eb_n0_min).log2(),
        clamped: false,
    })
}

/// First and second moments of the channel power `h h^dagger`, i.e. of the
/// summed branch SNRs, from the branch parameters:
///
/// ```text
/// first  = n_t beta G(mu + 2/alpha) / G(mu)
/// second = n_t beta^2 / G(mu) * (G(mu + 4/alpha) + (n_t - 1) G^2(mu + 2/alpha) / G(mu))
/// ```
pub fn channel_power_moments(link: &MisoLink) -> (f64, f64) {
    let b = link.branch();
    let n = link.n_t() as f64;
    let (alpha, mu) = (b.alpha(), b.mu());
    let lg = ln_gamma(mu);
    let l2 = ln_gamma(mu + 2.0 / alpha);
    let l4 = ln_gamma(mu + 4.0 / alpha);
    let first = n * (b.ln_beta() + l2 - lg).exp();
    let second = n * (2.0 * b.ln_beta() - lg).exp() * (l4.exp() + (n - 1.0) * (2.0 * l2 - lg).exp());
    (first, second)
}
