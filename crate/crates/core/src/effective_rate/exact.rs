//! Exact effective rate under the moment-matched sum law.
//!
//! Three independent routes are provided: direct quadrature against the
//! Gamma weight, the compact `H^{2,1}_{1,2}` Fox-H form, and the Meijer-G form
//! that needs `alpha/2 = l/k` rational. For `alpha = 2` the Tricomi closed
//! form applies as well.

use std::f64::consts::{LN_2, PI};

use crate::alpha_mu::AlphaMuParams;
use crate::error::{Error, Result};
use crate::quadrature::{gamma_expectation_with_breaks, Estimate, Tolerance};
use crate::special::{fox_h, ln_gamma, ln_tricomi_u, meijer_g, FoxHSpec, MeijerGSpec};

use super::MisoLink;

/// Largest denominator `k` accepted when writing `alpha/2 = l/k`.
pub const MEIJER_DENOMINATOR_CAP: u64 = 25;

const RATIONAL_TOL: f64 = 1e-9;

const QUAD_TOL: Tolerance = Tolerance::new(0.0, 1e-13);

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("rho must be positive and finite, got {rho}")))
    }
}

fn accept(est: Estimate, what: &'static str) -> Result<f64> {
    if est.value.is_finite() && (est.converged || est.abs_error <= 1e-10 * est.value.abs()) {
        Ok(est.value)
    } else {
        Err(Error::NonConvergence {
            what,
            iterations: est.evaluations,
            residual: est.abs_error,
        })
    }
}

// Points in u where x * beta * u^{2/alpha} crosses a few decades around 1.
fn knee_breaks(p: &AlphaMuParams, x: f64) -> Vec<f64> {
    let ln_knee = -0.5 * p.alpha() * (x.ln() + p.ln_beta());
    [-4.0, -2.0, 0.0, 2.0]
        .iter()
        .map(|d: &f64| (ln_knee + d * std::f64::consts::LN_10).exp())
        .filter(|u| u.is_finite() && *u > 0.0)
        .collect()
}

/// `E[(1 + x gamma)^{-A}]` under `p`, in log form.
fn ln_mgf_like(p: &AlphaMuParams, x: f64, a: f64) -> Result<f64> {
    let beta = p.beta();
    let power = 2.0 / p.alpha();
    let breaks = knee_breaks(p, x);
    let log1p_snr = |u: f64| (x * beta * u.powf(power)).ln_1p();
    // The expm1 form keeps full relative accuracy when x*gamma is small.
    let shifted = gamma_expectation_with_breaks(p.mu(), |u| (-a * log1p_snr(u)).exp_m1(), &breaks, QUAD_TOL);
    let shifted = accept(shifted, "effective-rate quadrature")?;
    if shifted > -0.5 {
        return Ok(shifted.ln_1p());
    }
    let direct = gamma_expectation_with_breaks(p.mu(), |u| (-a * log1p_snr(u)).exp(), &breaks, QUAD_TOL);
    Ok(accept(direct, "effective-rate quadrature")?.ln())
}

/// Effective rate by adaptive quadrature over the fitted sum density.
///
/// This path shares no code with the special-function routes and serves as
/// their reference.
pub fn rate_exact_quadrature(link: &MisoLink, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let p = link.fitted()?;
    let a = link.delay_a();
    let ln_e = ln_mgf_like(&p, rho / link.n_t() as f64, a)?;
    Ok((-ln_e / (a * LN_2)).max(0.0))
}

/// Ergodic capacity `E[log2(1 + rho gamma / n_t)]` under the fitted sum law,
/// the `A -> 0` limit of the effective rate.
pub fn ergodic_capacity(link: &MisoLink, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let p = link.fitted()?;
    let x = rho / link.n_t() as f64;
    let beta = p.beta();
    let power = 2.0 / p.alpha();
    let est = gamma_expectation_with_breaks(
        p.mu(),
        |u| (x * beta * u.powf(power)).ln_1p(),
        &knee_breaks(&p, x),
        QUAD_TOL,
    );
    Ok(accept(est, "ergodic-capacity quadrature")? / LN_2)
}

/// Effective rate from the compact Fox-H representation
///
/// ```text
/// R = (1/A) [1 - log2(alpha / (G(A) G(mu))) - log2 H^{2,1}_{1,2}[z | (1, alpha/2); (mu, 1), (A, alpha/2)]]
/// z = (n_t / (rho beta))^{alpha/2}
/// ```
pub fn rate_exact_foxh(link: &MisoLink, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let p = link.fitted()?;
    let (alpha, mu, a) = (p.alpha(), p.mu(), link.delay_a());
    let half = 0.5 * alpha;
    let spec = FoxHSpec::new(2, 1, vec![(1.0, half)], vec![(mu, 1.0), (a, half)])?;
    let ln_z = half * ((link.n_t() as f64).ln() - rho.ln() - p.ln_beta());
    let h = fox_h(&spec, ln_z.exp())?;
    if !(h > 0.0) {
        return Err(Error::Domain(format!("Fox-H value {h} is not positive at rho = {rho}")));
    }
    let ln2_e = (alpha.ln() - ln_gamma(a) - ln_gamma(mu)) / LN_2 - 1.0 + h.log2();
    Ok((-ln2_e / a).max(0.0))
}

/// Write `alpha/2` as `l/k` with `k <= MEIJER_DENOMINATOR_CAP`.
///
/// Integer `alpha` maps to `(alpha, 2)`. Anything else goes through the
/// continued-fraction convergents of `alpha/2`, accepting the first one that
/// reproduces it to `RATIONAL_TOL` relative. The tolerance absorbs the
/// round-off of a fitted `alpha` that is an integer or simple fraction in
/// exact arithmetic.
pub fn rationalize_half_alpha(alpha: f64) -> Result<(u64, u64)> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let nearest = alpha.round();
    if (1.0..1e6).contains(&nearest) && (alpha / nearest - 1.0).abs() <= RATIONAL_TOL {
        return Ok((nearest as u64, 2));
    }
    let target = 0.5 * alpha;
    let cap_err = Error::RationalizationCap {
        ratio: target,
        cap: MEIJER_DENOMINATOR_CAP,
    };
    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut x = target;
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e9 {
            return Err(cap_err);
        }
        let a = a as u64;
        (h_prev, h) = (h, a * h + h_prev);
        (k_prev, k) = (k, a * k + k_prev);
        if k > MEIJER_DENOMINATOR_CAP {
            return Err(cap_err);
        }
        if ((h as f64 / k as f64) / target - 1.0).abs() <= RATIONAL_TOL {
            return Ok((h, k));
        }
        let frac = x - a as f64;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    Err(cap_err)
}

// tau/eps, (tau+1)/eps, ..., (tau+eps-1)/eps
fn delta_block(eps: u64, tau: f64) -> impl Iterator<Item = f64> {
    (0..eps).map(move |i| (tau + i as f64) / eps as f64)
}

/// Effective rate from the Meijer-G representation.
///
/// With `alpha/2 = l/k` and `c = n_t / (rho beta)`,
///
/// ```text
/// E[(1 + gamma/c)^{-A}] = l^A k^{-1/2} (2 pi)^{3/2 - l - k/2} c^{alpha mu/2} / (G(A) G(mu))
///     * G^{k+l, l}_{l, k+l}[c^l / k^k | D(l, 1 - alpha mu/2); D(k, 0), D(l, A - alpha mu/2)]
/// ```
///
/// where `D(e, t) = t/e, (t+1)/e, ..., (t+e-1)/e`.
pub fn rate_exact_meijerg(link: &MisoLink, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let p = link.fitted()?;
    let (l, k) = rationalize_half_alpha(p.alpha())?;
    let (mu, a) = (p.mu(), link.delay_a());
    let half_am = l as f64 / k as f64 * mu;
    let ln_c = (link.n_t() as f64).ln() - rho.ln() - p.ln_beta();

    let upper: Vec<f64> = delta_block(l, 1.0 - half_am).collect();
    let lower: Vec<f64> = delta_block(k, 0.0).chain(delta_block(l, a - half_am)).collect();
    let spec = MeijerGSpec::new((k + l) as usize, l as usize, upper, lower);
    let (lf, kf) = (l as f64, k as f64);
    let w = (lf * ln_c - kf * kf.ln()).exp();
    let g = meijer_g(&spec, w)?;
    if !(g > 0.0) {
        return Err(Error::Domain(format!(
            "Meijer-G value {g} is not positive at rho = {rho}"
        )));
    }
    let ln_e = a * lf.ln() - 0.5 * kf.ln() + (1.5 - lf - 0.5 * kf) * (2.0 * PI).ln() + half_am * ln_c
        - ln_gamma(a)
        - ln_gamma(mu)
        + g.ln();
    Ok((-ln_e / (a * LN_2)).max(0.0))
}

/// Closed-form effective rate for i.i.d. Nakagami-m branches of mean SNR
/// `omega`, where the sum is exactly Gamma distributed:
///
/// ```text
/// R = (m n_t / A) log2(omega rho / (m n_t)) - (1/A) log2 U(m n_t; m n_t + 1 - A; m n_t / (omega rho))
/// ```
pub fn rate_nakagami(m: f64, omega: f64, n_t: u32, a: f64, rho: f64) -> Result<f64> {
    for (name, v) in [("m", m), ("omega", omega), ("A", a), ("rho", rho)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    if n_t == 0 {
        return Err(Error::Domain("n_t must be at least 1".into()));
    }
    let mn = m * n_t as f64;
    let ln_ratio = (omega * rho / mn).ln();
    let ln_u = ln_tricomi_u(mn, mn + 1.0 - a, (-ln_ratio).exp())?;
    Ok(((mn * ln_ratio - ln_u) / (a * LN_2)).max(0.0))
}
