//! Moment-matched alpha-mu approximation of a sum of i.i.d. alpha-mu SNRs.
//!
//! The exact moments of `gamma = sum_i gamma_i` come from iterated binomial
//! convolution of the branch moment sequence. The fitted `(alpha, mu)` solve
//! the two scale-free ratio equations
//!
//! ```text
//! E^2[g]   / (E[g^2] - E^2[g])   = G^2(mu+2/a) / (G(mu) G(mu+4/a) - G^2(mu+2/a))
//! E^2[g^2] / (E[g^4] - E^2[g^2]) = G^2(mu+4/a) / (G(mu) G(mu+8/a) - G^2(mu+4/a))
//! ```
//!
//! and the scale is then fixed by the exact first moment.

use crate::alpha_mu::AlphaMuParams;
use crate::error::{Error, Result};
use crate::special::ln_gamma;

const RESIDUAL_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 100;
const MAX_HALVINGS: usize = 30;

/// Moment-matched single alpha-mu law for the sum of `n_t` branches.
#[derive(Debug, Clone, PartialEq)]
pub struct SumFit {
    pub fitted: AlphaMuParams,
    /// Residuals of the two ratio equations, in log form.
    pub residuals: [f64; 2],
    /// Exact `E[gamma^q]`, `q = 1..=4`.
    pub exact_moments: [f64; 4],
    pub iterations: usize,
}

/// `ln E[(sum of n_t branches)^j]` for `j = 0..=q`.
pub fn ln_sum_moments(branch: &AlphaMuParams, n_t: u32, q: u32) -> Result<Vec<f64>> {
    if n_t == 0 {
        return Err(Error::Domain("n_t must be at least 1".into()));
    }
    let q = q as usize;
    let single: Vec<f64> = (0..=q).map(|j| branch.ln_moment(j as f64)).collect::<Result<_>>()?;
    let ln_binom: Vec<Vec<f64>> = (0..=q)
        .map(|n| {
            (0..=n)
                .map(|k| ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
                .collect()
        })
        .collect();
    let mut acc = single.clone();
    for _ in 1..n_t {
        acc = (0..=q)
            .map(|order| {
                let terms: Vec<f64> = (0..=order)
                    .map(|j| ln_binom[order][j] + acc[j] + single[order - j])
                    .collect();
                log_sum_exp(&terms)
            })
            .collect();
    }
    Ok(acc)
}

/// `E[(gamma_1 + ... + gamma_{n_t})^q]` for i.i.d. branches.
pub fn sum_moments(branch: &AlphaMuParams, n_t: u32, q: u32) -> Result<f64> {
    if q == 0 {
        return Err(Error::Domain("moment order q must be at least 1".into()));
    }
    if q == 1 {
        return Ok(n_t as f64 * branch.mean_snr());
    }
    Ok(ln_sum_moments(branch, n_t, q)?[q as usize].exp())
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

// ln of the model-side ratio G^2(mu+k/a) / (G(mu) G(mu+2k/a) - G^2(mu+k/a))
fn ln_model_ratio(alpha: f64, mu: f64, k: f64) -> f64 {
    let d = ln_gamma(mu) + ln_gamma(mu + 2.0 * k / alpha) - 2.0 * ln_gamma(mu + k / alpha);
    -d.exp_m1().ln()
}

// ln of E^2[x] / (E[x^2] - E^2[x]) from ln-moments
fn ln_data_ratio(ln_m1: f64, ln_m2: f64) -> f64 {
    -(ln_m2 - 2.0 * ln_m1).exp_m1().ln()
}

fn residual(x: [f64; 2], targets: [f64; 2]) -> [f64; 2] {
    let (alpha, mu) = (x[0].exp(), x[1].exp());
    [
        ln_model_ratio(alpha, mu, 2.0) - targets[0],
        ln_model_ratio(alpha, mu, 4.0) - targets[1],
    ]
}

fn norm(r: [f64; 2]) -> f64 {
    r[0].hypot(r[1])
}

/// Fit a single alpha-mu law to the sum of `n_t` i.i.d. branches.
///
/// Damped Newton in `(ln alpha, ln mu)` with a central-difference Jacobian,
/// started from `(branch alpha, n_t * branch mu)`.
pub fn fit_sum(branch: &AlphaMuParams, n_t: u32) -> Result<SumFit> {
    let ln_m = ln_sum_moments(branch, n_t, 4)?;
    let exact_moments = [ln_m[1].exp(), ln_m[2].exp(), ln_m[3].exp(), ln_m[4].exp()];
    let targets = [ln_data_ratio(ln_m[1], ln_m[2]), ln_data_ratio(ln_m[2], ln_m[4])];
    if !targets.iter().all(|t| t.is_finite()) {
        return Err(Error::Domain(format!(
            "sum moments give non-finite ratio targets {targets:?}"
        )));
    }
    let mean = n_t as f64 * branch.mean_snr();

    if n_t == 1 {
        let r = residual([branch.alpha().ln(), branch.mu().ln()], targets);
        return Ok(SumFit {
            fitted: *branch,
            residuals: r,
            exact_moments,
            iterations: 0,
        });
    }

    let mut x = [branch.alpha().ln(), (n_t as f64 * branch.mu()).ln()];
    let mut r = residual(x, targets);
    let mut iterations = 0;
    while r[0].abs().max(r[1].abs()) > RESIDUAL_TOL {
        if iterations == MAX_NEWTON {
            return Err(Error::NonConvergence {
                what: "moment-matching Newton solver",
                iterations,
                residual: norm(r),
            });
        }
        iterations += 1;
        let h = 1e-6;
        let mut jac = [[0.0; 2]; 2];
        for col in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[col] += h;
            xm[col] -= h;
            let (rp, rm) = (residual(xp, targets), residual(xm, targets));
            for row in 0..2 {
                jac[row][col] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !det.is_finite() || det == 0.0 {
            return Err(Error::NonConvergence {
                what: "moment-matching Newton solver (singular Jacobian)",
                iterations,
                residual: norm(r),
            });
        }
        let step = [
            (jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            (jac[0][0] * r[1] - jac[1][0] * r[0]) / det,
        ];
        let current = norm(r);
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = [x[0] - scale * step[0], x[1] - scale * step[1]];
            let rt = residual(trial, targets);
            if rt.iter().all(|v| v.is_finite()) && norm(rt) < current {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            return Err(Error::NonConvergence {
                what: "moment-matching Newton solver (line search)",
                iterations,
                residual: current,
            });
        }
    }
    let fitted = AlphaMuParams::new(x[0].exp(), x[1].exp(), mean)?;
    Ok(SumFit {
        fitted,
        residuals: r,
        exact_moments,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(a: f64, m: f64) -> AlphaMuParams {
        AlphaMuParams::unit(a, m).unwrap()
    }

    #[test]
    fn first_moment_is_linear() {
        let b = AlphaMuParams::new(1.3, 0.8, 2.5).unwrap();
        for n in 1..6 {
            assert!((sum_moments(&b, n, 1).unwrap() - 2.5 * n as f64).abs() < 1e-13);
            let via_log = ln_sum_moments(&b, n, 1).unwrap()[1].exp();
            assert!((via_log / (2.5 * n as f64) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn single_branch_moments() {
        let b = unit(0.8, 1.5);
        for q in 1..=4 {
            let s = sum_moments(&b, 1, q).unwrap();
            assert!((s / b.moment(q as f64).unwrap() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn two_branch_second_moment() {
        // E[(g1+g2)^2] = 2 E[g^2] + 2 E[g]^2 = 2*1.5 + 2 = 5
        let s = sum_moments(&unit(2.0, 2.0), 2, 2).unwrap();
        assert!((s - 5.0).abs() < 1e-13);
    }

    #[test]
    fn brute_force_expansion() {
        // Independent oracle: expand (g1+g2+g3)^4 over all index triples.
        let b = unit(1.7, 0.6);
        let m = |k: usize| b.moment(k as f64).unwrap();
        let mut oracle = 0.0;
        for i in 0..=4usize {
            for j in 0..=(4 - i) {
                let k = 4 - i - j;
                let coeff = (1..=4).product::<usize>() as f64
                    / ((1..=i).product::<usize>() * (1..=j).product::<usize>() * (1..=k).product::<usize>()) as f64;
                oracle += coeff * m(i) * m(j) * m(k);
            }
        }
        let s = sum_moments(&b, 3, 4).unwrap();
        assert!((s / oracle - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_zero_is_rejected() {
        assert!(sum_moments(&unit(2.0, 1.0), 2, 0).is_err());
        assert!(sum_moments(&unit(2.0, 1.0), 0, 2).is_err());
    }

    #[test]
    fn identity_for_one_branch() {
        let b = AlphaMuParams::new(4.0, 1.0, 1.0).unwrap();
        let fit = fit_sum(&b, 1).unwrap();
        assert_eq!(fit.fitted, b);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-13));
    }

    #[test]
    fn gamma_closure() {
        let fit = fit_sum(&unit(2.0, 2.0), 3).unwrap();
        assert!((fit.fitted.alpha() - 2.0).abs() < 1e-6);
        assert!((fit.fitted.mu() - 6.0).abs() < 1e-6);
        assert_eq!(fit.fitted.mean_snr(), 3.0);
    }

    #[test]
    fn moment_reproduction() {
        for &(a, m, n) in &[(4.0, 2.0, 2u32), (0.8, 1.5, 2), (0.8, 1.0, 4), (3.0, 0.7, 8)] {
            let b = unit(a, m);
            let fit = fit_sum(&b, n).unwrap();
            assert!(fit.residuals.iter().all(|r| r.abs() <= 1e-10));
            for q in [1usize, 2, 4] {
                let got = fit.fitted.moment(q as f64).unwrap();
                let want = fit.exact_moments[q - 1];
                assert!(
                    (got / want - 1.0).abs() < 1e-8,
                    "a={a} m={m} n={n} q={q}: {got} vs {want}"
                );
            }
        }
    }
}
