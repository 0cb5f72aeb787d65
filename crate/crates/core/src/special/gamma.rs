//! Log-gamma for real and complex arguments.
//!
//! Both routines shift the argument upward with `ln G(z) = ln G(z + N) - sum ln(z + k)`
//! until `Re z >= 0.5` and `|z| >= 16`, then apply the Stirling series with
//! eight Bernoulli terms. Summing principal logarithms of `z + k` keeps the
//! result on the principal branch (cut along the negative real axis).

#![allow(clippy::excessive_precision)]

use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_6;

// B_{2k} / (2k (2k - 1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const SHIFT_RADIUS: f64 = 16.0;

fn is_pole(re: f64, im: f64) -> bool {
    im == 0.0 && re <= 0.0 && re.fract() == 0.0
}

/// Principal-branch `ln Gamma(z)`.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_pole(z.re, z.im) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log-gamma of non-finite argument {z}")));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 0.5 || w.norm_sqr() < SHIFT_RADIUS * SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling_complex(w) - shift)
}

fn stirling_complex(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series * inv
}

/// `ln |Gamma(x)|` for real `x`; `+inf` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if is_pole(x, 0.0) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // Reflection keeps the shift loop short for very negative x.
        let s = (std::f64::consts::PI * x).sin().abs();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let mut w = x;
    let mut shift = 0.0;
    while w < SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series * inv - shift
}

/// `Gamma(x)` for real positive `x`.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}
