//! Fox-H and Meijer-G functions on the positive real axis by direct
//! numerical integration of the Mellin-Barnes integral.
//!
//! Convention:
//!
//! ```text
//! H^{m,n}_{p,q}[z | (a_j, A_j); (b_j, B_j)] = 1/(2 pi i) int_L chi(s) z^{-s} ds
//!
//!            prod_{j<=m} G(b_j + B_j s) prod_{j<=n} G(1 - a_j - A_j s)
//! chi(s) = -------------------------------------------------------------
//!          prod_{j>m} G(1 - b_j - B_j s) prod_{j>n} G(a_j + A_j s)
//! ```
//!
//! with `L` the vertical line `Re s = c` separating the poles of the first
//! `m` lower gammas (to the left) from those of the first `n` upper gammas
//! (to the right). With this convention `H^{1,0}_{0,1}[x | -; (0,1)] = e^{-x}`
//! and `H^{1,1}_{1,1}[x | (w+1,1); (0,1)] = Gamma(-w) (1+x)^w`.
//!
//! On `s = c + it` the integrand is conjugate-symmetric for real parameters,
//! so `H = 1/pi int_0^inf Re[chi(c+it) z^{-c-it}] dt`. The product of
//! gammas decays like `exp(-pi a* t / 2)` where `a*` is the usual balance
//! of the coefficients; the half-range is doubled until the tail is
//! negligible.

use num_complex::Complex64;

use super::gamma::log_gamma_complex;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Orders and coefficient pairs of a Fox-H function.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec {
    m: usize,
    n: usize,
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
}

impl FoxHSpec {
    /// Build `H^{m,n}_{p,q}` with `p = upper.len()`, `q = lower.len()`.
    ///
    /// Rejects specs whose pole families cannot be separated by a vertical
    /// line, and specs whose integrand does not decay along it.
    pub fn new(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        if n > upper.len() || m > lower.len() {
            return Err(Error::Domain(format!(
                "orders m={m}, n={n} exceed q={}, p={}",
                lower.len(),
                upper.len()
            )));
        }
        for &(v, k) in upper.iter().chain(lower.iter()) {
            if !(k > 0.0) || !k.is_finite() || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "coefficient pair ({v}, {k}) needs a finite value and positive scale"
                )));
            }
        }
        let spec = Self { m, n, upper, lower };
        let (left, right) = spec.strip();
        if left >= right {
            return Err(Error::ContourInfeasible { left, right });
        }
        if spec.decay_rate() <= 0.0 {
            return Err(Error::Domain(format!(
                "Mellin-Barnes integrand does not decay (a* = {})",
                spec.decay_rate()
            )));
        }
        Ok(spec)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    pub fn upper(&self) -> &[(f64, f64)] {
        &self.upper
    }

    pub fn lower(&self) -> &[(f64, f64)] {
        &self.lower
    }

    /// Open interval `(left, right)` of admissible contour abscissae.
    pub fn strip(&self) -> (f64, f64) {
        let left = self.lower[..self.m]
            .iter()
            .map(|&(b, bb)| -b / bb)
            .fold(f64::NEG_INFINITY, f64::max);
        let right = self.upper[..self.n]
            .iter()
            .map(|&(a, aa)| (1.0 - a) / aa)
            .fold(f64::INFINITY, f64::min);
        (left, right)
    }

    /// Contour abscissa: midpoint of a finite strip, one unit inside a half-infinite one.
    pub fn contour(&self) -> f64 {
        match self.strip() {
            (l, r) if l.is_finite() && r.is_finite() => 0.5 * (l + r),
            (l, _) if l.is_finite() => l + 1.0,
            (_, r) if r.is_finite() => r - 1.0,
            _ => 0.0,
        }
    }

    /// Minimize `Re ln chi(c) - c ln z` over the strip by golden-section search.
    ///
    /// Infinite sides are replaced by a search box that grows while the
    /// minimum sits on its edge. Falls back to [`Self::contour`] when the
    /// kernel cannot be evaluated on the real axis.
    pub fn saddle_contour(&self, z: f64) -> f64 {
        let ln_z = z.ln();
        let phi = |c: f64| -> f64 {
            match self.ln_kernel(Complex64::new(c, 0.0)) {
                Ok(Some(v)) => v.re - c * ln_z,
                _ => f64::INFINITY,
            }
        };
        let (l, r) = self.strip();
        let mid = self.contour();
        let mut width = 8.0f64.max(ln_z.abs());
        for _ in 0..12 {
            let lo = if l.is_finite() { l } else { mid - width };
            let hi = if r.is_finite() { r } else { mid + width };
            let pad = 1e-6 * (hi - lo);
            let best = golden_min(&phi, lo + pad, hi - pad);
            let at_open_left = !l.is_finite() && best - lo < 1e-3 * (hi - lo);
            let at_open_right = !r.is_finite() && hi - best < 1e-3 * (hi - lo);
            if !(at_open_left || at_open_right) {
                return if phi(best).is_finite() { best } else { mid };
            }
            width *= 2.0;
        }
        mid
    }

    /// `a*`: the integrand decays like `exp(-pi a* |t| / 2)` along the contour.
    pub fn decay_rate(&self) -> f64 {
        let lo_in: f64 = self.lower[..self.m].iter().map(|p| p.1).sum();
        let lo_out: f64 = self.lower[self.m..].iter().map(|p| p.1).sum();
        let up_in: f64 = self.upper[..self.n].iter().map(|p| p.1).sum();
        let up_out: f64 = self.upper[self.n..].iter().map(|p| p.1).sum();
        lo_in - lo_out + up_in - up_out
    }

    /// `ln chi(s)`; `None` where a denominator gamma has a pole (chi = 0 there).
    pub fn ln_kernel(&self, s: Complex64) -> Result<Option<Complex64>> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(b, bb) in &self.lower[..self.m] {
            acc += log_gamma_complex(s * bb + b)?;
        }
        for &(a, aa) in &self.upper[..self.n] {
            acc += log_gamma_complex(-s * aa + (1.0 - a))?;
        }
        for &(b, bb) in &self.lower[self.m..] {
            match log_gamma_complex(-s * bb + (1.0 - b)) {
                Ok(v) => acc -= v,
                Err(Error::GammaPole { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        for &(a, aa) in &self.upper[self.n..] {
            match log_gamma_complex(s * aa + a) {
                Ok(v) => acc -= v,
                Err(Error::GammaPole { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        Ok(Some(acc))
    }
}

/// Orders and parameters of a Meijer-G function.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, upper: Vec<f64>, lower: Vec<f64>) -> Self {
        Self { m, n, upper, lower }
    }

    /// The Fox-H function with every scale coefficient equal to one.
    pub fn to_fox_h(&self) -> Result<FoxHSpec> {
        FoxHSpec::new(
            self.m,
            self.n,
            self.upper.iter().map(|&a| (a, 1.0)).collect(),
            self.lower.iter().map(|&b| (b, 1.0)).collect(),
        )
    }
}

/// Knobs for the contour integration.
#[derive(Debug, Clone, Copy)]
pub struct FoxHOptions {
    /// Stop doubling the half-range once the last segment and the tail
    /// bound are both below `tail_tol * |H|`.
    pub tail_tol: f64,
    /// Relative tolerance handed to the adaptive quadrature per segment.
    pub quad_rel_tol: f64,
    /// Accept the result only if the estimated error is below `target_rel * |H|`.
    pub target_rel: f64,
    pub max_doublings: usize,
    pub contour: ContourRule,
}

/// Where to place the vertical contour inside the pole-separation strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourRule {
    /// Midpoint of a finite strip, one unit inside a half-infinite one.
    Midpoint,
    /// Minimizer of `|chi(c)| z^{-c}` over the strip (real-axis saddle point).
    /// Keeps the integrand magnitude close to the value and so limits cancellation.
    Saddle,
    /// Fixed abscissa; must lie inside the strip.
    Fixed(f64),
}

impl Default for FoxHOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-12,
            quad_rel_tol: 1e-12,
            target_rel: 1e-8,
            max_doublings: 40,
            contour: ContourRule::Saddle,
        }
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-10 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Value of the Fox-H function at `z > 0`.
pub fn fox_h(spec: &FoxHSpec, z: f64) -> Result<f64> {
    fox_h_with(spec, z, &FoxHOptions::default())
}

/// Value of the Meijer-G function at `z > 0`.
pub fn meijer_g(spec: &MeijerGSpec, z: f64) -> Result<f64> {
    fox_h(&spec.to_fox_h()?, z)
}

pub fn fox_h_with(spec: &FoxHSpec, z: f64, opts: &FoxHOptions) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("fox_h needs z > 0, got {z}")));
    }
    let (left, right) = spec.strip();
    let c = match opts.contour {
        ContourRule::Midpoint => spec.contour(),
        ContourRule::Saddle => spec.saddle_contour(z),
        ContourRule::Fixed(c) => c,
    };
    if !(c > left && c < right) {
        return Err(Error::ContourInfeasible { left, right });
    }
    let ln_z = z.ln();
    let integrand = |t: f64| -> f64 {
        let s = Complex64::new(c, t);
        match spec.ln_kernel(s) {
            Ok(Some(lk)) => {
                let w = lk - s * ln_z;
                if w.re < -745.0 {
                    0.0
                } else {
                    w.exp().re
                }
            }
            // Poles of the kernel are excluded by the strip check; a
            // denominator pole simply zeroes the integrand.
            _ => 0.0,
        }
    };

    let decay = 0.5 * std::f64::consts::PI * spec.decay_rate();
    // Initial half-range: a few e-folds of the exponential envelope.
    let mut lo = 0.0;
    let mut hi = (8.0 / decay).max(1.0);
    let mut total: f64 = 0.0;
    let mut error: f64 = 0.0;
    let mut magnitude: f64 = 0.0;
    for _ in 0..opts.max_doublings {
        let abs_floor = opts.quad_rel_tol * 0.1 * total.abs();
        let seg = integrate(
            integrand,
            lo,
            hi,
            Tolerance::new(abs_floor, opts.quad_rel_tol).with_max_intervals(4000),
        );
        total += seg.value;
        error += seg.abs_error;
        magnitude += seg.abs_magnitude;
        let edge = integrand(hi).abs();
        // Envelope bound for the remainder, inflated for the algebraic prefactor.
        let tail = 4.0 * edge / decay;
        let tol = opts.tail_tol * total.abs();
        if seg.value.abs() <= tol.max(f64::MIN_POSITIVE) && tail <= tol.max(f64::MIN_POSITIVE) {
            let value = total / std::f64::consts::PI;
            let rel_err = (error + tail) / total.abs();
            if !(rel_err <= opts.target_rel) {
                return Err(Error::NonConvergence {
                    what: "Fox-H contour quadrature",
                    iterations: 0,
                    residual: rel_err,
                });
            }
            log::trace!(
                "fox_h z={z} c={c} half-range={hi} value={value} cancellation={}",
                magnitude / total.abs()
            );
            return Ok(value);
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::NonConvergence {
        what: "Fox-H truncation",
        iterations: opts.max_doublings,
        residual: hi,
    })
}
