use thiserror::Error;

/// Errors raised by the numerical kernels and the link-level analytics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// log-gamma evaluated at a non-positive integer.
    #[error("gamma pole at z = {re}{im:+}i")]
    GammaPole { re: f64, im: f64 },

    /// The Mellin-Barnes contour cannot separate the two pole families.
    #[error("contour infeasible: left poles reach {left}, right poles start at {right}")]
    ContourInfeasible { left: f64, right: f64 },

    /// An iterative procedure stopped at its cap without meeting its tolerance.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// alpha/2 has no rational form l/k with k under the cap.
    #[error("alpha/2 = {ratio} has no rational form l/k with k <= {cap}")]
    RationalizationCap { ratio: f64, cap: u64 },

    /// The high-SNR closed form needs A < alpha*mu/2.
    #[error("high-SNR asymptote requires A < alpha*mu/2 (A = {delay_a}, alpha*mu/2 = {bound})")]
    HighSnrValidity { delay_a: f64, bound: f64 },

    /// Invalid Monte Carlo configuration.
    #[error("invalid Monte Carlo configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
