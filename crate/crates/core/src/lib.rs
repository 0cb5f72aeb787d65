//! Effective rate of MISO links over i.i.d. alpha-mu fading.
//!
//! The crate covers the alpha-mu law itself ([`alpha_mu`]), the
//! moment-matched approximation of a sum of branch SNRs ([`sum_matching`]),
//! exact and asymptotic effective-rate analytics ([`effective_rate`]), an
//! independent Monte Carlo estimator ([`montecarlo`]) and the numerical kernels
//! underneath them ([`special`], [`quadrature`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha_mu;
pub mod effective_rate;
pub mod error;
pub mod exec;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod sum_matching;

pub use alpha_mu::{AlphaMuParams, AlphaMuSampler, SpecialCase};
pub use effective_rate::{Method, MisoLink, RateCurve, RatePoint};
pub use error::{Error, Result};
pub use exec::Execution;
pub use montecarlo::{McConfig, McEstimate};
pub use sum_matching::{fit_sum, sum_moments, SumFit};
