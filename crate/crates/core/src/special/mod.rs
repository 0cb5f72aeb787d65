//! Special-function kernels: complex log-gamma, Tricomi `U`, and Fox-H /
//! Meijer-G evaluation on the positive real axis.

mod foxh;
mod gamma;
mod tricomi;

pub use foxh::{fox_h, fox_h_with, meijer_g, ContourRule, FoxHOptions, FoxHSpec, MeijerGSpec};
pub use gamma::{gamma, ln_gamma, log_gamma_complex};
pub use tricomi::{ln_tricomi_u, tricomi_u};
