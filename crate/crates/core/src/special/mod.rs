//! Gamma, Beta and incomplete Beta functions.

mod float;
mod half_int;
mod incbeta;

pub use float::{
    bd0, binomial_pmf, incomplete_beta_float, incomplete_beta_pq, ln_beta, stirlerr,
    stirling_bounds, StirlingBounds,
};
pub use half_int::{beta_exact, beta_integer, gamma_half_int, HalfIntArg, HalfIntValue};
pub(crate) use incbeta::step_down_term;
pub use incbeta::{
    complement_sum, incomplete_beta_regularized_exact, incomplete_beta_step_down, step_down_from,
    IncompleteBetaQuery,
};
