//! Expected displacement moments of uniformly deployed sensors moved to
//! equidistant anchors on the unit interval.
//!
//! The library evaluates `sum_i E|X_(i) - t_i|^a` with `t_i = (2i-1)/(2n)`
//! three ways: exactly in rationals, in double precision for large `n`, and
//! by Monte Carlo. It also carries the combinatorial and special-function
//! machinery those evaluations rest on, together with checks of the
//! identities and asymptotic constants that govern the sums.

pub mod asymptotics;
pub mod combinatorics;
pub mod error;
pub mod identities;
pub mod moments;
pub mod numeric;
pub mod rational;
pub mod simulation;
pub mod special;

pub use asymptotics::{AsymptoticReport, CoefficientSet, Theorem};
pub use error::{Error, Result};
pub use identities::{IdentityCheckResult, Suite};
pub use moments::{FloatBreakdown, MomentBreakdown, MomentQuery, SensorMoment};
pub use rational::ExactRational;
pub use simulation::{SimulationConfig, SimulationResult};
pub use special::{HalfIntArg, HalfIntValue, IncompleteBetaQuery};
