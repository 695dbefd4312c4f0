use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Arguments of the regularized incomplete Beta `I(z; c, d)` with integer
/// shape parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompleteBetaQuery {
    z: ExactRational,
    c: u32,
    d: u32,
}

impl IncompleteBetaQuery {
    pub fn new(z: ExactRational, c: u32, d: u32) -> Result<Self> {
        if z.is_negative() || z > ExactRational::one() {
            return Err(Error::domain("z", &z, "[0, 1]"));
        }
        if c == 0 {
            return Err(Error::domain("c", c, "c >= 1"));
        }
        if d == 0 {
            return Err(Error::domain("d", d, "d >= 1"));
        }
        Ok(Self { z, c, d })
    }

    pub fn z(&self) -> &ExactRational {
        &self.z
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }
}

/// `I(z; c, d)` as an exact rational.
///
/// Expands `(1-x)^(d-1)` binomially and integrates term by term:
/// `I = c C(c+d-1, c) sum_m (-1)^m C(d-1, m) z^(c+m) / (c+m)`.
/// The sum is carried in integers over `w^(c+d-1) * lcm(c..c+d-1)` where
/// `z = u / w`, and reduced once.
pub fn incomplete_beta_regularized_exact(q: &IncompleteBetaQuery) -> ExactRational {
    let (c, d) = (q.c as u64, q.d as u64);
    if q.z.is_zero() {
        return ExactRational::zero();
    }
    if q.z == ExactRational::one() {
        return ExactRational::one();
    }
    let u = q.z.numer().clone();
    let w = q.z.denom().clone();

    let lcm = (c..c + d).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)));

    // T_m = C(d-1, m) u^m w^(d-1-m), advanced by exact division.
    let mut term = w.pow((d - 1) as u32);
    let mut sum = BigInt::zero();
    for m in 0..d {
        let weighted = &term * (&lcm / (c + m));
        if m % 2 == 0 {
            sum += weighted;
        } else {
            sum -= weighted;
        }
        if m + 1 < d {
            term = term * (d - 1 - m) * &u;
            term /= (m + 1) * &w;
        }
    }

    let scale = binomial((c + d - 1) as i64, c as i64) * c * u.pow(c as u32);
    let num = scale * sum;
    let den = w.pow((c + d - 1) as u32) * lcm;
    ExactRational::new(num, den).expect("positive denominator")
}

/// One step of the recurrence
/// `I(z; c, d) = I(z; c-1, d) - Gamma(c+d-1) / (Gamma(c) Gamma(d)) z^(c-1) (1-z)^d`,
/// given `previous = I(z; c-1, d)`.
pub fn step_down_from(
    previous: &ExactRational,
    z: &ExactRational,
    c: u32,
    d: u32,
) -> ExactRational {
    debug_assert!(c >= 2 && d >= 1);
    previous - &step_down_term(z, c, d)
}

/// `C(c+d-2, c-1) z^(c-1) (1-z)^d`, the amount removed by one step.
pub(crate) fn step_down_term(z: &ExactRational, c: u32, d: u32) -> ExactRational {
    let coeff = binomial((c + d - 2) as i64, (c - 1) as i64);
    let one_minus = ExactRational::one() - z;
    ExactRational::from_integer(coeff) * z.pow(c - 1) * one_minus.pow(d)
}

/// `I(z; c, d)` obtained from a direct evaluation of `I(z; c-1, d)` and one
/// step of the recurrence. Requires `c >= 2`.
pub fn incomplete_beta_step_down(q: &IncompleteBetaQuery) -> Result<ExactRational> {
    if q.c < 2 {
        return Err(Error::domain(
            "c",
            q.c,
            "c >= 2 for the step-down recurrence",
        ));
    }
    let lower = IncompleteBetaQuery::new(q.z.clone(), q.c - 1, q.d)?;
    let previous = incomplete_beta_regularized_exact(&lower);
    Ok(step_down_from(&previous, &q.z, q.c, q.d))
}

/// Density-complement check helper: `I(z; c, d) + I(1-z; d, c)`.
pub fn complement_sum(q: &IncompleteBetaQuery) -> ExactRational {
    let mirrored = IncompleteBetaQuery {
        z: ExactRational::one() - &q.z,
        c: q.d,
        d: q.c,
    };
    incomplete_beta_regularized_exact(q) + incomplete_beta_regularized_exact(&mirrored)
}
