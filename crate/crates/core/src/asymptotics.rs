//! Leading constants, the lemma-level sums behind them, and empirical
//! remainder fits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::combinatorics::{binomial, factorial, falling_int, rising_int};
use crate::error::{Error, Result};
use crate::identities::{IdentityCheckResult, Suite};
use crate::moments::{
    total_moment_float, upper_tail_numerator, MomentQuery, EXACT_LIMIT, FLOAT_LIMIT,
};
use crate::numeric::CompensatedSum;
use crate::rational::ExactRational;
use crate::special::{beta_exact, binomial_pmf, gamma_half_int, ln_beta, HalfIntArg, HalfIntValue};

fn require_odd(a: u32) -> Result<()> {
    if a % 2 == 0 {
        return Err(Error::EvenOrder { a });
    }
    Ok(())
}

/// `Gamma(a/2 + 1) / (2^(a/2) (1 + a))`, the coefficient of `n^(1 - a/2)`.
pub fn leading_constant(a: u32) -> Result<HalfIntValue> {
    if a == 0 {
        return Err(Error::domain("a", a, "a >= 1"));
    }
    let gamma = gamma_half_int(a + 2)?;
    let den = HalfIntValue::new(ExactRational::from(a + 1), 0, a as i32);
    gamma.checked_div(&den)
}

/// `sum_j sum_i n^-a C(a,j) (-1)^j n^j (i - 1/2)^(a-j) i^(j) / (n+1)^(j)`.
pub fn lemma1_sum(n: u64, a: u32) -> Result<ExactRational> {
    require_odd(a)?;
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    // Over 2^a n^a (n+1)^(a): term_j = C(a,j) (-1)^j (2n)^j (n+a)_(a-j) S_j,
    // S_j = sum_i (2i-1)^(a-j) i^(j).
    let w = BigInt::from(2 * n);
    let mut num = BigInt::zero();
    for j in 0..=a {
        let s: BigInt = (1..=n)
            .map(|i| BigInt::from(2 * i - 1).pow(a - j) * rising_int(i, j))
            .sum();
        let term =
            binomial(a as i64, j as i64) * w.pow(j) * falling_int((n + a as u64) as i64, a - j) * s;
        if j % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
    }
    ExactRational::new(num, w.pow(a) * rising_int(n + 1, a))
}

/// `sum_i A_i^(a) C(n,i) i int_0^t_i x^(i-1) (1-x)^(n-i) dx`, where the
/// integral factor is `I(t_i; i, n-i+1)`.
pub fn lemma2_sum(n: u64, a: u32) -> Result<ExactRational> {
    require_odd(a)?;
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    if n > EXACT_LIMIT {
        return Err(Error::SizeGuard {
            n,
            limit: EXACT_LIMIT,
        });
    }
    let w = BigInt::from(2 * n);
    let total = (1..=n)
        .into_par_iter()
        .map(|i| {
            let u = BigInt::from(2 * i - 1);
            let mut a_num = BigInt::zero();
            for j in 0..=a {
                let term = binomial(a as i64, j as i64)
                    * u.pow(a - j)
                    * w.pow(j)
                    * rising_int(i, j)
                    * falling_int((n + a as u64) as i64, a - j);
                if j % 2 == 0 {
                    a_num += term;
                } else {
                    a_num -= term;
                }
            }
            a_num * upper_tail_numerator(i, n)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(BigInt::zero(), |acc, x| acc + x);
    ExactRational::new(total, w.pow((n + a as u64) as u32) * rising_int(n + 1, a))
}

/// `b_(q1,p1)(a)` on the diagonal `q1 + p1 = (a-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSet {
    pub a: u32,
    pub entries: BTreeMap<(u32, u32), ExactRational>,
}

impl CoefficientSet {
    pub fn get(&self, q1: u32, p1: u32) -> Option<&ExactRational> {
        self.entries.get(&(q1, p1))
    }
}

pub const MAX_COEFFICIENT_ORDER: u32 = 15;

/// `b_(q1,p1)(a) = sum_j C(a,j) (-1)^(j+1) sum_(k=1..j)
/// (k^2/2 - (a-j)^2/2)^q1 / q1! * ((j-k)(j-1/2) - (j-k)^2/2)^p1 / p1!`.
pub fn b_coefficients(a: u32) -> Result<CoefficientSet> {
    require_odd(a)?;
    if a > MAX_COEFFICIENT_ORDER {
        return Err(Error::domain("a", a, "a <= 15"));
    }
    let m = (a - 1) / 2;
    let half = ExactRational::frac(1, 2);
    let mut entries = BTreeMap::new();
    for p1 in 0..=m {
        let q1 = m - p1;
        let mut b = ExactRational::zero();
        for j in 0..=a {
            let mut inner = ExactRational::zero();
            for k in 1..=j {
                let (k, jr, ajr) = (k as i64, j as i64, (a - j) as i64);
                let x = ExactRational::frac(k * k - ajr * ajr, 2);
                let jk = ExactRational::from(jr - k);
                let y = &jk * &(ExactRational::from(jr) - &half) - &(&jk * &jk) * &half;
                inner += x.pow(q1) * y.pow(p1);
            }
            let sign = if j % 2 == 0 { -1 } else { 1 };
            b += ExactRational::from_integer(binomial(a as i64, j as i64) * sign) * inner;
        }
        let den = factorial(q1) * factorial(p1);
        b = b.checked_div(&ExactRational::from_integer(den))?;
        entries.insert((q1, p1), b);
    }
    Ok(CoefficientSet { a, entries })
}

/// Left side of the diagonal identity,
/// `sum_(q1+p1=(a-1)/2) 2/sqrt(2 pi) B(a - p1 + 1/2, 3/2) b_(q1,p1)(a)`.
pub fn technical2b_lhs(a: u32) -> Result<HalfIntValue> {
    let set = b_coefficients(a)?;
    let prefactor = HalfIntValue::new(ExactRational::from(2), -1, -1);
    let mut acc = HalfIntValue::rational(ExactRational::zero());
    for (&(_, p1), b) in &set.entries {
        let beta = beta_exact(HalfIntArg::half(a - p1), HalfIntArg::half(1));
        acc = acc.checked_add(&(&prefactor * &beta).scale(b))?;
    }
    Ok(acc)
}

/// Checks the diagonal identity against [`leading_constant`]. Exact
/// equality in `Q sqrt(pi) sqrt(2)` is tried first; otherwise the float
/// residual must be at most `1e-12`.
pub fn verify_technical2b(a: u32) -> Result<IdentityCheckResult> {
    let lhs = technical2b_lhs(a)?;
    let rhs = leading_constant(a)?;
    let float_residual = (lhs.to_f64() - rhs.to_f64()).abs();
    let (passed, residual) = if lhs == rhs {
        (true, 0.0)
    } else {
        (float_residual <= 1e-12, float_residual)
    };
    Ok(IdentityCheckResult {
        suite: Suite::Technical2b,
        identity: "diagonal-b-sum".into(),
        parameters: format!("a={a}; lhs={lhs}; rhs={rhs}"),
        cases: 1,
        passed,
        residual,
    })
}

const LEMMA4_CHUNK: u64 = 4096;

/// `sum_i 2i C(n,i) (1-t_i)^(n-i+1) t_i^(i+c)` in double precision.
pub fn lemma4_sum(n: u64, c: f64) -> Result<f64> {
    if n == 0 || n > FLOAT_LIMIT {
        return Err(Error::domain("n", n, "1 <= n <= 10^7"));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::domain("c", c, "c >= 0"));
    }
    let nf = n as f64;
    let chunks = n.div_ceil(LEMMA4_CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut s = CompensatedSum::new();
            let lo = ch * LEMMA4_CHUNK + 1;
            let hi = ((ch + 1) * LEMMA4_CHUNK).min(n);
            for i in lo..=hi {
                let t = (2 * i - 1) as f64 / (2.0 * nf);
                let tc = (2 * (n - i) + 1) as f64 / (2.0 * nf);
                let pmf = binomial_pmf(i as f64, nf, t, tc);
                s.add(2.0 * i as f64 * pmf * tc * t.powf(c));
            }
            s.value()
        })
        .collect();
    Ok(partials.into_iter().collect::<CompensatedSum>().value())
}

/// The same finite sum in exact arithmetic, for integer `c`.
pub fn lemma4_sum_exact(n: u64, c: u32) -> Result<ExactRational> {
    if n == 0 || n > EXACT_LIMIT {
        return Err(Error::domain("n", n, "1 <= n <= 2000"));
    }
    // Over (2n)^(n+1+c): 2i C(n,i) (2n-2i+1)^(n-i+1) (2i-1)^(i+c).
    let num: BigInt = (1..=n)
        .map(|i| {
            binomial(n as i64, i as i64)
                * (2 * i)
                * BigInt::from(2 * (n - i) + 1).pow((n - i + 1) as u32)
                * BigInt::from(2 * i - 1).pow(i as u32 + c)
        })
        .sum();
    ExactRational::new(num, BigInt::from(2 * n).pow((n + 1) as u32 + c))
}

/// `2/sqrt(2 pi) B(c + 3/2, 3/2)`, the coefficient of `n^(3/2)`.
pub fn lemma4_constant(c: u32) -> HalfIntValue {
    let prefactor = HalfIntValue::new(ExactRational::from(2), -1, -1);
    &prefactor * &beta_exact(HalfIntArg::half(c + 1), HalfIntArg::half(1))
}

/// [`lemma4_constant`] for real `c >= 0`.
pub fn lemma4_constant_f64(c: f64) -> f64 {
    2.0 / (2.0 * std::f64::consts::PI).sqrt() * ln_beta(c + 1.5, 1.5).exp()
}

/// Ratio of the largest normalized value to the one at the largest `n`.
/// A sequence that is identically zero counts as flat (ratio 1).
pub fn blowup_ratio(normalized: &[f64]) -> f64 {
    let max = normalized.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let last = normalized.last().map_or(0.0, |x| x.abs());
    if max == 0.0 {
        1.0
    } else {
        max / last
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Even `a`.
    One,
    /// Odd `a`.
    Two,
}

impl Theorem {
    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Theorem::One),
            2 => Ok(Theorem::Two),
            _ => Err(Error::domain("theorem", id, "1 or 2")),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Theorem::One => 1,
            Theorem::Two => 2,
        }
    }

    fn accepts(self, a: u32) -> bool {
        match self {
            Theorem::One => a % 2 == 0,
            Theorem::Two => a % 2 == 1,
        }
    }
}

/// Residuals at or below this fraction of the measured value are treated as
/// rounding noise and left out of the fit.
pub const NOISE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub theorem: Theorem,
    pub a: u32,
    pub constant: HalfIntValue,
    pub constant_f64: f64,
    /// Exponent `p` in `S(n) ~ constant * n^p`.
    pub predicted_power: f64,
    pub n_grid: Vec<u64>,
    pub measured: Vec<f64>,
    pub normalized: Vec<f64>,
    /// `measured - constant * n^p`.
    pub residuals: Vec<f64>,
    /// Least-squares slope of `ln |residual|` against `ln n`; `None` when
    /// fewer than two residuals clear the noise floor.
    pub fitted_exponent: Option<f64>,
    pub points_used: usize,
}

pub fn validate_grid(grid: &[u64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Grid("need at least two points".into()));
    }
    if grid[0] == 0 {
        return Err(Error::Grid("grid points must be positive".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Grid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    Some(sxy / sxx)
}

/// Measures `S(n, a)` on the grid with the float path, normalizes by the
/// predicted power and fits the decay of the remainder.
pub fn remainder_diagnostic(theorem: Theorem, a: u32, grid: &[u64]) -> Result<AsymptoticReport> {
    if !theorem.accepts(a) {
        return Err(Error::domain(
            "a",
            a,
            "even a for theorem 1, odd a for theorem 2",
        ));
    }
    validate_grid(grid)?;
    let constant = leading_constant(a)?;
    let c = constant.to_f64();
    let power = 1.0 - a as f64 / 2.0;

    let mut measured = Vec::with_capacity(grid.len());
    for &n in grid {
        measured.push(total_moment_float(&MomentQuery::new(n, a)?)?.total);
    }
    let normalized: Vec<f64> = grid
        .iter()
        .zip(&measured)
        .map(|(&n, m)| m / (n as f64).powf(power))
        .collect();
    let residuals: Vec<f64> = grid
        .iter()
        .zip(&measured)
        .map(|(&n, m)| m - c * (n as f64).powf(power))
        .collect();

    let (xs, ys): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(&measured)
        .zip(&residuals)
        .filter(|((_, m), r)| r.abs() > NOISE_FLOOR * m.abs())
        .map(|((&n, _), r)| ((n as f64).ln(), r.abs().ln()))
        .unzip();
    Ok(AsymptoticReport {
        theorem,
        a,
        constant_f64: c,
        constant,
        predicted_power: power,
        n_grid: grid.to_vec(),
        measured,
        normalized,
        residuals,
        fitted_exponent: ols_slope(&xs, &ys),
        points_used: xs.len(),
    })
}
