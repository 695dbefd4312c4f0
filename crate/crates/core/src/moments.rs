//! Expected displacement moments `E_i^(a) = E|X_(i) - t_i|^a`.
//!
//! For odd `a` the moment is split as
//! `E_i = i C(n,i) int_0^1 (x - t_i)^a f + 2 i C(n,i) int_0^t_i (t_i - x)^a f`,
//! the signed and folded parts. For even `a` the signed integral already is
//! the moment and the folded part is zero.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial, falling_int, rising_int};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::rational::ExactRational;
use crate::special::{
    binomial_pmf, incomplete_beta_pq, incomplete_beta_regularized_exact, step_down_term,
    IncompleteBetaQuery,
};

/// Largest `n` accepted by the exact path.
pub const EXACT_LIMIT: u64 = 2000;
/// Largest `n` accepted by the float path.
pub const FLOAT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MomentQuery {
    n: u64,
    a: u32,
}

impl MomentQuery {
    pub fn new(n: u64, a: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n", n, "n >= 1"));
        }
        if a == 0 {
            return Err(Error::domain("a", a, "a >= 1"));
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn parity(&self) -> Parity {
        if self.a % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn check_index(&self, i: u64) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::SensorIndex { i, n: self.n });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensorMoment {
    pub i: u64,
    pub t: ExactRational,
    pub e_total: ExactRational,
    pub e_signed_part: ExactRational,
    pub e_folded_part: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentBreakdown {
    pub query: MomentQuery,
    pub per_sensor: Vec<SensorMoment>,
    pub total: ExactRational,
}

/// The two pieces of the folded part obtained through the step-down chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedSplit {
    /// `sum_j` of the terms carrying `I(t_i; i, n-i+1)`.
    pub head: ExactRational,
    /// `sum_j` of the step-down corrections.
    pub tail: ExactRational,
}

impl FoldedSplit {
    pub fn total(&self) -> ExactRational {
        &self.head + &self.tail
    }
}

/// Anchor `t_i = (2i - 1) / (2n)`.
pub fn anchor(i: u64, n: u64) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    if i == 0 || i > n {
        return Err(Error::SensorIndex { i, n });
    }
    ExactRational::new(2 * i - 1, 2 * n)
}

/// `E[X_(i)^j] = i^(j) / (n+1)^(j)`.
fn raw_moment(i: u64, n: u64, j: u32) -> ExactRational {
    ExactRational::new(rising_int(i, j), rising_int(n + 1, j)).expect("positive")
}

/// Signed part `i C(n,i) int_0^1 (x - t)^a x^(i-1) (1-x)^(n-i) dx`.
fn signed_part(t: &ExactRational, i: u64, n: u64, a: u32) -> ExactRational {
    let neg_t = -t.clone();
    (0..=a)
        .map(|j| {
            ExactRational::from_integer(binomial(a as i64, j as i64))
                * neg_t.pow(a - j)
                * raw_moment(i, n, j)
        })
        .sum()
}

/// `E_i^(a)` with every folded-part term `I(t_i; i+j, n-i+1)` evaluated
/// directly from its termwise integral.
pub fn per_sensor_moment_exact(q: &MomentQuery, i: u64) -> Result<SensorMoment> {
    q.check_index(i)?;
    let (n, a) = (q.n, q.a);
    let t = anchor(i, n)?;
    let signed = signed_part(&t, i, n, a);
    let folded = match q.parity() {
        Parity::Even => ExactRational::zero(),
        Parity::Odd => {
            let d = (n - i + 1) as u32;
            let mut acc = ExactRational::zero();
            for j in 0..=a {
                let ib = incomplete_beta_regularized_exact(&IncompleteBetaQuery::new(
                    t.clone(),
                    i as u32 + j,
                    d,
                )?);
                let sign = if j % 2 == 0 { 1 } else { -1 };
                acc += ExactRational::from_integer(binomial(a as i64, j as i64) * sign)
                    * t.pow(a - j)
                    * raw_moment(i, n, j)
                    * ib;
            }
            acc * ExactRational::from_integer(2)
        }
    };
    Ok(SensorMoment {
        i,
        t,
        e_total: &signed + &folded,
        e_signed_part: signed,
        e_folded_part: folded,
    })
}

/// Folded part by expanding in `j`, then reducing every
/// `I(t_i; i+j, n-i+1)` to `I(t_i; i, n-i+1)` with the step-down recurrence.
/// Odd `a` only.
pub fn folded_part_via_incomplete_beta(q: &MomentQuery, i: u64) -> Result<FoldedSplit> {
    q.check_index(i)?;
    if q.parity() == Parity::Even {
        return Err(Error::EvenOrder { a: q.a });
    }
    let (n, a) = (q.n, q.a);
    let t = anchor(i, n)?;
    let d = (n - i + 1) as u32;
    let base =
        incomplete_beta_regularized_exact(&IncompleteBetaQuery::new(t.clone(), i as u32, d)?);

    let mut head = ExactRational::zero();
    let mut tail = ExactRational::zero();
    // Running sum_{k=1}^{j} C(n+k-1, k+i-1) (1-t)^d t^(i+k-1).
    let mut removed = ExactRational::zero();
    for j in 0..=a {
        if j > 0 {
            removed += step_down_term(&t, i as u32 + j, d);
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let coeff = ExactRational::from_integer(binomial(a as i64, j as i64) * (2 * sign))
            * t.pow(a - j)
            * raw_moment(i, n, j);
        head += &coeff * &base;
        tail -= &coeff * &removed;
    }
    Ok(FoldedSplit { head, tail })
}

/// Unreduced numerators of one sensor over the common denominator
/// `w^(n+a) (n+1)^(a)`, with `t = u / w`.
struct SensorNumerators {
    signed: BigInt,
    folded: BigInt,
}

/// Integer kernel for one sensor. Writing `E[X^j] = i^(j) (n+a)_(a-j) / Q`
/// with `Q = (n+1)^(a)`, `I(t; i, d) = P(Bin(n, t) >= i) = N_0 / w^n`, and
/// stepping `N_j = N_(j-1) w - C(n+j-1, i+j-1) u^(i+j-1) v^d` for
/// `I(t; i+j, d) = N_j / w^(n+j)`, every piece shares one denominator.
fn sensor_numerators(i: u64, n: u64, a: u32) -> SensorNumerators {
    let w = BigInt::from(2 * n);
    let u = BigInt::from(2 * i - 1);
    let v = BigInt::from(2 * (n - i) + 1);

    // e_j = C(a, j) i^(j) (n+a)_(a-j), the shared coefficient.
    let coeffs: Vec<BigInt> = (0..=a)
        .map(|j| {
            binomial(a as i64, j as i64)
                * rising_int(i, j)
                * falling_int((n + a as u64) as i64, a - j)
        })
        .collect();
    let u_pows: Vec<BigInt> = {
        let mut out = Vec::with_capacity(a as usize + 1);
        let mut p = BigInt::one();
        for _ in 0..=a {
            out.push(p.clone());
            p *= &u;
        }
        out
    };
    let w_pows: Vec<BigInt> = {
        let mut out = Vec::with_capacity(a as usize + 1);
        let mut p = BigInt::one();
        for _ in 0..=a {
            out.push(p.clone());
            p *= &w;
        }
        out
    };

    // Signed: sum_j C(a,j) (-u)^(a-j) w^j i^(j) (n+a)_(a-j), over w^a Q.
    let mut signed = BigInt::zero();
    for j in 0..=a {
        let term = &coeffs[j as usize] * &u_pows[(a - j) as usize] * &w_pows[j as usize];
        if (a - j) % 2 == 0 {
            signed += term;
        } else {
            signed -= term;
        }
    }
    signed *= w.pow(n as u32);

    if a % 2 == 0 {
        return SensorNumerators {
            signed,
            folded: BigInt::zero(),
        };
    }

    let tail_sum = upper_tail_numerator(i, n);

    // Folded: 2 sum_j (-1)^j e_j u^(a-j) N_j, over w^(n+a) Q.
    let v_d = v.pow((n - i + 1) as u32);
    let mut step = u.pow((i - 1) as u32) * &v_d; // u^(i+j-1) v^d, advanced by u
    let mut numer = tail_sum;
    let mut folded = BigInt::zero();
    for j in 0..=a {
        if j > 0 {
            step *= &u;
            numer =
                numer * &w - binomial((n + j as u64 - 1) as i64, (i + j as u64 - 1) as i64) * &step;
        }
        let term = &coeffs[j as usize] * &u_pows[(a - j) as usize] * &numer;
        if j % 2 == 0 {
            folded += term;
        } else {
            folded -= term;
        }
    }
    folded *= 2;
    SensorNumerators { signed, folded }
}

/// `N` with `I(t_i; i, n-i+1) = P(Bin(n, t_i) >= i) = N / (2n)^n`, i.e.
/// `sum_{m=i}^{n} C(n, m) (2i-1)^m (2n-2i+1)^(n-m)`.
pub(crate) fn upper_tail_numerator(i: u64, n: u64) -> BigInt {
    let (u, v) = (2 * i - 1, 2 * (n - i) + 1);
    let mut term = binomial(n as i64, i as i64)
        * BigInt::from(u).pow(i as u32)
        * BigInt::from(v).pow((n - i) as u32);
    let mut sum = term.clone();
    for m in i..n {
        term *= (n - m) * u;
        term /= (m + 1) * v;
        sum += &term;
    }
    sum
}

fn common_denominator(n: u64, a: u32) -> BigInt {
    BigInt::from(2 * n).pow((n + a as u64) as u32) * rising_int(n + 1, a)
}

fn check_exact_guard(q: &MomentQuery) -> Result<()> {
    if q.n > EXACT_LIMIT {
        return Err(Error::SizeGuard {
            n: q.n,
            limit: EXACT_LIMIT,
        });
    }
    Ok(())
}

/// Per-sensor and total moments in exact arithmetic, parallel over sensors
/// with an index-ordered reduction.
pub fn total_moment_exact(q: &MomentQuery) -> Result<MomentBreakdown> {
    check_exact_guard(q)?;
    let (n, a) = (q.n, q.a);
    let den = common_denominator(n, a);
    let raw: Vec<(u64, SensorNumerators)> = (1..=n)
        .into_par_iter()
        .map(|i| (i, sensor_numerators(i, n, a)))
        .collect();

    let mut total_num = BigInt::zero();
    let mut per_sensor = Vec::with_capacity(n as usize);
    for (i, nums) in raw {
        let total = &nums.signed + &nums.folded;
        total_num += &total;
        per_sensor.push(SensorMoment {
            i,
            t: anchor(i, n)?,
            e_total: ExactRational::new(total, den.clone())?,
            e_signed_part: ExactRational::new(nums.signed, den.clone())?,
            e_folded_part: ExactRational::new(nums.folded, den.clone())?,
        });
    }
    Ok(MomentBreakdown {
        query: *q,
        per_sensor,
        total: ExactRational::new(total_num, den)?,
    })
}

/// Total only; skips reducing every per-sensor entry.
pub fn total_moment_exact_value(q: &MomentQuery) -> Result<ExactRational> {
    check_exact_guard(q)?;
    let (n, a) = (q.n, q.a);
    let sum = (1..=n)
        .into_par_iter()
        .map(|i| {
            let nums = sensor_numerators(i, n, a);
            nums.signed + nums.folded
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(BigInt::zero(), |acc, x| acc + x);
    ExactRational::new(sum, common_denominator(n, a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatSensorMoment {
    pub i: u64,
    pub t: f64,
    pub e_total: f64,
    pub e_signed_part: f64,
    pub e_folded_part: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatBreakdown {
    pub query: MomentQuery,
    pub total: f64,
    pub signed_total: f64,
    pub folded_total: f64,
}

/// One sensor in double precision.
///
/// Moments of `Y = X_(i) - t` under the Beta(c, d) law obey the three-term
/// recurrence `(k+c+d) M_(k+1) = (alpha + (k+1) q) M_k + k p M_(k-1)` with
/// `p = t(1-t)`, `q = 1 - 2t`, `alpha = (c-1) - (c+d-2) t`. The partial
/// moments over `[0, t]` follow the same recurrence after a boundary term at
/// `k = 0`, seeded by `I(t; c, d)` and the density at `t`.
pub fn per_sensor_moment_float(q: &MomentQuery, i: u64) -> Result<FloatSensorMoment> {
    q.check_index(i)?;
    let n = q.n as f64;
    let i_f = i as f64;
    let num = 2 * i - 1;
    let t = num as f64 / (2.0 * n);
    let tc = (2 * (q.n - i) + 1) as f64 / (2.0 * n);
    let (c, d) = (i_f, n - i_f + 1.0);
    let p = t * tc;
    let qq = tc - t;
    let alpha = (c - 1.0) - (c + d - 2.0) * t;

    let mut m_prev = 0.0;
    let mut m_cur = 1.0;
    for k in 0..q.a {
        let kf = k as f64;
        let next = ((alpha + (kf + 1.0) * qq) * m_cur + kf * p * m_prev) / (kf + c + d);
        m_prev = m_cur;
        m_cur = next;
    }
    let signed = m_cur;

    let folded = if q.a % 2 == 0 {
        0.0
    } else {
        let density = n * binomial_pmf(i_f - 1.0, n - 1.0, t, tc);
        let mut p_prev = incomplete_beta_pq(t, tc, c, d)?;
        let mut p_cur = ((alpha + qq) * p_prev - p * density) / (c + d);
        for k in 1..q.a {
            let kf = k as f64;
            let next = ((alpha + (kf + 1.0) * qq) * p_cur + kf * p * p_prev) / (kf + c + d);
            p_prev = p_cur;
            p_cur = next;
        }
        -2.0 * p_cur
    };
    Ok(FloatSensorMoment {
        i,
        t,
        e_total: signed + folded,
        e_signed_part: signed,
        e_folded_part: folded,
    })
}

const FLOAT_CHUNK: u64 = 4096;

/// Total moment in double precision. Sensors are summed with compensated
/// summation in fixed-size index chunks, so the result does not depend on
/// the thread count.
pub fn total_moment_float(q: &MomentQuery) -> Result<FloatBreakdown> {
    if q.n > FLOAT_LIMIT {
        return Err(Error::SizeGuard {
            n: q.n,
            limit: FLOAT_LIMIT,
        });
    }
    let chunks = q.n.div_ceil(FLOAT_CHUNK);
    let partials: Vec<Result<[CompensatedSum; 3]>> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut sums = [CompensatedSum::new(); 3];
            let lo = ch * FLOAT_CHUNK + 1;
            let hi = ((ch + 1) * FLOAT_CHUNK).min(q.n);
            for i in lo..=hi {
                let m = per_sensor_moment_float(q, i)?;
                sums[0].add(m.e_total);
                sums[1].add(m.e_signed_part);
                sums[2].add(m.e_folded_part);
            }
            Ok(sums)
        })
        .collect();
    let mut totals = [CompensatedSum::new(); 3];
    for part in partials {
        let part = part?;
        for (acc, s) in totals.iter_mut().zip(part.iter()) {
            acc.add(s.value());
        }
    }
    let total = totals[0].value();
    assert!(total.is_finite(), "float moment overflowed at n = {}", q.n);
    Ok(FloatBreakdown {
        query: *q,
        total,
        signed_total: totals[1].value(),
        folded_total: totals[2].value(),
    })
}
