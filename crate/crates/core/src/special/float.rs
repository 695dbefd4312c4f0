//! Floating-point kernels for the large-n path.
//!
//! Binomial probabilities use the saddle-point form
//! (`stirlerr` + `bd0`), which keeps full relative precision where the naive
//! `lgamma` difference would cancel catastrophically.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::rational::ln_biguint;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Gamma(x+1) - (x + 1/2) ln x + x - ln sqrt(2 pi)`, the error of
/// Stirling's approximation to `ln x!`.
pub fn stirlerr(x: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if x <= 15.0 {
        return ln_gamma(x + 1.0) - (x + 0.5) * x.ln() + x - LN_SQRT_2PI;
    }
    let xx = x * x;
    if x > 500.0 {
        (S0 - S1 / xx) / x
    } else if x > 80.0 {
        (S0 - (S1 - S2 / xx) / xx) / x
    } else if x > 35.0 {
        (S0 - (S1 - (S2 - S3 / xx) / xx) / xx) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
    }
}

/// Deviance term `x ln(x / np) + np - x`, evaluated without cancellation
/// when `x` is close to `np`.
pub fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `C(n, x) p^x q^(n-x)` with `q = 1 - p` supplied separately; `x`, `n` may be
/// real (the Gamma-function binomial).
pub fn binomial_pmf(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    if x == 0.0 {
        if n == 0.0 {
            return 1.0;
        }
        let lc = if p < 0.1 {
            -bd0(n, n * q) - n * p
        } else {
            n * q.ln()
        };
        return lc.exp();
    }
    if x == n {
        let lc = if q < 0.1 {
            -bd0(n, n * p) - n * q
        } else {
            n * p.ln()
        };
        return lc.exp();
    }
    if x < 0.0 || x > n {
        return 0.0;
    }
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
    let lf = (2.0 * PI).ln() + x.ln() + (-x / n).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// `ln B(c, d)`.
pub fn ln_beta(c: f64, d: f64) -> f64 {
    ln_gamma(c) + ln_gamma(d) - ln_gamma(c + d)
}

/// Regularized incomplete Beta `I(z; c, d)` in double precision.
pub fn incomplete_beta_float(z: f64, c: f64, d: f64) -> Result<f64> {
    incomplete_beta_pq(z, 1.0 - z, c, d)
}

/// As [`incomplete_beta_float`], with `1 - z` passed in so callers holding
/// it exactly avoid the rounding in `1.0 - z`.
pub fn incomplete_beta_pq(z: f64, zc: f64, c: f64, d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) || z.is_nan() {
        return Err(Error::domain("z", z, "[0, 1]"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain("c", c, "c > 0"));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain("d", d, "d > 0"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if zc == 0.0 {
        return Ok(1.0);
    }
    if z <= c / (c + d) {
        Ok(prefactor(z, zc, c, d) * continued_fraction(z, c, d) / c)
    } else {
        Ok(1.0 - prefactor(zc, z, d, c) * continued_fraction(zc, d, c) / d)
    }
}

/// `z^c (1-z)^d / B(c, d)`.
fn prefactor(z: f64, zc: f64, c: f64, d: f64) -> f64 {
    if d >= 1.0 {
        // 1/B(c, d) = c C(c+d-1, c)
        binomial_pmf(c, c + d - 1.0, z, zc) * zc * c
    } else {
        (c * z.ln() + d * zc.ln() - ln_beta(c, d)).exp()
    }
}

/// Modified Lentz evaluation of the standard incomplete-Beta continued
/// fraction.
fn continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 100_000;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Stirling-formula bracket of `m!`, all in natural logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingBounds {
    pub m: u32,
    pub ln_lower: f64,
    pub ln_upper: f64,
    /// `ln m!` from the exact big-integer factorial.
    pub ln_factorial: f64,
}

impl StirlingBounds {
    pub fn lower(&self) -> f64 {
        self.ln_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.ln_upper.exp()
    }

    /// Strict `lower < m! < upper`.
    pub fn brackets(&self) -> bool {
        self.ln_lower < self.ln_factorial && self.ln_factorial < self.ln_upper
    }
}

/// `sqrt(2 pi) m^(m+1/2) e^(-m + 1/(12m+1)) < m! < sqrt(2 pi) m^(m+1/2) e^(-m + 1/(12m))`.
pub fn stirling_bounds(m: u32) -> Result<StirlingBounds> {
    if m == 0 {
        return Err(Error::domain("m", m, "m >= 1"));
    }
    let mf = m as f64;
    let base = LN_SQRT_2PI + (mf + 0.5) * mf.ln() - mf;
    let ln_factorial = ln_biguint(factorial(m).magnitude());
    Ok(StirlingBounds {
        m,
        ln_lower: base + 1.0 / (12.0 * mf + 1.0),
        ln_upper: base + 1.0 / (12.0 * mf),
        ln_factorial,
    })
}
