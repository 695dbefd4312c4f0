use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::One;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// A positive integer or half-integer argument, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfIntArg {
    twice: u32,
}

impl HalfIntArg {
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::domain("argument", "0", "positive (half-)integers"));
        }
        Ok(Self { twice })
    }

    pub fn int(k: u32) -> Result<Self> {
        Self::from_twice(2 * k)
    }

    /// `k + 1/2`.
    pub fn half(k: u32) -> Self {
        Self { twice: 2 * k + 1 }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::ops::Add for HalfIntArg {
    type Output = HalfIntArg;
    fn add(self, rhs: HalfIntArg) -> HalfIntArg {
        HalfIntArg {
            twice: self.twice + rhs.twice,
        }
    }
}

/// Exact value `rational * sqrt(pi)^sqrt_pi_power * sqrt(2)^sqrt_two_power`.
///
/// Gamma at half-integers lives in `Q * sqrt(pi)`, Beta of two half-integers
/// in `Q * pi`, and the odd-order leading constants carry one `sqrt(2)`.
/// The `sqrt(2)` exponent is kept in `{0, 1}`; the `pi` exponent is free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HalfIntValue {
    rational: ExactRational,
    sqrt_pi_power: i32,
    sqrt_two_power: u8,
}

impl HalfIntValue {
    pub fn new(rational: ExactRational, sqrt_pi_power: i32, sqrt_two_power: i32) -> Self {
        let mut rational = rational;
        let twos = sqrt_two_power.div_euclid(2);
        let rem = sqrt_two_power.rem_euclid(2) as u8;
        let scale = ExactRational::from_integer(BigInt::from(2).pow(twos.unsigned_abs()));
        if twos >= 0 {
            rational = rational * scale;
        } else {
            rational = rational / scale;
        }
        Self::normalized(rational, sqrt_pi_power, rem)
    }

    fn normalized(rational: ExactRational, sqrt_pi_power: i32, sqrt_two_power: u8) -> Self {
        if rational.is_zero() {
            return Self {
                rational,
                sqrt_pi_power: 0,
                sqrt_two_power: 0,
            };
        }
        Self {
            rational,
            sqrt_pi_power,
            sqrt_two_power,
        }
    }

    pub fn rational(value: ExactRational) -> Self {
        Self::new(value, 0, 0)
    }

    pub fn sqrt_pi() -> Self {
        Self::new(ExactRational::one(), 1, 0)
    }

    pub fn sqrt_two() -> Self {
        Self::new(ExactRational::one(), 0, 1)
    }

    pub fn rational_part(&self) -> &ExactRational {
        &self.rational
    }

    pub fn sqrt_pi_power(&self) -> i32 {
        self.sqrt_pi_power
    }

    pub fn sqrt_two_power(&self) -> u8 {
        self.sqrt_two_power
    }

    /// The value as a plain rational, if it has no radical part.
    pub fn as_rational(&self) -> Option<&ExactRational> {
        (self.sqrt_pi_power == 0 && self.sqrt_two_power == 0).then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let pi = std::f64::consts::PI.sqrt().powi(self.sqrt_pi_power);
        let two = if self.sqrt_two_power == 1 {
            std::f64::consts::SQRT_2
        } else {
            1.0
        };
        self.rational.to_f64() * pi * two
    }

    pub fn checked_div(&self, rhs: &HalfIntValue) -> Result<HalfIntValue> {
        let r = self.rational.checked_div(&rhs.rational)?;
        Ok(Self::new(
            r,
            self.sqrt_pi_power - rhs.sqrt_pi_power,
            self.sqrt_two_power as i32 - rhs.sqrt_two_power as i32,
        ))
    }

    pub fn checked_add(&self, rhs: &HalfIntValue) -> Result<HalfIntValue> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.sqrt_pi_power != rhs.sqrt_pi_power || self.sqrt_two_power != rhs.sqrt_two_power {
            return Err(Error::IncompatibleRadicals {
                lhs: self.to_string(),
                rhs: rhs.to_string(),
            });
        }
        Ok(Self::normalized(
            &self.rational + &rhs.rational,
            self.sqrt_pi_power,
            self.sqrt_two_power,
        ))
    }

    pub fn scale(&self, factor: &ExactRational) -> HalfIntValue {
        Self::normalized(
            &self.rational * factor,
            self.sqrt_pi_power,
            self.sqrt_two_power,
        )
    }
}

impl Mul for &HalfIntValue {
    type Output = HalfIntValue;
    fn mul(self, rhs: &HalfIntValue) -> HalfIntValue {
        HalfIntValue::new(
            &self.rational * &rhs.rational,
            self.sqrt_pi_power + rhs.sqrt_pi_power,
            self.sqrt_two_power as i32 + rhs.sqrt_two_power as i32,
        )
    }
}

impl Mul for HalfIntValue {
    type Output = HalfIntValue;
    fn mul(self, rhs: HalfIntValue) -> HalfIntValue {
        &self * &rhs
    }
}

impl fmt::Display for HalfIntValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.is_zero() {
            return Ok(());
        }
        if self.sqrt_two_power == 1 {
            write!(f, "*sqrt(2)")?;
        }
        match self.sqrt_pi_power {
            0 => Ok(()),
            1 => write!(f, "*sqrt(pi)"),
            2 => write!(f, "*pi"),
            k if k % 2 == 0 => write!(f, "*pi^{}", k / 2),
            k => write!(f, "*sqrt(pi)^{}", k),
        }
    }
}

impl fmt::Debug for HalfIntValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Gamma(two_z / 2)` exactly: `(z-1)!` for integer `z`, and
/// `(2m)! / (4^m m!) * sqrt(pi)` for `z = m + 1/2`.
pub fn gamma_half_int(two_z: u32) -> Result<HalfIntValue> {
    let arg = HalfIntArg::from_twice(two_z)?;
    Ok(gamma(arg))
}

pub(crate) fn gamma(arg: HalfIntArg) -> HalfIntValue {
    let twice = arg.twice();
    if arg.is_integer() {
        let z = twice / 2;
        return HalfIntValue::rational(ExactRational::from_integer(factorial(z - 1)));
    }
    let m = (twice - 1) / 2;
    let num = factorial(2 * m);
    let den = BigInt::from(4).pow(m) * factorial(m);
    let r = ExactRational::new(num, den).expect("nonzero denominator");
    HalfIntValue::new(r, 1, 0)
}

/// `B(c, d) = Gamma(c) Gamma(d) / Gamma(c + d)`.
pub fn beta_exact(c: HalfIntArg, d: HalfIntArg) -> HalfIntValue {
    let num = &gamma(c) * &gamma(d);
    num.checked_div(&gamma(c + d))
        .expect("Gamma is nonzero at positive arguments")
}

/// `B(c, d)` for positive integers through the binomial form
/// `1 / (C(c+d-1, c) * c)`.
pub fn beta_integer(c: u32, d: u32) -> ExactRational {
    let den = crate::combinatorics::binomial((c + d - 1) as i64, c as i64) * c;
    ExactRational::new(BigInt::one(), den).expect("positive binomial")
}
