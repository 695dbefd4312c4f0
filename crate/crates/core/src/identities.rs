//! Executable checks of the combinatorial and special-function identities
//! the moment computations rely on.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::verify_technical2b;
use crate::combinatorics::{
    binomial, eulerian_second_order, factorial, falling_factorial, falling_int, finite_difference,
    rising_factorial, rising_int, stirling_cycle, stirling_subset, triangle, TriangleKind,
};
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::special::{
    beta_exact, beta_integer, complement_sum, gamma_half_int, incomplete_beta_float,
    incomplete_beta_regularized_exact, incomplete_beta_step_down, stirling_bounds, HalfIntArg,
    HalfIntValue, IncompleteBetaQuery,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Stirling,
    Eulerian,
    Beta,
    Gould,
    FiniteDiff,
    Technical2b,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Stirling,
        Suite::Eulerian,
        Suite::Beta,
        Suite::Gould,
        Suite::FiniteDiff,
        Suite::Technical2b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Stirling => "stirling",
            Suite::Eulerian => "eulerian",
            Suite::Beta => "beta",
            Suite::Gould => "gould",
            Suite::FiniteDiff => "finite-diff",
            Suite::Technical2b => "technical2b",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one identity over its parameter range.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheckResult {
    pub suite: Suite,
    pub identity: String,
    /// Human-readable description of the range covered.
    pub parameters: String,
    pub cases: u64,
    pub passed: bool,
    /// Largest `|lhs - rhs|` seen; zero for exact identities that hold.
    pub residual: f64,
}

/// Accumulates exact comparisons.
struct Tally {
    suite: Suite,
    identity: &'static str,
    parameters: String,
    cases: u64,
    failures: u64,
    residual: f64,
}

impl Tally {
    fn new(suite: Suite, identity: &'static str, parameters: impl Into<String>) -> Self {
        Self {
            suite,
            identity,
            parameters: parameters.into(),
            cases: 0,
            failures: 0,
            residual: 0.0,
        }
    }

    fn exact(&mut self, lhs: &ExactRational, rhs: &ExactRational) {
        self.cases += 1;
        if lhs != rhs {
            self.failures += 1;
            self.residual = self.residual.max((lhs - rhs).to_f64().abs());
        }
    }

    fn int(&mut self, lhs: &BigInt, rhs: &BigInt) {
        self.exact(
            &ExactRational::from_integer(lhs.clone()),
            &ExactRational::from_integer(rhs.clone()),
        );
    }

    fn check(&mut self, ok: bool, residual: f64) {
        self.cases += 1;
        self.residual = self.residual.max(residual);
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> IdentityCheckResult {
        IdentityCheckResult {
            suite: self.suite,
            identity: self.identity.into(),
            parameters: self.parameters,
            cases: self.cases,
            passed: self.failures == 0 && self.cases > 0,
            residual: self.residual,
        }
    }
}

const SEED: u64 = 0x0005_eed0_f1d3;

fn random_rationals(count: usize, seed: u64) -> Vec<ExactRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ExactRational::frac(rng.random_range(-60..=60), rng.random_range(1..=40)))
        .collect()
}

fn power_sum(
    coeffs: impl Fn(u32) -> ExactRational,
    degree: u32,
    x: &ExactRational,
) -> ExactRational {
    (0..=degree).map(|l| coeffs(l) * x.pow(l)).sum()
}

pub fn stirling_suite() -> Vec<IdentityCheckResult> {
    let points = random_rationals(20, SEED);
    let range = "degree 0..=10 at 20 random rationals";

    let mut rising = Tally::new(Suite::Stirling, "rising-to-powers", range);
    let mut falling = Tally::new(Suite::Stirling, "falling-to-powers", range);
    let mut powers = Tally::new(Suite::Stirling, "powers-to-falling", range);
    for m in 0..=10u32 {
        for x in &points {
            let lhs = rising_factorial(x, m);
            let rhs = power_sum(
                |l| ExactRational::from_integer(stirling_cycle(m, l as i64)),
                m,
                x,
            );
            rising.exact(&lhs, &rhs);

            let lhs = falling_factorial(x, m);
            let rhs = power_sum(
                |l| {
                    let sign = if (m - l) % 2 == 0 { 1 } else { -1 };
                    ExactRational::from_integer(stirling_cycle(m, l as i64) * sign)
                },
                m,
                x,
            );
            falling.exact(&lhs, &rhs);

            let lhs = x.pow(m);
            let rhs: ExactRational = (0..=m)
                .map(|l| {
                    ExactRational::from_integer(stirling_subset(m, l as i64))
                        * falling_factorial(x, l)
                })
                .sum();
            powers.exact(&lhs, &rhs);
        }
    }

    let mut recurrences = Tally::new(Suite::Stirling, "triangle-recurrences", "n 1..=20, k 0..=n");
    let cycle = triangle(TriangleKind::StirlingCycle, 20);
    let subset = triangle(TriangleKind::StirlingSubset, 20);
    for n in 1..=20u32 {
        for k in 0..=n as i64 {
            let want = cycle.get(n - 1, k - 1) + cycle.get(n - 1, k) * (n - 1);
            recurrences.int(&cycle.get(n, k), &want);
            let want = subset.get(n - 1, k - 1) + subset.get(n - 1, k) * k;
            recurrences.int(&subset.get(n, k), &want);
        }
    }

    let mut bounds = Tally::new(Suite::Stirling, "factorial-bounds", "m 1..=170");
    for m in 1..=170 {
        let b = stirling_bounds(m).expect("m >= 1");
        let gap = (b.ln_lower - b.ln_factorial)
            .max(b.ln_factorial - b.ln_upper)
            .max(0.0);
        bounds.check(b.brackets(), gap);
    }

    vec![
        rising.finish(),
        falling.finish(),
        powers.finish(),
        recurrences.finish(),
        bounds.finish(),
    ]
}

pub fn eulerian_suite() -> Vec<IdentityCheckResult> {
    // The m = 0, b = 0 corner is excluded: the right side reads C(-1, 0),
    // which vanishes under the zero-outside convention.
    let mut subset = Tally::new(Suite::Eulerian, "subset-near-diagonal", "m 1..=15, b 0..=5");
    for m in 1..=15i64 {
        for b in 0..=5i64 {
            let lhs = stirling_subset(m as u32, m - b);
            let rhs: BigInt = (0..=b)
                .map(|l| eulerian_second_order(b as u32, l) * binomial(m + b - 1 - l, 2 * b))
                .sum();
            subset.int(&lhs, &rhs);
        }
    }

    let mut cycle = Tally::new(Suite::Eulerian, "cycle-near-diagonal", "m 0..=15, b 0..=5");
    for m in 0..=15i64 {
        for b in 0..=5i64 {
            let lhs = stirling_cycle(m as u32, m - b);
            let rhs: BigInt = (0..=b)
                .map(|l| eulerian_second_order(b as u32, l) * binomial(m + l, 2 * b))
                .sum();
            cycle.int(&lhs, &rhs);
        }
    }

    let mut rows = Tally::new(Suite::Eulerian, "row-sums", "m 0..=20");
    for m in 0..=20u32 {
        let lhs: BigInt = (0..=m as i64).map(|k| eulerian_second_order(m, k)).sum();
        let rhs = factorial(2 * m) / (factorial(m) * BigInt::from(2).pow(m));
        rows.int(&lhs, &rhs);
    }

    let mut recurrence = Tally::new(Suite::Eulerian, "recurrence", "n 1..=20, k 0..=n");
    let table = triangle(TriangleKind::EulerianSecondOrder, 20);
    for n in 1..=20u32 {
        for k in 0..=n as i64 {
            let want =
                table.get(n - 1, k) * (k + 1) + table.get(n - 1, k - 1) * (2 * n as i64 - 1 - k);
            recurrence.int(&table.get(n, k), &want);
        }
    }

    vec![
        subset.finish(),
        cycle.finish(),
        rows.finish(),
        recurrence.finish(),
    ]
}

fn step_grid() -> Vec<ExactRational> {
    vec![
        ExactRational::frac(1, 7),
        ExactRational::frac(1, 3),
        ExactRational::frac(9, 10),
    ]
}

pub fn beta_suite() -> Vec<IdentityCheckResult> {
    let mut binomial_form = Tally::new(Suite::Beta, "beta-binomial-form", "c, d 1..=30");
    for c in 1..=30u32 {
        for d in 1..=30u32 {
            let b = beta_exact(HalfIntArg::int(c).unwrap(), HalfIntArg::int(d).unwrap());
            let ok = b.as_rational() == Some(&beta_integer(c, d));
            binomial_form.check(
                ok,
                if ok {
                    0.0
                } else {
                    (b.to_f64() - beta_integer(c, d).to_f64()).abs()
                },
            );
        }
    }

    let mut symmetry = Tally::new(Suite::Beta, "beta-symmetry", "2c, 2d 1..=30");
    for c in 1..=30u32 {
        for d in 1..=30u32 {
            let (c, d) = (
                HalfIntArg::from_twice(c).unwrap(),
                HalfIntArg::from_twice(d).unwrap(),
            );
            let (l, r) = (beta_exact(c, d), beta_exact(d, c));
            symmetry.check(l == r, (l.to_f64() - r.to_f64()).abs());
        }
    }

    let mut range = Tally::new(
        Suite::Beta,
        "incomplete-beta-range",
        "500 random queries, c, d 1..=40",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xbe7a);
    let zero = ExactRational::zero();
    let one = ExactRational::one();
    for _ in 0..500 {
        let den: i64 = rng.random_range(1..=50);
        let z = ExactRational::frac(rng.random_range(0..=den), den);
        let query = IncompleteBetaQuery::new(z, rng.random_range(1..=40), rng.random_range(1..=40))
            .unwrap();
        let v = incomplete_beta_regularized_exact(&query);
        let excess = if v < zero {
            -v.to_f64()
        } else if v > one {
            (&v - &one).to_f64()
        } else {
            0.0
        };
        range.check(excess == 0.0, excess);
    }

    let mut step = Tally::new(
        Suite::Beta,
        "step-down",
        "c 2..=30, d 1..=30, z in {1/7, 1/3, 9/10}",
    );
    let mut complement = Tally::new(
        Suite::Beta,
        "complement",
        "c 2..=30, d 1..=30, z in {1/7, 1/3, 9/10}",
    );
    for z in step_grid() {
        for c in 2..=30 {
            for d in 1..=30 {
                let query = IncompleteBetaQuery::new(z.clone(), c, d).unwrap();
                let direct = incomplete_beta_regularized_exact(&query);
                step.exact(&incomplete_beta_step_down(&query).unwrap(), &direct);
                complement.exact(&complement_sum(&query), &one);
            }
        }
    }

    let mut float = Tally::new(
        Suite::Beta,
        "incomplete-beta-float",
        "relative error <= 1e-12, c + d <= 500",
    );
    let shapes = [1u32, 2, 3, 7, 20, 60, 150, 249];
    for z in [
        ExactRational::frac(1, 7),
        ExactRational::frac(1, 3),
        ExactRational::frac(1, 2),
        ExactRational::frac(9, 10),
    ] {
        for &c in &shapes {
            for &d in &shapes {
                let exact = incomplete_beta_regularized_exact(
                    &IncompleteBetaQuery::new(z.clone(), c, d).unwrap(),
                )
                .to_f64();
                let got = incomplete_beta_float(z.to_f64(), c as f64, d as f64).unwrap();
                let err = if exact > 1e-290 {
                    ((got - exact) / exact).abs()
                } else {
                    got.abs()
                };
                float.check(err <= 1e-12, err);
            }
        }
    }

    vec![
        binomial_form.finish(),
        symmetry.finish(),
        range.finish(),
        step.finish(),
        complement.finish(),
        float.finish(),
    ]
}

/// `sum_b C((a-1)/2, b) (-1)^b / (2b+1)` and `sqrt(pi) ((a-1)/2)! / (2 Gamma(a/2 + 1))`.
pub fn gould_sides(a: u32) -> Result<(HalfIntValue, HalfIntValue)> {
    if a % 2 == 0 {
        return Err(Error::EvenOrder { a });
    }
    let m = (a - 1) / 2;
    let lhs: ExactRational = (0..=a as i64)
        .map(|b| {
            let sign = if b % 2 == 0 { 1 } else { -1 };
            ExactRational::from_integer(binomial(m as i64, b) * sign)
                / ExactRational::from(2 * b + 1)
        })
        .sum();
    let num = HalfIntValue::new(ExactRational::from_integer(factorial(m)), 1, 0);
    let den = gamma_half_int(a + 2)?.scale(&ExactRational::from(2));
    Ok((HalfIntValue::rational(lhs), num.checked_div(&den)?))
}

pub fn gould_suite() -> Vec<IdentityCheckResult> {
    [1u32, 3, 5, 7, 9]
        .into_iter()
        .map(|a| {
            let (lhs, rhs) = gould_sides(a).expect("odd a");
            IdentityCheckResult {
                suite: Suite::Gould,
                identity: "alternating-binomial-reciprocal".into(),
                parameters: format!("a={a}; lhs={lhs}; rhs={rhs}"),
                cases: 1,
                passed: lhs == rhs,
                residual: (lhs.to_f64() - rhs.to_f64()).abs(),
            }
        })
        .collect()
}

/// Lagrange interpolation through `(x_k, y_k)`, evaluated at `x`.
fn interpolate(points: &[(ExactRational, ExactRational)], x: &ExactRational) -> ExactRational {
    let mut acc = ExactRational::zero();
    for (k, (xk, yk)) in points.iter().enumerate() {
        let mut basis = yk.clone();
        for (m, (xm, _)) in points.iter().enumerate() {
            if m != k {
                basis = basis * (x - xm) / (xk - xm);
            }
        }
        acc += basis;
    }
    acc
}

pub fn finite_diff_suite() -> Vec<IdentityCheckResult> {
    let mut annihilation = Tally::new(
        Suite::FiniteDiff,
        "difference-of-powers",
        "m 0..=a, a 1..=12",
    );
    for a in 1..=12u32 {
        for m in 0..=a {
            let got = finite_difference(a, |j| ExactRational::from(j).pow(m));
            let want = if m < a {
                ExactRational::zero()
            } else {
                let sign = if a % 2 == 0 { 1 } else { -1 };
                ExactRational::from_integer(factorial(a) * sign)
            };
            annihilation.exact(&got, &want);
        }
    }

    let mut mixed = Tally::new(
        Suite::FiniteDiff,
        "falling-rising-sum",
        "d, f 0..=5, n 1..=50",
    );
    for d in 0..=5u32 {
        for f in 0..=5u32 {
            let mut lhs = BigInt::zero();
            for n in 1..=50u64 {
                lhs += falling_int(n as i64 - 1, d) * rising_int(n, f);
                let rhs = falling_int(n as i64 - 1, d) * rising_int(n, f + 1);
                mixed.exact(
                    &ExactRational::from_integer(lhs.clone()),
                    &ExactRational::new(rhs, f + d + 1).unwrap(),
                );
            }
        }
    }

    let mut power_sums = Tally::new(
        Suite::FiniteDiff,
        "power-sum-degree",
        "f 0..=6; fit on f+2 points, checked on n 1..=40",
    );
    for f in 0..=6u32 {
        let g = |n: u64| -> ExactRational {
            let s: BigInt = (1..=n).map(|k| BigInt::from(k).pow(f)).sum();
            ExactRational::from_integer(s)
                - ExactRational::from(n).pow(f + 1) / ExactRational::from(f + 1)
        };
        let points: Vec<_> = (1..=f as u64 + 2)
            .map(|n| (ExactRational::from(n), g(n)))
            .collect();
        // Degree <= f: the (f+2)-point interpolant must lose its top coefficient,
        // equivalently agree with the (f+1)-point one everywhere.
        let lower = &points[..points.len() - 1];
        for n in 1..=40u64 {
            let x = ExactRational::from(n);
            power_sums.exact(&interpolate(lower, &x), &g(n));
        }
        power_sums.exact(
            &interpolate(&points, &ExactRational::from(100u64)),
            &interpolate(lower, &ExactRational::from(100u64)),
        );
    }

    vec![annihilation.finish(), mixed.finish(), power_sums.finish()]
}

pub fn technical2b_suite() -> Vec<IdentityCheckResult> {
    [1u32, 3, 5, 7]
        .into_iter()
        .map(|a| verify_technical2b(a).expect("odd a <= 15"))
        .collect()
}

pub fn run_suite(suite: Suite) -> Vec<IdentityCheckResult> {
    match suite {
        Suite::Stirling => stirling_suite(),
        Suite::Eulerian => eulerian_suite(),
        Suite::Beta => beta_suite(),
        Suite::Gould => gould_suite(),
        Suite::FiniteDiff => finite_diff_suite(),
        Suite::Technical2b => technical2b_suite(),
    }
}

pub fn run_all() -> Vec<IdentityCheckResult> {
    Suite::ALL.into_iter().flat_map(run_suite).collect()
}
