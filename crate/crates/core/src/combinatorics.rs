//! Integer and rational combinatorial primitives: binomials, factorial
//! powers, Stirling and second-order Eulerian triangles, and Euler's finite
//! difference operator.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::rational::ExactRational;

/// `C(n, k)`; zero whenever `k < 0`, `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    BigInt::from(acc)
}

pub fn factorial(m: u32) -> BigInt {
    (2..=m as u64).fold(BigInt::one(), |acc, k| acc * k)
}

/// `x (x+1) ... (x+k-1)`.
pub fn rising_factorial(x: &ExactRational, k: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term += &ExactRational::one();
    }
    acc
}

/// `x (x-1) ... (x-k+1)`.
pub fn falling_factorial(x: &ExactRational, k: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term -= &ExactRational::one();
    }
    acc
}

/// Integer rising factorial `x^(k)`.
pub(crate) fn rising_int(x: u64, k: u32) -> BigInt {
    (0..k as u64).fold(BigInt::one(), |acc, j| acc * (x + j))
}

/// Integer falling factorial; zero once the product crosses zero.
pub(crate) fn falling_int(x: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, j| acc * (x - j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    /// Unsigned Stirling numbers of the first kind, `[n k]`.
    StirlingCycle,
    /// Stirling numbers of the second kind, `{n k}`.
    StirlingSubset,
    /// Second-order Eulerian numbers `<<n k>>`.
    EulerianSecondOrder,
}

impl TriangleKind {
    fn slot(self) -> usize {
        match self {
            TriangleKind::StirlingCycle => 0,
            TriangleKind::StirlingSubset => 1,
            TriangleKind::EulerianSecondOrder => 2,
        }
    }

    /// Cell `(n, k)` from row `n - 1`.
    fn step(self, prev: &[BigInt], n: u64, k: usize) -> BigInt {
        let at = |j: i64| -> BigInt {
            if j < 0 || j as usize >= prev.len() {
                BigInt::zero()
            } else {
                prev[j as usize].clone()
            }
        };
        let k_i = k as i64;
        match self {
            TriangleKind::StirlingCycle => at(k_i - 1) + at(k_i) * (n - 1),
            TriangleKind::StirlingSubset => at(k_i - 1) + at(k_i) * k as u64,
            TriangleKind::EulerianSecondOrder => {
                let down = 2 * n as i64 - 1 - k_i;
                at(k_i) * (k as u64 + 1) + at(k_i - 1) * down
            }
        }
    }
}

/// Dense lower-triangular table filled by recurrence.
#[derive(Debug, Clone)]
pub struct TriangleTable {
    kind: TriangleKind,
    rows: Vec<Vec<BigInt>>,
}

impl TriangleTable {
    pub fn new(kind: TriangleKind, max_row: u32) -> Self {
        let mut table = Self {
            kind,
            rows: vec![vec![BigInt::one()]],
        };
        table.extend_to(max_row);
        table
    }

    pub fn kind(&self) -> TriangleKind {
        self.kind
    }

    pub fn max_row(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    fn extend_to(&mut self, max_row: u32) {
        while self.rows.len() <= max_row as usize {
            let n = self.rows.len() as u64;
            let prev = self.rows.last().expect("row 0 always present");
            let row = (0..=n as usize)
                .map(|k| self.kind.step(prev, n, k))
                .collect();
            self.rows.push(row);
        }
    }

    /// Entry `(n, k)`; zero outside `0 <= k <= n`. Panics if `n > max_row`.
    pub fn get(&self, n: u32, k: i64) -> BigInt {
        let row = &self.rows[n as usize];
        if k < 0 || k as usize >= row.len() {
            BigInt::zero()
        } else {
            row[k as usize].clone()
        }
    }

    pub fn row(&self, n: u32) -> &[BigInt] {
        &self.rows[n as usize]
    }
}

type Shared = RwLock<Arc<TriangleTable>>;

/// Shared memoized table holding at least rows `0..=n`.
pub fn triangle(kind: TriangleKind, n: u32) -> Arc<TriangleTable> {
    static CACHE: [OnceLock<Shared>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let cell =
        CACHE[kind.slot()].get_or_init(|| RwLock::new(Arc::new(TriangleTable::new(kind, 16))));
    {
        let current = cell.read().expect("triangle cache poisoned");
        if current.max_row() >= n {
            return Arc::clone(&current);
        }
    }
    let mut slot = cell.write().expect("triangle cache poisoned");
    if slot.max_row() < n {
        let mut grown = TriangleTable::clone(&slot);
        grown.extend_to(n.max(2 * slot.max_row()));
        *slot = Arc::new(grown);
    }
    Arc::clone(&slot)
}

pub fn stirling_cycle(n: u32, k: i64) -> BigInt {
    triangle(TriangleKind::StirlingCycle, n).get(n, k)
}

pub fn stirling_subset(n: u32, k: i64) -> BigInt {
    triangle(TriangleKind::StirlingSubset, n).get(n, k)
}

pub fn eulerian_second_order(n: u32, k: i64) -> BigInt {
    triangle(TriangleKind::EulerianSecondOrder, n).get(n, k)
}

/// `sum_{j=0}^{a} C(a,j) (-1)^j f(j)`.
pub fn finite_difference<F>(a: u32, f: F) -> ExactRational
where
    F: Fn(u32) -> ExactRational,
{
    (0..=a)
        .map(|j| {
            let c = ExactRational::from_integer(binomial(a as i64, j as i64));
            let term = c * f(j);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Power-basis coefficients of `x^(m)` (rising), lowest degree first.
/// Computed by multiplying out `x (x+1) ... (x+m-1)`; they coincide with the
/// unsigned Stirling cycle numbers.
pub fn expand_rising_to_powers(m: u32) -> Vec<ExactRational> {
    expand_product(m, |j| j as i64)
}

/// Power-basis coefficients of `x^{(m)}` (falling), lowest degree first.
pub fn expand_falling_to_powers(m: u32) -> Vec<ExactRational> {
    expand_product(m, |j| -(j as i64))
}

fn expand_product(m: u32, shift: impl Fn(u32) -> i64) -> Vec<ExactRational> {
    let mut coeffs = vec![BigInt::one()];
    for j in 0..m {
        let s = shift(j);
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (deg, c) in coeffs.iter().enumerate() {
            next[deg + 1] += c;
            next[deg] += c * s;
        }
        coeffs = next;
    }
    coeffs
        .into_iter()
        .map(ExactRational::from_integer)
        .collect()
}

/// Evaluates a power-basis polynomial (lowest degree first) at `x`.
pub fn eval_poly(coeffs: &[ExactRational], x: &ExactRational) -> ExactRational {
    coeffs
        .iter()
        .rev()
        .fold(ExactRational::zero(), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    /// Pascal's triangle built by addition only.
    fn pascal(n: usize) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![1u64]];
        for r in 1..=n {
            let prev = &rows[r - 1];
            let row = (0..=r)
                .map(|k| {
                    let left = if k > 0 { prev[k - 1] } else { 0 };
                    let right = if k < r { prev[k] } else { 0 };
                    left + right
                })
                .collect();
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(-3, 1), BigInt::zero());
        let oracle = pascal(30);
        assert_eq!(oracle[30][15], 155_117_520);
        assert_eq!(binomial(30, 15), BigInt::from(155_117_520u64));
        for n in 0..=30 {
            for k in 0..=n {
                assert_eq!(binomial(n as i64, k as i64), BigInt::from(oracle[n][k]));
            }
        }
    }

    #[test]
    fn factorial_powers() {
        assert_eq!(rising_factorial(&q(3, 1), 0), q(1, 1));
        assert_eq!(rising_factorial(&q(3, 1), 3), q(60, 1));
        assert_eq!(rising_factorial(&q(1, 2), 2), q(3, 4));
        assert_eq!(falling_factorial(&q(5, 1), 2), q(20, 1));
        assert_eq!(falling_factorial(&q(2, 1), 4), q(0, 1));
        assert_eq!(falling_factorial(&q(7, 2), 3), q(105, 8));
        assert_eq!(rising_int(3, 3), BigInt::from(60));
        assert_eq!(falling_int(2, 4), BigInt::zero());
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_cycle(3, 2), BigInt::from(3));
        assert_eq!(stirling_cycle(4, 3), BigInt::from(6));
        assert_eq!(stirling_cycle(0, 0), BigInt::one());
        assert_eq!(stirling_subset(3, 2), BigInt::from(3));
        assert_eq!(stirling_subset(4, 2), BigInt::from(7));
        assert_eq!(stirling_subset(5, 0), BigInt::zero());
        assert_eq!(stirling_subset(4, 9), BigInt::zero());
        assert_eq!(stirling_cycle(4, -1), BigInt::zero());
    }

    #[test]
    fn eulerian_examples() {
        assert_eq!(eulerian_second_order(2, 1), BigInt::from(2));
        assert_eq!(eulerian_second_order(1, 0), BigInt::one());
        assert_eq!(eulerian_second_order(0, 0), BigInt::one());
        let row3: BigInt = triangle(TriangleKind::EulerianSecondOrder, 3)
            .row(3)
            .iter()
            .sum();
        assert_eq!(row3, BigInt::from(15));
        // Known row 4: 1 22 58 24
        let row4: Vec<BigInt> = triangle(TriangleKind::EulerianSecondOrder, 4)
            .row(4)
            .to_vec();
        assert_eq!(row4[..4], [1, 22, 58, 24].map(BigInt::from));
        assert!(row4[4].is_zero());
    }

    #[test]
    fn recurrences_hold_through_row_20() {
        let cyc = TriangleTable::new(TriangleKind::StirlingCycle, 20);
        let sub = TriangleTable::new(TriangleKind::StirlingSubset, 20);
        let eul = TriangleTable::new(TriangleKind::EulerianSecondOrder, 20);
        assert_eq!(cyc.get(0, 0), BigInt::one());
        for n in 1..=20u32 {
            for k in 0..=(n as i64 + 1) {
                assert_eq!(
                    cyc.get(n, k),
                    cyc.get(n - 1, k - 1) + cyc.get(n - 1, k) * (n - 1)
                );
                assert_eq!(sub.get(n, k), sub.get(n - 1, k - 1) + sub.get(n - 1, k) * k);
                let down = 2 * n as i64 - 1 - k;
                assert_eq!(
                    eul.get(n, k),
                    eul.get(n - 1, k) * (k + 1) + eul.get(n - 1, k - 1) * down
                );
            }
            assert!(cyc.get(n, n as i64 + 1).is_zero());
        }
    }

    #[test]
    fn cache_grows_on_demand() {
        let t = triangle(TriangleKind::StirlingSubset, 90);
        assert!(t.max_row() >= 90);
        assert_eq!(stirling_subset(90, 89), binomial(90, 2));
    }

    #[test]
    fn finite_difference_examples() {
        let sq = finite_difference(3, |j| ExactRational::from(j * j));
        assert!(sq.is_zero());
        let cube = finite_difference(3, |j| ExactRational::from(j * j * j));
        assert_eq!(cube, q(-6, 1));
        assert!(finite_difference(1, |_| ExactRational::one()).is_zero());
    }

    #[test]
    fn rising_expansion_examples() {
        let as_i = |v: Vec<ExactRational>| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(as_i(expand_rising_to_powers(2)), ["0", "1", "1"]);
        assert_eq!(as_i(expand_rising_to_powers(0)), ["1"]);
        assert_eq!(as_i(expand_rising_to_powers(3)), ["0", "2", "3", "1"]);
        for m in 0..=12u32 {
            let c = expand_rising_to_powers(m);
            for (l, v) in c.iter().enumerate() {
                assert_eq!(v, &ExactRational::from_integer(stirling_cycle(m, l as i64)));
            }
        }
    }
}
