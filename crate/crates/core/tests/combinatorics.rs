use anchorsum_core::combinatorics::{
    binomial, eulerian_second_order, eval_poly, expand_falling_to_powers, expand_rising_to_powers,
    falling_factorial, finite_difference, rising_factorial, stirling_cycle, stirling_subset,
};
use anchorsum_core::ExactRational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = ExactRational> {
    (-200i64..200, 1i64..60).prop_map(|(p, q)| ExactRational::frac(p, q))
}

#[test]
fn pascal_oracle() {
    let mut row = vec![BigInt::from(1)];
    for n in 1..=40i64 {
        let mut next = vec![BigInt::from(1); n as usize + 1];
        for k in 1..n as usize {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
        for k in -2..=n + 2 {
            let want = if (0..=n).contains(&k) {
                row[k as usize].clone()
            } else {
                BigInt::from(0)
            };
            assert_eq!(binomial(n, k), want);
        }
    }
    assert_eq!(binomial(30, 15), BigInt::from(155_117_520u64));
}

#[test]
fn documented_values() {
    assert_eq!(stirling_cycle(4, 3), BigInt::from(6));
    assert_eq!(stirling_subset(4, 2), BigInt::from(7));
    assert_eq!(eulerian_second_order(2, 1), BigInt::from(2));
    let row3: BigInt = (0..=3).map(|k| eulerian_second_order(3, k)).sum();
    assert_eq!(row3, BigInt::from(15));
    assert_eq!(
        finite_difference(3, |j| ExactRational::from(j).pow(3)),
        ExactRational::from(-6)
    );
    assert_eq!(
        rising_factorial(&ExactRational::frac(1, 2), 2),
        ExactRational::frac(3, 4)
    );
    assert_eq!(
        falling_factorial(&ExactRational::frac(7, 2), 3),
        ExactRational::frac(105, 8)
    );
}

proptest! {
    #[test]
    fn rising_and_falling_expansions(x in rational(), m in 0u32..=10) {
        prop_assert_eq!(eval_poly(&expand_rising_to_powers(m), &x), rising_factorial(&x, m));
        prop_assert_eq!(eval_poly(&expand_falling_to_powers(m), &x), falling_factorial(&x, m));
    }

    #[test]
    fn powers_through_falling_basis(x in rational(), m in 0u32..=10) {
        let via: ExactRational = (0..=m)
            .map(|l| ExactRational::from_integer(stirling_subset(m, l as i64)) * falling_factorial(&x, l))
            .sum();
        prop_assert_eq!(via, x.pow(m));
    }

    #[test]
    fn rising_is_reflected_falling(x in rational(), m in 0u32..=10) {
        let sign = if m % 2 == 0 { ExactRational::one() } else { ExactRational::from(-1) };
        prop_assert_eq!(rising_factorial(&x, m), sign * falling_factorial(&-x.clone(), m));
    }

    #[test]
    fn finite_difference_kills_low_degree(a in 1u32..=12, coeffs in proptest::collection::vec(-50i64..50, 1..12)) {
        let deg = (coeffs.len() as u32 - 1).min(a - 1);
        let poly: Vec<ExactRational> = coeffs.iter().take(deg as usize + 1).map(|&c| ExactRational::from(c)).collect();
        prop_assert!(finite_difference(a, |j| eval_poly(&poly, &ExactRational::from(j))).is_zero());
    }

    #[test]
    fn rational_field_laws(x in rational(), y in rational(), z in rational()) {
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
        }
        let s = x.to_string();
        prop_assert_eq!(s.parse::<ExactRational>().unwrap(), x);
    }
}
