use anchorsum_core::moments::total_moment_exact;
use anchorsum_core::simulation::{estimate, run_trial, trial_rng};
use anchorsum_core::{MomentQuery, SimulationConfig};

fn check_unbiased(n: u64, a: u32, seed: u64) {
    let exact = total_moment_exact(&MomentQuery::new(n, a).unwrap())
        .unwrap()
        .total
        .to_f64();
    let r = estimate(&SimulationConfig::new(n, a, 1_000_000, seed, 4).unwrap()).unwrap();
    let z = (r.mean - exact) / r.std_error;
    assert!(
        z.abs() <= 5.0,
        "n={n} a={a}: mean {} exact {exact} z {z}",
        r.mean
    );
}

#[test]
fn unbiased_small_configurations() {
    check_unbiased(1, 1, 11);
    check_unbiased(2, 1, 12);
    check_unbiased(5, 1, 13);
    check_unbiased(10, 3, 14);
}

#[test]
fn unbiased_fifty_sensors() {
    check_unbiased(50, 2, 15);
}

#[test]
fn seeded_runs_repeat() {
    let c = SimulationConfig::new(2, 1, 100_000, 7, 3).unwrap();
    assert_eq!(estimate(&c).unwrap(), estimate(&c).unwrap());
}

#[test]
fn trial_streams_are_independent_of_order() {
    let a = run_trial(5, 2, &mut trial_rng(1, 17));
    let _ = run_trial(5, 2, &mut trial_rng(1, 16));
    assert_eq!(a, run_trial(5, 2, &mut trial_rng(1, 17)));
    for index in 0..200 {
        let c = run_trial(4, 1, &mut trial_rng(99, index));
        assert!((0.0..=4.0).contains(&c));
    }
}
