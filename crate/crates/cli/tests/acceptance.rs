//! Acceptance checks: one `[PASS]`/`[FAIL]` line per criterion. Exits
//! nonzero if any criterion fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use anchorsum_core::asymptotics::technical2b_lhs;
use anchorsum_core::asymptotics::{
    blowup_ratio, leading_constant, lemma1_sum, lemma2_sum, lemma4_constant, lemma4_sum,
    verify_technical2b,
};
use anchorsum_core::identities::run_all;
use anchorsum_core::moments::{total_moment_exact, total_moment_exact_value, total_moment_float};
use anchorsum_core::simulation::estimate;
use anchorsum_core::HalfIntValue;
use anchorsum_core::{ExactRational, MomentQuery, SimulationConfig};

use common::quadrature_total;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn exact(n: u64, a: u32) -> ExactRational {
    total_moment_exact_value(&MomentQuery::new(n, a).unwrap()).unwrap()
}

fn float(n: u64, a: u32) -> f64 {
    total_moment_float(&MomentQuery::new(n, a).unwrap())
        .unwrap()
        .total
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.3e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn quadratic_order_constant() -> Check {
    let sixth = ExactRational::frac(1, 6);
    let mut worst = 0.0f64;
    for n in [10u64, 50, 100, 500, 1000] {
        let dev = (&exact(n, 2) - &sixth).abs().to_f64();
        let scaled = dev * n as f64;
        worst = worst.max(scaled);
        if scaled > 2.0 {
            return Err(format!("n={n}: |S - 1/6| = {dev:.3e} exceeds 2/n"));
        }
    }
    Ok(format!("max n|S - 1/6| = {worst:.4} <= 2"))
}

const GRID: [u64; 4] = [100, 1_000, 10_000, 100_000];

fn linear_order_constant() -> Check {
    let target = 0.313_328_5;
    let devs: Vec<f64> = GRID
        .iter()
        .map(|&n| (float(n, 1) / (n as f64).sqrt() - target).abs())
        .collect();
    let msg = format!("deviations [{}]", fmt_list(&devs));
    if devs[2] <= 0.02 && devs[3] <= 0.007 && strictly_decreasing(&devs) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn cubic_order_constant() -> Check {
    let target = 0.117_503_1;
    let devs: Vec<f64> = GRID
        .iter()
        .map(|&n| (float(n, 3) * (n as f64).sqrt() - target).abs())
        .collect();
    let exact_constant = leading_constant(3).unwrap().to_f64();
    let msg = format!(
        "deviations [{}]; closed-form constant {exact_constant:.8}",
        fmt_list(&devs)
    );
    if devs[2] <= 0.02 && strictly_decreasing(&devs) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn tail_sum_constants() -> Check {
    let n = 100_000u64;
    let mut parts = Vec::new();
    for (c, target) in [(0u32, 0.313_328_5), (1, 0.156_664_2)] {
        let normalized = lemma4_sum(n, c as f64).unwrap() / (n as f64).powf(1.5);
        let constant = lemma4_constant(c).to_f64();
        if (constant - target).abs() > 1e-6 {
            return Err(format!("c={c}: constant {constant} differs from {target}"));
        }
        let dev = (normalized - constant).abs();
        if dev > 0.02 {
            return Err(format!("c={c}: |{normalized} - {constant}| > 0.02"));
        }
        parts.push(format!("c={c} dev {dev:.2e}"));
    }
    Ok(parts.join(", "))
}

fn boundedness() -> Check {
    let grid1 = [10u64, 20, 50, 100, 200, 500, 1000, 2000];
    let grid2 = [10u64, 20, 50, 100, 200, 500];
    let normalize = |n: u64, a: u32, v: ExactRational| {
        (n as f64).powf((a as f64 - 1.0) / 2.0) * v.to_f64().abs()
    };
    let mut parts = Vec::new();
    for a in [1u32, 3, 5] {
        let s1: Vec<f64> = grid1
            .iter()
            .map(|&n| normalize(n, a, lemma1_sum(n, a).unwrap()))
            .collect();
        let s2: Vec<f64> = grid2
            .iter()
            .map(|&n| normalize(n, a, lemma2_sum(n, a).unwrap()))
            .collect();
        let (r1, r2) = (blowup_ratio(&s1), blowup_ratio(&s2));
        let zero = if s1.iter().all(|&x| x == 0.0) {
            " (identically 0)"
        } else {
            ""
        };
        parts.push(format!("a={a}: ratio1 {r1:.3}{zero}, ratio2 {r2:.3}"));
        if r1 > 10.0 || r2 > 10.0 {
            return Err(parts.join("; "));
        }
    }
    Ok(parts.join("; "))
}

fn identity_suites() -> Check {
    let results = run_all();
    let failed: Vec<_> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}/{} ({})", r.suite, r.identity, r.parameters))
        .collect();
    if !failed.is_empty() {
        return Err(format!("failing: {}", failed.join(", ")));
    }
    let status = Command::new(env!("CARGO_BIN_EXE_anchorsum"))
        .args(["--no-timestamp", "identities", "--suite", "all"])
        .output()
        .map_err(|e| e.to_string())?
        .status;
    if !status.success() {
        return Err(format!("`identities --suite all` exited with {status}"));
    }
    Ok(format!("{} checks pass; CLI exit 0", results.len()))
}

fn diagonal_identity() -> Check {
    let mut worst = 0.0f64;
    for a in [1u32, 3, 5, 7] {
        let r = verify_technical2b(a).unwrap();
        worst = worst.max(r.residual);
        if !r.passed || r.residual > 1e-12 {
            return Err(format!("a={a}: residual {}", r.residual));
        }
    }
    // Hand value sqrt(2 pi)/8 for a = 1.
    let hand = HalfIntValue::new(ExactRational::frac(1, 8), 1, 1);
    let lhs = technical2b_lhs(1).unwrap();
    let rhs = leading_constant(1).unwrap();
    if lhs != hand || rhs != hand {
        return Err(format!("a=1: lhs {lhs}, rhs {rhs}, expected {hand}"));
    }
    Ok(format!("max residual {worst:.1e}; a=1 both sides = {hand}"))
}

fn oracle_triangle() -> Check {
    let two_one = exact(2, 1);
    if two_one != ExactRational::frac(19, 48) {
        return Err(format!("S(2,1) = {two_one}, expected 19/48"));
    }
    let mut parts = Vec::new();
    for (seed, (n, a)) in [(2u64, 1u32), (5, 1), (6, 3), (10, 2)]
        .into_iter()
        .enumerate()
    {
        let e = exact(n, a).to_f64();
        let quad = quadrature_total(n, a, 1e-14);
        let qdev = (quad - e).abs();
        if qdev > 1e-12 {
            return Err(format!("({n},{a}): quadrature off by {qdev:.2e}"));
        }
        let config = SimulationConfig::new(n, a, 1_000_000, 1000 + seed as u64, 4).unwrap();
        let mc = estimate(&config).unwrap();
        let z = (mc.mean - e) / mc.std_error;
        if z.abs() > 5.0 {
            return Err(format!("({n},{a}): Monte Carlo z = {z:.2}"));
        }
        parts.push(format!("({n},{a}) quad {qdev:.1e} z {z:+.2}"));
    }
    Ok(format!("S(2,1) = 19/48; {}", parts.join(", ")))
}

fn float_exact_consistency() -> Check {
    let mut worst = (0.0f64, 0u64, 0u32);
    for n in 1..=200u64 {
        for a in 1..=9u32 {
            let q = MomentQuery::new(n, a).unwrap();
            let e = total_moment_exact(&q).unwrap().total.to_f64();
            let f = total_moment_float(&q).unwrap().total;
            let rel = ((f - e) / e).abs();
            if rel > worst.0 {
                worst = (rel, n, a);
            }
        }
    }
    let msg = format!(
        "worst relative error {:.2e} at n={}, a={}",
        worst.0, worst.1, worst.2
    );
    if worst.0 <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 even-order constant, a=2", quadratic_order_constant),
        ("2 odd-order constant, a=1", linear_order_constant),
        ("3 odd-order constant, a=3", cubic_order_constant),
        ("4 tail sum constants", tail_sum_constants),
        ("5 auxiliary sums bounded", boundedness),
        ("6 identity suites", identity_suites),
        ("7 diagonal coefficient identity", diagonal_identity),
        ("8 exact/quadrature/Monte Carlo", oracle_triangle),
        ("9 float/exact consistency", float_exact_consistency),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
