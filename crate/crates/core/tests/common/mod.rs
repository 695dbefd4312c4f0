#![allow(dead_code)]

use anchorsum_core::combinatorics::binomial;
use anchorsum_core::ExactRational;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let x = h * XGK[k];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, lo, hi);
        if err <= tol || depth == 0 {
            return v;
        }
        let mid = 0.5 * (lo + hi);
        rec(f, lo, mid, tol / 2.0, depth - 1) + rec(f, mid, hi, tol / 2.0, depth - 1)
    }
    rec(f, lo, hi, tol, 40)
}

/// `sum_i i C(n,i) int_0^1 |t_i - x|^a x^(i-1) (1-x)^(n-i) dx` by quadrature,
/// splitting each integral at its kink.
pub fn quadrature_total(n: u64, a: u32, tol: f64) -> f64 {
    (1..=n)
        .map(|i| {
            let t = (2 * i - 1) as f64 / (2 * n) as f64;
            let scale = i as f64
                * binomial(n as i64, i as i64)
                    .to_string()
                    .parse::<f64>()
                    .unwrap();
            let f = |x: f64| {
                scale
                    * (t - x).abs().powi(a as i32)
                    * x.powi(i as i32 - 1)
                    * (1.0 - x).powi((n - i) as i32)
            };
            integrate(&f, 0.0, t, tol / (2 * n) as f64)
                + integrate(&f, t, 1.0, tol / (2 * n) as f64)
        })
        .sum()
}

pub fn q(n: i64, d: i64) -> ExactRational {
    ExactRational::frac(n, d)
}
