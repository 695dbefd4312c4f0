//! Monte Carlo estimate of the total movement cost.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimulationConfig {
    pub n: u64,
    pub a: u32,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(n: u64, a: u32, trials: u64, seed: u64, workers: usize) -> Result<Self> {
        let config = Self {
            n,
            a,
            trials,
            seed,
            workers,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.a == 0 {
            return Err(Error::Config("a must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    pub mean: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    pub trials: u64,
    pub seed: u64,
}

/// Cost of moving sorted positions to their anchors: `sum_i |x_(i) - t_i|^a`.
/// Sorts `positions` in place.
pub fn trial_cost(positions: &mut [f64], a: u32) -> f64 {
    positions.sort_unstable_by(f64::total_cmp);
    let two_n = 2.0 * positions.len() as f64;
    positions
        .iter()
        .enumerate()
        .map(|(k, &x)| (x - (2 * k + 1) as f64 / two_n).abs().powi(a as i32))
        .sum()
}

/// One deployment of `n` uniform sensors followed by the move to anchors.
pub fn run_trial<R: Rng + ?Sized>(n: u64, a: u32, rng: &mut R) -> f64 {
    let mut xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    trial_cost(&mut xs, a)
}

/// Generator for trial `index`: stream `index` of the ChaCha generator
/// keyed by `seed`, so each trial is reproducible on its own.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }
}

const TRIAL_CHUNK: u64 = 1024;

/// Mean cost over `config.trials` independent trials. Trials are grouped in
/// fixed blocks whose statistics are merged in block order, so the result is
/// identical for any worker count.
pub fn estimate(config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let blocks = config.trials.div_ceil(TRIAL_CHUNK);
    let partials: Vec<Moments> = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut m = Moments::default();
                let mut xs = vec![0.0; config.n as usize];
                let hi = ((b + 1) * TRIAL_CHUNK).min(config.trials);
                for index in b * TRIAL_CHUNK..hi {
                    let mut rng = trial_rng(config.seed, index);
                    xs.iter_mut().for_each(|x| *x = rng.random::<f64>());
                    m.push(trial_cost(&mut xs, config.a));
                }
                m
            })
            .collect()
    });
    let total = partials
        .into_iter()
        .fold(Moments::default(), Moments::merge);
    let variance = if total.count > 1 {
        total.m2 / (total.count - 1) as f64
    } else {
        0.0
    };
    let std_error = (variance / total.count as f64).sqrt();
    Ok(SimulationResult {
        mean: total.mean,
        std_error,
        ci95: (total.mean - 1.96 * std_error, total.mean + 1.96 * std_error),
        trials: config.trials,
        seed: config.seed,
    })
}
