//! Seeded Monte Carlo estimates of generation, transitivity and
//! fixed-point events for tuples of `ESF(α, n)` permutations.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `i`, so every trial has its own reproducible stream and success counts
//! combine by addition. Results do not depend on the number of workers.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::densities::{corollary_limit, predict, Prediction};
use crate::ewens::EwensParams;
use crate::numeric::splitmix64;
use crate::perm::{contains_alternating_with, transitive_unchecked, AlternatingCheck};
use crate::{Error, Permutation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    GeneratesAlternating,
    Transitive,
    /// No point is fixed by every permutation, i.e. `N_1 = 0`.
    NoCommonFixedPoint,
}

impl Event {
    pub const ALL: [Event; 3] = [Event::GeneratesAlternating, Event::Transitive, Event::NoCommonFixedPoint];

    pub fn name(self) -> &'static str {
        match self {
            Event::GeneratesAlternating => "generates_alternating",
            Event::Transitive => "transitive",
            Event::NoCommonFixedPoint => "no_common_fixed_point",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generate" | "generates" | "generates_alternating" => Ok(Event::GeneratesAlternating),
            "transitive" => Ok(Event::Transitive),
            "n1zero" | "n1_zero" | "no_fixed_point" | "no_common_fixed_point" => Ok(Event::NoCommonFixedPoint),
            _ => Err(Error::Parse(format!("unknown event {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub event: Event,
    pub n: usize,
    pub alpha: f64,
    pub t: usize,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub stderr: f64,
    pub seed: u64,
}

impl Estimate {
    pub fn from_counts(event: Event, n: usize, alpha: f64, t: usize, trials: u64, successes: u64, seed: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        Estimate {
            event,
            n,
            alpha,
            t,
            trials,
            successes,
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            seed,
        }
    }
}

/// Execution settings. Neither field changes any result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub check: AlternatingCheck,
}

impl RunOptions {
    pub fn with_workers(workers: usize) -> Self {
        RunOptions {
            workers: Some(workers),
            ..Default::default()
        }
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(job()),
            Some(0) => Err(Error::invalid("workers must be >= 1")),
            Some(w) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(w)
                    .build()
                    .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
                Ok(pool.install(job))
            }
        }
    }
}

/// The RNG for trial `trial` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Seed of row `row` in a sweep with master seed `seed`.
pub fn row_seed(seed: u64, row: usize) -> u64 {
    splitmix64(seed ^ splitmix64(row as u64))
}

fn validate(n: usize, alpha: f64, t: usize, trials: u64) -> Result<EwensParams> {
    if n < 3 {
        return Err(Error::DegenerateDegree { n, min: 3 });
    }
    if t == 0 {
        return Err(Error::invalid("t must be >= 1"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    EwensParams::new(alpha, n)
}

fn common_fixed_point(n: usize, tuple: &[Permutation]) -> bool {
    (0..n).any(|x| tuple.iter().all(|p| p.apply(x) == x))
}

// [generate, transitive, no fixed point] for one tuple; later events are only
// evaluated when requested and implied by the earlier ones
fn outcome(n: usize, tuple: &[Permutation], need: [bool; 3], check: &AlternatingCheck) -> [bool; 3] {
    let no_fixed = !common_fixed_point(n, tuple);
    let transitive = (need[0] || need[1]) && no_fixed && transitive_unchecked(n, tuple);
    let generates = need[0] && transitive && contains_alternating_with(n, tuple, check).expect("validated degree");
    [generates, transitive, no_fixed]
}

fn count<F>(params: &EwensParams, t: usize, trials: u64, seed: u64, opts: &RunOptions, per_trial: F) -> Result<[u64; 3]>
where
    F: Fn(&[Permutation]) -> [bool; 3] + Sync,
{
    opts.run(|| {
        (0..trials)
            .into_par_iter()
            .fold(
                || [0u64; 3],
                |mut acc, i| {
                    let mut rng = trial_rng(seed, i);
                    let tuple: Vec<Permutation> = (0..t).map(|_| params.sample(&mut rng)).collect();
                    for (a, hit) in acc.iter_mut().zip(per_trial(&tuple)) {
                        *a += hit as u64;
                    }
                    acc
                },
            )
            .reduce(|| [0u64; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    })
}

/// Estimates several events on shared samples: each trial draws one tuple and
/// evaluates every requested event on it.
pub fn estimate_events(
    n: usize,
    alpha: f64,
    t: usize,
    trials: u64,
    seed: u64,
    events: &[Event],
    opts: &RunOptions,
) -> Result<Vec<Estimate>> {
    let params = validate(n, alpha, t, trials)?;
    let mut need = [false; 3];
    for e in events {
        need[e.index()] = true;
    }
    let counts = count(&params, t, trials, seed, opts, |tuple| outcome(n, tuple, need, &opts.check))?;
    Ok(events
        .iter()
        .map(|&e| Estimate::from_counts(e, n, alpha, t, trials, counts[e.index()], seed))
        .collect())
}

pub fn estimate_event(n: usize, alpha: f64, t: usize, trials: u64, seed: u64, event: Event, opts: &RunOptions) -> Result<Estimate> {
    Ok(estimate_events(n, alpha, t, trials, seed, &[event], opts)?.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub t: usize,
    pub theta: f64,
    pub p_coeff: f64,
    /// `p_coeff · n^theta`.
    pub alpha: f64,
    pub estimate: Estimate,
    pub prediction: Prediction,
    /// Limiting generation probability as `n → ∞` along `α = p n^θ`.
    pub limit: f64,
    /// Master seed of the sweep; `estimate.seed` is the derived row seed.
    pub seed: u64,
}

impl SweepRow {
    /// Column order of [`SweepRow::csv_record`].
    pub const CSV_HEADER: &'static str =
        "n,t,theta,p_coeff,alpha,event,trials,successes,p_hat,stderr,seed,row_seed,e_n1,p_generate,p_sharp,limit";

    pub fn csv_record(&self) -> String {
        let e = &self.estimate;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.t,
            self.theta,
            self.p_coeff,
            self.alpha,
            e.event,
            e.trials,
            e.successes,
            e.p_hat,
            e.stderr,
            self.seed,
            e.seed,
            self.prediction.e_n1,
            self.prediction.p_generate,
            self.prediction.p_sharp,
            self.limit
        )
    }
}

/// One row per `(n, θ)` in row-major order; row `i` uses seed [`row_seed`]`(seed, i)`.
pub fn sweep(
    n_list: &[usize],
    t: usize,
    theta_grid: &[f64],
    p_coeff: f64,
    trials: u64,
    seed: u64,
    opts: &RunOptions,
) -> Result<Vec<SweepRow>> {
    if n_list.is_empty() || theta_grid.is_empty() {
        return Err(Error::invalid("sweep grids must be nonempty"));
    }
    if !(p_coeff > 0.0 && p_coeff.is_finite()) {
        return Err(Error::invalid(format!("p must be finite and > 0, got {p_coeff}")));
    }
    let mut rows = Vec::with_capacity(n_list.len() * theta_grid.len());
    for &n in n_list {
        for &theta in theta_grid {
            let alpha = p_coeff * (n as f64).powf(theta);
            let limit = corollary_limit(theta, p_coeff, t)?;
            let prediction = predict(alpha, n, t)?;
            let s = row_seed(seed, rows.len());
            let estimate = estimate_event(n, alpha, t, trials, s, Event::GeneratesAlternating, opts)?;
            rows.push(SweepRow {
                n,
                t,
                theta,
                p_coeff,
                alpha,
                estimate,
                prediction,
                limit,
                seed,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProbe {
    pub n: usize,
    pub alpha: f64,
    pub t: usize,
    pub trials: u64,
    pub seed: u64,
    pub count_transitive_not_alternating: u64,
}

/// Counts trials whose tuple generates a transitive group not containing `A_n`.
pub fn transitive_gap_probe(n: usize, alpha: f64, t: usize, trials: u64, seed: u64, opts: &RunOptions) -> Result<GapProbe> {
    let params = validate(n, alpha, t, trials)?;
    let counts = count(&params, t, trials, seed, opts, |tuple| {
        let [g, tr, _] = outcome(n, tuple, [true, true, false], &opts.check);
        [tr && !g, false, false]
    })?;
    Ok(GapProbe {
        n,
        alpha,
        t,
        trials,
        seed,
        count_transitive_not_alternating: counts[0],
    })
}
