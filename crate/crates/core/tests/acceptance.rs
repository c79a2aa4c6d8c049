//! Acceptance suite. One PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails or overruns its time budget.

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use ewensgen::densities::{
    bound_c_log_margin, check_monotone, exact, expected_n1, falling_factorial_coefficients, signed_cycle_sum, MomentTable,
};
use ewensgen::ewens::{cycle_count_pmf_exact, cycle_tail_threshold, esf_pmf_exact, StirlingTable};
use ewensgen::montecarlo::{estimate_event, estimate_events, sweep, transitive_gap_probe, trial_rng, Event, RunOptions};
use ewensgen::numeric::{factorial, int, ln_rational, ratio, rational_to_f64, rational_to_string};
use ewensgen::oracle::{all_permutations, enumerate_signed_cycle_sum, verify_all, MomentSheet, Statistic};
use ewensgen::EwensParams;

struct Suite {
    failed: usize,
}

impl Suite {
    fn record(&mut self, id: u32, name: &str, pass: bool, detail: String, elapsed: Duration, budget: Duration) {
        let in_time = elapsed <= budget;
        let ok = pass && in_time;
        if !ok {
            self.failed += 1;
        }
        let time_note = if in_time { String::new() } else { format!(" [over budget {budget:?}]") };
        println!(
            "{} criterion {id:>2} {name}: {detail} ({:.1}s){time_note}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

// 1. oracle vs closed forms, n ≤ 6, t = 2
fn exact_identities(s: &mut Suite) {
    let start = Instant::now();
    let alphas = [ratio(1, 2), int(1), int(2), int(5)];
    let reports = verify_all(6, &alphas, &[2]).expect("within size guard");
    let wanted = ["stabilizer_density", "expected_nk", "binom_moment_n1", "wreath_density", "alternating_density"];
    let relevant: Vec<_> = reports.iter().filter(|r| wanted.contains(&r.check.as_str())).collect();
    let failed: Vec<_> = relevant.iter().filter(|r| !r.pass).collect();
    for f in &failed {
        println!("    mismatch {} n={} alpha={} param={:?}: {} vs {}", f.check, f.n, f.alpha, f.param, f.formula_value, f.oracle_value);
    }
    let kinds = wanted.iter().filter(|w| relevant.iter().any(|r| r.check == **w)).count();
    s.record(
        1,
        "exact identities",
        failed.is_empty() && kinds == wanted.len(),
        format!("{} rational equalities over {kinds} quantities, {} mismatches", relevant.len(), failed.len()),
        start.elapsed(),
        secs(60),
    );
}

// 2. signed cycle sum = falling factorial, n ≤ 12
fn signed_sum(s: &mut Suite) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=12 {
        if signed_cycle_sum(n) != falling_factorial_coefficients(n) {
            bad.push(n);
        }
    }
    // literal enumeration where it is cheap
    for n in 1..=7 {
        if enumerate_signed_cycle_sum(n).unwrap() != falling_factorial_coefficients(n) {
            bad.push(n);
        }
    }
    s.record(
        2,
        "signed cycle sum",
        bad.is_empty(),
        format!("n = 1..=12 by cycle type, 1..=7 by enumeration, failures at {bad:?}"),
        start.elapsed(),
        secs(5),
    );
}

// 3. monotonicity, bound on E(N_k), and the exact N_k* bound
fn inequalities(s: &mut Suite) {
    let start = Instant::now();
    let tol = 1e-12;
    let (mut points, mut worst_mono, mut worst_bound) = (0usize, f64::NEG_INFINITY, f64::INFINITY);
    let mut bad = Vec::new();
    for n in [10usize, 100, 1000] {
        for alpha in [1.0, 2.0, 10.0, n as f64 / 100.0] {
            for t in [2usize, 3] {
                let table = MomentTable::new(alpha, n, t).unwrap();
                worst_mono = worst_mono.max(table.worst_increase());
                if !check_monotone(&table) {
                    bad.push(format!("monotone n={n} alpha={alpha} t={t}"));
                }
                for k in 1..=n / 2 {
                    let m = bound_c_log_margin(alpha, n, k, t).unwrap();
                    points += 1;
                    worst_bound = worst_bound.min(m);
                    if m < -tol {
                        bad.push(format!("bound n={n} alpha={alpha} t={t} k={k}"));
                    }
                }
            }
        }
    }
    let alphas = [ratio(1, 2), int(1), int(2), int(5)];
    let mut star_checks = 0;
    for (t, n_max) in [(2usize, 6usize), (3, 5)] {
        for n in 4..=n_max {
            let stats: Vec<Statistic> = (2..=n / 2).map(Statistic::NkStar).collect();
            let sheet = MomentSheet::compute(n, t, &stats).unwrap();
            for a in &alphas {
                for k in 2..=n / 2 {
                    let oracle = sheet.expectation(Statistic::NkStar(k), a).unwrap();
                    let bound = exact::nkstar_bound(a, n, k, t).unwrap();
                    star_checks += 1;
                    if oracle > bound {
                        bad.push(format!("N_k* n={n} alpha={} t={t} k={k}", rational_to_string(a)));
                    }
                }
            }
        }
    }
    for b in &bad {
        println!("    violation {b}");
    }
    s.record(
        3,
        "inequality suite",
        bad.is_empty(),
        format!(
            "{points} bound points (min log margin {worst_bound:.3e}), max log increase in monotone range {worst_mono:.3e}, {star_checks} exact N_k* checks"
        ),
        start.elapsed(),
        secs(30),
    );
}

// 4. Stirling bound and the cycle-count tail
fn stirling_bounds(s: &mut Suite) {
    let start = Instant::now();
    let table = StirlingTable::new(200);
    let mut bad = Vec::new();
    let mut worst = f64::INFINITY;
    for n in 1..=30usize {
        for k in 1..=n {
            let lhs = BigRational::new(BigInt::from(table.get(n, k)), BigInt::from(factorial(n)));
            let ln_lhs = ln_rational(&lhs);
            let ln_rhs = k as f64 * ((n as f64).ln() + 1.0).ln() - ewensgen::numeric::ln_factorial(k);
            worst = worst.min(ln_rhs - ln_lhs);
            if ln_lhs > ln_rhs + 1e-12 {
                bad.push(format!("c({n},{k})"));
            }
        }
    }
    let mut tail_points = 0;
    let mut worst_tail = f64::INFINITY;
    for (num, den) in [(1i64, 1i64), (2, 1), (5, 1)] {
        let a = ratio(num, den);
        let af = num as f64 / den as f64;
        for n in 1..=200usize {
            let kmin = cycle_tail_threshold(af, n).ceil() as usize;
            if kmin > n {
                continue;
            }
            let pmf = cycle_count_pmf_exact(&a, n, &table).unwrap();
            for k in kmin.max(1)..=n {
                tail_points += 1;
                let margin = -(k as f64) - ln_rational(&pmf[k - 1]);
                worst_tail = worst_tail.min(margin);
                if margin < 0.0 {
                    bad.push(format!("tail alpha={af} n={n} k={k}"));
                }
            }
        }
    }
    for b in &bad {
        println!("    violation {b}");
    }
    s.record(
        4,
        "Stirling bounds",
        bad.is_empty(),
        format!("465 c(n,k) checks (min log margin {worst:.3e}), {tail_points} tail checks (min log margin {worst_tail:.1})"),
        start.elapsed(),
        secs(30),
    );
}

// 5. chi-square of the sampler on S_4
fn sampler_chi_square(s: &mut Suite) {
    let start = Instant::now();
    let n = 4;
    let samples = 1_000_000u64;
    let perms = all_permutations(n).unwrap();
    let index: HashMap<Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i)).collect();
    let crit = ChiSquared::new((perms.len() - 1) as f64).unwrap().inverse_cdf(1.0 - 1e-3);
    let mut details = Vec::new();
    let mut pass = true;
    for (num, den, seed) in [(1i64, 2i64, 501u64), (2, 1, 502)] {
        let a = ratio(num, den);
        let params = EwensParams::new(num as f64 / den as f64, n).unwrap();
        let mut rng = trial_rng(seed, 0);
        let mut counts = vec![0u64; perms.len()];
        for _ in 0..samples {
            counts[index[params.sample(&mut rng).images()]] += 1;
        }
        let stat: f64 = perms
            .iter()
            .zip(&counts)
            .map(|(p, &c)| {
                let e = rational_to_f64(&esf_pmf_exact(&a, p).unwrap()) * samples as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        pass &= stat <= crit;
        details.push(format!("alpha={}: X2={stat:.2}", rational_to_string(&a)));
    }
    s.record(
        5,
        "sampler chi-square",
        pass,
        format!("{} (critical {crit:.2}, df 23)", details.join(", ")),
        start.elapsed(),
        secs(60),
    );
}

// 6. Monte Carlo against the oracle at n = 5
fn mc_vs_oracle(s: &mut Suite) {
    let start = Instant::now();
    let stats = [Statistic::GeneratesAlternating, Statistic::Transitive, Statistic::N1Zero];
    let sheet = MomentSheet::compute(5, 2, &stats).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for (alpha, seed) in [(1i64, 61u64), (2, 62)] {
        let est = estimate_events(5, alpha as f64, 2, 1_000_000, seed, &Event::ALL, &RunOptions::default()).unwrap();
        for (e, stat) in est.iter().zip(stats) {
            let exact = rational_to_f64(&sheet.expectation(stat, &int(alpha)).unwrap());
            let z = (e.p_hat - exact).abs() / e.stderr;
            pass &= (e.p_hat - exact).abs() <= 4.0 * e.stderr;
            details.push(format!("a={alpha} {}: {:.4} vs {exact:.4} (z={z:.2})", e.event, e.p_hat));
        }
    }
    for d in &details {
        println!("    {d}");
    }
    s.record(6, "Monte Carlo vs oracle", pass, "6 estimates within 4 stderr".to_string(), start.elapsed(), secs(300));
}

// 7. phase transition along alpha = n^theta
fn phase_transition(s: &mut Suite) {
    let start = Instant::now();
    let rows = sweep(&[2000], 2, &[0.25, 0.5, 0.75], 1.0, 10_000, 7, &RunOptions::default()).unwrap();
    let p: Vec<f64> = rows.iter().map(|r| r.estimate.p_hat).collect();
    let boundary = (p[1] - (-1f64).exp()).abs();
    s.record(
        7,
        "phase transition",
        p[0] > 0.9 && p[2] < 0.1 && boundary <= 0.15,
        format!("p_hat = {:.4} / {:.4} / {:.4} at theta 0.25 / 0.5 / 0.75, |p_hat - 1/e| = {boundary:.4}", p[0], p[1], p[2]),
        start.elapsed(),
        secs(600),
    );
}

// 8. generation probability vs exp(-E N_1)
fn sharp_prediction(s: &mut Suite) {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for (alpha, seed) in [(1.0, 81u64), (10.0, 82), (31.6, 83)] {
        let e = estimate_event(1000, alpha, 2, 10_000, seed, Event::GeneratesAlternating, &RunOptions::default()).unwrap();
        let pred = (-expected_n1(alpha, 1000, 2).unwrap()).exp();
        let tol = (4.0 * e.stderr).max(0.05);
        pass &= (e.p_hat - pred).abs() <= tol;
        details.push(format!("a={alpha}: {:.4} vs {pred:.4}", e.p_hat));
    }
    s.record(8, "sharp prediction", pass, details.join(", "), start.elapsed(), secs(300));
}

// 9. transitive groups without A_n at n = 50
fn transitive_gap(s: &mut Suite) {
    let start = Instant::now();
    let mut counts = Vec::new();
    for (alpha, seed) in [(1.0, 91u64), (5.0, 92)] {
        let g = transitive_gap_probe(50, alpha, 2, 100_000, seed, &RunOptions::default()).unwrap();
        counts.push(g.count_transitive_not_alternating);
    }
    s.record(
        9,
        "transitive gap",
        counts.iter().all(|&c| c == 0),
        format!("occurrences {counts:?} in 2 x 100000 trials"),
        start.elapsed(),
        secs(300),
    );
}

// 10. byte-identical reruns of every randomized subcommand
fn determinism(s: &mut Suite) {
    let start = Instant::now();
    let runs: [&[&str]; 4] = [
        &["sample", "--n", "12", "--alpha", "3/2", "--count", "20", "--seed", "42", "--workers", "2"],
        &["estimate", "--n", "60", "--alpha", "7.5", "--trials", "2000", "--event", "all", "--seed", "42", "--workers", "2"],
        &["sweep", "--n", "100,200", "--theta", "0.25,0.5", "--trials", "500", "--seed", "42", "--workers", "2"],
        &["probe", "--n", "30", "--alpha", "2", "--trials", "2000", "--seed", "42", "--workers", "2"],
    ];
    let mut pass = true;
    for args in runs {
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_ewensgen"))
                .args(args)
                .args(["--format", "json"])
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            out.stdout
        };
        let (a, b) = (run(), run());
        let echoed = String::from_utf8_lossy(&a).contains("\"seed\": 42");
        pass &= a == b && echoed;
    }
    s.record(
        10,
        "determinism",
        pass,
        "sample, estimate, sweep and probe JSON byte-identical on rerun, seed echoed".to_string(),
        start.elapsed(),
        secs(120),
    );
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0 };
    exact_identities(&mut suite);
    signed_sum(&mut suite);
    inequalities(&mut suite);
    stirling_bounds(&mut suite);
    sampler_chi_square(&mut suite);
    mc_vs_oracle(&mut suite);
    phase_transition(&mut suite);
    sharp_prediction(&mut suite);
    transitive_gap(&mut suite);
    determinism(&mut suite);
    println!("acceptance: {} of 10 criteria failed", suite.failed);
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
