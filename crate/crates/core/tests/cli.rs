use std::process::{Command, Output};

use ewensgen::montecarlo::{Estimate, Event, SweepRow};
use ewensgen::oracle::VerificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewensgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn predict_boundary_value() {
    let o = run(&["predict", "--n", "10000", "--alpha", "100", "--t", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("p_generate")).unwrap();
    assert!(line.ends_with("0.3679"), "{line}");
    assert!(text.contains("limit         0.3679"));
}

#[test]
fn verify_uniform_suite_passes() {
    let o = run(&["verify", "--n-max", "5", "--alpha", "1", "--t", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<VerificationReport> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.pass));
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    let cases: [&[&str]; 6] = [
        &["verify", "--n-max", "3", "--alpha", "0.5"],
        &["verify", "--n-max", "3", "--alpha", "1/2,0.5"],
        &["verify", "--n-max", "8", "--alpha", "1"],
        &["estimate", "--n", "10", "--alpha", "1"],
        &["estimate", "--n", "10", "--alpha", "1", "--seed", "x"],
        &["predict", "--n", "10", "--alpha", "1", "--bogus"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn estimate_json_round_trips_and_echoes_seed() {
    let o = run(&["estimate", "--n", "20", "--alpha", "2", "--trials", "500", "--seed", "9"]);
    assert!(o.status.success());
    let e: Estimate = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(e.seed, 9);
    assert_eq!(e.event, Event::GeneratesAlternating);
    assert_eq!(e.trials, 500);
    assert_eq!(e.p_hat, e.successes as f64 / 500.0);
}

#[test]
fn auto_seed_is_printed_and_reproduces() {
    let o = run(&["estimate", "--n", "15", "--alpha", "1", "--trials", "300", "--seed", "auto"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let seed: u64 = err.trim().strip_prefix("seed: ").unwrap().parse().unwrap();
    let e: Estimate = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(e.seed, seed);
    let again = run(&["estimate", "--n", "15", "--alpha", "1", "--trials", "300", "--seed", &seed.to_string()]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn workers_do_not_change_output() {
    let base = ["estimate", "--n", "40", "--alpha", "3", "--trials", "1000", "--event", "all", "--seed", "5"];
    let one = run(&[&base[..], &["--workers", "1"]].concat());
    let four = run(&[&base[..], &["--workers", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sweep_csv_has_fixed_columns() {
    let o = run(&["sweep", "--n", "30", "--theta", "0.25,0.5", "--trials", "100", "--seed", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), SweepRow::CSV_HEADER);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    let width = SweepRow::CSV_HEADER.split(',').count();
    assert!(rows.iter().all(|r| r.split(',').count() == width));

    let json = run(&["sweep", "--n", "30", "--theta", "0.25,0.5", "--trials", "100", "--seed", "1", "--format", "json"]);
    let parsed: Vec<SweepRow> = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(parsed.len(), 2);
    assert!(parsed.iter().all(|r| r.seed == 1));
}

#[test]
fn density_and_stirling_tables() {
    let o = run(&["density", "--n", "4", "--alpha", "2", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("4,2,,2,wreath_density,2/5,0.4"), "{text}");
    let o = run(&["stirling", "--n-max", "5"]);
    assert!(stdout(&o).lines().any(|l| l == "5,2,50,,"));
}

#[test]
fn sample_output_is_a_permutation() {
    let o = run(&["sample", "--n", "9", "--alpha", "1/3", "--count", "5", "--seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let perms: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(perms.len(), 5);
    for p in perms {
        ewensgen::Permutation::parse_one_line(p).unwrap();
    }
    assert!(text.starts_with("# seed 3"));
}
