use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use ewensgen::densities::{corollary_limit, density_grid, predict, DensityRow, Prediction};
use ewensgen::ewens::{cycle_count_pmf, cycle_count_pmf_exact, StirlingTable};
use ewensgen::montecarlo::{estimate_events, sweep, transitive_gap_probe, trial_rng, Estimate, Event, RunOptions, SweepRow};
use ewensgen::numeric::{parse_rational, rational_to_f64, rational_to_string};
use ewensgen::oracle::{verify_all, VerificationReport};
use ewensgen::{Error, EwensParams};

#[derive(Parser)]
#[command(name = "ewensgen", version, about = "Ewens-distributed random permutations and the groups they generate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw ESF(alpha, n) permutations
    Sample(SampleArgs),
    /// Closed-form predictions for P(<pi_1..pi_t> >= A_n)
    Predict(PredictArgs),
    /// Monte Carlo estimate of one or more events
    Estimate(EstimateArgs),
    /// Monte Carlo over alpha = p n^theta
    Sweep(SweepArgs),
    /// Compare closed forms with exhaustive enumeration
    Verify(VerifyArgs),
    /// Tabulate the closed-form densities and moments
    Density(DensityArgs),
    /// Unsigned Stirling numbers of the first kind, optionally with the cycle-count pmf
    Stirling(StirlingArgs),
    /// Count tuples generating a transitive group without A_n
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Seeded {
    /// 64-bit seed, or `auto` to draw one
    #[arg(long)]
    seed: String,
    /// Worker threads; never changes the result
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Print cycle notation instead of one-line notation
    #[arg(long)]
    cycles: bool,
    #[command(flatten)]
    seed: Seeded,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Coefficient p in alpha = p n^theta
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// generate, transitive, n1zero, or all
    #[arg(long, default_value = "generate", value_delimiter = ',')]
    event: Vec<String>,
    #[command(flatten)]
    seed: Seeded,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[command(flatten)]
    seed: Seeded,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n_max: usize,
    /// Exact literals such as 1/2 or 5
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    t: Vec<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    n: usize,
    /// Rational literals also produce exact values
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct StirlingArgs {
    #[arg(long)]
    n_max: usize,
    /// Also emit P(C = k) under ESF(alpha, n)
    #[arg(long)]
    alpha: Option<String>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[command(flatten)]
    seed: Seeded,
    #[command(flatten)]
    out: Output,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn is_exact_literal(s: &str) -> bool {
    let s = s.trim();
    let int = |x: &str| {
        let x = x.trim().trim_start_matches(['-', '+']);
        !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((p, q)) => int(p) && int(q),
        None => int(s),
    }
}

fn parse_alpha(s: &str) -> CliResult<f64> {
    let a = match parse_rational(s) {
        Ok(r) => rational_to_f64(&r),
        Err(_) => s.trim().parse::<f64>().map_err(|_| usage(format!("not a number: {s:?}")))?,
    };
    if !(a >= 0.0 && a.is_finite()) {
        return Err(usage(format!("alpha must be finite and >= 0, got {s}")));
    }
    Ok(a)
}

fn parse_exact_alphas(list: &[String]) -> CliResult<Vec<BigRational>> {
    if let Some(bad) = list.iter().find(|s| !is_exact_literal(s)) {
        return Err(usage(format!("verify needs exact literals like 1/2 or 5, got {bad:?}")));
    }
    Ok(list.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?)
}

fn resolve_seed(s: &Seeded) -> CliResult<(u64, RunOptions)> {
    let seed = if s.seed == "auto" {
        let seed = rand::rng().random::<u64>();
        eprintln!("seed: {seed}");
        seed
    } else {
        s.seed
            .parse::<u64>()
            .map_err(|_| usage(format!("--seed must be a u64 or `auto`, got {:?}", s.seed)))?
    };
    if s.workers == Some(0) {
        return Err(usage("--workers must be >= 1"));
    }
    let opts = RunOptions {
        workers: s.workers,
        ..Default::default()
    };
    Ok((seed, opts))
}

fn emit(out: &Output, body: String) -> CliResult {
    match &out.output {
        Some(path) => std::fs::write(path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

#[derive(Serialize)]
struct SampleOutput {
    n: usize,
    alpha: f64,
    seed: u64,
    permutations: Vec<String>,
}

fn run_sample(a: SampleArgs) -> CliResult {
    let alpha = parse_alpha(&a.alpha)?;
    let params = EwensParams::new(alpha, a.n)?;
    let (seed, _) = resolve_seed(&a.seed)?;
    let perms: Vec<String> = (0..a.count)
        .map(|i| {
            let p = params.sample(&mut trial_rng(seed, i));
            if a.cycles {
                p.to_cycle_string()
            } else {
                p.to_string()
            }
        })
        .collect();
    let body = match a.out.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&SampleOutput {
            n: a.n,
            alpha,
            seed,
            permutations: perms,
        }),
        Format::Csv => {
            let mut s = String::from("index,seed,permutation\n");
            for (i, p) in perms.iter().enumerate() {
                writeln!(s, "{i},{seed},{p}").unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!("# seed {seed}\n");
            for p in &perms {
                writeln!(s, "{p}").unwrap();
            }
            s
        }
    };
    emit(&a.out, body)
}

#[derive(Serialize)]
struct PredictOutput {
    #[serde(flatten)]
    prediction: Prediction,
    p_coeff: f64,
    theta: Option<f64>,
    limit: Option<f64>,
}

fn run_predict(a: PredictArgs) -> CliResult {
    let alpha = parse_alpha(&a.alpha)?;
    let prediction = predict(alpha, a.n, a.t)?;
    if !(a.p > 0.0 && a.p.is_finite()) {
        return Err(usage("--p must be > 0"));
    }
    let theta = (alpha > 0.0 && a.n > 1).then(|| (alpha / a.p).ln() / (a.n as f64).ln());
    let limit = match theta {
        Some(th) if th >= 0.0 => Some(corollary_limit(th, a.p, a.t)?),
        _ => None,
    };
    let out = PredictOutput {
        prediction,
        p_coeff: a.p,
        theta,
        limit,
    };
    let body = match a.out.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&out),
        Format::Csv => {
            let p = &out.prediction;
            format!(
                "n,alpha,t,e_n1,p_generate,p_transitive,p_sharp,p_coeff,theta,limit\n{},{},{},{},{},{},{},{},{},{}\n",
                p.n, p.alpha, p.t, p.e_n1, p.p_generate, p.p_transitive, p.p_sharp, out.p_coeff, opt(&out.theta), opt(&out.limit)
            )
        }
        Format::Text => {
            let p = &out.prediction;
            let mut s = String::new();
            writeln!(s, "n             {}", p.n).unwrap();
            writeln!(s, "alpha         {}", p.alpha).unwrap();
            writeln!(s, "t             {}", p.t).unwrap();
            writeln!(s, "E(N_1)        {:.4}", p.e_n1).unwrap();
            writeln!(s, "p_generate    {:.4}", p.p_generate).unwrap();
            writeln!(s, "p_transitive  {:.4}", p.p_transitive).unwrap();
            writeln!(s, "p_sharp       {:.4}", p.p_sharp).unwrap();
            if let Some(th) = out.theta {
                writeln!(s, "theta         {th:.4}  (p = {})", out.p_coeff).unwrap();
            }
            if let Some(l) = out.limit {
                writeln!(s, "limit         {l:.4}").unwrap();
            }
            s
        }
    };
    emit(&a.out, body)
}

const ESTIMATE_HEADER: &str = "event,n,alpha,t,trials,successes,p_hat,stderr,seed";

fn estimate_csv(e: &Estimate) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        e.event, e.n, e.alpha, e.t, e.trials, e.successes, e.p_hat, e.stderr, e.seed
    )
}

fn run_estimate(a: EstimateArgs) -> CliResult {
    let alpha = parse_alpha(&a.alpha)?;
    let events: Vec<Event> = if a.event.iter().any(|e| e == "all") {
        Event::ALL.to_vec()
    } else {
        a.event.iter().map(|e| e.parse()).collect::<Result<_, _>>()?
    };
    let (seed, opts) = resolve_seed(&a.seed)?;
    let est = estimate_events(a.n, alpha, a.t, a.trials, seed, &events, &opts)?;
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json if est.len() == 1 => to_json(&est[0]),
        Format::Json => to_json(&est),
        Format::Csv => {
            let mut s = format!("{ESTIMATE_HEADER}\n");
            for e in &est {
                writeln!(s, "{}", estimate_csv(e)).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!("n = {}, alpha = {}, t = {}, trials = {}, seed = {}\n", a.n, alpha, a.t, a.trials, seed);
            for e in &est {
                writeln!(s, "{:<24} p_hat = {:.6}  stderr = {:.6}  ({} / {})", e.event.name(), e.p_hat, e.stderr, e.successes, e.trials).unwrap();
            }
            s
        }
    };
    emit(&a.out, body)
}

fn run_sweep(a: SweepArgs) -> CliResult {
    let (seed, opts) = resolve_seed(&a.seed)?;
    let rows = sweep(&a.n, a.t, &a.theta, a.p, a.trials, seed, &opts)?;
    let body = match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = format!("{}\n", SweepRow::CSV_HEADER);
            for r in &rows {
                writeln!(s, "{}", r.csv_record()).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!("seed = {seed}, t = {}, p = {}, trials = {}\n", a.t, a.p, a.trials);
            writeln!(s, "{:>7} {:>7} {:>11} {:>9} {:>9} {:>11} {:>9} {:>7}", "n", "theta", "alpha", "p_hat", "stderr", "p_generate", "p_sharp", "limit").unwrap();
            for r in &rows {
                writeln!(
                    s,
                    "{:>7} {:>7.3} {:>11.4} {:>9.4} {:>9.4} {:>11.4} {:>9.4} {:>7.4}",
                    r.n, r.theta, r.alpha, r.estimate.p_hat, r.estimate.stderr, r.prediction.p_generate, r.prediction.p_sharp, r.limit
                )
                .unwrap();
            }
            s
        }
    };
    emit(&a.out, body)
}

fn run_verify(a: VerifyArgs) -> CliResult {
    let alphas = parse_exact_alphas(&a.alpha)?;
    let reports = verify_all(a.n_max, &alphas, &a.t)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let body = match a.out.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut s = String::from("check,n,alpha,t,param,formula_value,oracle_value,pass\n");
            for r in &reports {
                writeln!(s, "{},{},{},{},{},{},{},{}", r.check, r.n, r.alpha, r.t, opt(&r.param), r.formula_value, r.oracle_value, r.pass).unwrap();
            }
            s
        }
        Format::Text => verify_table(&reports, failed),
    };
    emit(&a.out, body)?;
    if failed > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn verify_table(reports: &[VerificationReport], failed: usize) -> String {
    let mut s = String::new();
    for r in reports {
        writeln!(
            s,
            "{} {:<20} n={} alpha={:<5} t={} param={:<3} formula={} oracle={}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            r.n,
            r.alpha,
            r.t,
            opt(&r.param),
            r.formula_value,
            r.oracle_value
        )
        .unwrap();
    }
    writeln!(s, "{} checks, {} failed", reports.len(), failed).unwrap();
    s
}

fn run_density(a: DensityArgs) -> CliResult {
    let exact = if is_exact_literal(&a.alpha) {
        Some(parse_rational(&a.alpha)?)
    } else {
        None
    };
    let alpha = parse_alpha(&a.alpha)?;
    let rows = density_grid(alpha, exact.as_ref(), a.n, a.t)?;
    let body = match a.out.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("n,alpha,t,k,quantity,value_exact,value_float\n");
            for r in &rows {
                writeln!(s, "{},{},{},{},{},{},{}", r.n, r.alpha, opt(&r.t), opt(&r.k), r.quantity, opt(&r.value_exact), r.value_float).unwrap();
            }
            s
        }
        Format::Text => density_table(&rows),
    };
    emit(&a.out, body)
}

fn density_table(rows: &[DensityRow]) -> String {
    let mut s = String::new();
    for r in rows {
        writeln!(
            s,
            "{:<20} t={:<2} k={:<3} {:<14.8e} {}",
            r.quantity,
            opt(&r.t),
            opt(&r.k),
            r.value_float,
            opt(&r.value_exact)
        )
        .unwrap();
    }
    s
}

#[derive(Serialize)]
struct StirlingRow {
    n: usize,
    k: usize,
    count: String,
    pmf: Option<f64>,
    pmf_exact: Option<String>,
}

fn run_stirling(a: StirlingArgs) -> CliResult {
    if a.n_max > 2000 {
        return Err(usage("--n-max is limited to 2000"));
    }
    let table = StirlingTable::new(a.n_max);
    let alpha = a.alpha.as_deref().map(parse_alpha).transpose()?;
    let exact = match &a.alpha {
        Some(s) if is_exact_literal(s) => Some(parse_rational(s)?),
        _ => None,
    };
    let mut rows = Vec::new();
    for n in 0..=a.n_max {
        let pmf = match (alpha, n) {
            (Some(al), n) if n >= 1 => Some(cycle_count_pmf(&EwensParams::new(al, n)?)),
            _ => None,
        };
        let pmf_exact = match (&exact, n) {
            (Some(al), n) if n >= 1 => Some(cycle_count_pmf_exact(al, n, &table)?),
            _ => None,
        };
        for (k, c) in table.row(n).iter().enumerate() {
            if n > 0 && k == 0 {
                continue;
            }
            rows.push(StirlingRow {
                n,
                k,
                count: c.to_string(),
                pmf: pmf.as_ref().map(|p| p.get(k)),
                pmf_exact: pmf_exact.as_ref().map(|p| rational_to_string(&p[k - 1])),
            });
        }
    }
    let body = match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv | Format::Text => {
            let sep = if a.out.format == Some(Format::Text) { "\t" } else { "," };
            let mut s = ["n", "k", "count", "pmf", "pmf_exact"].join(sep);
            s.push('\n');
            for r in &rows {
                let fields = [r.n.to_string(), r.k.to_string(), r.count.clone(), opt(&r.pmf), opt(&r.pmf_exact)];
                s.push_str(&fields.join(sep));
                s.push('\n');
            }
            s
        }
    };
    emit(&a.out, body)
}

fn run_probe(a: ProbeArgs) -> CliResult {
    let alpha = parse_alpha(&a.alpha)?;
    let (seed, opts) = resolve_seed(&a.seed)?;
    let probe = transitive_gap_probe(a.n, alpha, a.t, a.trials, seed, &opts)?;
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&probe),
        Format::Csv => format!(
            "n,alpha,t,trials,seed,count_transitive_not_alternating\n{},{},{},{},{},{}\n",
            probe.n, probe.alpha, probe.t, probe.trials, probe.seed, probe.count_transitive_not_alternating
        ),
        Format::Text => format!(
            "n = {}, alpha = {}, t = {}, trials = {}, seed = {}: {} transitive without A_n\n",
            probe.n, probe.alpha, probe.t, probe.trials, probe.seed, probe.count_transitive_not_alternating
        ),
    };
    emit(&a.out, body)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            // one line: the message body without the usage block
            let msg = e.to_string();
            let line: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", line.join(" "));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Sample(a) => run_sample(a),
        Command::Predict(a) => run_predict(a),
        Command::Estimate(a) => run_estimate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
        Command::Density(a) => run_density(a),
        Command::Stirling(a) => run_stirling(a),
        Command::Probe(a) => run_probe(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
