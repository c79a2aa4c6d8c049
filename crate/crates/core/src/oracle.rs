//! Brute-force ground truth by weighted enumeration of `S_n` and of `t`-tuples.
//!
//! Every tuple `(π_1, …, π_t)` carries weight `α^{C(π_1) + ⋯ + C(π_t)}`, so a
//! weighted count is a polynomial in `α` with integer coefficients. The scan
//! accumulates those coefficients once and evaluates the ratio with the total
//! weight polynomial at any rational `α`; at `α = 0` the ratio is taken as the
//! limit, i.e. the uniform distribution on `n`-cycles.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::densities::{exact, falling_factorial_coefficients};
use crate::numeric::rational_to_string;
use crate::perm::Permutation;
use crate::{Error, Result};

/// Largest number of tuples a scan may visit.
pub const MAX_TUPLES: u64 = 2_000_000;
/// Largest degree for which subset masks fit in a `u128`.
pub const MAX_DEGREE: usize = 7;

/// All of `S_n` in lexicographic order of one-line notation.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n == 0 {
        return Err(Error::DegenerateDegree { n, min: 1 });
    }
    if n > 10 {
        return Err(Error::SizeGuard(format!("refusing to list S_{n}")));
    }
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation::from_images_unchecked(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("pivot exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    Ok(out)
}

/// Rejects `(n, t)` whose tuple count `(n!)^t` exceeds [`MAX_TUPLES`].
pub fn check_size(n: usize, t: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DegenerateDegree { n, min: 1 });
    }
    if t == 0 {
        return Err(Error::invalid("t must be >= 1"));
    }
    let too_big = || Error::SizeGuard(format!("(n!)^t = ({n}!)^{t} tuples exceeds {MAX_TUPLES}"));
    if n > MAX_DEGREE {
        return Err(too_big());
    }
    let per = (1..=n as u64).product::<u64>();
    let mut total: u64 = 1;
    for _ in 0..t {
        total = total.checked_mul(per).ok_or_else(too_big)?;
        if total > MAX_TUPLES {
            return Err(too_big());
        }
    }
    Ok(())
}

fn check_alpha(alpha: &BigRational) -> Result<()> {
    if alpha < &BigRational::zero() {
        return Err(Error::invalid("alpha must be >= 0"));
    }
    Ok(())
}

/// Integer polynomial in `α`; `coeffs[d]` is the coefficient of `α^d`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightPoly {
    coeffs: Vec<u128>,
}

impl WeightPoly {
    fn zero(degree: usize) -> Self {
        WeightPoly {
            coeffs: vec![0; degree + 1],
        }
    }

    pub fn coefficients(&self) -> &[u128] {
        &self.coeffs
    }

    fn add_assign(&mut self, other: &WeightPoly) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.lowest_degree().is_none()
    }

    pub fn evaluate(&self, alpha: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, &c| {
            acc * alpha + BigRational::from_integer(BigInt::from(c))
        })
    }

    /// `self(α) / den(α)`, or its limit as `α → 0` when `α = 0`.
    pub fn ratio_at(&self, den: &WeightPoly, alpha: &BigRational) -> BigRational {
        if alpha.is_zero() {
            let d0 = den.lowest_degree().expect("nonzero normaliser");
            debug_assert!(self.coeffs.iter().take(d0).all(|&c| c == 0));
            let num = self.coeffs.get(d0).copied().unwrap_or(0);
            return BigRational::new(BigInt::from(num), BigInt::from(den.coeffs[d0]));
        }
        self.evaluate(alpha) / den.evaluate(alpha)
    }
}

/// An exact probability: reduced, positive denominator, value in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExactProbability(#[serde(with = "crate::numeric::serde_rational")] BigRational);

impl ExactProbability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(Error::invalid(format!(
                "{} is not a probability",
                rational_to_string(&value)
            )));
        }
        Ok(ExactProbability(value))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational_to_string(&self.0))
    }
}

impl fmt::Debug for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactProbability({self})")
    }
}

fn total_cycles(tuple: &[&Permutation]) -> usize {
    tuple.iter().map(|p| p.cycle_count()).sum()
}

fn for_each_tuple<'a>(perms: &'a [Permutation], t: usize, first: usize, mut f: impl FnMut(&[&'a Permutation])) {
    let m = perms.len();
    let mut idx = vec![0usize; t];
    idx[0] = first;
    let mut tuple: Vec<&Permutation> = idx.iter().map(|&i| &perms[i]).collect();
    loop {
        f(&tuple);
        // odometer over positions 1..t
        let mut pos = t;
        loop {
            if pos == 1 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < m {
                tuple[pos] = &perms[idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = &perms[0];
        }
    }
}

/// Weight polynomials of an event and of all tuples, by literal scan.
pub fn event_weight<F>(n: usize, t: usize, event: F) -> Result<(WeightPoly, WeightPoly)>
where
    F: Fn(&[&Permutation]) -> bool + Sync,
{
    check_size(n, t)?;
    let perms = all_permutations(n)?;
    let degree = t * n;
    let (hit, total) = (0..perms.len())
        .into_par_iter()
        .map(|first| {
            let mut hit = WeightPoly::zero(degree);
            let mut total = WeightPoly::zero(degree);
            for_each_tuple(&perms, t, first, |tuple| {
                let d = total_cycles(tuple);
                total.coeffs[d] += 1;
                if event(tuple) {
                    hit.coeffs[d] += 1;
                }
            });
            (hit, total)
        })
        .reduce(
            || (WeightPoly::zero(degree), WeightPoly::zero(degree)),
            |(mut a, mut b), (c, d)| {
                a.add_assign(&c);
                b.add_assign(&d);
                (a, b)
            },
        );
    Ok((hit, total))
}

/// `P(event)` for `t` independent `ESF(α, n)` permutations, exactly.
pub fn exact_event_probability<F>(n: usize, alpha: &BigRational, t: usize, event: F) -> Result<ExactProbability>
where
    F: Fn(&[&Permutation]) -> bool + Sync,
{
    check_alpha(alpha)?;
    let (hit, total) = event_weight(n, t, event)?;
    ExactProbability::new(hit.ratio_at(&total, alpha))
}

/// Tuple statistics the oracle can average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// `N_k`: fixed `k`-sets.
    Nk(usize),
    /// `N_k*`: fixed `k`-sets acted on transitively.
    NkStar(usize),
    /// `C(N_1, j)`.
    BinomN1(usize),
    /// Indicator of `N_1 = 0`.
    N1Zero,
    /// Indicator of `⟨π_1, …, π_t⟩` transitive.
    Transitive,
    /// Indicator of `⟨π_1, …, π_t⟩ ≥ A_n`.
    GeneratesAlternating,
    /// Indicator of transitive but not containing `A_n`.
    TransitiveNotAlternating,
    /// `|N_1 - N_1*|`.
    N1StarGap,
}

// bit X of the mask is set when π maps the subset X onto itself
fn fixed_subset_mask(p: &Permutation) -> u128 {
    let n = p.degree();
    let mut mask = 0u128;
    for x in 0u32..(1u32 << n) {
        let mut image = 0u32;
        let mut m = x;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            image |= 1 << p.apply(i);
            m &= m - 1;
        }
        if image == x {
            mask |= 1u128 << x;
        }
    }
    mask
}

fn binom_small(n: u64, k: u64) -> u64 {
    crate::numeric::binomial_u64(n, k)
}

// nonempty fixed sets with no nonempty proper fixed subset
fn minimal_fixed_sets(fixed: u128) -> Vec<u32> {
    let mut out = Vec::new();
    let mut rest = fixed & !1;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        let mut sub = (x - 1) & x;
        let mut minimal = true;
        while sub != 0 {
            if fixed >> sub & 1 == 1 {
                minimal = false;
                break;
            }
            sub = (sub - 1) & x;
        }
        if minimal {
            out.push(x);
        }
    }
    out
}

fn closure_size(n: usize, gens: &[&Permutation]) -> usize {
    let id: Vec<u8> = (0..n as u8).collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h: Vec<u8> = g.iter().map(|&x| s.apply(x as usize) as u8).collect();
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    seen.len()
}

/// Weight polynomials for a batch of statistics over all `t`-tuples.
#[derive(Debug, Clone)]
pub struct MomentSheet {
    pub n: usize,
    pub t: usize,
    stats: Vec<Statistic>,
    polys: Vec<WeightPoly>,
    total: WeightPoly,
}

impl MomentSheet {
    pub fn compute(n: usize, t: usize, stats: &[Statistic]) -> Result<Self> {
        check_size(n, t)?;
        for s in stats {
            match *s {
                Statistic::Nk(k) | Statistic::NkStar(k) | Statistic::BinomN1(k) if k > n => {
                    return Err(Error::invalid(format!("statistic index {k} exceeds n = {n}")))
                }
                _ => {}
            }
        }
        let perms = all_permutations(n)?;
        let masks: Vec<u128> = perms.iter().map(fixed_subset_mask).collect();
        let full = (1u32 << n) - 1;
        let size_masks: Vec<u128> = (0..=n)
            .map(|k| {
                (0u32..=full)
                    .filter(|x| x.count_ones() as usize == k)
                    .fold(0u128, |m, x| m | 1u128 << x)
            })
            .collect();
        let n_fact = (1..=n).product::<usize>();
        let degree = t * n;
        let needs_minimal = stats.iter().any(|s| !matches!(s, Statistic::Nk(_) | Statistic::BinomN1(_) | Statistic::N1Zero));
        let index_of = |p: &Permutation| -> usize {
            perms.binary_search_by(|q| q.images().cmp(p.images())).expect("listed")
        };

        let empty = || (vec![WeightPoly::zero(degree); stats.len()], WeightPoly::zero(degree));
        let (polys, total) = (0..perms.len())
            .into_par_iter()
            .map(|first| {
                let (mut polys, mut total) = empty();
                let mut values = vec![0u64; stats.len()];
                for_each_tuple(&perms, t, first, |tuple| {
                    let d = total_cycles(tuple);
                    total.coeffs[d] += 1;
                    let fixed = tuple.iter().fold(u128::MAX, |acc, p| acc & masks[index_of(p)]);
                    let nk = |k: usize| (fixed & size_masks[k]).count_ones() as u64;
                    let minimal = if needs_minimal { minimal_fixed_sets(fixed) } else { Vec::new() };
                    let transitive = needs_minimal && minimal.len() == 1 && minimal[0] == full;
                    let mut generates = None;
                    let mut gen_alt = |transitive: bool| -> bool {
                        *generates.get_or_insert_with(|| transitive && 2 * closure_size(n, tuple) >= n_fact)
                    };
                    for (v, s) in values.iter_mut().zip(stats) {
                        *v = match *s {
                            Statistic::Nk(k) => nk(k),
                            Statistic::NkStar(k) => minimal.iter().filter(|x| x.count_ones() as usize == k).count() as u64,
                            Statistic::BinomN1(j) => binom_small(nk(1), j as u64),
                            Statistic::N1Zero => (nk(1) == 0) as u64,
                            Statistic::Transitive => transitive as u64,
                            Statistic::GeneratesAlternating => gen_alt(transitive) as u64,
                            Statistic::TransitiveNotAlternating => (transitive && !gen_alt(transitive)) as u64,
                            Statistic::N1StarGap => {
                                let star = minimal.iter().filter(|x| x.count_ones() == 1).count() as u64;
                                nk(1).abs_diff(star)
                            }
                        };
                    }
                    for (poly, &v) in polys.iter_mut().zip(&values) {
                        poly.coeffs[d] += v as u128;
                    }
                });
                (polys, total)
            })
            .reduce(empty, |(mut a, mut at), (b, bt)| {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.add_assign(y);
                }
                at.add_assign(&bt);
                (a, at)
            });
        Ok(MomentSheet {
            n,
            t,
            stats: stats.to_vec(),
            polys,
            total,
        })
    }

    pub fn total_weight(&self) -> &WeightPoly {
        &self.total
    }

    pub fn weight(&self, stat: Statistic) -> Option<&WeightPoly> {
        self.stats.iter().position(|s| *s == stat).map(|i| &self.polys[i])
    }

    /// `E[stat]` under independent `ESF(α, n)` tuples.
    pub fn expectation(&self, stat: Statistic, alpha: &BigRational) -> Result<BigRational> {
        check_alpha(alpha)?;
        let poly = self
            .weight(stat)
            .ok_or_else(|| Error::invalid(format!("{stat:?} was not computed")))?;
        Ok(poly.ratio_at(&self.total, alpha))
    }
}

/// `E[stat]` for `t` independent `ESF(α, n)` permutations, exactly.
pub fn exact_moment(n: usize, alpha: &BigRational, t: usize, stat: Statistic) -> Result<BigRational> {
    MomentSheet::compute(n, t, &[stat])?.expectation(stat, alpha)
}

/// `Σ_{σ ∈ S_n} sgn(σ) α^{C(σ)}` by enumeration, with the sign read off the
/// inversion count.
pub fn enumerate_signed_cycle_sum(n: usize) -> Result<Vec<BigInt>> {
    check_size(n, 1)?;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for p in all_permutations(n)? {
        let img = p.images();
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| img[i] > img[j])
            .count();
        if inversions % 2 == 0 {
            coeffs[p.cycle_count()] += 1;
        } else {
            coeffs[p.cycle_count()] -= 1;
        }
    }
    Ok(coeffs)
}

fn even_by_inversions(p: &Permutation) -> bool {
    let img = p.images();
    let n = img.len();
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            if img[i] > img[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// `P_α(π({1..k}) = {1..k})` by enumeration.
pub fn exact_set_stabilizer(n: usize, alpha: &BigRational, k: usize) -> Result<ExactProbability> {
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    exact_event_probability(n, alpha, 1, |tuple| (0..k).all(|x| tuple[0].apply(x) < k))
}

/// `P_α(π preserves the partition of {1..n} into r consecutive blocks)`.
pub fn exact_block_stabilizer(n: usize, alpha: &BigRational, r: usize) -> Result<ExactProbability> {
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::invalid(format!("r = {r} does not divide n = {n}")));
    }
    let m = n / r;
    exact_event_probability(n, alpha, 1, |tuple| {
        let p = tuple[0];
        (0..r).all(|b| {
            let target = p.apply(b * m) / m;
            (b * m..(b + 1) * m).all(|x| p.apply(x) / m == target)
        })
    })
}

/// `P_α(π ∈ A_n)` by enumeration.
pub fn exact_alternating(n: usize, alpha: &BigRational) -> Result<ExactProbability> {
    exact_event_probability(n, alpha, 1, |tuple| even_by_inversions(tuple[0]))
}

/// One oracle comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub n: usize,
    pub alpha: String,
    pub t: usize,
    /// `k` for set statistics, `r` for block systems, `j` for binomial moments.
    pub param: Option<usize>,
    pub formula_value: String,
    pub oracle_value: String,
    pub pass: bool,
}

/// Closed forms under test. The default methods are the real formulas; a test
/// can override one to check that the harness notices.
pub trait ClosedForms: Sync {
    fn stabilizer_density(&self, alpha: &BigRational, n: usize, k: usize) -> Result<BigRational> {
        exact::stabilizer_density(alpha, n, k)
    }
    fn expected_nk(&self, alpha: &BigRational, n: usize, k: usize, t: usize) -> Result<BigRational> {
        exact::expected_nk(alpha, n, k, t)
    }
    fn binom_moment_n1(&self, alpha: &BigRational, n: usize, t: usize, j: usize) -> Result<BigRational> {
        exact::binom_moment_n1(alpha, n, t, j)
    }
    fn nkstar_bound(&self, alpha: &BigRational, n: usize, k: usize, t: usize) -> Result<BigRational> {
        exact::nkstar_bound(alpha, n, k, t)
    }
    fn wreath_density(&self, alpha: &BigRational, n: usize, r: usize) -> Result<BigRational> {
        exact::wreath_density(alpha, n, r)
    }
    fn alternating_density(&self, alpha: &BigRational, n: usize) -> Result<BigRational> {
        exact::alternating_density(alpha, n)
    }
    fn falling_factorial_coefficients(&self, n: usize) -> Vec<BigInt> {
        falling_factorial_coefficients(n)
    }
}

/// The formulas as implemented in [`crate::densities`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Formulas;

impl ClosedForms for Formulas {}

fn poly_string<T: fmt::Display>(coeffs: &[T]) -> String {
    let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

struct ReportSink {
    reports: Vec<VerificationReport>,
}

impl ReportSink {
    fn equal(&mut self, check: &str, n: usize, alpha: &BigRational, t: usize, param: Option<usize>, formula: &BigRational, oracle: &BigRational) {
        self.reports.push(VerificationReport {
            check: check.to_string(),
            n,
            alpha: rational_to_string(alpha),
            t,
            param,
            formula_value: rational_to_string(formula),
            oracle_value: rational_to_string(oracle),
            pass: formula == oracle,
        });
    }

    // oracle ≤ formula
    fn upper_bound(&mut self, check: &str, n: usize, alpha: &BigRational, t: usize, param: Option<usize>, bound: &BigRational, oracle: &BigRational) {
        self.reports.push(VerificationReport {
            check: check.to_string(),
            n,
            alpha: rational_to_string(alpha),
            t,
            param,
            formula_value: rational_to_string(bound),
            oracle_value: rational_to_string(oracle),
            pass: oracle <= bound,
        });
    }
}

/// Runs every oracle comparison for `1 ≤ n ≤ n_max`, each `α` and each `t`.
pub fn verify_all(n_max: usize, alphas: &[BigRational], ts: &[usize]) -> Result<Vec<VerificationReport>> {
    verify_all_with(&Formulas, n_max, alphas, ts)
}

pub fn verify_all_with(
    forms: &dyn ClosedForms,
    n_max: usize,
    alphas: &[BigRational],
    ts: &[usize],
) -> Result<Vec<VerificationReport>> {
    check_size(n_max, 1)?;
    for &t in ts {
        check_size(n_max, t)?;
    }
    for a in alphas {
        check_alpha(a)?;
    }
    let mut sink = ReportSink { reports: Vec::new() };
    let zero = BigRational::zero();
    for n in 1..=n_max {
        // single-permutation identities
        let formula = forms.falling_factorial_coefficients(n);
        let oracle = enumerate_signed_cycle_sum(n)?;
        sink.reports.push(VerificationReport {
            check: "signed_cycle_sum".into(),
            n,
            alpha: "*".into(),
            t: 1,
            param: None,
            formula_value: poly_string(&formula),
            oracle_value: poly_string(&oracle),
            pass: formula == oracle,
        });

        let single = MomentSheet::compute(n, 1, &[])?;
        let rising: Vec<BigUint> = crate::ewens::StirlingTable::new(n).row(n).to_vec();
        let normaliser: Vec<u128> = single.total_weight().coefficients().to_vec();
        let expected: Vec<u128> = rising.iter().map(|c| u128::try_from(c).expect("small")).collect();
        sink.reports.push(VerificationReport {
            check: "total_weight".into(),
            n,
            alpha: "*".into(),
            t: 1,
            param: None,
            formula_value: poly_string(&expected),
            oracle_value: poly_string(&normaliser),
            pass: normaliser == expected,
        });

        for alpha in alphas {
            for k in 0..=n {
                let oracle = exact_set_stabilizer(n, alpha, k)?.into_inner();
                let formula = forms.stabilizer_density(alpha, n, k)?;
                sink.equal("stabilizer_density", n, alpha, 1, Some(k), &formula, &oracle);
            }
            for r in (1..=n).filter(|r| n % r == 0) {
                let oracle = exact_block_stabilizer(n, alpha, r)?.into_inner();
                let formula = forms.wreath_density(alpha, n, r)?;
                sink.equal("wreath_density", n, alpha, 1, Some(r), &formula, &oracle);
            }
            if n >= 2 {
                let oracle = exact_alternating(n, alpha)?.into_inner();
                let formula = forms.alternating_density(alpha, n)?;
                sink.equal("alternating_density", n, alpha, 1, None, &formula, &oracle);
            }
        }

        for &t in ts {
            let mut stats = vec![Statistic::N1StarGap];
            stats.extend((1..=n / 2).map(Statistic::Nk));
            stats.extend((2..=n / 2).map(Statistic::NkStar));
            stats.extend((0..=n).map(Statistic::BinomN1));
            let sheet = MomentSheet::compute(n, t, &stats)?;
            for alpha in alphas {
                for k in 1..=n / 2 {
                    let oracle = sheet.expectation(Statistic::Nk(k), alpha)?;
                    let formula = forms.expected_nk(alpha, n, k, t)?;
                    sink.equal("expected_nk", n, alpha, t, Some(k), &formula, &oracle);
                }
                for j in 0..=n {
                    let oracle = sheet.expectation(Statistic::BinomN1(j), alpha)?;
                    let formula = forms.binom_moment_n1(alpha, n, t, j)?;
                    sink.equal("binom_moment_n1", n, alpha, t, Some(j), &formula, &oracle);
                }
                if alpha > &zero {
                    for k in 2..=n / 2 {
                        let oracle = sheet.expectation(Statistic::NkStar(k), alpha)?;
                        let bound = forms.nkstar_bound(alpha, n, k, t)?;
                        sink.upper_bound("nkstar_bound", n, alpha, t, Some(k), &bound, &oracle);
                    }
                }
                let gap = sheet.expectation(Statistic::N1StarGap, alpha)?;
                sink.equal("n1_equals_n1star", n, alpha, t, Some(1), &zero, &gap);
            }
        }
    }
    Ok(sink.reports)
}
