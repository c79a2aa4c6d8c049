//! The Ewens distribution `ESF(α, n)` on `S_n`:
//! `P(π = σ) = α^{C(σ)} / α^{(n)}` with `α^{(n)} = α(α+1)⋯(α+n-1)`.
//!
//! `α = 0` is the limit distribution, uniform on the `(n-1)!` `n`-cycles, and
//! every function here takes that path explicitly instead of evaluating `0/0`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::numeric::{factorial, ln_factorial, rational_to_f64};
use crate::perm::Permutation;
use crate::{Error, Result};

/// Parameters of `ESF(α, n)` for the floating-point path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwensParams {
    alpha: f64,
    n: usize,
}

impl EwensParams {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        if n == 0 {
            return Err(Error::DegenerateDegree { n, min: 1 });
        }
        Ok(EwensParams { alpha, n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Draws one permutation by sequential insertion: point `i` (with `i`
    /// points already placed) opens a new cycle with probability `α/(α+i)`,
    /// otherwise it is spliced in directly after a uniformly chosen earlier
    /// point. At `α = 0` no new cycle is ever opened after the first point,
    /// which yields a uniform `n`-cycle.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut image: Vec<usize> = Vec::with_capacity(self.n);
        for i in 0..self.n {
            image.push(i);
            if i == 0 {
                continue;
            }
            let opens_cycle = self.alpha > 0.0
                && rng.random::<f64>() * (self.alpha + i as f64) < self.alpha;
            if !opens_cycle {
                let j = rng.random_range(0..i);
                image[i] = image[j];
                image[j] = i;
            }
        }
        Permutation::from_images_unchecked(image)
    }

    /// `E[C(π)] = Σ_{i<n} α/(α+i)`.
    pub fn expected_cycle_count(&self) -> f64 {
        if self.alpha == 0.0 {
            return 1.0;
        }
        (0..self.n).map(|i| self.alpha / (self.alpha + i as f64)).sum()
    }
}

impl Distribution<Permutation> for EwensParams {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        EwensParams::sample(self, rng)
    }
}

/// `α^{(n)}` as a plain product.
pub fn rising_factorial(alpha: f64, n: usize) -> f64 {
    (0..n).map(|i| alpha + i as f64).product()
}

/// `ln α^{(n)}`; undefined (an error) when `α = 0` and `n ≥ 1`.
pub fn ln_rising_factorial(alpha: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!(
            "log rising factorial needs alpha > 0, got {alpha}"
        )));
    }
    if n <= 4096 {
        Ok((0..n).map(|i| (alpha + i as f64).ln()).sum())
    } else {
        Ok(ln_gamma(alpha + n as f64) - ln_gamma(alpha))
    }
}

/// `α_{(n)} = α(α-1)⋯(α-n+1)`.
pub fn falling_factorial(alpha: f64, n: usize) -> f64 {
    (0..n).map(|i| alpha - i as f64).product()
}

pub fn rising_factorial_exact(alpha: &BigRational, n: usize) -> BigRational {
    shifted_product(alpha, n, 1)
}

pub fn falling_factorial_exact(alpha: &BigRational, n: usize) -> BigRational {
    shifted_product(alpha, n, -1)
}

// Π_{i<n} (p/q + step·i), multiplied out over the integers and reduced once
fn shifted_product(alpha: &BigRational, n: usize, step: i64) -> BigRational {
    let (p, q) = (alpha.numer(), alpha.denom());
    let mut factors: Vec<BigInt> = (0..n).map(|i| p + q * BigInt::from(step * i as i64)).collect();
    // balanced product tree
    while factors.len() > 1 {
        factors = factors
            .chunks(2)
            .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
            .collect();
    }
    let num = factors.pop().unwrap_or_else(BigInt::one);
    BigRational::new(num, num_traits::pow(q.clone(), n))
}

fn check_degree(n: usize, sigma: &Permutation) -> Result<()> {
    if sigma.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: sigma.degree(),
        });
    }
    Ok(())
}

/// `P(π = σ)` under `ESF(α, n)`.
pub fn esf_pmf(params: &EwensParams, sigma: &Permutation) -> Result<f64> {
    Ok(ln_esf_pmf(params, sigma)?.exp())
}

/// `ln P(π = σ)`; `-inf` for non-`n`-cycles at `α = 0`.
pub fn ln_esf_pmf(params: &EwensParams, sigma: &Permutation) -> Result<f64> {
    check_degree(params.n, sigma)?;
    let c = sigma.cycle_count();
    if params.alpha == 0.0 {
        return Ok(if c == 1 {
            -ln_factorial(params.n - 1)
        } else {
            f64::NEG_INFINITY
        });
    }
    Ok(c as f64 * params.alpha.ln() - ln_rising_factorial(params.alpha, params.n)?)
}

pub fn esf_pmf_exact(alpha: &BigRational, sigma: &Permutation) -> Result<BigRational> {
    if alpha < &BigRational::zero() {
        return Err(Error::invalid("alpha must be >= 0"));
    }
    let n = sigma.degree();
    let c = sigma.cycle_count();
    if alpha.is_zero() {
        return Ok(if c == 1 {
            BigRational::new(BigInt::one(), BigInt::from(factorial(n - 1)))
        } else {
            BigRational::zero()
        });
    }
    Ok(num_traits::pow(alpha.clone(), c) / rising_factorial_exact(alpha, n))
}

/// Unsigned Stirling numbers of the first kind `c(n, k)` for `0 ≤ k ≤ n ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    /// Builds the table with `c(n,k) = c(n-1,k-1) + (n-1) c(n-1,k)`.
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let row: Vec<BigUint> = (0..=n)
                .map(|k| {
                    let mut v = BigUint::zero();
                    if k >= 1 {
                        v += &prev[k - 1];
                    }
                    if k < n {
                        v += &prev[k] * BigUint::from(n - 1);
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
        StirlingTable { rows }
    }

    /// Builds the table by double-counting pairs (cycle, permutation):
    /// `k c(n,k) = Σ_{j=1}^{n} n!/(j (n-j)!) c(n-j, k-1)`.
    pub fn from_cycle_pairs(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for n in 1..=n_max {
            // n!/(j (n-j)!) = n(n-1)⋯(n-j+1)/j: ways to pick a j-cycle
            let mut falling = BigUint::one();
            let mut cycles_of_len = Vec::with_capacity(n + 1);
            cycles_of_len.push(BigUint::zero());
            for j in 1..=n {
                falling *= BigUint::from(n - j + 1);
                cycles_of_len.push(&falling / BigUint::from(j));
            }
            let mut row = vec![BigUint::zero(); n + 1];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                let mut sum = BigUint::zero();
                for j in 1..=n {
                    if let Some(c) = rows[n - j].get(k - 1) {
                        sum += &cycles_of_len[j] * c;
                    }
                }
                debug_assert!((&sum % BigUint::from(k)).is_zero());
                *slot = sum / BigUint::from(k);
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows
            .get(n)
            .and_then(|r| r.get(k))
            .cloned()
            .unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    /// `(log n + 1)^k / k! - c(n,k)/n!`.
    pub fn cnk_bound_margin(&self, n: usize, k: usize) -> Result<f64> {
        if k == 0 || k > n || n > self.n_max() {
            return Err(Error::invalid(format!("need 1 <= k <= n <= {}, got n={n}, k={k}", self.n_max())));
        }
        let bound = (k as f64 * ((n as f64).ln() + 1.0).ln() - ln_factorial(k)).exp();
        let density = BigRational::new(
            BigInt::from(self.get(n, k)),
            BigInt::from(factorial(n)),
        );
        Ok(bound - rational_to_f64(&density))
    }
}

/// `c(n, k)`.
pub fn stirling_cycle(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    StirlingTable::new(n).get(n, k)
}

/// See [`StirlingTable::cnk_bound_margin`].
pub fn cnk_bound_margin(n: usize, k: usize) -> Result<f64> {
    StirlingTable::new(n).cnk_bound_margin(n, k)
}

/// Distribution of `C(π)` under `ESF(α, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCountPmf {
    pub n: usize,
    pub alpha: f64,
    /// `probabilities[k - 1] = P(C(π) = k)`.
    pub probabilities: Vec<f64>,
}

impl CycleCountPmf {
    pub fn get(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.probabilities.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }
}

/// `P(C(π) = k) = c(n,k) α^k / α^{(n)}`, evaluated as the law of a sum of
/// independent Bernoulli(α/(α+i)) variables, `i = 0..n`; the generating
/// function `Π_i (i + αz)/(α + i)` is the same polynomial.
pub fn cycle_count_pmf(params: &EwensParams) -> CycleCountPmf {
    let n = params.n;
    let alpha = params.alpha;
    let mut dist = vec![0.0; n + 1];
    dist[0] = 1.0;
    for i in 0..n {
        let p = if i == 0 { 1.0 } else { alpha / (alpha + i as f64) };
        for c in (0..=i + 1).rev() {
            let stay = if c <= i { dist[c] * (1.0 - p) } else { 0.0 };
            let step = if c >= 1 { dist[c - 1] * p } else { 0.0 };
            dist[c] = stay + step;
        }
    }
    CycleCountPmf {
        n,
        alpha,
        probabilities: dist[1..].to_vec(),
    }
}

/// Exact `P(C(π) = k)` for `k = 1..=n`, from a Stirling table with `n_max ≥ n`.
pub fn cycle_count_pmf_exact(
    alpha: &BigRational,
    n: usize,
    table: &StirlingTable,
) -> Result<Vec<BigRational>> {
    if n == 0 || n > table.n_max() {
        return Err(Error::invalid(format!("n = {n} outside table range 1..={}", table.n_max())));
    }
    if alpha < &BigRational::zero() {
        return Err(Error::invalid("alpha must be >= 0"));
    }
    if alpha.is_zero() {
        let mut out = vec![BigRational::zero(); n];
        out[0] = BigRational::one();
        return Ok(out);
    }
    let norm = rising_factorial_exact(alpha, n);
    let mut power = BigRational::one();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        power *= alpha;
        out.push(BigRational::from_integer(BigInt::from(table.get(n, k))) * &power / &norm);
    }
    Ok(out)
}

/// `10 α (log n + 1)`: from this cycle count on, `P(C = k) ≤ e^{-k}` when `α ≥ 1`.
pub fn cycle_tail_threshold(alpha: f64, n: usize) -> f64 {
    10.0 * alpha * ((n as f64).ln() + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ln_rational, ratio};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_perms(n: usize) -> Vec<Permutation> {
        crate::oracle::all_permutations(n).unwrap()
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(rising_factorial(2.0, 3), 24.0);
        assert_eq!(rising_factorial(1.0, 6), 720.0);
        assert_eq!(falling_factorial(2.0, 3), 0.0);
        assert_eq!(rising_factorial(3.0, 0), 1.0);
        assert_eq!(rising_factorial_exact(&int(2), 3), int(24));
        assert_eq!(falling_factorial_exact(&int(2), 3), int(0));
        assert_eq!(rising_factorial_exact(&ratio(1, 2), 2), ratio(3, 4));
        assert!(ln_rising_factorial(0.0, 3).is_err());
        assert_eq!(ln_rising_factorial(0.0, 0).unwrap(), 0.0);
    }

    #[test]
    fn ln_rising_matches_exact() {
        for &(p, q) in &[(1i64, 2i64), (1, 1), (7, 3), (100, 1), (1_000_000, 1)] {
            let a = ratio(p, q);
            for &n in &[1usize, 5, 40, 300, 5000] {
                let exact = ln_rational(&rising_factorial_exact(&a, n));
                let float = ln_rising_factorial(p as f64 / q as f64, n).unwrap();
                let rel = (float - exact).abs() / exact.abs().max(1.0);
                assert!(rel <= 1e-10, "alpha={p}/{q} n={n}: {float} vs {exact}");
            }
        }
    }

    #[test]
    fn pmf_examples() {
        let uniform = EwensParams::new(1.0, 4).unwrap();
        for s in all_perms(4) {
            assert!((esf_pmf(&uniform, &s).unwrap() - 1.0 / 24.0).abs() < 1e-15);
        }
        assert_eq!(esf_pmf_exact(&int(2), &Permutation::identity(3)).unwrap(), ratio(1, 3));
        let three_cycle = Permutation::long_cycle(3);
        assert_eq!(esf_pmf_exact(&int(0), &three_cycle).unwrap(), ratio(1, 2));
        let zero = EwensParams::new(0.0, 3).unwrap();
        assert!((esf_pmf(&zero, &three_cycle).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(esf_pmf(&zero, &Permutation::identity(3)).unwrap(), 0.0);
        assert!(esf_pmf(&uniform, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn exact_pmf_sums_to_one() {
        for n in 1..=7 {
            let perms = all_perms(n);
            for a in [int(0), ratio(1, 2), int(1), int(3), ratio(7, 5)] {
                let total: BigRational = perms.iter().map(|s| esf_pmf_exact(&a, s).unwrap()).sum();
                assert_eq!(total, BigRational::one(), "n={n} alpha={a}");
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(EwensParams::new(-1.0, 3).is_err());
        assert!(EwensParams::new(f64::NAN, 3).is_err());
        assert!(EwensParams::new(1.0, 0).is_err());
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_cycle(4, 2), BigUint::from(11u32));
        assert_eq!(stirling_cycle(6, 6), BigUint::one());
        assert_eq!(stirling_cycle(3, 5), BigUint::zero());
        let t = StirlingTable::new(12);
        for n in 0..=12 {
            let total: BigUint = t.row(n).iter().sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn both_stirling_recurrences_agree() {
        assert_eq!(StirlingTable::new(30), StirlingTable::from_cycle_pairs(30));
    }

    #[test]
    fn cnk_margins() {
        assert_eq!(cnk_bound_margin(1, 1).unwrap(), 0.0);
        let expected = ((4f64).ln() + 1.0).powi(2) / 2.0 - 11.0 / 24.0;
        assert!((cnk_bound_margin(4, 2).unwrap() - expected).abs() < 1e-15);
        let t = StirlingTable::new(30);
        for k in 1..=30 {
            assert!(t.cnk_bound_margin(30, k).unwrap() >= 0.0);
        }
        assert!(cnk_bound_margin(3, 0).is_err());
    }

    #[test]
    fn cycle_pmf_examples() {
        let pmf = cycle_count_pmf(&EwensParams::new(1.0, 3).unwrap());
        for (got, want) in pmf.probabilities.iter().zip([1.0 / 3.0, 0.5, 1.0 / 6.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        let t = StirlingTable::new(3);
        assert_eq!(
            cycle_count_pmf_exact(&int(1), 3, &t).unwrap(),
            vec![ratio(1, 3), ratio(1, 2), ratio(1, 6)]
        );
        let zero = cycle_count_pmf(&EwensParams::new(0.0, 6).unwrap());
        assert_eq!(zero.get(1), 1.0);
        assert_eq!(zero.probabilities.iter().sum::<f64>(), 1.0);
        let exact_zero = cycle_count_pmf_exact(&int(0), 3, &t).unwrap();
        assert_eq!(exact_zero, vec![int(1), int(0), int(0)]);
    }

    #[test]
    fn float_pmf_matches_stirling_route() {
        let t = StirlingTable::new(60);
        for &(p, q) in &[(1i64, 3i64), (1, 1), (5, 2), (20, 1)] {
            let a = ratio(p, q);
            for n in [1usize, 2, 7, 25, 60] {
                let float = cycle_count_pmf(&EwensParams::new(p as f64 / q as f64, n).unwrap());
                let exact = cycle_count_pmf_exact(&a, n, &t).unwrap();
                let total: f64 = float.probabilities.iter().sum();
                assert!((total - 1.0).abs() < 1e-12);
                for (f, e) in float.probabilities.iter().zip(&exact) {
                    let e = rational_to_f64(e);
                    assert!((f - e).abs() <= 1e-12 * e.max(1e-300) + 1e-300, "{f} vs {e}");
                }
            }
        }
    }

    #[test]
    fn sampler_degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let one = EwensParams::new(2.5, 1).unwrap();
        assert!(one.sample(&mut rng).is_identity());
        let zero = EwensParams::new(0.0, 9).unwrap();
        for _ in 0..200 {
            assert_eq!(zero.sample(&mut rng).cycle_count(), 1);
        }
    }

    #[test]
    fn sampler_near_point_mass_for_huge_alpha() {
        let alpha = 1e6;
        let p = EwensParams::new(alpha, 10).unwrap();
        // P(identity) = α^n / α^{(n)} ≈ 0.99995
        let exact = (10.0 * f64::ln(alpha) - ln_rising_factorial(alpha, 10).unwrap()).exp();
        assert!(exact > 0.9999);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let hits = (0..10_000).filter(|_| p.sample(&mut rng).is_identity()).count();
        assert!(hits >= 9_900, "{hits}");
    }

    #[test]
    fn sampler_mean_cycle_count() {
        for &alpha in &[0.5, 1.0, 4.0] {
            let p = EwensParams::new(alpha, 30).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let trials = 20_000;
            let counts: Vec<f64> = (0..trials).map(|_| p.sample(&mut rng).cycle_count() as f64).collect();
            let mean = counts.iter().sum::<f64>() / trials as f64;
            let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
            let se = (var / trials as f64).sqrt();
            let want = p.expected_cycle_count();
            assert!((mean - want).abs() <= 4.0 * se, "alpha={alpha}: {mean} vs {want}");
            let pmf_mean = cycle_count_pmf(&p).mean();
            assert!((pmf_mean - want).abs() < 1e-10);
        }
    }
}
