//! Closed-form α-densities of standard subgroups of `S_n`, moments of the
//! fixed-set counts `N_k`, and the generation-probability predictors.
//!
//! Floating-point functions work in log space; [`exact`] holds the rational
//! counterparts used wherever an exact comparison is needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::ewens::ln_rising_factorial;
use crate::numeric::{ln_binomial, ln_factorial, rational_to_f64, rational_to_string};
use crate::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must be finite and >= 0, got {alpha}")))
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DegenerateDegree { n, min: 1 });
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

fn ln_rising(alpha: f64, n: usize) -> f64 {
    ln_rising_factorial(alpha, n).expect("alpha > 0 checked by caller")
}

/// `ln P_α(π(X) = X)` for `|X| = k`.
pub fn ln_stabilizer_density(alpha: f64, n: usize, k: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_k(n, k)?;
    if alpha == 0.0 {
        return Ok(if k == 0 || k == n { 0.0 } else { f64::NEG_INFINITY });
    }
    Ok(ln_rising(alpha, k) + ln_rising(alpha, n - k) - ln_rising(alpha, n))
}

/// `P_α(π(X) = X) = α^{(k)} α^{(n-k)} / α^{(n)}`.
pub fn stabilizer_density(alpha: f64, n: usize, k: usize) -> Result<f64> {
    Ok(ln_stabilizer_density(alpha, n, k)?.exp())
}

/// `ln E_α(N_k)` for `t` independent permutations.
pub fn ln_expected_nk(alpha: f64, n: usize, k: usize, t: usize) -> Result<f64> {
    let ln_density = ln_stabilizer_density(alpha, n, k)?;
    if t == 0 {
        return Ok(ln_binomial(n, k));
    }
    Ok(ln_binomial(n, k) + t as f64 * ln_density)
}

/// `E_α(N_k) = C(n,k) (α^{(k)} α^{(n-k)} / α^{(n)})^t`.
pub fn expected_nk(alpha: f64, n: usize, k: usize, t: usize) -> Result<f64> {
    Ok(ln_expected_nk(alpha, n, k, t)?.exp())
}

/// `E_α(N_1) = n (α / (n + α - 1))^t`.
pub fn expected_n1(alpha: f64, n: usize, t: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_k(n, 1)?;
    Ok(n as f64 * (alpha / (n as f64 + alpha - 1.0)).powi(t as i32))
}

/// `E_α(C(N_1, k)) = C(n,k) (α^k α^{(n-k)} / α^{(n)})^t`.
pub fn binom_moment_n1(alpha: f64, n: usize, t: usize, k: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_k(n, k)?;
    if k == 0 {
        return Ok(1.0);
    }
    if alpha == 0.0 {
        return Ok(if n == 1 { 1.0 } else { 0.0 });
    }
    let ln_ratio = k as f64 * alpha.ln() + ln_rising(alpha, n - k) - ln_rising(alpha, n);
    Ok((ln_binomial(n, k) + t as f64 * ln_ratio).exp())
}

// ln(x + i) given ln x, without overflowing exp(ln x)
fn ln_shifted(ln_x: f64, i: f64) -> f64 {
    if ln_x > 600.0 {
        ln_x + (i * (-ln_x).exp()).ln_1p()
    } else {
        (ln_x.exp() + i).ln()
    }
}

fn check_divisor(n: usize, r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DegenerateDegree { n, min: 1 });
    }
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::invalid(format!("r = {r} does not divide n = {n}")));
    }
    Ok(())
}

/// `P_α(S_{n/r} ≀ S_r) = ((n/r)!^r / α^{(n)}) · x^{(r)}` with
/// `x = α^{(n/r)} / (n/r)!`; the outer rising factorial is the literal
/// product `x(x+1)⋯(x+r-1)`.
pub fn wreath_density(alpha: f64, n: usize, r: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_divisor(n, r)?;
    let m = n / r;
    let ln_m_fact = ln_factorial(m);
    if alpha == 0.0 {
        // limit α → 0: m!^r (r-1)! / (m (n-1)!)
        let ln = r as f64 * ln_m_fact + ln_factorial(r - 1) - (m as f64).ln() - ln_factorial(n - 1);
        return Ok(ln.exp());
    }
    let ln_x = ln_rising(alpha, m) - ln_m_fact;
    let ln_outer: f64 = (0..r).map(|i| ln_shifted(ln_x, i as f64)).sum();
    Ok((r as f64 * ln_m_fact - ln_rising(alpha, n) + ln_outer).exp())
}

/// `P_α(A_n) = 1/2 + α_{(n)} / (2 α^{(n)})`.
pub fn alternating_density(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if n < 2 {
        return Err(Error::DegenerateDegree { n, min: 2 });
    }
    // the i = 0 factors α/α cancel, which also covers α = 0
    let ratio: f64 = (1..n)
        .map(|i| (alpha - i as f64) / (alpha + i as f64))
        .product();
    Ok(0.5 + 0.5 * ratio)
}

/// `E_α(N_k)` for `k = 1..=⌊n/2⌋`, stored as natural logs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub n: usize,
    pub alpha: f64,
    pub t: usize,
    /// `ln_values[k - 1] = ln E_α(N_k)`.
    pub ln_values: Vec<f64>,
}

impl MomentTable {
    pub fn new(alpha: f64, n: usize, t: usize) -> Result<Self> {
        let ln_values = (1..=n / 2)
            .map(|k| ln_expected_nk(alpha, n, k, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentTable { n, alpha, t, ln_values })
    }

    pub fn value(&self, k: usize) -> f64 {
        self.ln_values[k - 1].exp()
    }

    /// First `k` of the monotone range `max(1, ⌈α-1⌉) ≤ k < n/2`.
    pub fn monotone_from(&self) -> usize {
        ((self.alpha - 1.0).ceil().max(1.0)) as usize
    }

    /// Largest violation `ln E(N_{k+1}) - ln E(N_k)` over the monotone range;
    /// `≤ 0` when the table is nonincreasing there.
    pub fn worst_increase(&self) -> f64 {
        let start = self.monotone_from();
        let mut worst = f64::NEG_INFINITY;
        for k in start..=self.ln_values.len() {
            if 2 * k >= self.n || k + 1 > self.ln_values.len() {
                break;
            }
            let (a, b) = (self.ln_values[k - 1], self.ln_values[k]);
            if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
                continue;
            }
            worst = worst.max(b - a);
        }
        worst
    }
}

/// True when `E_α(N_k)` is nonincreasing on `max(1, ⌈α-1⌉) ≤ k < n/2`, up to
/// a relative slack of `1e-12`.
pub fn check_monotone(table: &MomentTable) -> bool {
    table.worst_increase() <= 1e-12
}

/// `(1/k!) E_α(N_1)^k e^{tk²/α} - E_α(N_k)`; may be `+inf`.
pub fn bound_c_margin(alpha: f64, n: usize, k: usize, t: usize) -> Result<f64> {
    let (ln_rhs, ln_lhs) = bound_c_logs(alpha, n, k, t)?;
    Ok(ln_rhs.exp() - ln_lhs.exp())
}

/// `ln(rhs) - ln(lhs)` for the same inequality; `≥ 0` when it holds.
pub fn bound_c_log_margin(alpha: f64, n: usize, k: usize, t: usize) -> Result<f64> {
    let (ln_rhs, ln_lhs) = bound_c_logs(alpha, n, k, t)?;
    Ok(ln_rhs - ln_lhs)
}

fn bound_c_logs(alpha: f64, n: usize, k: usize, t: usize) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(Error::invalid("the N_k bound needs alpha > 0"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let ln_lhs = ln_expected_nk(alpha, n, k, t)?;
    let ln_n1 = expected_n1(alpha, n, t)?.ln();
    let ln_rhs = -ln_factorial(k) + k as f64 * ln_n1 + (t * k * k) as f64 / alpha;
    Ok((ln_rhs, ln_lhs))
}

/// `E_α(N_k) · tk/α`, an upper bound for `E_α(N_k*)` when `k > 1`.
pub fn nkstar_bound(alpha: f64, n: usize, k: usize, t: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if k <= 1 {
        return Err(Error::invalid("the N_k* bound needs k > 1"));
    }
    if alpha == 0.0 {
        return Err(Error::invalid("the N_k* bound needs alpha > 0"));
    }
    Ok(expected_nk(alpha, n, k, t)? * (t * k) as f64 / alpha)
}

/// `g(x) = e^x - 1 - x`.
pub fn g(x: f64) -> f64 {
    x.exp_m1() - x
}

/// Diagnostic comparison of `Σ_{k=2}^{⌊n/2⌋} E_α(N_k)` with `g(e^t E_α(N_1))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumBoundReport {
    pub n: usize,
    pub alpha: f64,
    pub t: usize,
    pub e_n1: f64,
    pub lhs: f64,
    /// `g(e^t E_α(N_1))`.
    pub g_value: f64,
    /// `g_value + n^{-2}`: the main term plus the error term with unit constant.
    pub rhs_main: f64,
}

pub fn sum_bound_d_report(alpha: f64, n: usize, t: usize) -> Result<SumBoundReport> {
    check_alpha(alpha)?;
    check_k(n, 1)?;
    if alpha > n as f64 / 100.0 {
        return Err(Error::Hypothesis(format!(
            "sum bound requires alpha <= n/100, got alpha = {alpha}, n = {n}"
        )));
    }
    let e_n1 = expected_n1(alpha, n, t)?;
    let lhs = (2..=n / 2)
        .map(|k| expected_nk(alpha, n, k, t))
        .sum::<Result<f64>>()?;
    let g_value = g((t as f64).exp() * e_n1);
    Ok(SumBoundReport {
        n,
        alpha,
        t,
        e_n1,
        lhs,
        g_value,
        rhs_main: g_value + 1.0 / (n as f64 * n as f64),
    })
}

/// Predicted probabilities that `t` independent `ESF(α, n)` permutations
/// generate at least `A_n` (and generate a transitive group).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub n: usize,
    pub alpha: f64,
    pub t: usize,
    /// `E_α(N_1)`.
    pub e_n1: f64,
    /// `e^{-n(α/n)^t}`.
    pub p_generate: f64,
    /// Same leading-order value as `p_generate`.
    pub p_transitive: f64,
    /// `e^{-E_α(N_1)}`.
    pub p_sharp: f64,
}

pub fn predict(alpha: f64, n: usize, t: usize) -> Result<Prediction> {
    check_alpha(alpha)?;
    if n < 3 {
        return Err(Error::DegenerateDegree { n, min: 3 });
    }
    if t < 2 {
        return Err(Error::invalid(format!("predictions need t >= 2, got {t}")));
    }
    let e_n1 = expected_n1(alpha, n, t)?;
    let nf = n as f64;
    let leading = (-nf * (alpha / nf).powi(t as i32)).exp();
    Ok(Prediction {
        n,
        alpha,
        t,
        e_n1,
        p_generate: leading,
        p_transitive: leading,
        p_sharp: (-e_n1).exp(),
    })
}

/// Tolerance used to decide `θ = 1 - 1/t`.
pub const CRITICAL_THETA_TOL: f64 = 1e-12;

/// Limit of the generation probability for `α = p n^θ` as `n → ∞`:
/// `1` below `θ = 1 - 1/t`, `0` above, `e^{-p^t}` at the boundary.
pub fn corollary_limit(theta: f64, p: f64, t: usize) -> Result<f64> {
    if !(theta >= 0.0 && p >= 0.0) {
        return Err(Error::invalid("theta and p must be >= 0"));
    }
    if t < 2 {
        return Err(Error::invalid(format!("t must be >= 2, got {t}")));
    }
    let critical = 1.0 - 1.0 / t as f64;
    Ok(if (theta - critical).abs() <= CRITICAL_THETA_TOL {
        (-p.powi(t as i32)).exp()
    } else if theta < critical {
        1.0
    } else {
        0.0
    })
}

fn partitions(n: usize, max_part: usize, counts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if n == 0 {
        visit(counts);
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        counts[part] += 1;
        partitions(n - part, part, counts, visit);
        counts[part] -= 1;
    }
}

/// Coefficients (index = power of α) of `Σ_{π ∈ S_n} sgn(π) α^{C(π)}`,
/// summed over cycle types `λ` with class sizes `n! / Π i^{c_i} c_i!`.
pub fn signed_cycle_sum(n: usize) -> Vec<BigInt> {
    let n_fact = BigInt::from(crate::numeric::factorial(n));
    let mut coeffs = vec![BigInt::from(0); n + 1];
    let mut counts = vec![0usize; n + 1];
    partitions(n, n, &mut counts, &mut |c| {
        let mut centralizer = BigInt::from(1);
        let mut cycles = 0;
        for (i, &ci) in c.iter().enumerate().skip(1) {
            cycles += ci;
            centralizer *= num_traits::pow(BigInt::from(i), ci);
            centralizer *= BigInt::from(crate::numeric::factorial(ci));
        }
        let class = &n_fact / centralizer;
        if (n - cycles).is_multiple_of(2) {
            coeffs[cycles] += class;
        } else {
            coeffs[cycles] -= class;
        }
    });
    coeffs
}

/// Coefficients of `α_{(n)} = α(α-1)⋯(α-n+1)` by expanding the product.
pub fn falling_factorial_coefficients(n: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::from(1)];
    for i in 0..n {
        // multiply by (α - i)
        let mut next = vec![BigInt::from(0); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * BigInt::from(i);
        }
        poly = next;
    }
    poly
}

/// One row of a density grid export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub n: usize,
    pub alpha: String,
    pub t: Option<usize>,
    pub k: Option<usize>,
    pub quantity: String,
    pub value_exact: Option<String>,
    pub value_float: f64,
}

/// Every closed form at one `(n, α, t)`: stabilizer densities for
/// `k = 0..=n`, `E(N_k)` for `k ≤ n/2`, binomial moments of `N_1`, wreath
/// densities for each divisor `r` (reported in the `k` column) and `P_α(A_n)`.
/// Exact values are filled in when `alpha_exact` is given.
pub fn density_grid(
    alpha: f64,
    alpha_exact: Option<&BigRational>,
    n: usize,
    t: usize,
) -> Result<Vec<DensityRow>> {
    let label = alpha_exact.map(rational_to_string).unwrap_or_else(|| alpha.to_string());
    let mut rows = Vec::new();
    let mut push = |quantity: &str, t: Option<usize>, k: Option<usize>, exact: Option<BigRational>, float: f64| {
        rows.push(DensityRow {
            n,
            alpha: label.clone(),
            t,
            k,
            quantity: quantity.to_string(),
            value_exact: exact.as_ref().map(rational_to_string),
            value_float: exact.as_ref().map(rational_to_f64).unwrap_or(float),
        });
    };
    for k in 0..=n {
        let ex = alpha_exact.map(|a| exact::stabilizer_density(a, n, k)).transpose()?;
        push("stabilizer_density", None, Some(k), ex, stabilizer_density(alpha, n, k)?);
    }
    for k in 1..=n / 2 {
        let ex = alpha_exact.map(|a| exact::expected_nk(a, n, k, t)).transpose()?;
        push("expected_nk", Some(t), Some(k), ex, expected_nk(alpha, n, k, t)?);
    }
    for k in 0..=n {
        let ex = alpha_exact.map(|a| exact::binom_moment_n1(a, n, t, k)).transpose()?;
        push("binom_moment_n1", Some(t), Some(k), ex, binom_moment_n1(alpha, n, t, k)?);
    }
    for r in (1..=n).filter(|r| n.is_multiple_of(*r)) {
        let ex = alpha_exact.map(|a| exact::wreath_density(a, n, r)).transpose()?;
        push("wreath_density", None, Some(r), ex, wreath_density(alpha, n, r)?);
    }
    if n >= 2 {
        let ex = alpha_exact.map(|a| exact::alternating_density(a, n)).transpose()?;
        push("alternating_density", None, None, ex, alternating_density(alpha, n)?);
    }
    Ok(rows)
}

/// Exact rational versions of the closed forms.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use super::{check_divisor, check_k};
    use crate::ewens::{falling_factorial_exact, rising_factorial_exact};
    use crate::numeric::{binomial, factorial};
    use crate::{Error, Result};

    fn check_alpha(alpha: &BigRational) -> Result<()> {
        if alpha < &BigRational::zero() {
            return Err(Error::invalid("alpha must be >= 0"));
        }
        Ok(())
    }

    fn big(x: num_bigint::BigUint) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    pub fn stabilizer_density(alpha: &BigRational, n: usize, k: usize) -> Result<BigRational> {
        check_alpha(alpha)?;
        check_k(n, k)?;
        if alpha.is_zero() {
            return Ok(if k == 0 || k == n { BigRational::one() } else { BigRational::zero() });
        }
        Ok(rising_factorial_exact(alpha, k) * rising_factorial_exact(alpha, n - k)
            / rising_factorial_exact(alpha, n))
    }

    pub fn expected_nk(alpha: &BigRational, n: usize, k: usize, t: usize) -> Result<BigRational> {
        let density = stabilizer_density(alpha, n, k)?;
        Ok(big(binomial(n, k)) * num_traits::pow(density, t))
    }

    pub fn expected_n1(alpha: &BigRational, n: usize, t: usize) -> Result<BigRational> {
        check_alpha(alpha)?;
        check_k(n, 1)?;
        let nn = BigRational::from_integer(BigInt::from(n));
        let base = alpha / (&nn + alpha - BigRational::one());
        Ok(nn * num_traits::pow(base, t))
    }

    pub fn binom_moment_n1(alpha: &BigRational, n: usize, t: usize, k: usize) -> Result<BigRational> {
        check_alpha(alpha)?;
        check_k(n, k)?;
        if k == 0 {
            return Ok(BigRational::one());
        }
        if alpha.is_zero() {
            return Ok(if n == 1 { BigRational::one() } else { BigRational::zero() });
        }
        let ratio = num_traits::pow(alpha.clone(), k) * rising_factorial_exact(alpha, n - k)
            / rising_factorial_exact(alpha, n);
        Ok(big(binomial(n, k)) * num_traits::pow(ratio, t))
    }

    pub fn wreath_density(alpha: &BigRational, n: usize, r: usize) -> Result<BigRational> {
        check_alpha(alpha)?;
        check_divisor(n, r)?;
        let m = n / r;
        let m_fact = big(factorial(m));
        let blocks = num_traits::pow(m_fact.clone(), r);
        if alpha.is_zero() {
            return Ok(blocks * big(factorial(r - 1))
                / (BigRational::from_integer(BigInt::from(m)) * big(factorial(n - 1))));
        }
        let x = rising_factorial_exact(alpha, m) / m_fact;
        Ok(blocks * rising_factorial_exact(&x, r) / rising_factorial_exact(alpha, n))
    }

    pub fn alternating_density(alpha: &BigRational, n: usize) -> Result<BigRational> {
        check_alpha(alpha)?;
        if n < 2 {
            return Err(Error::DegenerateDegree { n, min: 2 });
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let ratio = if alpha.is_zero() {
            // α_{(n)}/α^{(n)} → (-1)^{n-1}
            if n % 2 == 1 { BigRational::one() } else { -BigRational::one() }
        } else {
            falling_factorial_exact(alpha, n) / rising_factorial_exact(alpha, n)
        };
        Ok(&half + half.clone() * ratio)
    }

    pub fn nkstar_bound(alpha: &BigRational, n: usize, k: usize, t: usize) -> Result<BigRational> {
        check_alpha(alpha)?;
        if k <= 1 {
            return Err(Error::invalid("the N_k* bound needs k > 1"));
        }
        if alpha.is_zero() {
            return Err(Error::invalid("the N_k* bound needs alpha > 0"));
        }
        Ok(expected_nk(alpha, n, k, t)? * BigRational::from_integer(BigInt::from(t * k)) / alpha)
    }

    /// `E_α(N_k)` for `k = 1..=⌊n/2⌋`.
    #[derive(Debug, Clone, PartialEq)]
    pub struct ExactMomentTable {
        pub n: usize,
        pub alpha: BigRational,
        pub t: usize,
        pub values: Vec<BigRational>,
    }

    impl ExactMomentTable {
        pub fn new(alpha: &BigRational, n: usize, t: usize) -> Result<Self> {
            let values = (1..=n / 2)
                .map(|k| expected_nk(alpha, n, k, t))
                .collect::<Result<Vec<_>>>()?;
            Ok(ExactMomentTable { n, alpha: alpha.clone(), t, values })
        }

        /// Nonincreasing on `max(1, ⌈α-1⌉) ≤ k < n/2`, exactly.
        pub fn is_monotone(&self) -> bool {
            let start = (&self.alpha - BigRational::one()).ceil().to_integer();
            let start = if start < BigInt::one() {
                1
            } else {
                usize::try_from(start).unwrap_or(usize::MAX)
            };
            (start..self.values.len())
                .take_while(|&k| 2 * k < self.n)
                .all(|k| self.values[k] <= self.values[k - 1])
        }
    }
}
