use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_degrees, Permutation};
use crate::numeric::{factorial, is_prime};
use crate::{Error, Result};

/// Orbit partition of `⟨gens⟩` on `{0, …, n-1}`. Each block is sorted and
/// blocks are ordered by their smallest point. An empty generator list gives
/// `n` singletons.
pub fn orbits(n: usize, gens: &[Permutation]) -> Result<Vec<Vec<usize>>> {
    check_degrees(n, gens)?;
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        stack.push(start);
        let mut block = vec![start];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    block.push(y);
                    stack.push(y);
                }
            }
        }
        block.sort_unstable();
        out.push(block);
    }
    Ok(out)
}

pub fn is_transitive(n: usize, gens: &[Permutation]) -> Result<bool> {
    Ok(orbits(n, gens)?.len() == 1)
}

// Reachability from point 0; skips building the orbit partition when
// only transitivity matters.
pub(crate) fn transitive_unchecked(n: usize, gens: &[Permutation]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

const NOT_IN_ORBIT: usize = usize::MAX;
const ROOT: usize = usize::MAX - 1;

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    inv_gens: Vec<Permutation>,
    /// Schreier vector: index of the generator that first reached each point.
    edge: Vec<usize>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut edge = vec![NOT_IN_ORBIT; n];
        edge[base] = ROOT;
        Level {
            base,
            gens: Vec::new(),
            inv_gens: Vec::new(),
            edge,
            orbit: vec![base],
        }
    }

    /// Coset representative `u_x` with `u_x(base) = x`.
    fn transversal(&self, x: usize) -> Permutation {
        let mut path = Vec::new();
        let mut y = x;
        while y != self.base {
            let s = self.edge[y];
            path.push(s);
            y = self.inv_gens[s].apply(y);
        }
        let mut u = Permutation::identity(self.edge.len());
        for &s in path.iter().rev() {
            u = self.gens[s].compose_unchecked(&u);
        }
        u
    }

    /// `u_x^{-1} ∘ g`.
    fn strip(&self, x: usize, mut g: Permutation) -> Permutation {
        let mut y = x;
        while y != self.base {
            let s = self.edge[y];
            g = self.inv_gens[s].compose_unchecked(&g);
            y = self.inv_gens[s].apply(y);
        }
        g
    }
}

/// Base and strong generating set built by the deterministic incremental
/// Schreier–Sims algorithm with Schreier-vector transversals.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(n: usize, gens: &[Permutation]) -> Result<Self> {
        check_degrees(n, gens)?;
        let mut chain = StabilizerChain {
            degree: n,
            levels: Vec::new(),
        };
        for g in gens {
            chain.insert(0, g.clone());
        }
        Ok(chain)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.residue(0, g.clone()).is_identity()
    }

    fn residue(&self, from: usize, mut g: Permutation) -> Permutation {
        for level in &self.levels[from..] {
            let x = g.apply(level.base);
            if level.edge[x] == NOT_IN_ORBIT {
                return g;
            }
            g = level.strip(x, g);
        }
        g
    }

    fn insert(&mut self, i: usize, g: Permutation) {
        if i < self.levels.len() {
            if self.residue(i, g.clone()).is_identity() {
                return;
            }
        } else if g.is_identity() {
            return;
        }
        if i == self.levels.len() {
            let base = (0..self.degree)
                .find(|&x| g.apply(x) != x)
                .expect("non-identity element moves a point");
            self.levels.push(Level::new(base, self.degree));
        }
        let new_gen = self.levels[i].gens.len();
        self.levels[i].inv_gens.push(g.inverse());
        self.levels[i].gens.push(g);

        let mut queue: VecDeque<(usize, usize)> =
            self.levels[i].orbit.iter().map(|&x| (x, new_gen)).collect();
        while let Some((x, s)) = queue.pop_front() {
            let level = &mut self.levels[i];
            let y = level.gens[s].apply(x);
            if level.edge[y] == NOT_IN_ORBIT {
                level.edge[y] = s;
                level.orbit.push(y);
                queue.extend((0..level.gens.len()).map(|t| (y, t)));
            } else {
                let level = &self.levels[i];
                let h = level.gens[s].compose_unchecked(&level.transversal(x));
                let h = level.strip(y, h);
                if !h.is_identity() {
                    self.insert(i + 1, h);
                }
            }
        }
    }
}

/// Exact order of `⟨gens⟩`.
pub fn group_order(n: usize, gens: &[Permutation]) -> Result<BigUint> {
    Ok(StabilizerChain::new(n, gens)?.order())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub transitive: bool,
    #[serde(with = "crate::numeric::serde_biguint")]
    pub order: BigUint,
    pub contains_alternating: bool,
    pub orbit_count: usize,
}

/// Exact decision of `⟨gens⟩ ≥ A_n`: transitive and of order at least `n!/2`.
pub fn contains_alternating(n: usize, gens: &[Permutation]) -> Result<GroupReport> {
    if n < 3 {
        return Err(Error::DegenerateDegree { n, min: 3 });
    }
    let orbit_count = orbits(n, gens)?.len();
    let order = group_order(n, gens)?;
    let transitive = orbit_count == 1;
    let contains_alternating = transitive && &order * 2u32 >= factorial(n);
    Ok(GroupReport {
        transitive,
        order,
        contains_alternating,
        orbit_count,
    })
}

/// Tuning for [`contains_alternating_with`].
///
/// A transitive group containing a `p`-cycle with `p` prime and
/// `n/2 < p ≤ n - 3` is primitive (the `p`-cycle cannot be spread over blocks
/// of size at most `n/2`), so by Jordan's theorem it contains `A_n`. Such a
/// cycle is sought among powers of the generators and of product-replacement
/// random elements; if none turns up the exact stabilizer-chain order decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlternatingCheck {
    /// Degrees below this skip the certificate search.
    pub jordan_min_degree: usize,
    /// Random group elements inspected before falling back.
    pub random_elements: usize,
}

impl Default for AlternatingCheck {
    fn default() -> Self {
        AlternatingCheck {
            jordan_min_degree: 8,
            random_elements: 200,
        }
    }
}

impl AlternatingCheck {
    pub fn exact_only() -> Self {
        AlternatingCheck {
            jordan_min_degree: usize::MAX,
            random_elements: 0,
        }
    }
}

/// `⟨gens⟩ ≥ A_n`, using the Jordan certificate where it applies. The answer is
/// always identical to [`contains_alternating`].
pub fn contains_alternating_with(
    n: usize,
    gens: &[Permutation],
    check: &AlternatingCheck,
) -> Result<bool> {
    if n < 3 {
        return Err(Error::DegenerateDegree { n, min: 3 });
    }
    check_degrees(n, gens)?;
    if !transitive_unchecked(n, gens) {
        return Ok(false);
    }
    if n >= check.jordan_min_degree && jordan_certificate(n, gens, check.random_elements) {
        return Ok(true);
    }
    let order = StabilizerChain::new(n, gens)?.order();
    Ok(order * 2u32 >= factorial(n))
}

fn has_jordan_cycle(n: usize, g: &Permutation, seen: &mut [bool]) -> bool {
    seen.iter_mut().for_each(|s| *s = false);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = g.apply(x);
        }
        // other cycles are shorter than p and hence coprime to it, so a power
        // of g is a p-cycle
        if 2 * len > n && len + 3 <= n && is_prime(len) {
            return true;
        }
    }
    false
}

fn jordan_certificate(n: usize, gens: &[Permutation], samples: usize) -> bool {
    if !(n / 2 + 1..=n.saturating_sub(3)).any(is_prime) {
        return false;
    }
    let mut seen = vec![false; n];
    if gens.iter().any(|g| has_jordan_cycle(n, g, &mut seen)) {
        return true;
    }
    if samples == 0 || gens.is_empty() {
        return false;
    }
    // product replacement with a fixed seed keeps the check a pure function
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a09_e667_f3bc_c908);
    let mut slots: Vec<Permutation> = gens.iter().cycle().take(gens.len().max(10)).cloned().collect();
    let mut acc = Permutation::identity(n);
    let k = slots.len();
    let step = |rng: &mut ChaCha8Rng, slots: &mut Vec<Permutation>, acc: &mut Permutation| {
        let i = rng.random_range(0..k);
        let mut j = rng.random_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.random::<bool>() {
            slots[j].clone()
        } else {
            slots[j].inverse()
        };
        slots[i] = slots[i].compose_unchecked(&other);
        *acc = acc.compose_unchecked(&slots[i]);
    };
    for _ in 0..30 {
        step(&mut rng, &mut slots, &mut acc);
    }
    for _ in 0..samples {
        step(&mut rng, &mut slots, &mut acc);
        if has_jordan_cycle(n, &acc, &mut seen) {
            return true;
        }
    }
    false
}
