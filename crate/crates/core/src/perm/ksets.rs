use super::{check_degrees, Permutation};
use crate::{Error, Result};

/// Largest degree accepted by the exhaustive subset scans.
pub const KSET_MAX_DEGREE: usize = 16;

fn guard(n: usize, k: usize, gens: &[Permutation]) -> Result<()> {
    check_degrees(n, gens)?;
    if n > KSET_MAX_DEGREE {
        return Err(Error::SizeGuard(format!(
            "fixed k-set scan needs n <= {KSET_MAX_DEGREE}, got {n}"
        )));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

fn image_mask(g: &Permutation, mask: u32) -> u32 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let x = m.trailing_zeros() as usize;
        out |= 1 << g.apply(x);
        m &= m - 1;
    }
    out
}

// Gosper's hack: all n-bit masks with k bits set.
fn ksubsets(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let first: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let candidate = (((r ^ cur) >> 2) / c) | r;
            (candidate < limit).then_some(candidate)
        };
        Some(cur as u32)
    })
}

fn acts_transitively_on(gens: &[Permutation], mask: u32) -> bool {
    if mask == 0 {
        return false;
    }
    let mut reached = 1u32 << mask.trailing_zeros();
    loop {
        let grown = gens.iter().fold(reached, |acc, g| acc | image_mask(g, reached));
        if grown == reached {
            return reached == mask;
        }
        reached = grown;
    }
}

/// `N_k`: number of `k`-subsets fixed setwise by every generator.
pub fn count_fixed_ksets(n: usize, gens: &[Permutation], k: usize) -> Result<u64> {
    guard(n, k, gens)?;
    Ok(ksubsets(n, k)
        .filter(|&m| gens.iter().all(|g| image_mask(g, m) == m))
        .count() as u64)
}

/// `N_k*`: fixed `k`-subsets on which `⟨gens⟩` acts transitively.
pub fn count_fixed_ksets_transitive(n: usize, gens: &[Permutation], k: usize) -> Result<u64> {
    guard(n, k, gens)?;
    Ok(ksubsets(n, k)
        .filter(|&m| gens.iter().all(|g| image_mask(g, m) == m) && acts_transitively_on(gens, m))
        .count() as u64)
}
