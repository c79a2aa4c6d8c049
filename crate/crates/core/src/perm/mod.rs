//! Permutations of `{1, …, n}` and the group-theoretic decision procedures
//! built on them.
//!
//! Points are 1-indexed in every textual format and 0-indexed in memory.

mod group;
mod ksets;

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

pub use group::{
    contains_alternating, contains_alternating_with, group_order, is_transitive, orbits,
    AlternatingCheck, GroupReport, StabilizerChain,
};
pub use ksets::{count_fixed_ksets, count_fixed_ksets_transitive, KSET_MAX_DEGREE};
pub(crate) use group::transitive_unchecked;

/// A bijection of `{0, …, n-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Builds a permutation from 0-indexed images.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::DegenerateDegree { n, min: 1 });
        }
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n {
                return Err(Error::ImageOutOfRange { value: x + 1, n });
            }
            if seen[x] {
                return Err(Error::DuplicateImage(x + 1));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation from 1-indexed one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let image = images
            .iter()
            .map(|&x| {
                if x == 0 || x > n {
                    Err(Error::ImageOutOfRange { value: x, n })
                } else {
                    Ok(x - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(image)
    }

    /// Builds a permutation of degree `n` from disjoint 1-indexed cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegenerateDegree { n, min: 1 });
        }
        let mut image: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                if x == 0 || x > n {
                    return Err(Error::ImageOutOfRange { value: x, n });
                }
                if used[x - 1] {
                    return Err(Error::DuplicateImage(x));
                }
                used[x - 1] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                image[x - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { image })
    }

    /// The cycle `(1 2 ⋯ n)`.
    pub fn long_cycle(n: usize) -> Self {
        Permutation {
            image: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// Transposition of the 1-indexed points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::from_cycles(n, &[vec![a, b]])
    }

    pub(crate) fn from_images_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(image.clone()).is_ok());
        Permutation { image }
    }

    /// Parses one-line notation such as `"3 1 2"`.
    pub fn parse_one_line(s: &str) -> Result<Self> {
        let images = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_line(&images)
    }

    /// Parses cycle notation such as `"(1 3 2)(4 5)"`; omitted points are fixed.
    /// `"()"` or the empty string is the identity.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse("unclosed cycle".into()))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// Image of the 0-indexed point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// 1-indexed one-line notation.
    pub fn to_one_line(&self) -> Vec<usize> {
        self.image.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.degree()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x] = i;
        }
        Permutation { image }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Cycles as 0-indexed point lists, each starting at its smallest point,
    /// fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Lengths of all cycles in order of their smallest point.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.image[x];
            }
            out.push(len);
        }
        out
    }

    /// `C(π)`, the number of cycles including fixed points.
    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths().len()
    }

    /// `(-1)^{n - C(π)}`.
    pub fn sign(&self) -> i8 {
        if (self.degree() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn fixed_points(&self) -> usize {
        self.image.iter().enumerate().filter(|&(i, &x)| i == x).count()
    }

    /// Cycle notation with fixed points omitted; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", pts.join(" "))
            })
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]", self)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_one_line(s)
    }
}

pub(crate) fn check_degrees(n: usize, gens: &[Permutation]) -> Result<()> {
    for g in gens {
        if g.degree() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: g.degree(),
            });
        }
    }
    Ok(())
}
