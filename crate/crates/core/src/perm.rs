//! Permutations of `{1..n}` and finite permutation groups given by generators.
//!
//! Permutations are stored 0-based internally; the public constructors and the
//! `Display` impl use 1-based one-line and cycle notation.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Largest group order we are willing to enumerate (`|S_8|`).
pub const MAX_GROUP_ORDER: usize = 40_320;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// One-line notation over 1-based indices: `[2, 1, 3]` swaps 1 and 2.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[i - 1] = true;
            zero_based.push(i - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    /// Builds a permutation of `{1..n}` from disjoint 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n || used[a - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "{cycles:?} on {n} points"
                    )));
                }
                used[a - 1] = true;
                let b = cycle[(k + 1) % cycle.len()];
                if b == 0 || b > n {
                    return Err(Error::InvalidPermutation(format!(
                        "{cycles:?} on {n} points"
                    )));
                }
                images[a - 1] = b - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x)
        });
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// All cycles (including fixed points) as 0-based point lists, each
    /// starting at its smallest element.
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
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths, one entry per cycle.
    pub fn cycle_type(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, lcm)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A finite subgroup of `S_n`, stored as its full sorted element list.
#[derive(Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Closure of `generators` under composition. An empty generator list
    /// gives the trivial group.
    pub fn generated(degree: usize, generators: &[Permutation]) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::Mismatch(format!(
                    "generator {g} has degree {}, expected {degree}",
                    g.degree()
                )));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if seen.len() > MAX_GROUP_ORDER {
                        return Err(Error::range(
                            "group order",
                            seen.len() as i128,
                            1,
                            MAX_GROUP_ORDER as i128,
                        ));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(PermGroup {
            degree,
            elements: seen.into_iter().collect(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            elements: vec![Permutation::identity(degree)],
        }
    }

    pub fn symmetric(degree: usize) -> Result<Self> {
        if degree > 8 {
            return Err(Error::range("symmetric group degree", degree as i128, 0, 8));
        }
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[1, 2]])?);
            let long: Vec<usize> = (1..=degree).collect();
            gens.push(Permutation::from_cycles(degree, &[&long])?);
        }
        Self::generated(degree, &gens)
    }

    /// The cyclic group generated by the full cycle `(1 2 ... n)`.
    pub fn cyclic(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Ok(Self::trivial(degree));
        }
        let long: Vec<usize> = (1..=degree).collect();
        Self::generated(degree, &[Permutation::from_cycles(degree, &[&long])?])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements.iter().map(Permutation::order).fold(1, lcm)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Whether the group permutes `{1..n}` transitively.
    pub fn is_transitive(&self) -> bool {
        if self.degree == 0 {
            return true;
        }
        let orbit: BTreeSet<usize> = self.elements.iter().map(|g| g.apply(0)).collect();
        orbit.len() == self.degree
    }

    /// Subgroup fixing the 0-based point `i`.
    pub fn point_stabilizer(&self, i: usize) -> PermGroup {
        PermGroup {
            degree: self.degree,
            elements: self
                .elements
                .iter()
                .filter(|g| g.apply(i) == i)
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree {}, order {})",
            self.degree,
            self.order()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_order() {
        let s = Permutation::from_cycles(5, &[&[1, 3, 5], &[2, 4]]).unwrap();
        assert_eq!(s.one_line(), vec![3, 4, 5, 2, 1]);
        assert_eq!(s.order(), 6);
        assert_eq!(s.to_string(), "(1 3 5)(2 4)");
        assert_eq!(s.compose(&s.inverse()), Permutation::identity(5));
    }

    #[test]
    fn rejects_bad_one_line() {
        assert!(Permutation::from_one_line(&[1, 1, 2]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(PermGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(PermGroup::symmetric(4).unwrap().exponent(), 12);
        assert_eq!(PermGroup::cyclic(5).unwrap().order(), 5);
        assert_eq!(PermGroup::trivial(3).order(), 1);
        let s3 = PermGroup::symmetric(3).unwrap();
        assert!(s3.is_transitive());
        assert_eq!(s3.point_stabilizer(0).order(), 2);
        assert!(!PermGroup::trivial(2).is_transitive());
    }
}
