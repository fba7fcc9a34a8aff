//! Set partitions of `[n] = {1..n}`: enumeration, types, joins, the `S_n`
//! action and stabilizers.
//!
//! A [`SetPartition`] is always kept in canonical form (each block sorted,
//! blocks ordered by their minimum), so structural equality is partition
//! equality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest ground set accepted by [`enumerate_partitions`].
pub const MAX_ENUMERATION_N: usize = 12;
/// Largest ground set for which stabilizers are verified by enumerating `S_n`.
pub const MAX_STABILIZER_N: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and canonicalizes a list of 1-based blocks.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("empty ground set".into()));
        }
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in b.iter() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} not in 1..={n}"
                    )));
                }
                if seen[x - 1] {
                    return Err(Error::InvalidPartition(format!("element {x} repeated")));
                }
                seen[x - 1] = true;
            }
            b.sort_unstable();
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "element {} not covered",
                missing + 1
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// Partition whose blocks are the classes of `labels` (0-based positions,
    /// arbitrary label values).
    fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(i + 1);
        }
        let mut blocks: Vec<Vec<usize>> = by_label.into_values().collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition {
            n: labels.len(),
            blocks,
        }
    }

    /// The partition into singletons.
    pub fn discrete(n: usize) -> Self {
        SetPartition {
            n,
            blocks: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    /// The one-block partition.
    pub fn indiscrete(n: usize) -> Self {
        SetPartition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing the 1-based element `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&x).is_ok())
            .expect("element of the ground set")
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        self.n == other.n
            && self.blocks.iter().all(|b| {
                let j = other.block_of(b[0]);
                b.iter().all(|&x| other.blocks[j].binary_search(&x).is_ok())
            })
    }

    pub fn type_of(&self) -> PartitionType {
        let mut multiplicities = vec![0; self.n];
        for b in &self.blocks {
            multiplicities[b.len() - 1] += 1;
        }
        PartitionType { multiplicities }
    }

    /// Finest partition coarser than both.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.n != other.n {
            return Err(Error::Mismatch(format!(
                "join of partitions of [{}] and [{}]",
                self.n, other.n
            )));
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for b in self.blocks.iter().chain(other.blocks.iter()) {
            for w in b.windows(2) {
                let (a, c) = (find(&mut parent, w[0] - 1), find(&mut parent, w[1] - 1));
                if a != c {
                    parent[a] = c;
                }
            }
        }
        let labels: Vec<usize> = (0..self.n).map(|i| find(&mut parent, i)).collect();
        Ok(SetPartition::from_labels(&labels))
    }

    /// `σ·π`: every block mapped elementwise by `σ`.
    pub fn act(&self, sigma: &Permutation) -> Result<SetPartition> {
        if sigma.degree() != self.n {
            return Err(Error::Mismatch(format!(
                "permutation of degree {} acting on a partition of [{}]",
                sigma.degree(),
                self.n
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| sigma.apply(x - 1) + 1).collect())
            .collect();
        SetPartition::new(self.n, blocks)
    }

    pub fn is_fixed_by(&self, sigma: &Permutation) -> bool {
        self.act(sigma).map(|p| &p == self).unwrap_or(false)
    }

    /// The block-preserving subgroup `∏ S_{π_j}` extended by permutations of
    /// equal-size blocks.
    pub fn stabilizer(&self) -> StabilizerDecomposition {
        let ty = self.type_of();
        let inner_order = self.blocks.iter().map(|b| factorial(b.len())).product();
        let outer_order = ty.multiplicities.iter().map(|&m| factorial(m)).product();

        let mut inner_generators = Vec::new();
        for b in &self.blocks {
            for w in b.windows(2) {
                let t = Permutation::from_cycles(self.n, &[&[w[0], w[1]]]).expect("transposition");
                inner_generators.push(t);
            }
        }
        // Swap consecutive blocks of equal size elementwise (sorted order).
        let mut outer_generators = Vec::new();
        for size in 1..=self.n {
            let same: Vec<&Vec<usize>> = self.blocks.iter().filter(|b| b.len() == size).collect();
            for pair in same.windows(2) {
                let cycles: Vec<[usize; 2]> = pair[0]
                    .iter()
                    .zip(pair[1].iter())
                    .map(|(&a, &b)| [a, b])
                    .collect();
                let refs: Vec<&[usize]> = cycles.iter().map(|c| &c[..]).collect();
                outer_generators.push(
                    Permutation::from_cycles(self.n, &refs).expect("disjoint transpositions"),
                );
            }
        }
        StabilizerDecomposition {
            partition: self.clone(),
            inner_order,
            outer_order,
            inner_generators,
            outer_generators,
        }
    }

    /// Members of `S_n` fixing this partition, by brute force. Bounded by
    /// [`MAX_STABILIZER_N`].
    pub fn stabilizer_by_enumeration(&self) -> Result<Vec<Permutation>> {
        if self.n > MAX_STABILIZER_N {
            return Err(Error::range(
                "n",
                self.n as i128,
                1,
                MAX_STABILIZER_N as i128,
            ));
        }
        Ok(all_permutations(self.n)
            .into_iter()
            .filter(|s| self.is_fixed_by(s))
            .collect())
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{{{}}}", parts.join("|"))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for SetPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses the canonical report form `{1 2|3}`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("partition `{s}` must be braced")))?;
        let mut blocks = Vec::new();
        for part in inner.split('|') {
            let block: std::result::Result<Vec<usize>, _> =
                part.split_whitespace().map(str::parse::<usize>).collect();
            blocks.push(block.map_err(|e| Error::Parse(format!("partition `{s}`: {e}")))?);
        }
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::new(n, blocks)
    }
}

/// Block-size multiplicities `(m_1, ..., m_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PartitionType {
    /// `multiplicities[h - 1] = m_h`.
    multiplicities: Vec<usize>,
}

impl PartitionType {
    pub fn new(multiplicities: Vec<usize>) -> Result<Self> {
        let n = multiplicities.len();
        let total: usize = multiplicities
            .iter()
            .enumerate()
            .map(|(h, m)| (h + 1) * m)
            .sum();
        if total != n || n == 0 {
            return Err(Error::InvalidPartition(format!(
                "type {multiplicities:?} sums to {total}, not {n}"
            )));
        }
        Ok(PartitionType { multiplicities })
    }

    /// Builds a type for `[n]` from `(block size, multiplicity)` pairs.
    pub fn from_sizes(n: usize, sizes: &[(usize, usize)]) -> Result<Self> {
        let mut multiplicities = vec![0; n];
        for &(h, m) in sizes {
            if h == 0 || h > n {
                return Err(Error::InvalidPartition(format!(
                    "block size {h} for n = {n}"
                )));
            }
            multiplicities[h - 1] += m;
        }
        Self::new(multiplicities)
    }

    pub fn n(&self) -> usize {
        self.multiplicities.len()
    }

    /// `m_h`; zero outside `1..=n`.
    pub fn multiplicity(&self, h: usize) -> usize {
        if h == 0 {
            return 0;
        }
        self.multiplicities.get(h - 1).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn block_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Number of partitions of this type: `n! / ∏_h (h!)^{m_h} m_h!`.
    pub fn orbit_count(&self) -> u128 {
        let mut denom: u128 = 1;
        for (h, &m) in self.multiplicities.iter().enumerate() {
            denom *= (factorial(h + 1) as u128).pow(m as u32) * factorial(m) as u128;
        }
        factorial(self.n()) as u128 / denom
    }
}

impl serde::Serialize for PartitionType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(h, m)| format!("{}^{}", h + 1, m))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `S_π ≅ S'_π ⋊ S̄_π` for a fixed partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerDecomposition {
    pub partition: SetPartition,
    /// `∏_j |π_j|!`
    pub inner_order: u64,
    /// `∏_h m_h!`
    pub outer_order: u64,
    pub inner_generators: Vec<Permutation>,
    pub outer_generators: Vec<Permutation>,
}

impl StabilizerDecomposition {
    pub fn order(&self) -> u64 {
        self.inner_order * self.outer_order
    }
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All partitions of `[n]` in canonical form, in restricted-growth-string order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<SetPartition>> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::range("n", n as i128, 1, MAX_ENUMERATION_N as i128));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if i == rgs.len() {
            out.push(SetPartition::from_labels(rgs));
            return;
        }
        for label in 0..=max + 1 {
            rgs[i] = label;
            rec(i + 1, max.max(label), rgs, out);
        }
    }
    // position 0 always carries label 0
    if n == 1 {
        out.push(SetPartition::from_labels(&rgs));
    } else {
        rec(1, 0, &mut rgs, &mut out);
    }
    Ok(out)
}

/// Bell numbers by the Bell triangle.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Partitions of `[n]` with exactly `blocks` blocks.
pub fn partitions_with_blocks(n: usize, blocks: usize) -> Result<Vec<SetPartition>> {
    Ok(enumerate_partitions(n)?
        .into_iter()
        .filter(|p| p.block_count() == blocks)
        .collect())
}

/// All integer-partition types of `n`.
pub fn enumerate_types(n: usize) -> Result<Vec<PartitionType>> {
    let mut types: Vec<PartitionType> = enumerate_partitions(n)?
        .iter()
        .map(|p| p.type_of())
        .collect();
    types.sort();
    types.dedup();
    Ok(types)
}

pub fn orbit_count_of_type(t: &PartitionType) -> u128 {
    t.orbit_count()
}

pub(crate) fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if k <= 1 {
            out.push(Permutation::from_zero_based(a.clone()));
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, out);
    }
    heap(n, &mut current, &mut out);
    out
}
