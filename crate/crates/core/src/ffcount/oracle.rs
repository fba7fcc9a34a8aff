//! Brute-force ground truth for quotient point counts.
//!
//! For every group element `g` the oracle lists all points `x` of the variety
//! over `F_{q^M}` (with `M` the group exponent) satisfying `F(x) = g·x`, takes
//! the union, splits it into `G`-orbits and counts them, checking that each
//! orbit is Frobenius-stable. Nothing here uses Burnside's lemma or any of the
//! closed-form twisted counts.
//!
//! Candidates are generated cycle by cycle: along a cycle `i → g(i)` of
//! length `L` the equation forces `x_{g(i)} = F^{-1}(c_i x_i)`, so one free
//! coordinate over `F_{q^L}` (or `F_{q^{ord g}}`) determines the rest. Every
//! candidate is still checked against the literal equation.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    Ambient, CountingSequence, FieldSpec, FiniteField, GroupAction, PrimePower, Representation,
};
use crate::error::{Error, Result};
use crate::perm::{lcm, PermGroup, Permutation};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A basic cell-like piece of a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    Affine(u32),
    Projective(u32),
    Torus(u32),
}

impl Piece {
    fn coords(&self) -> usize {
        match *self {
            Piece::Affine(d) | Piece::Torus(d) => d as usize,
            Piece::Projective(d) => d as usize + 1,
        }
    }

    pub fn sequence(&self) -> CountingSequence {
        match *self {
            Piece::Affine(d) => CountingSequence::affine(d),
            Piece::Projective(d) => CountingSequence::projective(d),
            Piece::Torus(d) => CountingSequence::torus(d),
        }
    }
}

/// Counting sequence of a product of pieces.
pub fn factor_sequence(factor: &[Piece]) -> CountingSequence {
    factor.iter().fold(CountingSequence::point(), |acc, p| {
        acc.product(&p.sequence())
            .expect("polynomial sequences always multiply")
    })
}

/// Varieties with explicit coordinates that the oracle can enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExplicitVariety {
    /// `Z^n`, `Z` a product of pieces, under a permutation group.
    Power {
        factor: Vec<Piece>,
        group: PermGroup,
    },
    /// A standard piece of a linear representation.
    Linear {
        rep: Representation,
        ambient: Ambient,
    },
    /// Disjoint copies permuted by `copies`, group `H × C`.
    Copies {
        copies: PermGroup,
        inner: Box<ExplicitVariety>,
    },
    /// `((A^r)^d_0 × A^s)^m` under `S_d^m ⋊ S_m`.
    ZeroSumWreath {
        rank: u32,
        parts: usize,
        factors: usize,
        base_dim: u32,
    },
    /// `X⟨n⟩` for `X = A^dim` and `n ∈ {2, 3}` under `S_n`, written out
    /// stratum by stratum in the coordinates of the blowup charts.
    Polydiagonal { dim: u32, n: usize },
}

impl ExplicitVariety {
    /// The matching closed-form action, when one exists in [`GroupAction`].
    pub fn burnside_action(&self) -> Option<GroupAction> {
        Some(match self {
            ExplicitVariety::Power { factor, group } => GroupAction::PowerPermutation {
                base: factor_sequence(factor),
                group: group.clone(),
            },
            ExplicitVariety::Linear { rep, ambient } => GroupAction::linear(rep.clone(), *ambient),
            ExplicitVariety::Copies { copies, inner } => GroupAction::Copies {
                copies: copies.clone(),
                inner: Box::new(inner.burnside_action()?),
            },
            ExplicitVariety::ZeroSumWreath {
                rank,
                parts,
                factors,
                base_dim,
            } => GroupAction::ZeroSumWreath {
                rank: *rank,
                parts: *parts,
                factors: *factors,
                base: CountingSequence::affine(*base_dim),
            },
            ExplicitVariety::Polydiagonal { .. } => return None,
        })
    }

    pub fn group_order(&self) -> usize {
        self.model().map(|m| m.group_order()).unwrap_or(0)
    }

    fn model(&self) -> Result<Model> {
        Ok(match self {
            ExplicitVariety::Power { factor, group } => Model::Atoms(AtomModel {
                families: vec![(factor.clone(), group.degree())],
                group: group.clone(),
                zero_sum: vec![],
            }),
            ExplicitVariety::ZeroSumWreath {
                rank,
                parts,
                factors,
                base_dim,
            } => Model::Atoms(wreath_model(*rank, *parts, *factors, *base_dim)?),
            ExplicitVariety::Linear { rep, ambient } => Model::Linear(rep.clone(), *ambient),
            ExplicitVariety::Copies { copies, inner } => {
                Model::Copies(copies.clone(), Box::new(inner.model()?))
            }
            ExplicitVariety::Polydiagonal { dim, n } => {
                if !(2..=3).contains(n) || *dim == 0 {
                    return Err(Error::Unsupported(format!(
                        "explicit polydiagonal model needs n in 2..=3 and dim >= 1, got n = {n}, dim = {dim}"
                    )));
                }
                Model::Polydiagonal {
                    dim: *dim as usize,
                    n: *n,
                    group: PermGroup::symmetric(*n)?,
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Number of Frobenius-stable orbits.
    pub count: i128,
    pub field: FieldSpec,
    /// Candidates generated across all group elements.
    pub candidates: u64,
    /// Size of the union of all twisted fixed-point sets.
    pub fixed_points: u64,
}

/// `#(X/G)(F_q)` by explicit enumeration of Frobenius-stable orbits.
pub fn oracle_orbit_count(variety: &ExplicitVariety, q: u64, budget: u64) -> Result<OracleResult> {
    let pp = PrimePower::new(q)?;
    let model = variety.model()?;
    model.validate(pp)?;
    let order = model.group_order();
    let exponent = (0..order).fold(1, |acc, g| lcm(acc, model.element_order(g)));
    let field = FiniteField::new(q, exponent as u32)?;
    let used = AtomicU64::new(0);
    let budget = Budget {
        limit: budget,
        used: &used,
    };

    let per_element: Vec<Vec<Vec<u32>>> = (0..order)
        .into_par_iter()
        .map(|g| {
            let o = model.element_order(g) as u32;
            let mut kept = Vec::new();
            for x in model.candidates(&field, g, o, &budget)? {
                if model.frobenius(&field, &x) == model.act(&field, g, &x) {
                    kept.push(x);
                }
            }
            Ok(kept)
        })
        .collect::<Result<_>>()?;

    let fixed: HashSet<Vec<u32>> = per_element.into_iter().flatten().collect();
    let sorted: BTreeSet<&Vec<u32>> = fixed.iter().collect();
    let mut seen: HashSet<&Vec<u32>> = HashSet::with_capacity(fixed.len());
    let mut count = 0i128;
    for x in sorted {
        if seen.contains(x) {
            continue;
        }
        let orbit: HashSet<Vec<u32>> = (0..order).map(|g| model.act(&field, g, x)).collect();
        for y in &orbit {
            match fixed.get(y) {
                Some(y) => {
                    seen.insert(y);
                }
                None => {
                    return Err(Error::Inconsistent(format!(
                        "orbit of a twisted fixed point leaves the fixed locus: {x:?} -> {y:?}"
                    )))
                }
            }
        }
        if !orbit.contains(&model.frobenius(&field, x)) {
            return Err(Error::Inconsistent(format!(
                "orbit of {x:?} is not Frobenius-stable"
            )));
        }
        count += 1;
    }
    Ok(OracleResult {
        count,
        field: field.spec().clone(),
        candidates: used.load(Ordering::Relaxed),
        fixed_points: fixed.len() as u64,
    })
}

struct Budget<'a> {
    limit: u64,
    used: &'a AtomicU64,
}

impl Budget<'_> {
    fn charge(&self, n: u128) -> Result<()> {
        let n = n.min(u64::MAX as u128) as u64;
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        let total = before.saturating_add(n);
        if total > self.limit {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget: self.limit,
            });
        }
        Ok(())
    }
}

enum Model {
    Atoms(AtomModel),
    Linear(Representation, Ambient),
    Copies(PermGroup, Box<Model>),
    Polydiagonal {
        dim: usize,
        n: usize,
        group: PermGroup,
    },
}

/// A product of atoms, grouped into families sharing a domain; the group
/// permutes atoms within families.
struct AtomModel {
    families: Vec<(Vec<Piece>, usize)>,
    group: PermGroup,
    zero_sum: Vec<Vec<usize>>,
}

impl AtomModel {
    fn atom_sizes(&self) -> Vec<usize> {
        self.families
            .iter()
            .flat_map(|(domain, count)| {
                std::iter::repeat_n(domain.iter().map(Piece::coords).sum(), *count)
            })
            .collect()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for s in self.atom_sizes() {
            off.push(off.last().unwrap() + s);
        }
        off
    }
}

fn wreath_model(rank: u32, parts: usize, factors: usize, base_dim: u32) -> Result<AtomModel> {
    if parts == 0 || factors == 0 {
        return Err(Error::InvalidScenario(
            "wreath model needs d, m >= 1".into(),
        ));
    }
    let degree = factors + factors * parts;
    let vector = |i: usize, j: usize| factors + i * parts + j;
    let mut gens = Vec::new();
    for i in 0..factors {
        for j in 0..parts.saturating_sub(1) {
            let mut img: Vec<usize> = (0..degree).collect();
            img.swap(vector(i, j), vector(i, j + 1));
            gens.push(Permutation::from_zero_based(img));
        }
    }
    for i in 0..factors.saturating_sub(1) {
        let mut img: Vec<usize> = (0..degree).collect();
        img.swap(i, i + 1);
        for j in 0..parts {
            img.swap(vector(i, j), vector(i + 1, j));
        }
        gens.push(Permutation::from_zero_based(img));
    }
    Ok(AtomModel {
        families: vec![
            (
                if base_dim > 0 {
                    vec![Piece::Affine(base_dim)]
                } else {
                    vec![]
                },
                factors,
            ),
            (
                if rank > 0 {
                    vec![Piece::Affine(rank)]
                } else {
                    vec![]
                },
                factors * parts,
            ),
        ],
        group: PermGroup::generated(degree, &gens)?,
        zero_sum: (0..factors)
            .map(|i| (0..parts).map(|j| vector(i, j)).collect())
            .collect(),
    })
}

/// One locally closed piece of the candidate space for a fixed `g`.
struct Stratum<'a> {
    tag: Vec<u32>,
    blocks: Vec<Block<'a>>,
}

type Filter<'a> = Box<dyn Fn(&FiniteField, &[u32]) -> bool + Send + Sync + 'a>;

struct Block<'a> {
    kind: BlockKind,
    filter: Option<Filter<'a>>,
}

enum BlockKind {
    /// Coordinates on which `g` acts by a monomial matrix: coordinate `i` is
    /// sent to `perm[i]` and multiplied by `scalars[i]`. Projective blocks are
    /// the nonzero solutions up to scaling.
    Cone {
        perm: Vec<usize>,
        scalars: Vec<u32>,
        projective: bool,
    },
    /// Atoms of one domain permuted by `g`.
    Atoms {
        domain: Vec<Piece>,
        perm: Vec<usize>,
    },
}

impl<'a> Block<'a> {
    fn plain(kind: BlockKind) -> Self {
        Block { kind, filter: None }
    }

    fn filtered(
        kind: BlockKind,
        f: impl Fn(&FiniteField, &[u32]) -> bool + Send + Sync + 'a,
    ) -> Self {
        Block {
            kind,
            filter: Some(Box::new(f)),
        }
    }
}

fn identity_cone(len: usize, projective: bool) -> BlockKind {
    BlockKind::Cone {
        perm: (0..len).collect(),
        scalars: vec![1; len],
        projective,
    }
}

fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = vec![s];
        seen[s] = true;
        let mut i = perm[s];
        while i != s {
            seen[i] = true;
            cyc.push(i);
            i = perm[i];
        }
        out.push(cyc);
    }
    out
}

/// Cartesian product of per-cycle choices, each filling its own positions.
fn expand(
    len: usize,
    factors: &[(Vec<usize>, Vec<Vec<u32>>)],
    budget: &Budget,
) -> Result<Vec<Vec<u32>>> {
    let size: u128 = factors.iter().map(|(_, o)| o.len() as u128).product();
    budget.charge(size)?;
    let mut acc = vec![vec![0u32; len]];
    for (pos, options) in factors {
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for partial in &acc {
            for opt in options {
                let mut v = partial.clone();
                for (&p, &c) in pos.iter().zip(opt) {
                    v[p] = c;
                }
                next.push(v);
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn normalize(f: &FiniteField, v: &[u32]) -> Option<Vec<u32>> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = f.inv(lead);
    Some(v.iter().map(|&c| f.mul(c, inv)).collect())
}

fn piece_points(f: &FiniteField, piece: Piece, sub: &[u32]) -> Vec<Vec<u32>> {
    let all = |d: usize, vals: &[u32]| -> Vec<Vec<u32>> {
        let mut acc = vec![Vec::new()];
        for _ in 0..d {
            acc = acc
                .into_iter()
                .flat_map(|v| {
                    vals.iter().map(move |&c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        acc
    };
    match piece {
        Piece::Affine(d) => all(d as usize, sub),
        Piece::Torus(d) => {
            let nz: Vec<u32> = sub.iter().copied().filter(|&c| c != 0).collect();
            all(d as usize, &nz)
        }
        Piece::Projective(d) => {
            let d = d as usize;
            let mut out = Vec::new();
            for lead in 0..=d {
                for tail in all(d - lead, sub) {
                    let mut v = vec![0; lead];
                    v.push(f.one());
                    v.extend(tail);
                    out.push(v);
                }
            }
            out
        }
    }
}

fn domain_points(f: &FiniteField, domain: &[Piece], sub: &[u32]) -> Vec<Vec<u32>> {
    let mut acc = vec![Vec::new()];
    for &p in domain {
        let pts = piece_points(f, p, sub);
        acc = acc
            .into_iter()
            .flat_map(|v| {
                pts.iter().map(move |w| {
                    let mut x = v.clone();
                    x.extend_from_slice(w);
                    x
                })
            })
            .collect();
    }
    acc
}

fn block_solutions(
    f: &FiniteField,
    block: &Block,
    o: u32,
    budget: &Budget,
) -> Result<Vec<Vec<u32>>> {
    let sols = match &block.kind {
        BlockKind::Cone {
            perm,
            scalars,
            projective,
        } => {
            let sub = f.subfield(o)?;
            let mut factors = Vec::new();
            for cyc in cycles_of(perm) {
                budget.charge(sub.len() as u128)?;
                let mut options = Vec::new();
                for &v in &sub {
                    // x_{perm(i)} = F^{-1}(c_i x_i) along the cycle
                    let mut vals = vec![v];
                    for w in 0..cyc.len() - 1 {
                        let prev = *vals.last().unwrap();
                        vals.push(f.frobenius_pow(f.mul(scalars[cyc[w]], prev), o - 1));
                    }
                    let last = *vals.last().unwrap();
                    if f.frobenius(v) == f.mul(scalars[*cyc.last().unwrap()], last) {
                        options.push(vals);
                    }
                }
                factors.push((cyc, options));
            }
            let raw = expand(perm.len(), &factors, budget)?;
            if *projective {
                let mut pts: Vec<Vec<u32>> = raw.iter().filter_map(|v| normalize(f, v)).collect();
                pts.sort_unstable();
                pts.dedup();
                pts
            } else {
                raw
            }
        }
        BlockKind::Atoms { domain, perm } => {
            let size: usize = domain.iter().map(Piece::coords).sum();
            let mut factors = Vec::new();
            for cyc in cycles_of(perm) {
                let len = cyc.len() as u32;
                let sub = f.subfield(len)?;
                let pts = domain_points(f, domain, &sub);
                budget.charge(pts.len() as u128)?;
                // x_{perm^t(i)} = F^{-t}(x_i) = F^{L-t}(x_i) over F_{q^L}
                let positions: Vec<usize> =
                    cyc.iter().flat_map(|&a| a * size..(a + 1) * size).collect();
                let options = pts
                    .iter()
                    .map(|v| {
                        (0..len)
                            .flat_map(|t| v.iter().map(move |&c| (c, t)))
                            .map(|(c, t)| f.frobenius_pow(c, (len - t) % len))
                            .collect()
                    })
                    .collect();
                factors.push((positions, options));
            }
            expand(perm.len() * size, &factors, budget)?
        }
    };
    Ok(match &block.filter {
        Some(keep) => sols.into_iter().filter(|v| keep(f, v)).collect(),
        None => sols,
    })
}

fn stratum_points(f: &FiniteField, s: &Stratum, o: u32, budget: &Budget) -> Result<Vec<Vec<u32>>> {
    let mut len = s.tag.len();
    let mut factors = vec![((0..len).collect::<Vec<_>>(), vec![s.tag.clone()])];
    for b in &s.blocks {
        let sols = block_solutions(f, b, o, budget)?;
        let width = sols.first().map_or(0, Vec::len);
        if sols.is_empty() {
            return Ok(Vec::new());
        }
        factors.push(((len..len + width).collect(), sols));
        len += width;
    }
    expand(len, &factors, budget)
}

fn sum_zero(f: &FiniteField, v: &[u32], stride: usize, comps: usize) -> bool {
    (0..stride).all(|c| (0..comps).fold(0, |acc, i| f.add(acc, v[i * stride + c])) == 0)
}

impl Model {
    fn validate(&self, pp: PrimePower) -> Result<()> {
        match self {
            Model::Atoms(_) => Ok(()),
            Model::Linear(rep, ambient) => {
                if let (Ambient::Torus, Representation::Permutation { zero_sum: true, .. }) =
                    (ambient, rep)
                {
                    return Err(Error::InvalidScenario(
                        "torus of a sum-zero representation".into(),
                    ));
                }
                rep.check_tame(pp.q())
            }
            Model::Copies(_, inner) => inner.validate(pp),
            Model::Polydiagonal { n, .. } => {
                if *n == 3 && pp.p == 3 {
                    // the three proper transforms of the pair diagonals meet the
                    // first exceptional divisor along one common line
                    return Err(Error::Unsupported(
                        "explicit model of X<3> needs characteristic != 3".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn group_order(&self) -> usize {
        match self {
            Model::Atoms(m) => m.group.order(),
            Model::Linear(rep, _) => rep.group_order(),
            Model::Copies(c, inner) => c.order() * inner.group_order(),
            Model::Polydiagonal { group, .. } => group.order(),
        }
    }

    fn element_order(&self, g: usize) -> usize {
        match self {
            Model::Atoms(m) => m.group.elements()[g].order(),
            Model::Linear(rep, _) => rep.element_order(g),
            Model::Copies(c, inner) => lcm(
                c.elements()[g % c.order()].order(),
                inner.element_order(g / c.order()),
            ),
            Model::Polydiagonal { group, .. } => group.elements()[g].order(),
        }
    }

    fn tag_len(&self) -> usize {
        match self {
            Model::Copies(_, inner) => 1 + inner.tag_len(),
            _ => 1,
        }
    }

    fn frobenius(&self, f: &FiniteField, x: &[u32]) -> Vec<u32> {
        let t = self.tag_len();
        x[..t]
            .iter()
            .copied()
            .chain(x[t..].iter().map(|&c| f.frobenius(c)))
            .collect()
    }

    /// Linear data of element `g`: coordinate permutation and scalars.
    fn monomial(rep: &Representation, f: &FiniteField, g: usize) -> (Vec<usize>, Vec<u32>) {
        match rep {
            Representation::Diagonal { weights, k } => {
                let zeta = f.root_of_unity(*k).expect("tameness checked");
                let scalars = weights
                    .iter()
                    .map(|&w| f.pow(zeta, g as u64 * w as u64))
                    .collect();
                ((0..weights.len()).collect(), scalars)
            }
            Representation::Permutation { group, trivial, .. } => {
                let sigma = &group.elements()[g];
                let d = group.degree();
                let perm = (0..d + *trivial as usize)
                    .map(|i| if i < d { sigma.apply(i) } else { i })
                    .collect::<Vec<_>>();
                let n = perm.len();
                (perm, vec![1; n])
            }
        }
    }

    fn act(&self, f: &FiniteField, g: usize, x: &[u32]) -> Vec<u32> {
        match self {
            Model::Atoms(m) => {
                let sigma = &m.group.elements()[g];
                let sizes = m.atom_sizes();
                let off = m.offsets();
                let mut out = x.to_vec();
                for a in 0..sizes.len() {
                    let b = sigma.apply(a);
                    out[1 + off[b]..1 + off[b] + sizes[a]]
                        .copy_from_slice(&x[1 + off[a]..1 + off[a] + sizes[a]]);
                }
                out
            }
            Model::Linear(rep, _) => {
                let (perm, scalars) = Self::monomial(rep, f, g);
                let mut v = vec![0; perm.len()];
                for i in 0..perm.len() {
                    v[perm[i]] = f.mul(scalars[i], x[1 + i]);
                }
                if x[0] == 1 {
                    v = normalize(f, &v).expect("projective points are nonzero");
                }
                std::iter::once(x[0]).chain(v).collect()
            }
            Model::Copies(c, inner) => {
                let sigma = &c.elements()[g % c.order()];
                std::iter::once(sigma.apply(x[0] as usize) as u32)
                    .chain(inner.act(f, g / c.order(), &x[1..]))
                    .collect()
            }
            Model::Polydiagonal { dim, n, group } => {
                polydiag_act(f, *dim, *n, &group.elements()[g], x)
            }
        }
    }

    fn candidates(
        &self,
        f: &FiniteField,
        g: usize,
        o: u32,
        budget: &Budget,
    ) -> Result<Vec<Vec<u32>>> {
        let strata = match self {
            Model::Copies(c, inner) => {
                let sigma = &c.elements()[g % c.order()];
                let mut out = Vec::new();
                for i in (0..c.degree()).filter(|&i| sigma.apply(i) == i) {
                    for x in inner.candidates(f, g / c.order(), o, budget)? {
                        out.push(std::iter::once(i as u32).chain(x).collect());
                    }
                }
                return Ok(out);
            }
            Model::Atoms(m) => {
                let sigma = &m.group.elements()[g];
                let mut blocks = Vec::new();
                let mut start = 0;
                let sizes = m.atom_sizes();
                for (domain, count) in &m.families {
                    let perm: Vec<usize> = (start..start + count)
                        .map(|a| sigma.apply(a) - start)
                        .collect();
                    let kind = BlockKind::Atoms {
                        domain: domain.clone(),
                        perm,
                    };
                    let groups: Vec<Vec<usize>> = m
                        .zero_sum
                        .iter()
                        .filter(|grp| grp.iter().all(|a| (start..start + count).contains(a)))
                        .map(|grp| grp.iter().map(|a| a - start).collect())
                        .collect();
                    if groups.is_empty() {
                        blocks.push(Block::plain(kind));
                    } else {
                        let width = sizes[start];
                        blocks.push(Block::filtered(kind, move |f, v| {
                            groups.iter().all(|grp| {
                                (0..width).all(|c| {
                                    grp.iter().fold(0, |acc, &a| f.add(acc, v[a * width + c])) == 0
                                })
                            })
                        }));
                    }
                    start += count;
                }
                vec![Stratum {
                    tag: vec![0],
                    blocks,
                }]
            }
            Model::Linear(rep, ambient) => linear_strata(rep, *ambient, f, g),
            Model::Polydiagonal { dim, n, group } => {
                polydiag_strata(f, *dim, *n, &group.elements()[g])
            }
        };
        let mut out = Vec::new();
        for s in &strata {
            out.extend(stratum_points(f, s, o, budget)?);
        }
        Ok(out)
    }
}

fn linear_strata<'a>(
    rep: &'a Representation,
    ambient: Ambient,
    f: &FiniteField,
    g: usize,
) -> Vec<Stratum<'a>> {
    let (perm, scalars) = Model::monomial(rep, f, g);
    let zero_sum = match rep {
        Representation::Permutation {
            group,
            zero_sum: true,
            ..
        } => Some(group.degree()),
        _ => None,
    };
    let cone = |projective: bool, keep: fn(&[u32]) -> bool| {
        let kind = BlockKind::Cone {
            perm: perm.clone(),
            scalars: scalars.clone(),
            projective,
        };
        Block::filtered(kind, move |f: &FiniteField, v: &[u32]| {
            keep(v) && zero_sum.is_none_or(|d| sum_zero(f, &v[..d], 1, d))
        })
    };
    let any: fn(&[u32]) -> bool = |_| true;
    let nonzero: fn(&[u32]) -> bool = |v| v.iter().any(|&c| c != 0);
    let torus: fn(&[u32]) -> bool = |v| v.iter().all(|&c| c != 0);
    let vectors = |keep| Stratum {
        tag: vec![0],
        blocks: vec![cone(false, keep)],
    };
    let lines = || Stratum {
        tag: vec![1],
        blocks: vec![cone(true, any)],
    };
    match ambient {
        Ambient::Affine => vec![vectors(any)],
        Ambient::Punctured => vec![vectors(nonzero)],
        Ambient::Torus => vec![vectors(torus)],
        Ambient::Projective => vec![lines()],
        Ambient::BlownUpOrigin => vec![vectors(nonzero), lines()],
    }
}

const PAIRS: [(usize, usize, usize); 3] = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];

fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    PAIRS
        .iter()
        .position(|&(x, y, _)| (x, y) == (a, b))
        .unwrap()
}

/// Point layouts (after the tag):
/// * `0`: distinct `x_1..x_n`
/// * `1` (n = 2): `a, [w]` on the exceptional divisor over the diagonal
/// * `10 + P` (n = 3): `a, b, [w]` with `x_i = x_j = a ≠ b = x_k` for the pair `P`
///   and `w` the normal direction of the pair diagonal
/// * `2` (n = 3): `a, [v_1 : v_2 : v_3]` on the first exceptional divisor,
///   `Σ v = 0`, away from the three lines `v_i = v_j`
/// * `30 + P` (n = 3): `a, [u], [w]` over the point `(u, u, -2u)` of the line
///   for `P`, with `w` the normal direction of the proper transform
fn polydiag_act(f: &FiniteField, d: usize, n: usize, sigma: &Permutation, x: &[u32]) -> Vec<u32> {
    let flip = |w: &[u32], sign: bool| -> Vec<u32> {
        let w: Vec<u32> = if sign {
            w.iter().map(|&c| f.neg(c)).collect()
        } else {
            w.to_vec()
        };
        normalize(f, &w).expect("nonzero direction")
    };
    let permute_atoms = |v: &[u32]| -> Vec<u32> {
        let mut out = vec![0; v.len()];
        for i in 0..n {
            let j = sigma.apply(i);
            out[j * d..(j + 1) * d].copy_from_slice(&v[i * d..(i + 1) * d]);
        }
        out
    };
    let tag = x[0];
    let body = &x[1..];
    match (n, tag) {
        (_, 0) => std::iter::once(0).chain(permute_atoms(body)).collect(),
        (2, 1) => {
            let swapped = sigma.apply(0) > sigma.apply(1);
            let mut out = vec![1];
            out.extend_from_slice(&body[..d]);
            out.extend(flip(&body[d..], swapped));
            out
        }
        (3, 2) => {
            let mut out = vec![2];
            out.extend_from_slice(&body[..d]);
            out.extend(normalize(f, &permute_atoms(&body[d..])).expect("nonzero normal vector"));
            out
        }
        (3, t) => {
            let base = if t >= 30 { 30 } else { 10 };
            let (i, j, _) = PAIRS[(t - base) as usize];
            let (si, sj) = (sigma.apply(i), sigma.apply(j));
            let new_tag = base + pair_index(si, sj) as u32;
            // (a, b) or (a, [u]) are untouched; only the normal direction moves
            let mut out = vec![new_tag];
            out.extend_from_slice(&body[..2 * d]);
            out.extend(flip(&body[2 * d..], si > sj));
            out
        }
        _ => unreachable!("unknown polydiagonal stratum tag {tag}"),
    }
}

fn polydiag_strata(
    f: &FiniteField,
    d: usize,
    n: usize,
    sigma: &Permutation,
) -> Vec<Stratum<'static>> {
    let minus_one = f.neg(f.one());
    let atoms_perm = move |count: usize| -> Vec<usize> {
        (0..count * d)
            .map(|c| sigma.apply(c / d) * d + c % d)
            .collect()
    };
    let sign_cone = |negate: bool| BlockKind::Cone {
        perm: (0..d).collect(),
        scalars: vec![if negate { minus_one } else { 1 }; d],
        projective: true,
    };
    let distinct = move |_: &FiniteField, v: &[u32]| {
        (0..n).all(|i| (i + 1..n).all(|j| v[i * d..(i + 1) * d] != v[j * d..(j + 1) * d]))
    };
    let mut out = vec![Stratum {
        tag: vec![0],
        blocks: vec![Block::filtered(
            BlockKind::Cone {
                perm: atoms_perm(n),
                scalars: vec![1; n * d],
                projective: false,
            },
            distinct,
        )],
    }];
    if n == 2 {
        out.push(Stratum {
            tag: vec![1],
            blocks: vec![
                Block::plain(identity_cone(d, false)),
                Block::plain(sign_cone(sigma.apply(0) == 1)),
            ],
        });
        return out;
    }
    for (p, &(i, j, _)) in PAIRS.iter().enumerate() {
        let (si, sj) = (sigma.apply(i), sigma.apply(j));
        if pair_index(si, sj) != p {
            continue;
        }
        let swapped = si > sj;
        out.push(Stratum {
            tag: vec![10 + p as u32],
            blocks: vec![
                Block::filtered(identity_cone(2 * d, false), move |_, v| v[..d] != v[d..]),
                Block::plain(sign_cone(swapped)),
            ],
        });
        out.push(Stratum {
            tag: vec![30 + p as u32],
            blocks: vec![
                Block::plain(identity_cone(d, false)),
                Block::plain(identity_cone(d, true)),
                Block::plain(sign_cone(swapped)),
            ],
        });
    }
    out.push(Stratum {
        tag: vec![2],
        blocks: vec![
            Block::plain(identity_cone(d, false)),
            Block::filtered(
                BlockKind::Cone {
                    perm: atoms_perm(3),
                    scalars: vec![1; 3 * d],
                    projective: true,
                },
                move |f, v| {
                    sum_zero(f, v, d, 3)
                        && PAIRS
                            .iter()
                            .all(|&(i, j, _)| v[i * d..(i + 1) * d] != v[j * d..(j + 1) * d])
                },
            ),
        ],
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(v: &ExplicitVariety, q: u64) -> i128 {
        oracle_orbit_count(v, q, DEFAULT_BUDGET).unwrap().count
    }

    #[test]
    fn symmetric_powers() {
        let sym = |factor: Vec<Piece>, n| ExplicitVariety::Power {
            factor,
            group: PermGroup::symmetric(n).unwrap(),
        };
        assert_eq!(oracle(&sym(vec![Piece::Affine(1)], 2), 3), 9);
        assert_eq!(oracle(&sym(vec![Piece::Projective(1)], 3), 2), 15);
        assert_eq!(oracle(&sym(vec![Piece::Projective(1)], 2), 3), 13);
    }

    #[test]
    fn linear_actions() {
        let mu3 = Representation::diagonal(vec![1, 2], 3).unwrap();
        let v = ExplicitVariety::Linear {
            rep: mu3,
            ambient: Ambient::Affine,
        };
        assert_eq!(oracle(&v, 7), 49);
        let gm = ExplicitVariety::Linear {
            rep: Representation::diagonal(vec![1], 2).unwrap(),
            ambient: Ambient::Torus,
        };
        assert_eq!(oracle(&gm, 5), 4);
        let s3 = Representation::permutation(PermGroup::symmetric(3).unwrap());
        let pv = ExplicitVariety::Linear {
            rep: s3,
            ambient: Ambient::Projective,
        };
        assert_eq!(oracle(&pv, 2), 7);
    }

    #[test]
    fn zero_sum_quotients() {
        let w = ExplicitVariety::ZeroSumWreath {
            rank: 2,
            parts: 3,
            factors: 1,
            base_dim: 0,
        };
        assert_eq!(oracle(&w, 2), 16);
    }

    #[test]
    fn polydiagonal_small() {
        // A^1<3> = Bl of the small diagonal: q^3 + q^2 points
        let v = ExplicitVariety::Polydiagonal { dim: 1, n: 3 };
        let r = oracle_orbit_count(&v, 2, DEFAULT_BUDGET).unwrap();
        assert!(r.fixed_points > 0);
        assert!(oracle_orbit_count(&v, 3, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let v = ExplicitVariety::Power {
            factor: vec![Piece::Affine(2)],
            group: PermGroup::symmetric(3).unwrap(),
        };
        assert!(matches!(
            oracle_orbit_count(&v, 7, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
