//! The polydiagonal compactification `X⟨n⟩`: `X^n` blown up successively
//! along the polydiagonals `Δ^π = {x_i = x_j whenever i ~_π j}`, coarsest
//! partitions first.
//!
//! Stage `i` blows up the proper transforms of all `Δ^π` with `|π| = i`;
//! within a stage these are disjoint, since two distinct partitions with `i`
//! blocks meet only along a polydiagonal with fewer blocks, which an earlier
//! stage has already separated. `Δ^π ≅ X^{|π|}` has codimension
//! `dim X·(n - |π|)` with normal bundle `⊕_B T_X ⊗ (k^B)_0` over the blocks.
//!
//! Twisted counts follow the tower: each blowup replaces a `σF`-stable center
//! `C` by a `P^{c-1}`-bundle, adding `#C^{σF}·(#P^{c-1} - 1)`, and a center
//! not fixed by `σ` contributes nothing. For `n ≤ 3` the proper transform of
//! a stage-2 center is its blowup along the small diagonal, which is all the
//! nesting there is.

use serde::Serialize;

use crate::classes::MotivicClass;
use crate::error::{Error, Result};
use crate::ffcount::{
    twisted_count_power_in, CountAlgebra, CountingSequence, GroupAction, Numeric, Symbolic,
};
use crate::identities::{IdentityCheck, Instance, Relation};
use crate::partitions::{partitions_with_blocks, PartitionType, SetPartition};
use crate::perm::{PermGroup, Permutation};

/// A polydiagonal `Δ^π ⊂ X^n`, as blown up at stage `|π|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolydiagonalCenter {
    pub partition: SetPartition,
    pub stage: usize,
    pub ambient_power: usize,
    /// Codimension in units of `dim X`: `n - |π|`.
    pub relative_codim: u32,
}

impl PolydiagonalCenter {
    pub fn codim(&self, dim_x: u32) -> u32 {
        dim_x * self.relative_codim
    }
}

/// How a center meets an earlier one: `Δ^π ∩ Δ^ρ = Δ^{π ∨ ρ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub center: SetPartition,
    pub earlier: SetPartition,
    pub intersection: SetPartition,
    /// `Δ^ρ ⊂ Δ^π`, so the earlier blowup replaces `Δ^π` by its blowup.
    pub nested: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterOrbit {
    pub partition_type: PartitionType,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerStage {
    pub blocks: usize,
    pub centers: Vec<PolydiagonalCenter>,
    /// `S_n`-orbits of centers.
    pub orbits: Vec<CenterOrbit>,
    pub traces: Vec<Trace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupTower {
    pub n: usize,
    pub stages: Vec<TowerStage>,
}

impl BlowupTower {
    pub fn centers(&self) -> impl Iterator<Item = &PolydiagonalCenter> {
        self.stages.iter().flat_map(|s| s.centers.iter())
    }
}

pub fn build_tower(n: usize) -> Result<BlowupTower> {
    if !(2..=4).contains(&n) {
        return Err(Error::range("n", n as i128, 2, 4));
    }
    let mut stages: Vec<TowerStage> = Vec::new();
    for blocks in 1..n {
        let partitions = partitions_with_blocks(n, blocks)?;
        let centers: Vec<PolydiagonalCenter> = partitions
            .iter()
            .map(|p| PolydiagonalCenter {
                partition: p.clone(),
                stage: blocks,
                ambient_power: n,
                relative_codim: (n - blocks) as u32,
            })
            .collect();
        let mut orbits: Vec<CenterOrbit> = Vec::new();
        for p in &partitions {
            let t = p.type_of();
            match orbits.iter_mut().find(|o| o.partition_type == t) {
                Some(o) => o.size += 1,
                None => orbits.push(CenterOrbit {
                    partition_type: t,
                    size: 1,
                }),
            }
        }
        let mut traces = Vec::new();
        for c in &partitions {
            for earlier in stages.iter().flat_map(|s| s.centers.iter()) {
                traces.push(Trace {
                    center: c.clone(),
                    earlier: earlier.partition.clone(),
                    intersection: c.join(&earlier.partition)?,
                    nested: c.refines(&earlier.partition),
                });
            }
        }
        stages.push(TowerStage {
            blocks,
            centers,
            orbits,
            traces,
        });
    }
    Ok(BlowupTower { n, stages })
}

/// `N_{Δ^π} = ⊕_{blocks B, |B| ≥ 2} T_X ⊗ (k^B)_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalBundleModel {
    pub partition: SetPartition,
    pub summands: Vec<Vec<usize>>,
    /// Rank in units of `dim X`.
    pub relative_rank: u32,
}

impl NormalBundleModel {
    pub fn rank(&self, dim_x: u32) -> u32 {
        dim_x * self.relative_rank
    }
}

pub fn normal_bundle_model(partition: &SetPartition) -> NormalBundleModel {
    let summands: Vec<Vec<usize>> = partition
        .blocks()
        .iter()
        .filter(|b| b.len() > 1)
        .cloned()
        .collect();
    NormalBundleModel {
        relative_rank: summands.iter().map(|b| b.len() as u32 - 1).sum(),
        partition: partition.clone(),
        summands,
    }
}

/// A smooth base `X` of known dimension with its counting sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpace {
    pub base: CountingSequence,
    pub dim: u32,
}

impl TowerSpace {
    pub fn new(base: CountingSequence, dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::range("dim X", 0, 1, u32::MAX as i128));
        }
        Ok(TowerSpace { base, dim })
    }

    pub fn affine(dim: u32) -> Self {
        TowerSpace {
            base: CountingSequence::affine(dim),
            dim,
        }
    }

    pub fn projective(dim: u32) -> Self {
        TowerSpace {
            base: CountingSequence::projective(dim),
            dim,
        }
    }
}

/// The permutation `σ` induces on the blocks of a `σ`-stable partition.
fn block_permutation(p: &SetPartition, sigma: &Permutation) -> Result<Permutation> {
    let images: Vec<usize> = p
        .blocks()
        .iter()
        .map(|b| p.block_of(sigma.apply(b[0] - 1) + 1) + 1)
        .collect();
    Permutation::from_one_line(&images)
}

/// `#(Δ^π)^{σF}` with `Δ^π ≅ X^{|π|}`.
fn polydiagonal_count<A: CountAlgebra>(
    alg: &A,
    space: &TowerSpace,
    p: &SetPartition,
    sigma: &Permutation,
) -> Result<A::Value> {
    twisted_count_power_in(alg, &space.base, &block_permutation(p, sigma)?)
}

fn fibre_excess<A: CountAlgebra>(alg: &A, codim: u32) -> A::Value {
    alg.sub(&alg.projective(codim - 1, 1), &alg.int(1))
}

/// `#X⟨n⟩^{σF}` for `n ∈ {2, 3}`.
pub fn tower_twisted_count<A: CountAlgebra>(
    alg: &A,
    space: &TowerSpace,
    n: usize,
    sigma: &Permutation,
) -> Result<A::Value> {
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!(
            "twisted counts of X<{n}> (only n = 2, 3 have closed forms here)"
        )));
    }
    if sigma.degree() != n {
        return Err(Error::Mismatch(format!(
            "σ of degree {} for n = {n}",
            sigma.degree()
        )));
    }
    let tower = build_tower(n)?;
    let mut total = twisted_count_power_in(alg, &space.base, sigma)?;
    for (i, stage) in tower.stages.iter().enumerate() {
        for c in stage
            .centers
            .iter()
            .filter(|c| c.partition.is_fixed_by(sigma))
        {
            let mut proper = polydiagonal_count(alg, space, &c.partition, sigma)?;
            for earlier in tower.stages[..i].iter().flat_map(|s| s.centers.iter()) {
                if earlier.partition.is_fixed_by(sigma) && c.partition.refines(&earlier.partition) {
                    let inner = polydiagonal_count(alg, space, &earlier.partition, sigma)?;
                    let codim = space.dim
                        * (c.partition.block_count() - earlier.partition.block_count()) as u32;
                    proper = alg.add(&proper, &alg.mul(&inner, &fibre_excess(alg, codim)));
                }
            }
            let excess = fibre_excess(alg, c.codim(space.dim));
            total = alg.add(&total, &alg.mul(&proper, &excess));
        }
    }
    Ok(total)
}

/// `#(X⟨n⟩/S_n)` by Burnside over the tower counts.
pub fn polydiagonal_quotient<A: CountAlgebra>(
    alg: &A,
    space: &TowerSpace,
    n: usize,
) -> Result<A::Value> {
    let group = PermGroup::symmetric(n)?;
    let counts = group
        .elements()
        .iter()
        .map(|s| tower_twisted_count(alg, space, n, s))
        .collect::<Result<Vec<_>>>()?;
    alg.div_exact(&alg.sum(counts), group.order())
}

fn symbolic_pair(
    lhs: Result<MotivicClass>,
    rhs: Result<MotivicClass>,
) -> Result<Option<(MotivicClass, MotivicClass)>> {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => Ok(Some((l, r))),
        (Err(Error::Unsupported(_)), _) | (_, Err(Error::Unsupported(_))) => Ok(None),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

fn attach(inst: Instance, sym: Option<(MotivicClass, MotivicClass)>) -> Result<Instance> {
    match sym {
        Some((l, r)) => inst.with_symbolic(l, r),
        None => Ok(inst),
    }
}

fn space_name(space: &TowerSpace) -> String {
    if space.base == CountingSequence::affine(space.dim) {
        return format!("A^{}", space.dim);
    }
    if space.base == CountingSequence::projective(space.dim) {
        return format!("P^{}", space.dim);
    }
    match space.base.class() {
        Some(c) => format!("X[{c}] (dim {})", space.dim),
        None => format!("X (table, dim {})", space.dim),
    }
}

/// `#(X⟨n⟩/S_n) ≡ #(X^n/S_n) (mod q)`, with every twisted count recorded.
pub fn verify_polydiagonal(space: &TowerSpace, n: usize, qs: &[u64]) -> Result<IdentityCheck> {
    let group = PermGroup::symmetric(n)?;
    let sym = GroupAction::power(space.base.clone(), group.clone());
    let mut out = Vec::new();
    for &q in qs {
        let alg = Numeric { q };
        sym.validate(q)?;
        let lhs = polydiagonal_quotient(&alg, space, n)?;
        let rhs = sym.burnside(&alg)?;
        let mut inst = Instance::new(
            format!("{}<{n}> / S_{n}", space_name(space)),
            q,
            lhs,
            rhs,
            Relation::CongruentModQ,
        )?;
        for s in group.elements() {
            inst = inst.detail(
                format!("#X<{n}>^(σF), σ = {:?}", s.one_line()),
                tower_twisted_count(&alg, space, n, s)?,
            );
        }
        let symbolic = symbolic_pair(
            polydiagonal_quotient(&Symbolic, space, n),
            sym.burnside(&Symbolic),
        )?;
        out.push(attach(inst, symbolic)?);
    }
    Ok(IdentityCheck::new("polydiagonal", out))
}

fn zero_sum_action(r: u32, d: usize, m: usize, base: CountingSequence) -> Result<GroupAction> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidScenario("need d >= 1 and m >= 1".into()));
    }
    Ok(GroupAction::ZeroSumWreath {
        rank: r,
        parts: d,
        factors: m,
        base,
    })
}

/// `#(((A^r)^d)_0 / S_d)`.
pub fn zero_sum_quotient_count(r: u32, d: usize, q: u64) -> Result<i128> {
    let action = zero_sum_action(r, d, 1, CountingSequence::point())?;
    action.validate(q)?;
    action.burnside(&Numeric { q })
}

/// `#(((A^r)^d)_0 / S_d) = q^{r(d-1)}` over `(r, d, q)` triples.
pub fn check_zero_sum(instances: &[(u32, usize, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for &(r, d, q) in instances {
        let action = zero_sum_action(r, d, 1, CountingSequence::point())?;
        let lhs = zero_sum_quotient_count(r, d, q)?;
        let e = r * (d as u32 - 1);
        let inst = Instance::new(
            format!("((A^{r})^{d})_0 / S_{d}"),
            q,
            lhs,
            (q as i128).pow(e),
            Relation::Equal,
        )?
        .with_symbolic(action.burnside(&Symbolic)?, MotivicClass::l_power(e))?;
        out.push(inst);
    }
    Ok(IdentityCheck::new("zero-sum", out))
}

/// `#((A^1 × Y)^d / S_d) = q^d · #(Y^d / S_d)`.
pub fn totaro_factor_check(y: &CountingSequence, d: usize, qs: &[u64]) -> Result<IdentityCheck> {
    let line = y.product(&CountingSequence::affine(1))?;
    let lhs_action = GroupAction::symmetric_power(line, d)?;
    let rhs_action = GroupAction::symmetric_power(y.clone(), d)?;
    let mut out = Vec::new();
    for &q in qs {
        let alg = Numeric { q };
        lhs_action.validate(q)?;
        let lhs = lhs_action.burnside(&alg)?;
        let base = rhs_action.burnside(&alg)?;
        let inst = Instance::new(
            format!("(A^1 × Y)^{d} / S_{d}"),
            q,
            lhs,
            (q as i128).pow(d as u32) * base,
            Relation::Equal,
        )?
        .detail("#(Y^d/S_d)", base);
        let symbolic = symbolic_pair(
            lhs_action.burnside(&Symbolic),
            rhs_action
                .burnside(&Symbolic)
                .map(|c| &MotivicClass::l_power(d as u32) * &c),
        )?;
        out.push(attach(inst, symbolic)?);
    }
    Ok(IdentityCheck::new("totaro", out))
}

/// `E = ((A^r)^d)_0 × X`: `#(E^m / (S_d^m ⋊ S_m)) = q^{r(d-1)m} · #(X^m / S_m)`.
pub fn zero_sum_bundle_fiber_congruence(
    r: u32,
    d: usize,
    m: usize,
    x: &CountingSequence,
    qs: &[u64],
) -> Result<IdentityCheck> {
    let total = zero_sum_action(r, d, m, x.clone())?;
    let base = GroupAction::symmetric_power(x.clone(), m)?;
    let e = r * (d as u32 - 1) * m as u32;
    let mut out = Vec::new();
    for &q in qs {
        let alg = Numeric { q };
        total.validate(q)?;
        let lhs = total.burnside(&alg)?;
        let b = base.burnside(&alg)?;
        let qi = q as i128;
        let mut inst = Instance::new(
            format!("(((A^{r})^{d})_0 × X)^{m} / (S_{d}^{m} ⋊ S_{m})"),
            q,
            lhs,
            qi.pow(e) * b,
            Relation::Equal,
        )?
        .detail("#(X^m/S_m)", b)
        .detail("fibre count", qi.pow(e));
        if e > 0 {
            inst = inst.condition("total count ≡ 0 (mod q)", lhs.rem_euclid(qi) == 0);
        }
        let symbolic = symbolic_pair(
            total.burnside(&Symbolic),
            base.burnside(&Symbolic)
                .map(|c| &MotivicClass::l_power(e) * &c),
        )?;
        out.push(attach(inst, symbolic)?);
    }
    Ok(IdentityCheck::new("zero-sum-bundle", out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_shapes() {
        let sizes = |n| -> Vec<usize> {
            build_tower(n)
                .unwrap()
                .stages
                .iter()
                .map(|s| s.centers.len())
                .collect()
        };
        assert_eq!(sizes(2), vec![1]);
        assert_eq!(sizes(3), vec![1, 3]);
        assert_eq!(sizes(4), vec![1, 7, 6]);
        assert!(build_tower(1).is_err());
        assert!(build_tower(5).is_err());
        let t = build_tower(4).unwrap();
        assert_eq!(t.stages[1].orbits.len(), 2);
        assert_eq!(t.stages[2].traces.len(), 6 * 8);
        let c = &t.stages[0].centers[0];
        assert_eq!(c.codim(2), 6);
    }

    #[test]
    fn normal_bundles() {
        let p = SetPartition::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let nb = normal_bundle_model(&p);
        assert_eq!(nb.summands.len(), 2);
        assert_eq!(nb.rank(3), 6);
        assert_eq!(
            normal_bundle_model(&SetPartition::discrete(3)).relative_rank,
            0
        );
    }

    #[test]
    fn tower_counts() {
        let id3 = Permutation::identity(3);
        assert_eq!(
            tower_twisted_count(&Numeric { q: 2 }, &TowerSpace::affine(2), 3, &id3).unwrap(),
            264
        );
        let p2 = TowerSpace::projective(2);
        let alg = Numeric { q: 2 };
        assert_eq!(polydiagonal_quotient(&alg, &p2, 2).unwrap(), 49);
        let c = verify_polydiagonal(&p2, 2, &[2]).unwrap();
        assert!(c.pass);
        assert_eq!((c.instances[0].lhs, c.instances[0].rhs), (49, 35));
        // for curves the stage-2 blowups are divisorial
        let a1 = TowerSpace::affine(1);
        let sym = tower_twisted_count(&Symbolic, &a1, 3, &id3).unwrap();
        assert_eq!(sym, "L^3 + L^2".parse::<MotivicClass>().unwrap());
        assert!(tower_twisted_count(&alg, &a1, 4, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn zero_sum_family() {
        assert_eq!(zero_sum_quotient_count(1, 3, 2).unwrap(), 4);
        assert_eq!(zero_sum_quotient_count(2, 2, 5).unwrap(), 25);
        assert!(
            check_zero_sum(&[(1, 2, 3), (2, 3, 5), (3, 1, 7)])
                .unwrap()
                .pass
        );
        let t = totaro_factor_check(&CountingSequence::projective(1), 2, &[3]).unwrap();
        assert!(t.pass);
        assert_eq!(t.instances[0].lhs, 117);
        let b =
            zero_sum_bundle_fiber_congruence(1, 2, 2, &CountingSequence::affine(1), &[3]).unwrap();
        assert!(b.pass);
        assert_eq!(b.instances[0].lhs, 81);
    }
}
