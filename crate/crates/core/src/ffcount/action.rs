use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CountAlgebra, CountingSequence, PrimePower};
use crate::error::{Error, Result};
use crate::partitions::factorial;
use crate::perm::{PermGroup, Permutation};

/// Which piece of a linear representation `V` is being counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// `V`
    Affine,
    /// `V ∖ 0`, the tautological `G_m`-torsor over `P(V)`
    Punctured,
    /// `P(V)`
    Projective,
    /// the open torus where every coordinate is nonzero
    Torus,
    /// `V` blown up at the origin
    BlownUpOrigin,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::Affine => "V",
            Ambient::Punctured => "V∖0",
            Ambient::Projective => "P(V)",
            Ambient::Torus => "T(V)",
            Ambient::BlownUpOrigin => "Bl_0 V",
        })
    }
}

/// A linear representation of a finite group, with a chosen basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// `μ_k` acting on coordinate `i` through `ζ^{w_i}`.
    Diagonal { weights: Vec<u32>, k: u32 },
    /// Permutation matrices of `group` on `degree` coordinates, restricted to
    /// the sum-zero hyperplane when `zero_sum`, plus `trivial` fixed coordinates.
    Permutation {
        group: PermGroup,
        zero_sum: bool,
        trivial: u32,
    },
}

impl Representation {
    pub fn diagonal(weights: Vec<u32>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::range("k", 0, 1, u32::MAX as i128));
        }
        let weights = weights.into_iter().map(|w| w % k).collect();
        Ok(Representation::Diagonal { weights, k })
    }

    pub fn permutation(group: PermGroup) -> Self {
        Representation::Permutation {
            group,
            zero_sum: false,
            trivial: 0,
        }
    }

    /// The sum-zero subrepresentation of the permutation representation.
    pub fn zero_sum(group: PermGroup) -> Self {
        Representation::Permutation {
            group,
            zero_sum: true,
            trivial: 0,
        }
    }

    /// `V ⊕ 1`.
    pub fn with_trivial_summand(&self) -> Self {
        match self {
            Representation::Diagonal { weights, k } => {
                let mut w = weights.clone();
                w.push(0);
                Representation::Diagonal { weights: w, k: *k }
            }
            Representation::Permutation {
                group,
                zero_sum,
                trivial,
            } => Representation::Permutation {
                group: group.clone(),
                zero_sum: *zero_sum,
                trivial: trivial + 1,
            },
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            Representation::Diagonal { weights, .. } => weights.len() as u32,
            Representation::Permutation {
                group,
                zero_sum,
                trivial,
            } => group.degree() as u32 - u32::from(*zero_sum) + trivial,
        }
    }

    pub fn group_order(&self) -> usize {
        match self {
            Representation::Diagonal { k, .. } => *k as usize,
            Representation::Permutation { group, .. } => group.order(),
        }
    }

    /// Orders of the group elements, by index.
    pub fn element_order(&self, g: usize) -> usize {
        match self {
            Representation::Diagonal { k, .. } => *k as usize / crate::perm::gcd(g, *k as usize),
            Representation::Permutation { group, .. } => group.elements()[g].order(),
        }
    }

    pub fn exponent(&self) -> usize {
        (0..self.group_order()).fold(1, |acc, g| crate::perm::lcm(acc, self.element_order(g)))
    }

    /// Diagonal `μ_k` needs its roots of unity rational over `F_q`.
    pub fn check_tame(&self, q: u64) -> Result<()> {
        if let Representation::Diagonal { k, .. } = self {
            if !(q - 1).is_multiple_of(*k as u64) {
                return Err(Error::NotTame(format!(
                    "μ_{k} acts diagonally but q = {q} is not 1 mod {k}"
                )));
            }
        }
        Ok(())
    }

    /// Twisted count of the chosen piece of `V` under element `g`.
    pub fn twisted_count<A: CountAlgebra>(
        &self,
        alg: &A,
        ambient: Ambient,
        g: usize,
    ) -> Result<A::Value> {
        let n = self.dim();
        let one = alg.int(1);
        Ok(match ambient {
            Ambient::Affine => alg.l_power(n),
            Ambient::Punctured => alg.sub(&alg.l_power(n), &one),
            Ambient::Projective => projective_or_empty(alg, n),
            Ambient::BlownUpOrigin => alg.add(
                &alg.sub(&alg.l_power(n), &one),
                &projective_or_empty(alg, n),
            ),
            Ambient::Torus => match self {
                Representation::Diagonal { .. } => alg.torus(n, 1),
                Representation::Permutation { zero_sum: true, .. } => {
                    return Err(Error::Unsupported(
                        "torus of a sum-zero representation".into(),
                    ))
                }
                Representation::Permutation { group, trivial, .. } => {
                    let cycles = group.elements()[g].cycles();
                    let moved = cycles.iter().fold(one.clone(), |acc, c| {
                        alg.mul(&acc, &alg.torus(1, c.len() as u32))
                    });
                    alg.mul(&moved, &alg.torus(*trivial, 1))
                }
            },
        })
    }
}

fn projective_or_empty<A: CountAlgebra>(alg: &A, n: u32) -> A::Value {
    if n == 0 {
        alg.int(0)
    } else {
        alg.projective(n - 1, 1)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Diagonal { weights, k } => {
                let w: Vec<String> = weights.iter().map(u32::to_string).collect();
                write!(
                    f,
                    "μ_{k} on A^{} with weights ({})",
                    weights.len(),
                    w.join(",")
                )
            }
            Representation::Permutation {
                group,
                zero_sum,
                trivial,
            } => {
                let d = group.degree();
                let name = group_name(group);
                if *zero_sum {
                    write!(f, "{name} on (A^{d})_0")?;
                } else {
                    write!(f, "{name} permuting A^{d}")?;
                }
                if *trivial > 0 {
                    write!(f, " ⊕ {trivial}")?;
                }
                Ok(())
            }
        }
    }
}

fn group_name(g: &PermGroup) -> String {
    let d = g.degree();
    if g.order() == 1 {
        "1".into()
    } else if g.order() as u64 == factorial(d) {
        format!("S_{d}")
    } else {
        format!("G(order {}) ⊂ S_{d}", g.order())
    }
}

/// A finite group acting on a variety, described well enough to compute every
/// twisted count `#X^{gF}` in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupAction {
    /// A subgroup of `S_n` permuting the factors of `Z^n`.
    PowerPermutation {
        base: CountingSequence,
        group: PermGroup,
    },
    /// A linear representation, restricted to one of its standard pieces.
    Linear {
        rep: Representation,
        ambient: Ambient,
    },
    /// `inner` with an extra group of order `extra` acting trivially.
    Inflated {
        inner: Box<GroupAction>,
        extra: usize,
    },
    /// `r` disjoint copies of the variety of `inner`, with `copies ⊂ S_r`
    /// permuting them; the group is `H × C`, element `(h, c)` at index
    /// `h·|C| + c`.
    Copies {
        copies: PermGroup,
        inner: Box<GroupAction>,
    },
    /// Equivariant blowup of `ambient` along an invariant smooth center of
    /// codimension `codim`; element indices of both actions must correspond.
    Blowup {
        ambient: Box<GroupAction>,
        center: Box<GroupAction>,
        codim: u32,
    },
    /// `((A^r)^d_0 × X)^m` under `S_d^m ⋊ S_m`: each factor carries `d`
    /// vectors of `A^r` summing to zero, permuted by its own `S_d`.
    ZeroSumWreath {
        rank: u32,
        parts: usize,
        factors: usize,
        base: CountingSequence,
    },
}

impl GroupAction {
    pub fn power(base: CountingSequence, group: PermGroup) -> Self {
        GroupAction::PowerPermutation { base, group }
    }

    /// `Sym^n Z`.
    pub fn symmetric_power(base: CountingSequence, n: usize) -> Result<Self> {
        Ok(GroupAction::PowerPermutation {
            base,
            group: PermGroup::symmetric(n)?,
        })
    }

    pub fn linear(rep: Representation, ambient: Ambient) -> Self {
        GroupAction::Linear { rep, ambient }
    }

    /// `base` with a trivially acting group of the given order.
    pub fn trivial(base: CountingSequence, order: usize) -> Self {
        GroupAction::Inflated {
            inner: Box::new(GroupAction::PowerPermutation {
                base,
                group: PermGroup::trivial(1),
            }),
            extra: order,
        }
    }

    pub fn group_order(&self) -> usize {
        match self {
            GroupAction::PowerPermutation { group, .. } => group.order(),
            GroupAction::Linear { rep, .. } => rep.group_order(),
            GroupAction::Inflated { inner, extra } => inner.group_order() * extra,
            GroupAction::Copies { copies, inner } => inner.group_order() * copies.order(),
            GroupAction::Blowup { ambient, .. } => ambient.group_order(),
            GroupAction::ZeroSumWreath { parts, factors, .. } => {
                (factorial(*parts) as usize).pow(*factors as u32) * factorial(*factors) as usize
            }
        }
    }

    /// Rejects `q` for which the action is not tame, and malformed composites.
    pub fn validate(&self, q: u64) -> Result<()> {
        PrimePower::new(q)?;
        match self {
            GroupAction::PowerPermutation { .. } | GroupAction::ZeroSumWreath { .. } => Ok(()),
            GroupAction::Linear { rep, ambient } => {
                if *ambient == Ambient::Torus {
                    if let Representation::Permutation { zero_sum: true, .. } = rep {
                        return Err(Error::InvalidScenario(
                            "torus of a sum-zero representation".into(),
                        ));
                    }
                }
                rep.check_tame(q)
            }
            GroupAction::Inflated { inner, extra } => {
                if *extra == 0 {
                    return Err(Error::InvalidScenario("group of order 0".into()));
                }
                inner.validate(q)
            }
            GroupAction::Copies { inner, .. } => inner.validate(q),
            GroupAction::Blowup {
                ambient,
                center,
                codim,
            } => {
                if *codim == 0 {
                    return Err(Error::InvalidScenario(
                        "blowup center of codimension 0".into(),
                    ));
                }
                if ambient.group_order() != center.group_order() {
                    return Err(Error::InvalidScenario(format!(
                        "ambient group of order {} but center group of order {}",
                        ambient.group_order(),
                        center.group_order()
                    )));
                }
                ambient.validate(q)?;
                center.validate(q)
            }
        }
    }

    /// `#X^{gF}` for the element with index `g`.
    pub fn twisted_count<A: CountAlgebra>(&self, alg: &A, g: usize) -> Result<A::Value> {
        match self {
            GroupAction::PowerPermutation { base, group } => {
                twisted_count_power_in(alg, base, &group.elements()[g])
            }
            GroupAction::Linear { rep, ambient } => rep.twisted_count(alg, *ambient, g),
            GroupAction::Inflated { inner, extra } => inner.twisted_count(alg, g / extra),
            GroupAction::Copies { copies, inner } => {
                let c = &copies.elements()[g % copies.order()];
                let fixed = (0..copies.degree()).filter(|&i| c.apply(i) == i).count();
                let t = inner.twisted_count(alg, g / copies.order())?;
                Ok(alg.mul(&alg.int(fixed as i128), &t))
            }
            GroupAction::Blowup {
                ambient,
                center,
                codim,
            } => {
                let a = ambient.twisted_count(alg, g)?;
                let z = center.twisted_count(alg, g)?;
                Ok(blowup_in(alg, &a, &z, *codim))
            }
            GroupAction::ZeroSumWreath {
                rank,
                parts,
                factors,
                base,
            } => {
                let (_, s) = wreath_element(*parts, *factors, g);
                wreath_twisted(alg, *rank, *parts, base, &s)
            }
        }
    }

    /// `Σ_g #X^{gF}`.
    pub fn twisted_sum<A: CountAlgebra>(&self, alg: &A) -> Result<A::Value> {
        if let GroupAction::ZeroSumWreath {
            rank,
            parts,
            factors,
            base,
        } = self
        {
            // only the S_m component matters; every τ-tuple contributes equally
            let per_s = PermGroup::symmetric(*factors)?
                .elements()
                .iter()
                .map(|s| wreath_twisted(alg, *rank, *parts, base, s))
                .collect::<Result<Vec<_>>>()?;
            let inner = (factorial(*parts) as i128).pow(*factors as u32);
            return Ok(alg.mul(&alg.int(inner), &alg.sum(per_s)));
        }
        let counts = (0..self.group_order())
            .into_par_iter()
            .map(|g| self.twisted_count(alg, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(alg.sum(counts))
    }

    /// `(1/|G|) Σ_g #X^{gF}`.
    pub fn burnside<A: CountAlgebra>(&self, alg: &A) -> Result<A::Value> {
        alg.div_exact(&self.twisted_sum(alg)?, self.group_order())
    }
}

impl fmt::Display for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAction::PowerPermutation { base, group } => {
                write!(
                    f,
                    "({})^{} / {}",
                    seq_name(base),
                    group.degree(),
                    group_name(group)
                )
            }
            GroupAction::Linear { rep, ambient } => write!(f, "{ambient} for {rep}"),
            GroupAction::Inflated { inner, extra } => {
                write!(f, "{inner} (× order-{extra} trivial)")
            }
            GroupAction::Copies { copies, inner } => {
                write!(
                    f,
                    "{} copies of [{inner}] permuted by {}",
                    copies.degree(),
                    group_name(copies)
                )
            }
            GroupAction::Blowup {
                ambient,
                center,
                codim,
            } => {
                write!(f, "Bl of [{ambient}] along [{center}] (codim {codim})")
            }
            GroupAction::ZeroSumWreath {
                rank,
                parts,
                factors,
                base,
            } => write!(
                f,
                "(((A^{rank})^{parts})_0 × {})^{factors} / S_{parts}^{factors} ⋊ S_{factors}",
                seq_name(base)
            ),
        }
    }
}

fn seq_name(s: &CountingSequence) -> String {
    match s {
        CountingSequence::Polynomial(c) => format!("[{c}]"),
        CountingSequence::Table { q, counts } => {
            format!("table over F_{q} ({} terms)", counts.len())
        }
    }
}

/// Splits a wreath-product index into `(τ_1..τ_m, s)`.
fn wreath_element(parts: usize, factors: usize, g: usize) -> (Vec<usize>, Permutation) {
    let outer = factorial(factors) as usize;
    let inner = factorial(parts) as usize;
    let s_idx = g % outer;
    let mut rest = g / outer;
    let taus = (0..factors)
        .map(|_| {
            let t = rest % inner;
            rest /= inner;
            t
        })
        .collect();
    let s = crate::partitions::all_permutations(factors).swap_remove(s_idx);
    (taus, s)
}

fn wreath_twisted<A: CountAlgebra>(
    alg: &A,
    rank: u32,
    parts: usize,
    base: &CountingSequence,
    s: &Permutation,
) -> Result<A::Value> {
    // a cycle of length c glues c factors into one over F_{q^c}; the sum-zero
    // fibre is a Lang-trivial twist of A^{r(d-1)} over that field
    let fibre = rank * (parts as u32 - 1);
    let mut acc = alg.int(1);
    for cyc in s.cycles() {
        let c = cyc.len() as u32;
        let piece = alg.mul(&alg.base_count(base, c)?, &alg.l_power(c * fibre));
        acc = alg.mul(&acc, &piece);
    }
    Ok(acc)
}

pub(crate) fn twisted_count_power_in<A: CountAlgebra>(
    alg: &A,
    base: &CountingSequence,
    sigma: &Permutation,
) -> Result<A::Value> {
    let mut acc = alg.int(1);
    for cyc in sigma.cycles() {
        acc = alg.mul(&acc, &alg.base_count(base, cyc.len() as u32)?);
    }
    Ok(acc)
}

fn blowup_in<A: CountAlgebra>(
    alg: &A,
    ambient: &A::Value,
    center: &A::Value,
    codim: u32,
) -> A::Value {
    let excess = alg.sub(&alg.projective(codim - 1, 1), &alg.int(1));
    alg.add(ambient, &alg.mul(center, &excess))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffcount::{Numeric, Symbolic};

    fn n(q: u64) -> Numeric {
        Numeric { q }
    }

    #[test]
    fn symmetric_powers_of_p1() {
        for q in [2, 3, 4, 5] {
            for k in 1..=4 {
                let a = GroupAction::symmetric_power(CountingSequence::projective(1), k).unwrap();
                let expect: i128 = (0..=k as u32).map(|j| (q as i128).pow(j)).sum();
                assert_eq!(a.burnside(&n(q)).unwrap(), expect);
            }
        }
    }

    #[test]
    fn linear_quotients() {
        let rep = Representation::diagonal(vec![1, 2], 3).unwrap();
        let v = GroupAction::linear(rep.clone(), Ambient::Affine);
        assert_eq!(v.burnside(&n(7)).unwrap(), 49);
        assert!(v.validate(5).is_err());
        let t = GroupAction::linear(rep, Ambient::Torus);
        assert_eq!(t.burnside(&n(7)).unwrap(), 36);
        let s3 = Representation::permutation(PermGroup::symmetric(3).unwrap());
        let pv = GroupAction::linear(s3.clone(), Ambient::Projective);
        assert_eq!(pv.burnside(&n(2)).unwrap(), 7);
        assert_eq!(
            GroupAction::linear(s3, Ambient::Affine)
                .burnside(&n(2))
                .unwrap(),
            8
        );
        // swap on G_m^2: (q-1)^2 and q^2 - 1 averaged
        let s2 = Representation::permutation(PermGroup::symmetric(2).unwrap());
        assert_eq!(
            GroupAction::linear(s2, Ambient::Torus)
                .burnside(&n(5))
                .unwrap(),
            (16 + 24) / 2
        );
    }

    #[test]
    fn copies_and_blowups() {
        let inner = GroupAction::power(CountingSequence::affine(1), PermGroup::trivial(1));
        let x = GroupAction::Copies {
            copies: PermGroup::symmetric(2).unwrap(),
            inner: Box::new(inner),
        };
        assert_eq!(x.burnside(&n(3)).unwrap(), 3);
        let rep = Representation::diagonal(vec![1, 1], 2).unwrap();
        let bl = GroupAction::Blowup {
            ambient: Box::new(GroupAction::linear(rep.clone(), Ambient::Affine)),
            center: Box::new(GroupAction::trivial(CountingSequence::point(), 2)),
            codim: 2,
        };
        assert_eq!(bl.burnside(&n(3)).unwrap(), 12);
        assert_eq!(
            bl.burnside(&n(3)).unwrap(),
            GroupAction::linear(rep, Ambient::BlownUpOrigin)
                .burnside(&n(3))
                .unwrap()
        );
    }

    #[test]
    fn zero_sum_wreath() {
        for (r, d, q) in [(2u32, 3usize, 2u64), (1, 4, 3), (0, 2, 5), (3, 1, 7)] {
            let w = GroupAction::ZeroSumWreath {
                rank: r,
                parts: d,
                factors: 1,
                base: CountingSequence::point(),
            };
            assert_eq!(
                w.burnside(&n(q)).unwrap(),
                (q as i128).pow(r * (d as u32 - 1))
            );
        }
        let w = GroupAction::ZeroSumWreath {
            rank: 1,
            parts: 2,
            factors: 2,
            base: CountingSequence::affine(1),
        };
        assert_eq!(w.burnside(&n(3)).unwrap(), 81);
    }

    #[test]
    fn symbolic_burnside_is_the_count_polynomial() {
        let a = GroupAction::symmetric_power(CountingSequence::projective(1), 3).unwrap();
        assert_eq!(
            a.burnside(&Symbolic).unwrap(),
            "1 + L + L^2 + L^3".parse().unwrap()
        );
    }
}
