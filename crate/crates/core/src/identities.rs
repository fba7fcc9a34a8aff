//! Quotient identities as executable checks.
//!
//! Every check evaluates both sides of an identity as exact point counts of
//! quotient varieties over `F_q`, and additionally recomputes both sides as
//! count polynomials in `Z[L]` through the symbolic backend, feeding them to
//! the closed-form class formulas of [`crate::classes`]. An instance passes
//! when the integers satisfy the stated relation, the symbolic statement holds
//! in `Z[L]` (or modulo `L`), and the symbolic classes evaluated at `L = q`
//! reproduce the integers.

use std::fmt;

use serde::Serialize;

use crate::classes::{
    blowup_class, line_bundle_quotient, projective_space_class, sym_power_class, torsor_quotient,
    vector_bundle_quotient, MotivicClass,
};
use crate::error::{Error, Result};
use crate::ffcount::{
    oracle_orbit_count, Ambient, CountingSequence, ExplicitVariety, FieldSpec, GroupAction,
    Numeric, Representation, Symbolic,
};
use crate::perm::PermGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    CongruentModQ,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equal => "=",
            Relation::CongruentModQ => "≡ (mod q)",
        })
    }
}

/// The same identity as count polynomials in `Z[L]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicStatement {
    pub lhs: MotivicClass,
    pub rhs: MotivicClass,
    /// `Equal` in `Z[L]`, or `CongruentModQ` meaning equal modulo `L`.
    pub relation: Relation,
    pub holds: bool,
    pub lhs_at_q: i128,
    pub rhs_at_q: i128,
    /// Both evaluations reproduce the numeric sides.
    pub coherent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub label: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Detail {
    pub label: String,
    pub value: i128,
}

/// One `(scenario, q)` evaluation of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub scenario: String,
    pub q: u64,
    pub lhs: i128,
    pub rhs: i128,
    pub relation: Relation,
    pub holds: bool,
    pub conditions: Vec<Condition>,
    pub symbolic: Option<SymbolicStatement>,
    pub details: Vec<Detail>,
    pub field: FieldSpec,
    pub pass: bool,
}

impl Instance {
    pub fn new(
        scenario: impl Into<String>,
        q: u64,
        lhs: i128,
        rhs: i128,
        relation: Relation,
    ) -> Result<Self> {
        let holds = match relation {
            Relation::Equal => lhs == rhs,
            Relation::CongruentModQ => (lhs - rhs).rem_euclid(q as i128) == 0,
        };
        Ok(Instance {
            scenario: scenario.into(),
            q,
            lhs,
            rhs,
            relation,
            holds,
            conditions: Vec::new(),
            symbolic: None,
            details: Vec::new(),
            field: FieldSpec::new(q, 1)?,
            pass: holds,
        })
    }

    pub fn with_symbolic(mut self, lhs: MotivicClass, rhs: MotivicClass) -> Result<Self> {
        let holds = match self.relation {
            Relation::Equal => lhs == rhs,
            Relation::CongruentModQ => lhs.mod_l() == rhs.mod_l(),
        };
        let lhs_at_q = lhs.evaluate_pure(self.q as i128)?;
        let rhs_at_q = rhs.evaluate_pure(self.q as i128)?;
        self.symbolic = Some(SymbolicStatement {
            coherent: lhs_at_q == self.lhs && rhs_at_q == self.rhs,
            lhs,
            rhs,
            relation: self.relation,
            holds,
            lhs_at_q,
            rhs_at_q,
        });
        self.refresh();
        Ok(self)
    }

    pub fn condition(mut self, label: impl Into<String>, holds: bool) -> Self {
        self.conditions.push(Condition {
            label: label.into(),
            holds,
        });
        self.refresh();
        self
    }

    pub fn detail(mut self, label: impl Into<String>, value: i128) -> Self {
        self.details.push(Detail {
            label: label.into(),
            value,
        });
        self
    }

    fn refresh(&mut self) {
        self.pass = self.holds
            && self.conditions.iter().all(|c| c.holds)
            && self.symbolic.as_ref().is_none_or(|s| s.holds && s.coherent);
    }
}

/// A named identity with its evaluated instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// The identity being checked, as a formula.
    pub anchor: String,
    pub instances: Vec<Instance>,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: &str, instances: Vec<Instance>) -> Self {
        let anchor = describe(name)
            .map(|c| c.formula)
            .unwrap_or_default()
            .to_string();
        let pass = !instances.is_empty() && instances.iter().all(|i| i.pass);
        IdentityCheck {
            name: name.to_string(),
            anchor,
            instances,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.pass)
    }
}

/// Catalog entry shown by `explain`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckInfo {
    pub name: &'static str,
    pub formula: &'static str,
    pub statement: &'static str,
    pub scenario_example: &'static str,
}

pub const CATALOG: &[CheckInfo] = &[
    CheckInfo {
        name: "component-reduction",
        formula: "X = G ×_{G_1} X_1  ⇒  X_1/G_1 ≅ X/G",
        statement: "r disjoint copies of Z permuted transitively by G: #(X/G) = #(Z/G_1), G_1 the stabilizer of one copy",
        scenario_example: r#"{"check":"component-reduction","Z":{"kind":"affine","dim":1},"copies":2,"q":[3]}"#,
    },
    CheckInfo {
        name: "torsor",
        formula: "[P/G] = (L - 1)[X/G]",
        statement: "equivariant G_m-torsor V∖0 → P(V): #((V∖0)/G) = (q - 1)·#(P(V)/G)",
        scenario_example: r#"{"check":"torsor","V":{"dim":2,"weights":[1,2],"k":3},"q":[7,13]}"#,
    },
    CheckInfo {
        name: "vb-projectivization",
        formula: "[V/G] = (L - 1)[P(V)/G] + 1",
        statement: "#(V/G) = (q - 1)·#(P(V)/G) + 1, and #(P(V)/G) ≡ 1 ⇔ #(V/G) ≡ 0 (mod q)",
        scenario_example: r#"{"check":"vb-projectivization","V":{"permutation":3},"q":[2,5]}"#,
    },
    CheckInfo {
        name: "pv-congruence",
        formula: "[P(V' ⊕ 1)/G] = L[P(V')/G] + 1",
        statement: "#(P(V' ⊕ 1)/G) = q·#(P(V')/G) + 1, hence ≡ 1 (mod q)",
        scenario_example: r#"{"check":"pv-congruence","V":{"dim":2,"weights":[1,2],"k":3},"q":[7]}"#,
    },
    CheckInfo {
        name: "line-bundle",
        formula: "[L/G] = [P/G] + [X/G] = L[X/G]",
        statement: "tautological line bundle over P(V) (= Bl_0 V): #(Tot/G) = #((V∖0)/G) + #(P(V)/G) = q·#(P(V)/G)",
        scenario_example: r#"{"check":"line-bundle","V":{"dim":2,"weights":[1,1],"k":3},"q":[7]}"#,
    },
    CheckInfo {
        name: "torus-strata",
        formula: "[V/H] = 0 in K_0(Var)/(L) for diagonal H",
        statement: "coordinate strata G_m^S of A^d are H-stable with #(G_m^S/H) = (q - 1)^|S|, so #(A^d/H) = q^d ≡ 0 (mod q)",
        scenario_example: r#"{"check":"torus-strata","V":{"dim":3,"weights":[1,1,2],"k":3},"q":[7]}"#,
    },
    CheckInfo {
        name: "equivariant-blowup",
        formula: "[Bl_Z X / G] = [X/G] in K_0(Var)/(L)",
        statement: "#(Bl_Z X/G) ≡ #(X/G) (mod q) for a G-invariant smooth center Z",
        scenario_example: r#"{"check":"equivariant-blowup","blowup":{"origin":{"dim":2,"weights":[1,1],"k":2}},"q":[3]}"#,
    },
    CheckInfo {
        name: "symmetric-powers",
        formula: "ζ_Z(t) = Σ_n [Sym^n Z] t^n = Π_i (1 - L^i t)^{-a_i} for [Z] = Σ a_i L^i",
        statement: "Burnside count of Z^n/S_n equals the t^n coefficient of the zeta product",
        scenario_example: r#"{"check":"symmetric-powers","X":{"kind":"projective","dim":1},"n":4,"q":[2,3]}"#,
    },
    CheckInfo {
        name: "zero-sum",
        formula: "((A^r)^d)_0 / S_d → ((A^{r-1})^d)_0 / S_d stratified by vector bundles of rank d - 1",
        statement: "#(((A^r)^d)_0/S_d) = q^{r(d-1)}",
        scenario_example: r#"{"check":"zero-sum","r":2,"d":3,"q":[5,7]}"#,
    },
    CheckInfo {
        name: "totaro",
        formula: "[(A^1 × Y)^d / S_d] = L^d [Y^d / S_d]",
        statement: "#((A^1 × Y)^d/S_d) = q^d·#(Y^d/S_d)",
        scenario_example: r#"{"check":"totaro","Y":{"kind":"projective","dim":1},"d":2,"q":[3]}"#,
    },
    CheckInfo {
        name: "zero-sum-bundle",
        formula: "E/(S_d^m ⋊ S_m) → X^m/S_m stratified by vector bundles, E = ((A^r)^d)_0 × X",
        statement: "#(E/(S_d^m ⋊ S_m)) = q^{r(d-1)m}·#(X^m/S_m), so every fibre count is ≡ 0 (mod q)",
        scenario_example: r#"{"check":"zero-sum-bundle","r":1,"d":2,"m":2,"X":{"kind":"affine","dim":1},"q":[3]}"#,
    },
    CheckInfo {
        name: "polydiagonal",
        formula: "[X⟨n⟩/S_n] = [X^n/S_n] in K_0(Var)/(L)",
        statement: "the polydiagonal compactification (iterated blowup of X^n along polydiagonals) has #(X⟨n⟩/S_n) ≡ #(X^n/S_n) (mod q)",
        scenario_example: r#"{"check":"polydiagonal","X":{"kind":"projective","dim":2},"n":3,"q":[2,3,5]}"#,
    },
    CheckInfo {
        name: "oracle-agreement",
        formula: "#(X/G)(F_q) = (1/|G|) Σ_g #X^{gF}",
        statement: "Burnside averaging of closed-form twisted counts equals direct enumeration of Frobenius-stable orbits",
        scenario_example: r#"{"check":"oracle-agreement","variety":{"power":{"factor":[{"projective":1}],"n":3}},"q":[2]}"#,
    },
];

pub fn describe(name: &str) -> Option<CheckInfo> {
    CATALOG.iter().find(|c| c.name == name).copied()
}

fn num(q: u64) -> Numeric {
    Numeric { q }
}

fn linear(rep: &Representation, ambient: Ambient) -> GroupAction {
    GroupAction::linear(rep.clone(), ambient)
}

/// Numeric and symbolic quotient counts of one action.
fn both(action: &GroupAction, q: u64) -> Result<(i128, MotivicClass)> {
    action.validate(q)?;
    Ok((action.burnside(&num(q))?, action.burnside(&Symbolic)?))
}

/// Disjoint copies of `Z` (with its own `H`-action) permuted by `copies`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentScenario {
    pub base: GroupAction,
    pub copies: PermGroup,
}

pub fn check_component_reduction(instances: &[(ComponentScenario, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (s, q) in instances {
        if !s.copies.is_transitive() {
            return Err(Error::InvalidScenario(
                "copies must be permuted transitively".into(),
            ));
        }
        let whole = GroupAction::Copies {
            copies: s.copies.clone(),
            inner: Box::new(s.base.clone()),
        };
        let stabilizer = s.copies.point_stabilizer(0).order();
        let piece = GroupAction::Inflated {
            inner: Box::new(s.base.clone()),
            extra: stabilizer,
        };
        let (l, ls) = both(&whole, *q)?;
        let (r, rs) = both(&piece, *q)?;
        out.push(
            Instance::new(whole.to_string(), *q, l, r, Relation::Equal)?.with_symbolic(ls, rs)?,
        );
    }
    Ok(IdentityCheck::new("component-reduction", out))
}

pub fn check_torsor(instances: &[(Representation, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (rep, q) in instances {
        let (p, ps) = both(&linear(rep, Ambient::Punctured), *q)?;
        let (x, xs) = both(&linear(rep, Ambient::Projective), *q)?;
        let inst = Instance::new(
            rep.to_string(),
            *q,
            p,
            (*q as i128 - 1) * x,
            Relation::Equal,
        )?
        .detail("#(P(V)/G)", x)
        .with_symbolic(ps, torsor_quotient(&xs))?;
        out.push(inst);
    }
    Ok(IdentityCheck::new("torsor", out))
}

pub fn check_vb_projectivization(instances: &[(Representation, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (rep, q) in instances {
        let qi = *q as i128;
        let (v, vs) = both(&linear(rep, Ambient::Affine), *q)?;
        let (x, xs) = both(&linear(rep, Ambient::Projective), *q)?;
        let pv_is_one = (x - 1).rem_euclid(qi) == 0;
        let v_is_zero = v.rem_euclid(qi) == 0;
        let inst = Instance::new(rep.to_string(), *q, v, (qi - 1) * x + 1, Relation::Equal)?
            .detail("#(P(V)/G)", x)
            .condition("#(P(V)/G) ≡ 1 ⇔ #(V/G) ≡ 0 (mod q)", pv_is_one == v_is_zero)
            .with_symbolic(vs, vector_bundle_quotient(&xs))?;
        out.push(inst);
    }
    Ok(IdentityCheck::new("vb-projectivization", out))
}

/// Instances give `V'`; the check adds the trivial summand itself.
pub fn check_pv_congruence(instances: &[(Representation, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (rep, q) in instances {
        let qi = *q as i128;
        let big = rep.with_trivial_summand();
        let (l, ls) = both(&linear(&big, Ambient::Projective), *q)?;
        let (x, xs) = both(&linear(rep, Ambient::Projective), *q)?;
        let rhs_class = &(&MotivicClass::lefschetz() * &xs) + &MotivicClass::one();
        let inst = Instance::new(format!("V' = {rep}"), *q, l, qi * x + 1, Relation::Equal)?
            .detail("#(P(V')/G)", x)
            .condition("#(P(V' ⊕ 1)/G) ≡ 1 (mod q)", (l - 1).rem_euclid(qi) == 0)
            .condition(
                "[P(V' ⊕ 1)/G] ≡ 1 (mod L)",
                ls.mod_l() == MotivicClass::one(),
            )
            .with_symbolic(ls, rhs_class)?;
        out.push(inst);
    }
    Ok(IdentityCheck::new("pv-congruence", out))
}

pub fn check_line_bundle(instances: &[(Representation, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (rep, q) in instances {
        let qi = *q as i128;
        let (tot, tots) = both(&linear(rep, Ambient::BlownUpOrigin), *q)?;
        let (p, ps) = both(&linear(rep, Ambient::Punctured), *q)?;
        let (x, xs) = both(&linear(rep, Ambient::Projective), *q)?;
        let split = line_bundle_quotient(&xs);
        let inst = Instance::new(
            format!("O(-1) over P(V), {rep}"),
            *q,
            tot,
            qi * x,
            Relation::Equal,
        )?
        .detail("#((V∖0)/G)", p)
        .detail("#(P(V)/G)", x)
        .condition("#(Tot/G) = #((V∖0)/G) + #(P(V)/G)", tot == p + x)
        .condition("[(V∖0)/G] = (L - 1)[P(V)/G]", ps == split.torsor_part)
        .with_symbolic(tots, split.total)?;
        out.push(inst);
    }
    Ok(IdentityCheck::new("line-bundle", out))
}

/// Subsets of `0..d` as bitmasks.
fn subsets(d: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << d).map(move |mask| (0..d).filter(|&i| mask & (1 << i) != 0).collect())
}

pub fn check_torus_strata(instances: &[(Representation, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (rep, q) in instances {
        let Representation::Diagonal { weights, k } = rep else {
            return Err(Error::InvalidScenario(
                "torus strata need a diagonal action".into(),
            ));
        };
        let qi = *q as i128;
        let d = weights.len();
        let (total, total_s) = both(&linear(rep, Ambient::Affine), *q)?;
        let mut inst = Instance::new(
            rep.to_string(),
            *q,
            total,
            qi.pow(d as u32),
            Relation::Equal,
        )?;
        let mut strata_sum = 0;
        for s in subsets(d) {
            let sub = Representation::diagonal(s.iter().map(|&i| weights[i]).collect(), *k)?;
            let (c, cs) = both(&linear(&sub, Ambient::Torus), *q)?;
            strata_sum += c;
            let label: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            let expect = (qi - 1).pow(s.len() as u32);
            inst = inst
                .detail(format!("G_m^{{{}}}/H", label.join(",")), c)
                .condition(
                    format!("#(G_m^{{{}}}/H) = (q - 1)^{}", label.join(","), s.len()),
                    c == expect,
                )
                .condition(
                    format!("[G_m^{{{}}}/H] = (L - 1)^{}", label.join(","), s.len()),
                    cs == (MotivicClass::lefschetz() - MotivicClass::one()).pow(s.len() as u32),
                );
        }
        inst = inst
            .condition("strata counts sum to #(A^d/H)", strata_sum == total)
            .condition("#(A^d/H) ≡ 0 (mod q)", total.rem_euclid(qi) == 0)
            .condition("[A^d/H] ≡ 0 (mod L)", total_s.mod_l().is_zero())
            .with_symbolic(total_s, MotivicClass::l_power(d as u32))?;
        out.push(inst);
    }
    Ok(IdentityCheck::new("torus-strata", out))
}

/// `action` must be a [`GroupAction::Blowup`].
pub fn check_equivariant_blowup(instances: &[(GroupAction, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (action, q) in instances {
        let GroupAction::Blowup {
            ambient,
            center,
            codim,
        } = action
        else {
            return Err(Error::InvalidScenario("expected a blowup scenario".into()));
        };
        let (b, bs) = both(action, *q)?;
        let (x, xs) = both(ambient, *q)?;
        let (z, zs) = both(center, *q)?;
        let mut inst = Instance::new(action.to_string(), *q, b, x, Relation::CongruentModQ)?
            .detail("#(Z/G)", z)
            .condition(
                "[Bl_Z X/G] = [X/G] + [Z/G]([P^{c-1}] - 1)",
                bs == blowup_class(&xs, &zs, *codim),
            );
        if *codim == 1 {
            inst = inst.condition("divisorial center: equality", b == x);
        }
        out.push(inst.with_symbolic(bs, xs)?);
    }
    Ok(IdentityCheck::new("equivariant-blowup", out))
}

/// `Sym^n Z` for cell-decomposable `Z`, against the zeta-series coefficient.
pub fn check_symmetric_powers(instances: &[(MotivicClass, usize, u64)]) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (class, n, q) in instances {
        let action =
            GroupAction::symmetric_power(CountingSequence::polynomial(class.clone())?, *n)?;
        let (l, ls) = both(&action, *q)?;
        let zeta = sym_power_class(class, *n)?;
        let rhs = zeta.evaluate_pure(*q as i128)?;
        let mut inst = Instance::new(format!("Sym^{n}[{class}]"), *q, l, rhs, Relation::Equal)?;
        if *class == projective_space_class(1) {
            let pn = projective_space_class(*n as u32).evaluate_pure(*q as i128)?;
            inst = inst.condition("#Sym^n P^1 = #P^n", l == pn);
        }
        out.push(inst.with_symbolic(ls, zeta)?);
    }
    Ok(IdentityCheck::new("symmetric-powers", out))
}

/// Burnside against the enumeration oracle; polydiagonal varieties use the
/// blowup-tower counts.
pub fn check_oracle_agreement(
    instances: &[(ExplicitVariety, u64)],
    budget: u64,
) -> Result<IdentityCheck> {
    let mut out = Vec::new();
    for (variety, q) in instances {
        let (burnside, symbolic, label) = match (variety.burnside_action(), variety) {
            (Some(action), _) => {
                let (b, s) = both(&action, *q)?;
                (b, s, action.to_string())
            }
            (None, ExplicitVariety::Polydiagonal { dim, n }) => {
                let space = crate::polydiag::TowerSpace::affine(*dim);
                let b = crate::polydiag::polydiagonal_quotient(&num(*q), &space, *n)?;
                let s = crate::polydiag::polydiagonal_quotient(&Symbolic, &space, *n)?;
                (b, s, format!("A^{dim}<{n}> / S_{n}"))
            }
            (None, _) => unreachable!("only polydiagonal models lack a closed-form action"),
        };
        let oracle = oracle_orbit_count(variety, *q, budget)?;
        let mut inst = Instance::new(label, *q, burnside, oracle.count, Relation::Equal)?
            .detail("oracle candidates", oracle.candidates as i128)
            .detail("twisted fixed points", oracle.fixed_points as i128);
        inst.field = oracle.field;
        let at_q = symbolic.evaluate_pure(*q as i128)?;
        out.push(inst.condition(
            "symbolic class at L = q equals the Burnside count",
            at_q == burnside,
        ));
    }
    Ok(IdentityCheck::new("oracle-agreement", out))
}

/// Curated linear representations spanning diagonal `μ_k` and permutation
/// actions.
pub fn linear_battery() -> Vec<Representation> {
    let d = |w: &[u32], k| Representation::diagonal(w.to_vec(), k).expect("k >= 1");
    let s = |n| PermGroup::symmetric(n).expect("small symmetric group");
    vec![
        d(&[1], 2),
        d(&[1, 1], 2),
        d(&[1, 1], 3),
        d(&[1, 2], 3),
        d(&[1, 1, 2], 3),
        d(&[1, 3], 4),
        d(&[1, 1, 2], 4),
        Representation::permutation(s(2)),
        Representation::permutation(s(3)),
        Representation::zero_sum(s(3)),
        Representation::zero_sum(s(4)),
        Representation::permutation(PermGroup::cyclic(3).expect("cyclic group")),
    ]
}

pub fn diagonal_battery() -> Vec<Representation> {
    let d = |w: &[u32], k| Representation::diagonal(w.to_vec(), k).expect("k >= 1");
    vec![
        d(&[0], 1),
        d(&[1], 2),
        d(&[1, 1], 2),
        d(&[1, 2], 3),
        d(&[1, 1, 2], 3),
        d(&[1, 3], 4),
        d(&[1, 2, 3], 4),
    ]
}

pub fn component_battery() -> Vec<ComponentScenario> {
    let triv = |seq| GroupAction::power(seq, PermGroup::trivial(1));
    vec![
        ComponentScenario {
            base: triv(CountingSequence::affine(1)),
            copies: PermGroup::symmetric(2).expect("S_2"),
        },
        ComponentScenario {
            base: triv(CountingSequence::projective(1)),
            copies: PermGroup::symmetric(3).expect("S_3"),
        },
        ComponentScenario {
            base: triv(CountingSequence::point()),
            copies: PermGroup::cyclic(4).expect("C_4"),
        },
        ComponentScenario {
            base: GroupAction::symmetric_power(CountingSequence::projective(1), 2).expect("S_2"),
            copies: PermGroup::cyclic(3).expect("C_3"),
        },
        ComponentScenario {
            base: linear(
                &Representation::diagonal(vec![1, 2], 3).expect("k >= 1"),
                Ambient::Projective,
            ),
            copies: PermGroup::symmetric(2).expect("S_2"),
        },
    ]
}

/// Origin blowups in `μ_k`-representations, diagonal blowups in squares and
/// a point blown up in `P^2`.
pub fn blowup_battery() -> Vec<GroupAction> {
    let origin = |w: &[u32], k: u32| {
        let rep = Representation::diagonal(w.to_vec(), k).expect("k >= 1");
        GroupAction::Blowup {
            codim: w.len() as u32,
            ambient: Box::new(linear(&rep, Ambient::Affine)),
            center: Box::new(GroupAction::trivial(CountingSequence::point(), k as usize)),
        }
    };
    let diagonal = |base: CountingSequence, dim: u32| GroupAction::Blowup {
        ambient: Box::new(GroupAction::power(
            base.clone(),
            PermGroup::symmetric(2).expect("S_2"),
        )),
        center: Box::new(GroupAction::trivial(base, 2)),
        codim: dim,
    };
    vec![
        origin(&[1, 1], 2),
        origin(&[1, 2], 3),
        origin(&[1, 1, 1], 3),
        origin(&[1, 3], 4),
        diagonal(CountingSequence::affine(2), 2),
        diagonal(CountingSequence::projective(2), 2),
        diagonal(CountingSequence::projective(1), 1),
        GroupAction::Blowup {
            ambient: Box::new(GroupAction::power(
                CountingSequence::projective(2),
                PermGroup::trivial(1),
            )),
            center: Box::new(GroupAction::power(
                CountingSequence::point(),
                PermGroup::trivial(1),
            )),
            codim: 2,
        },
    ]
}

/// Pairs every scenario with every `q` for which it is tame.
pub fn tame_pairs<S: Clone>(
    scenarios: &[S],
    qs: &[u64],
    action: impl Fn(&S) -> GroupAction,
) -> Vec<(S, u64)> {
    let mut out = Vec::new();
    for s in scenarios {
        for &q in qs {
            if action(s).validate(q).is_ok() {
                out.push((s.clone(), q));
            }
        }
    }
    out
}

pub fn rep_action(rep: &Representation) -> GroupAction {
    linear(rep, Ambient::Affine)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(w: &[u32], k: u32) -> Representation {
        Representation::diagonal(w.to_vec(), k).unwrap()
    }

    fn s(n: usize) -> PermGroup {
        PermGroup::symmetric(n).unwrap()
    }

    #[test]
    fn torsor_examples() {
        let c = check_torsor(&[
            (diag(&[1, 1], 3), 7),
            (diag(&[0, 0], 1), 3),
            (Representation::permutation(s(3)), 2),
        ])
        .unwrap();
        assert!(c.pass, "{c:#?}");
        let lr: Vec<(i128, i128)> = c.instances.iter().map(|i| (i.lhs, i.rhs)).collect();
        assert_eq!(lr, vec![(48, 48), (8, 8), (7, 7)]);
    }

    #[test]
    fn vb_and_pv_examples() {
        let c = check_vb_projectivization(&[
            (diag(&[1, 2], 3), 7),
            (diag(&[0], 1), 5),
            (Representation::permutation(s(3)), 2),
        ])
        .unwrap();
        assert!(c.pass);
        let l: Vec<i128> = c.instances.iter().map(|i| i.lhs).collect();
        assert_eq!(l, vec![49, 5, 8]);
        let p = check_pv_congruence(&[
            (diag(&[1, 2], 3), 7),
            (diag(&[0], 1), 3),
            (Representation::zero_sum(s(4)), 5),
        ])
        .unwrap();
        assert!(p.pass);
        assert_eq!(p.instances[0].lhs, 57);
        assert_eq!(p.instances[1].lhs, 4);
    }

    #[test]
    fn line_bundle_and_strata() {
        let c = check_line_bundle(&[
            (diag(&[1, 1], 3), 7),
            (diag(&[0, 0], 1), 3),
            (diag(&[0], 1), 5),
        ])
        .unwrap();
        assert!(c.pass);
        let l: Vec<i128> = c.instances.iter().map(|i| i.lhs).collect();
        assert_eq!(l, vec![56, 12, 5]);
        let t = check_torus_strata(&[(diag(&[1, 1], 2), 5), (diag(&[1, 1, 2], 3), 7)]).unwrap();
        assert!(t.pass);
        let strata: Vec<i128> = t.instances[0].details.iter().map(|d| d.value).collect();
        assert_eq!(strata, vec![1, 4, 4, 16]);
        assert_eq!(t.instances[1].lhs, 343);
        assert!(check_torus_strata(&[(Representation::permutation(s(2)), 5)]).is_err());
    }

    #[test]
    fn blowup_examples() {
        let b = blowup_battery();
        let c = check_equivariant_blowup(&[(b[0].clone(), 3), (b[7].clone(), 2)]).unwrap();
        assert!(c.pass);
        assert_eq!((c.instances[0].lhs, c.instances[0].rhs), (12, 9));
        assert_eq!((c.instances[1].lhs, c.instances[1].rhs), (9, 7));
    }

    #[test]
    fn component_examples() {
        let b = component_battery();
        let c =
            check_component_reduction(&[(b[0].clone(), 3), (b[1].clone(), 2), (b[2].clone(), 5)])
                .unwrap();
        assert!(c.pass);
        let lr: Vec<(i128, i128)> = c.instances.iter().map(|i| (i.lhs, i.rhs)).collect();
        assert_eq!(lr, vec![(3, 3), (3, 3), (1, 1)]);
        let bad = ComponentScenario {
            base: b[0].base.clone(),
            copies: PermGroup::trivial(2),
        };
        assert!(check_component_reduction(&[(bad, 3)]).is_err());
    }

    #[test]
    fn catalog_is_complete() {
        for c in CATALOG {
            assert!(describe(c.name).is_some());
            assert!(serde_json::from_str::<serde_json::Value>(c.scenario_example).is_ok());
        }
        assert!(describe("bogus").is_none());
    }
}
