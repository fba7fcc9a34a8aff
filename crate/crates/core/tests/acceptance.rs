//! Acceptance criteria, one PASS/FAIL line each. Exact integers throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

use k0count::ffcount::{
    burnside_quotient_count, oracle_orbit_count, Ambient, CountingSequence, ExplicitVariety,
    GroupAction, Piece, Representation, DEFAULT_BUDGET,
};
use k0count::identities::{self, IdentityCheck, Relation};
use k0count::polydiag::{self, TowerSpace};
use k0count::suite;
use k0count::{MotivicClass, PermGroup};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Ledger) -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: k0count::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn all_pass(check: &IdentityCheck) -> Result<(), String> {
    match check.failures().next() {
        None if !check.instances.is_empty() => Ok(()),
        None => Err(format!("{}: no instances", check.name)),
        Some(i) => Err(format!(
            "{}: {} at q = {}: {} vs {} ({:?})",
            check.name, i.scenario, i.q, i.lhs, i.rhs, i
        )),
    }
}

fn geometric(q: u64, n: u32) -> i128 {
    (0..=n).map(|i| (q as i128).pow(i)).sum()
}

/// Collects every check for the coherence criterion.
#[derive(Default)]
struct Ledger {
    checks: Vec<IdentityCheck>,
}

impl Ledger {
    fn keep(&mut self, c: IdentityCheck) -> Result<IdentityCheck, String> {
        all_pass(&c)?;
        self.checks.push(c.clone());
        Ok(c)
    }
}

const QUOTIENT_Q: [u64; 4] = [3, 5, 7, 13];

fn symmetric_powers(ledger: &mut Ledger) -> Outcome {
    let p1 = CountingSequence::projective(1);
    let mut cases = 0;
    let mut instances = Vec::new();
    for n in 1..=6 {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let got = lib(burnside_quotient_count(
                &lib(GroupAction::symmetric_power(p1.clone(), n))?,
                q,
            ))?;
            ensure(got == geometric(q, n as u32), || {
                format!("Sym^{n} P^1 at q = {q}: {got}")
            })?;
            instances.push((MotivicClass::from_l_coefficients(&[1, 1]), n, q));
            cases += 1;
        }
    }
    ledger.keep(lib(identities::check_symmetric_powers(&instances))?)?;
    let mut oracle = 0;
    for n in 1..=3 {
        for q in [2u64, 3] {
            let v = ExplicitVariety::Power {
                factor: vec![Piece::Projective(1)],
                group: lib(PermGroup::symmetric(n))?,
            };
            let r = lib(oracle_orbit_count(&v, q, DEFAULT_BUDGET))?;
            ensure(r.count == geometric(q, n as u32), || {
                format!("oracle Sym^{n} P^1 at q = {q}: {}", r.count)
            })?;
            oracle += 1;
        }
    }
    Ok(format!(
        "{cases} Burnside counts equal 1 + q + ... + q^n; {oracle} oracle cross-checks"
    ))
}

fn linear_pairs() -> Vec<(Representation, u64)> {
    identities::tame_pairs(
        &identities::linear_battery(),
        &QUOTIENT_Q,
        identities::rep_action,
    )
}

fn battery_coverage(pairs: &[(Representation, u64)]) -> Result<usize, String> {
    let scenarios: BTreeSet<String> = pairs.iter().map(|(r, _)| r.to_string()).collect();
    let mut ks = BTreeSet::new();
    let mut degrees = BTreeSet::new();
    for (r, _) in pairs {
        match r {
            Representation::Diagonal { k, .. } => {
                ks.insert(*k);
            }
            Representation::Permutation { group, .. } => {
                degrees.insert(group.degree());
            }
        }
    }
    ensure(scenarios.len() >= 6, || {
        format!("only {} scenarios", scenarios.len())
    })?;
    ensure([2, 3, 4].iter().all(|k| ks.contains(k)), || {
        format!("μ_k coverage {ks:?}")
    })?;
    ensure([2, 3].iter().all(|d| degrees.contains(d)), || {
        format!("S_n coverage {degrees:?}")
    })?;
    Ok(scenarios.len())
}

fn torsor(ledger: &mut Ledger) -> Outcome {
    let pairs = linear_pairs();
    let n = battery_coverage(&pairs)?;
    let c = ledger.keep(lib(identities::check_torsor(&pairs))?)?;
    let components: Vec<_> = identities::component_battery()
        .into_iter()
        .flat_map(|s| QUOTIENT_Q.map(|q| (s.clone(), q)))
        .filter(|(s, q)| suite::Planned::Component(s.clone()).screen(*q).is_ok())
        .collect();
    let comp = ledger.keep(lib(identities::check_component_reduction(&components))?)?;
    let d = |w: &[u32], k| Representation::diagonal(w.to_vec(), k).unwrap();
    let ex = ledger.keep(lib(identities::check_torsor(&[
        (d(&[1, 1], 3), 7),
        (d(&[0, 0], 1), 3),
        (
            Representation::permutation(PermGroup::symmetric(3).unwrap()),
            2,
        ),
    ]))?)?;
    let lhs: Vec<i128> = ex.instances.iter().map(|i| i.lhs).collect();
    ensure(lhs == [48, 8, 7], || {
        format!("worked examples gave {lhs:?}")
    })?;
    Ok(format!(
        "{} instances over {n} scenarios; {} component reductions",
        c.instances.len(),
        comp.instances.len()
    ))
}

fn vb_projectivization(ledger: &mut Ledger) -> Outcome {
    let pairs = linear_pairs();
    let n = battery_coverage(&pairs)?;
    let c = ledger.keep(lib(identities::check_vb_projectivization(&pairs))?)?;
    let biconditionals = c
        .instances
        .iter()
        .filter(|i| i.conditions.iter().any(|k| k.label.contains('⇔')))
        .count();
    ensure(biconditionals == c.instances.len(), || {
        "biconditional missing".into()
    })?;
    let lb = ledger.keep(lib(identities::check_line_bundle(&pairs))?)?;
    Ok(format!(
        "{} instances over {n} scenarios, biconditional in each; {} line-bundle instances",
        c.instances.len(),
        lb.instances.len()
    ))
}

fn pv_congruence(ledger: &mut Ledger) -> Outcome {
    let pairs = linear_pairs();
    let c = ledger.keep(lib(identities::check_pv_congruence(&pairs))?)?;
    for i in &c.instances {
        ensure((i.lhs - 1).rem_euclid(i.q as i128) == 0, || {
            format!("{} not ≡ 1", i.scenario)
        })?;
    }
    let ex = lib(identities::check_pv_congruence(&[(
        Representation::diagonal(vec![1, 2], 3).unwrap(),
        7,
    )]))?;
    ensure(ex.instances[0].lhs == 57, || {
        format!("worked example gave {}", ex.instances[0].lhs)
    })?;
    Ok(format!("{} instances, all ≡ 1 (mod q)", c.instances.len()))
}

fn torus_strata(ledger: &mut Ledger) -> Outcome {
    let pairs = identities::tame_pairs(
        &identities::diagonal_battery(),
        &QUOTIENT_Q,
        identities::rep_action,
    );
    ensure(pairs.iter().any(|(r, _)| r.dim() == 3), || {
        "no d = 3 scenario".into()
    })?;
    let c = ledger.keep(lib(identities::check_torus_strata(&pairs))?)?;
    let mut oracle = 0;
    for (rep, q) in identities::tame_pairs(
        &identities::diagonal_battery(),
        &[5, 7],
        identities::rep_action,
    ) {
        let Representation::Diagonal { weights, k } = &rep else {
            unreachable!()
        };
        if weights.len() > 2 {
            continue;
        }
        let qi = q as i128;
        let total = lib(oracle_orbit_count(
            &ExplicitVariety::Linear {
                rep: rep.clone(),
                ambient: Ambient::Affine,
            },
            q,
            DEFAULT_BUDGET,
        ))?;
        ensure(total.count == qi.pow(weights.len() as u32), || {
            format!("oracle {rep} at q = {q}")
        })?;
        for mask in 0u32..1 << weights.len() {
            let sub: Vec<u32> = (0..weights.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| weights[i])
                .collect();
            let size = sub.len() as u32;
            let stratum = ExplicitVariety::Linear {
                rep: Representation::diagonal(sub, *k).unwrap(),
                ambient: Ambient::Torus,
            };
            let r = lib(oracle_orbit_count(&stratum, q, DEFAULT_BUDGET))?;
            ensure(r.count == (qi - 1).pow(size), || {
                format!("oracle stratum of {rep} at q = {q}")
            })?;
            oracle += 1;
        }
    }
    Ok(format!(
        "{} instances; {oracle} strata confirmed by the oracle",
        c.instances.len()
    ))
}

fn equivariant_blowup(ledger: &mut Ledger) -> Outcome {
    let battery = identities::blowup_battery();
    let mut pairs = identities::tame_pairs(&battery, &QUOTIENT_Q, |a| a.clone());
    pairs.extend(identities::tame_pairs(&battery, &[2], |a| a.clone()));
    let c = ledger.keep(lib(identities::check_equivariant_blowup(&pairs))?)?;
    let scenarios: BTreeSet<String> = pairs.iter().map(|(a, _)| a.to_string()).collect();
    ensure(scenarios.len() >= 4, || "fewer than 4 scenarios".into())?;
    ensure(
        scenarios.iter().any(|s| s.starts_with("Bl of [V for")),
        || "no origin blowup".into(),
    )?;
    ensure(scenarios.iter().any(|s| s.contains("^2 / S_2")), || {
        "no diagonal blowup".into()
    })?;
    let first = c.instances.iter().find(|i| i.q == 3).unwrap();
    ensure((first.lhs, first.rhs) == (12, 9), || {
        format!("μ_2 origin at q = 3: {:?}", (first.lhs, first.rhs))
    })?;
    Ok(format!(
        "{} instances over {} scenarios",
        c.instances.len(),
        scenarios.len()
    ))
}

fn zero_sum(ledger: &mut Ledger) -> Outcome {
    let mut instances = Vec::new();
    for r in 0..=3 {
        for d in 1..=4 {
            for q in [5u64, 7] {
                instances.push((r, d, q));
            }
        }
    }
    let c = ledger.keep(lib(polydiag::check_zero_sum(&instances))?)?;
    for (r, d, q) in [(1u32, 3usize, 5u64), (2, 2, 5), (2, 3, 5)] {
        let v = ExplicitVariety::ZeroSumWreath {
            rank: r,
            parts: d,
            factors: 1,
            base_dim: 0,
        };
        let o = lib(oracle_orbit_count(&v, q, DEFAULT_BUDGET))?;
        let expect = (q as i128).pow(r * (d as u32 - 1));
        ensure(o.count == expect, || {
            format!("oracle ({r},{d},{q}) gave {}", o.count)
        })?;
    }
    let mut bundle = 0;
    for (r, d, m) in [(1, 2, 1), (1, 2, 2), (2, 2, 2), (1, 3, 2), (2, 3, 1)] {
        let b = polydiag::zero_sum_bundle_fiber_congruence(
            r,
            d,
            m,
            &CountingSequence::affine(1),
            &[5, 7],
        );
        bundle += ledger.keep(lib(b)?)?.instances.len();
    }
    Ok(format!(
        "{} instances; oracle agrees on 3 cases; {bundle} bundle fibre instances",
        c.instances.len()
    ))
}

fn totaro(ledger: &mut Ledger) -> Outcome {
    let mut n = 0;
    for y in [
        CountingSequence::point(),
        CountingSequence::projective(1),
        CountingSequence::affine(1),
    ] {
        for d in 1..=3 {
            n += ledger
                .keep(lib(polydiag::totaro_factor_check(&y, d, &[5, 7]))?)?
                .instances
                .len();
        }
    }
    Ok(format!("{n} instances"))
}

fn polydiagonal(ledger: &mut Ledger) -> Outcome {
    let mut n = 0;
    for (space, k) in suite::polydiagonal_cases() {
        n += ledger
            .keep(lib(polydiag::verify_polydiagonal(
                &space,
                k,
                &[2, 3, 5, 7],
            ))?)?
            .instances
            .len();
    }
    let c = lib(polydiag::verify_polydiagonal(
        &TowerSpace::projective(2),
        2,
        &[2],
    ))?;
    let pair = (c.instances[0].lhs, c.instances[0].rhs);
    ensure(pair == (49, 35), || {
        format!("(P^2, 2, q = 2) gave {pair:?}")
    })?;
    Ok(format!(
        "{n} congruences over 6 (X, n); (P^2, 2, q = 2) = (49, 35)"
    ))
}

fn oracle_equivalence(ledger: &mut Ledger) -> Outcome {
    let instances = suite::random_oracle_instances(20_24, 20);
    let c = ledger.keep(lib(identities::check_oracle_agreement(
        &instances,
        DEFAULT_BUDGET,
    ))?)?;
    ensure(c.instances.len() >= 20, || "fewer than 20 instances".into())?;
    let kinds: BTreeSet<&str> = instances
        .iter()
        .map(|(v, _)| match v {
            ExplicitVariety::Power { .. } => "power",
            ExplicitVariety::Linear { .. } => "linear",
            ExplicitVariety::Copies { .. } => "copies",
            ExplicitVariety::ZeroSumWreath { .. } => "zero-sum",
            ExplicitVariety::Polydiagonal { .. } => "polydiagonal",
        })
        .collect();
    Ok(format!(
        "{} seeded instances agree exactly ({} kinds)",
        c.instances.len(),
        kinds.len()
    ))
}

fn coherence(ledger: &mut Ledger) -> Outcome {
    let mut checked = 0;
    let mut per_check: BTreeMap<String, usize> = BTreeMap::new();
    for c in &ledger.checks {
        for i in &c.instances {
            if c.name == "oracle-agreement" {
                ensure(i.conditions.iter().all(|k| k.holds), || {
                    format!("{}: symbolic class off", i.scenario)
                })?;
                continue;
            }
            let s = i
                .symbolic
                .as_ref()
                .ok_or_else(|| format!("{}: {} has no symbolic statement", c.name, i.scenario))?;
            let none = BTreeMap::new();
            let l = lib(s.lhs.evaluate_count(i.q, 1, &none))?;
            let r = lib(s.rhs.evaluate_count(i.q, 1, &none))?;
            ensure(l == i.lhs && r == i.rhs, || {
                format!(
                    "{}: {} at q = {}: symbolic {l}/{r} vs numeric {}/{}",
                    c.name, i.scenario, i.q, i.lhs, i.rhs
                )
            })?;
            let holds = match s.relation {
                Relation::Equal => s.lhs == s.rhs,
                Relation::CongruentModQ => s.lhs.mod_l() == s.rhs.mod_l(),
            };
            ensure(holds, || {
                format!("{}: {} symbolic relation fails", c.name, i.scenario)
            })?;
            checked += 1;
            *per_check.entry(c.name.clone()).or_default() += 1;
        }
    }
    let missing: Vec<&str> = identities::CATALOG
        .iter()
        .map(|c| c.name)
        .filter(|n| *n != "oracle-agreement" && !per_check.contains_key(*n))
        .collect();
    ensure(missing.is_empty(), || {
        format!("identities not exercised: {missing:?}")
    })?;
    Ok(format!(
        "{checked} symbolic statements reproduce the integers across {} identities",
        per_check.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("symmetric powers of P^1", symmetric_powers),
        ("torsor quotient", torsor),
        ("vector bundle and projectivization", vb_projectivization),
        ("P(V' ⊕ 1) congruence", pv_congruence),
        ("torus strata", torus_strata),
        ("equivariant blowup", equivariant_blowup),
        ("zero-sum quotients", zero_sum),
        ("Totaro factor", totaro),
        ("polydiagonal compactification", polydiagonal),
        ("oracle equivalence", oracle_equivalence),
        ("symbolic-numeric coherence", coherence),
    ];
    let mut ledger = Ledger::default();
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f(&mut ledger) {
            Ok(summary) => println!("PASS criterion {:>2}: {title}: {summary}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {title}: {reason}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
