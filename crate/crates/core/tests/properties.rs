use std::collections::BTreeMap;

use proptest::prelude::*;

use k0count::classes::{sym_power_class, zeta_coefficients};
use k0count::ffcount::{
    factor_sequence, oracle_orbit_count, twisted_count_power, CountAlgebra, CountingSequence,
    ExplicitVariety, GroupAction, Numeric, Piece, Symbolic, DEFAULT_BUDGET,
};
use k0count::identities;
use k0count::partitions::{bell, enumerate_partitions, enumerate_types, orbit_count_of_type};
use k0count::polydiag::{
    build_tower, normal_bundle_model, polydiagonal_quotient, tower_twisted_count, TowerSpace,
};
use k0count::suite;
use k0count::{MotivicClass, PermGroup, Permutation, SetPartition};

fn class_with_symbol(l: &[i8], x: &[i8]) -> MotivicClass {
    let sym = MotivicClass::symbol("X");
    let mut c = MotivicClass::zero();
    for (i, &a) in l.iter().enumerate() {
        c = &c + &(&MotivicClass::int(a as i128) * &MotivicClass::l_power(i as u32));
    }
    for (i, &a) in x.iter().enumerate() {
        c = &c + &(&(&MotivicClass::int(a as i128) * &MotivicClass::l_power(i as u32)) * &sym);
    }
    c
}

fn any_class() -> impl Strategy<Value = MotivicClass> {
    (
        prop::collection::vec(-5i8..=5, 0..4),
        prop::collection::vec(-3i8..=3, 0..3),
    )
        .prop_map(|(l, x)| class_with_symbol(&l, &x))
}

fn cell_class() -> impl Strategy<Value = MotivicClass> {
    prop::collection::vec(0i128..=3, 1..4).prop_map(|c| MotivicClass::from_l_coefficients(&c))
}

fn prime_power() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13])
}

/// Random set partition of `[n]` via a restricted growth string.
fn any_partition(max_n: usize) -> impl Strategy<Value = SetPartition> {
    (1..=max_n)
        .prop_flat_map(|n| prop::collection::vec(0usize..n, n))
        .prop_map(|raw| {
            let n = raw.len();
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            for (i, r) in raw.iter().enumerate() {
                let b = if i == 0 { 0 } else { (*r).min(blocks.len()) };
                if b == blocks.len() {
                    blocks.push(Vec::new());
                }
                blocks[b].push(i + 1);
            }
            SetPartition::new(n, blocks).unwrap()
        })
}

fn any_permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_one_line(&v).unwrap())
}

fn tower_space() -> impl Strategy<Value = TowerSpace> {
    (any::<bool>(), 1u32..=3).prop_map(|(proj, d)| {
        if proj {
            TowerSpace::projective(d)
        } else {
            TowerSpace::affine(d)
        }
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in any_class(), b in any_class(), c in any_class()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, MotivicClass::zero());
        prop_assert_eq!(&a * &MotivicClass::one(), a.clone());
        prop_assert_eq!(-(-a.clone()), a.clone());
        prop_assert_eq!(a.to_string().parse::<MotivicClass>().unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in any_class(), b in any_class(), q in prime_power(), x in -20i128..20) {
        let counts = BTreeMap::from([("X".to_string(), x)]);
        let ev = |c: &MotivicClass| c.evaluate_count(q, 1, &counts).unwrap();
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a - &b)), ev(&a) - ev(&b));
    }

    #[test]
    fn mod_l_is_reduction_mod_q(a in any_class(), q in prime_power()) {
        let ev = |c: &MotivicClass| c.evaluate_count(q, 1, &BTreeMap::from([("X".to_string(), 0)])).unwrap();
        prop_assert_eq!((ev(&a) - ev(&a.mod_l())).rem_euclid(q as i128), 0);
    }

    #[test]
    fn power_structure_is_additive(a in cell_class(), b in cell_class(), n in 0usize..6) {
        let lhs = sym_power_class(&(&a + &b), n).unwrap();
        let mut rhs = MotivicClass::zero();
        for i in 0..=n {
            rhs = &rhs + &(&sym_power_class(&a, i).unwrap() * &sym_power_class(&b, n - i).unwrap());
        }
        prop_assert_eq!(lhs, rhs);
        let za = zeta_coefficients(&a, n).unwrap();
        let zb = zeta_coefficients(&b, n).unwrap();
        prop_assert_eq!(za.mul_truncated(&zb), zeta_coefficients(&(&a + &b), n).unwrap());
    }

    #[test]
    fn symmetric_power_classes_match_burnside(a in cell_class(), n in 1usize..5, q in prime_power()) {
        let action = GroupAction::symmetric_power(CountingSequence::polynomial(a.clone()).unwrap(), n).unwrap();
        let numeric = action.burnside(&Numeric { q }).unwrap();
        prop_assert_eq!(numeric, sym_power_class(&a, n).unwrap().evaluate_pure(q as i128).unwrap());
        prop_assert_eq!(action.burnside(&Symbolic).unwrap(), sym_power_class(&a, n).unwrap());
    }

    #[test]
    fn stabilizer_orders_agree(p in any_partition(6)) {
        let s = p.stabilizer();
        prop_assert_eq!(s.order() as usize, p.stabilizer_by_enumeration().unwrap().len());
        prop_assert_eq!(s.partition, p);
    }

    #[test]
    fn partitions_behave_under_permutation(
        (p, sigma) in (2usize..=6).prop_flat_map(|n| (any_partition(n), any_permutation(n)))
            .prop_filter("same n", |(p, s)| p.n() == s.degree()),
        other in any_partition(6),
    ) {
        let moved = p.act(&sigma).unwrap();
        prop_assert_eq!(moved.type_of(), p.type_of());
        prop_assert_eq!(moved.act(&sigma.inverse()).unwrap(), p.clone());
        prop_assert_eq!(p.is_fixed_by(&sigma), moved == p);
        if other.n() == p.n() {
            let j = p.join(&other).unwrap();
            prop_assert!(p.refines(&j) && other.refines(&j));
            prop_assert!(j.block_count() <= p.block_count().min(other.block_count()));
        }
    }

    #[test]
    fn products_of_pieces_agree_with_the_oracle(
        pieces in prop::collection::vec(prop::sample::select(vec![Piece::Affine(1), Piece::Projective(1), Piece::Torus(1)]), 1..=2),
        n in 1usize..=2,
        q in prop::sample::select(vec![2u64, 3, 4]),
    ) {
        let group = PermGroup::symmetric(n).unwrap();
        let v = ExplicitVariety::Power { factor: pieces.clone(), group };
        let oracle = oracle_orbit_count(&v, q, DEFAULT_BUDGET).unwrap();
        let action = GroupAction::symmetric_power(factor_sequence(&pieces), n).unwrap();
        prop_assert_eq!(oracle.count, action.burnside(&Numeric { q }).unwrap());
        let class = action.burnside(&Symbolic).unwrap();
        prop_assert_eq!(class.evaluate_pure(q as i128).unwrap(), oracle.count);
    }

    #[test]
    fn seeded_oracle_instances_agree(seed in any::<u64>()) {
        let check = identities::check_oracle_agreement(&suite::random_oracle_instances(seed, 2), DEFAULT_BUDGET).unwrap();
        prop_assert!(check.pass, "{:?}", check.failures().next());
    }

    #[test]
    fn twisted_sums_over_s_n_are_divisible(space in tower_space(), n in 2usize..=3, q in prime_power()) {
        let group = PermGroup::symmetric(n).unwrap();
        let alg = Numeric { q };
        let total: i128 = group.elements().iter().map(|s| tower_twisted_count(&alg, &space, n, s).unwrap()).sum();
        prop_assert_eq!(total % group.order() as i128, 0);
        let symbolic = polydiagonal_quotient(&Symbolic, &space, n).unwrap();
        prop_assert_eq!(symbolic.evaluate_pure(q as i128).unwrap(), total / group.order() as i128);
    }

    #[test]
    fn twisted_counts_are_coherent(space in tower_space(), (n, sigma) in (2usize..=3).prop_flat_map(|n| (Just(n), any_permutation(n))), q in prime_power()) {
        let numeric = tower_twisted_count(&Numeric { q }, &space, n, &sigma).unwrap();
        let symbolic = tower_twisted_count(&Symbolic, &space, n, &sigma).unwrap();
        prop_assert_eq!(symbolic.evaluate_pure(q as i128).unwrap(), numeric);
        let power = twisted_count_power(&space.base, &sigma, q).unwrap();
        prop_assert_eq!((numeric - power).rem_euclid(q as i128), 0);
    }

    #[test]
    fn curve_pairs_need_no_blowup(proj in any::<bool>(), sigma in any_permutation(2), q in prime_power()) {
        // Δ ⊂ C² is a divisor, so C⟨2⟩ = C².
        let space = if proj { TowerSpace::projective(1) } else { TowerSpace::affine(1) };
        prop_assert_eq!(
            tower_twisted_count(&Numeric { q }, &space, 2, &sigma).unwrap(),
            twisted_count_power(&space.base, &sigma, q).unwrap()
        );
    }
}

#[test]
fn bell_numbers_and_type_orbits() {
    for n in 1..=7 {
        let all = enumerate_partitions(n).unwrap();
        assert_eq!(all.len() as u128, bell(n));
        let by_type: u128 = enumerate_types(n)
            .unwrap()
            .iter()
            .map(orbit_count_of_type)
            .sum();
        assert_eq!(by_type, bell(n));
    }
}

#[test]
fn normal_rank_equals_codimension() {
    for n in 2..=4 {
        let tower = build_tower(n).unwrap();
        for c in tower.centers() {
            let model = normal_bundle_model(&c.partition);
            for dim in 1..=3 {
                assert_eq!(model.rank(dim), c.codim(dim), "{}", c.partition);
            }
        }
    }
}

#[test]
fn curve_centres_of_relative_codimension_one_add_nothing() {
    // P^{c-1} - 1 vanishes for c = 1.
    let alg = Numeric { q: 5 };
    for n in 2..=4 {
        let tower = build_tower(n).unwrap();
        for c in tower.centers().filter(|c| c.codim(1) == 1) {
            assert_eq!(alg.sub(&alg.projective(c.codim(1) - 1, 1), &alg.int(1)), 0);
        }
    }
}
