mod common;

use common::{brute_force_covers, brute_force_reducible, m, q, random_cone_vector, raw};
use cover_cone::{
    build_bt_system, check_implication, decompose, default_system, enumerate_covers,
    irreducible_covers, membership, read_cover, write_cover, Implication, LinearInequality,
    ProjectionVector, SubsetMask,
};
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn enumeration_matches_brute_force() {
    for (s, k_max) in [(1, 4), (2, 4), (3, 3)] {
        let mut expected = brute_force_covers(s, k_max);
        expected.sort();
        let mut found: Vec<_> = enumerate_covers(SubsetMask::full(s), k_max)
            .unwrap()
            .iter()
            .map(raw)
            .collect();
        found.sort();
        assert_eq!(found, expected, "ground size {s}");
    }
}

#[test]
fn irreducibles_match_brute_force() {
    for (s, k_max) in [(1, 2), (2, 4), (3, 6)] {
        let mut expected: Vec<_> = brute_force_covers(s, k_max)
            .into_iter()
            .filter(|c| !brute_force_reducible(s, c))
            .collect();
        expected.sort();
        let mut found: Vec<_> = irreducible_covers(SubsetMask::full(s), k_max)
            .unwrap()
            .iter()
            .map(raw)
            .collect();
        found.sort();
        assert_eq!(found, expected, "ground size {s}");
    }
}

#[test]
fn decompositions_are_uniform_partitions() {
    for cover in enumerate_covers(SubsetMask::full(3), 4).unwrap() {
        if let Some((a, b)) = decompose(&cover) {
            assert_eq!(a.k() + b.k(), cover.k());
            let mut merged: Vec<_> = a.parts().iter().chain(b.parts()).copied().collect();
            merged.sort();
            assert_eq!(merged, cover.parts());
        }
    }
}

#[test]
fn cover_files_round_trip() {
    for cover in enumerate_covers(m(&[2, 3, 5]), 2).unwrap() {
        assert_eq!(read_cover(&write_cover(&cover)).unwrap(), cover);
    }
}

#[test]
fn larger_multiplicities_add_nothing_in_dimension_four() {
    let base = default_system(4).unwrap();
    let wide = build_bt_system(4, 6).unwrap();
    assert_eq!(base.len(), wide.len());
}

#[test]
fn covers_of_five_elements() {
    let sys = build_bt_system(5, 2).unwrap();
    for g in sys.generators() {
        let c = g.cover();
        assert!(c.k() <= 2);
        assert!(decompose(c).is_none());
        assert!(!c.is_trivial());
    }
}

/// Nonnegative rational combination of random generators.
fn random_combination(rng: &mut ChaCha8Rng, n: usize) -> LinearInequality {
    let sys = default_system(n).unwrap();
    let mut target = ProjectionVector::zeros(n).unwrap();
    for _ in 0..rng.gen_range(1..=4) {
        let g = &sys.generators()[rng.gen_range(0..sys.len())];
        let w = q(rng.gen_range(1..=6), rng.gen_range(1..=3));
        for (s, c) in g.coefficients() {
            let updated = target.get(s) + &w * q(c, 1);
            target.set(s, updated);
        }
    }
    let lhs = target
        .iter()
        .filter(|(_, t)| t.is_positive())
        .map(|(s, t)| (s, t.clone()));
    let rhs = target
        .iter()
        .filter(|(_, t)| t.is_negative())
        .map(|(s, t)| (s, -t));
    LinearInequality::new(n, lhs.collect::<Vec<_>>(), rhs.collect::<Vec<_>>()).unwrap()
}

#[test]
fn combinations_of_generators_are_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [3, 4] {
        let sys = default_system(n).unwrap();
        for _ in 0..25 {
            let ineq = random_combination(&mut rng, n);
            match check_implication(&sys, &ineq).unwrap() {
                Implication::Certificate(cert) => assert!(cert.verify(&sys, &ineq)),
                Implication::Witness(_) => panic!("combination reported as not implied"),
            }
        }
    }
}

#[test]
fn witnesses_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let sys = default_system(3).unwrap();
    let mut refuted = 0;
    for _ in 0..60 {
        let coeff = |rng: &mut ChaCha8Rng| q(rng.gen_range(0..=3), 1);
        let lhs: Vec<_> = SubsetMask::full(3)
            .nonempty_subsets()
            .into_iter()
            .map(|s| (s, coeff(&mut rng)))
            .collect();
        let rhs: Vec<_> = SubsetMask::full(3)
            .nonempty_subsets()
            .into_iter()
            .map(|s| (s, coeff(&mut rng)))
            .collect();
        let ineq = LinearInequality::new(3, lhs, rhs).unwrap();
        if let Implication::Witness(w) = check_implication(&sys, &ineq).unwrap() {
            assert!(membership(&sys, &w).unwrap().inside);
            assert!(ineq.slack(&w) <= q(-1, 1));
            refuted += 1;
        }
    }
    assert!(refuted > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_is_a_cone(seed in any::<u64>(), num in 1i64..8, den in 1i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = default_system(3).unwrap();
        let v = random_cone_vector(&mut rng, &sys);
        let w = random_cone_vector(&mut rng, &sys);
        let c = q(num, den);
        prop_assert!(membership(&sys, &v.scaled(&c)).unwrap().inside);
        let sum = ProjectionVector::from_fn(3, |s| v.get(s) + w.get(s)).unwrap();
        prop_assert!(membership(&sys, &sum).unwrap().inside);
    }

    #[test]
    fn single_box_vectors_make_every_generator_tight(logs in proptest::collection::vec(-20i64..20, 3)) {
        // a single box: every cover inequality is an equality
        let sys = default_system(3).unwrap();
        let v = ProjectionVector::from_fn(3, |s| s.elements().map(|i| q(logs[i - 1], 1)).sum()).unwrap();
        let report = membership(&sys, &v).unwrap();
        prop_assert!(report.inside);
        prop_assert_eq!(report.tight.len(), sys.len());
    }
}
