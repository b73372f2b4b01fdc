mod common;

use common::*;
use milnor::nilpotent::{bracket_map, kernel_basis, kernel_dimension, milnor_residue, orr_coordinates, orr_ranks};
use milnor::rational::Q;
use milnor::words::{commutator, longitudes, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn witt_formula(q: usize, k: usize, m: usize) -> usize {
    (k..m)
        .map(|h| q * lyndon_count_brute(q, h) - lyndon_count_brute(q, h + 1))
        .sum()
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Left-normed commutator of `depth` random generators or inverses.
fn deep_commutator(r: &mut ChaCha8Rng, q: usize, depth: usize) -> Word {
    let mut w = random_word(r, q, 1);
    for _ in 1..depth {
        let v = random_word(r, q, 1);
        w = commutator(&w, &v).unwrap();
    }
    w
}

#[test]
fn kernel_dimensions_match_witt_arithmetic() {
    for q in 1..=3 {
        for k in 1..=3 {
            for m in k + 1..=6 {
                let expected = witt_formula(q, k, m);
                assert_eq!(kernel_dimension(q, k, m).unwrap(), expected, "q={q} k={k} m={m}");
                let basis = kernel_basis(q, k, m).unwrap();
                assert_eq!(basis.dim(), expected);
                for z in &basis.basis {
                    assert!(bracket_map(z, k, m).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn orr_rank_pairs() {
    for q in 1..=3 {
        for k in 1..=3 {
            let (pi3, h3) = orr_ranks(q, k).unwrap();
            assert_eq!(pi3, witt_formula(q, k, 2 * k));
            assert_eq!(h3, witt_formula(q, k, 2 * k - 1));
        }
    }
    assert_eq!(orr_ranks(3, 2).unwrap(), (7, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residue_lies_in_kernel(seed in any::<u64>(), n in 3usize..=4) {
        let b = random_degree2_braid(&mut rng(seed), n, 2);
        let longs = longitudes(&b).unwrap();
        for m in 3..=4 {
            let res = milnor_residue(&longs, 2, m).unwrap();
            prop_assert!(bracket_map(&res.element, 2, m).unwrap().is_zero());
        }
    }

    #[test]
    fn residue_of_any_pure_braid_at_level_one(seed in any::<u64>(), n in 2usize..=4) {
        let b = random_pure_braid(&mut rng(seed), n, 14);
        let longs = longitudes(&b).unwrap();
        let res = milnor_residue(&longs, 1, 2).unwrap();
        prop_assert!(bracket_map(&res.element, 1, 2).unwrap().is_zero());
    }

    #[test]
    fn orr_coordinates_are_additive(seed in any::<u64>(), n in 3usize..=4) {
        let mut r = rng(seed);
        let b1 = random_degree2_braid(&mut r, n, 2);
        let b2 = random_degree2_braid(&mut r, n, 2);
        let o1 = orr_coordinates(&longitudes(&b1).unwrap(), 2).unwrap();
        let o2 = orr_coordinates(&longitudes(&b2).unwrap(), 2).unwrap();
        let o12 = orr_coordinates(&longitudes(&b1.concat(&b2).unwrap()).unwrap(), 2).unwrap();
        prop_assert_eq!(&o12.basis_id, &o1.basis_id);
        prop_assert_eq!(o12.coords, add(&o1.coords, &o2.coords));
    }

    #[test]
    fn orr_coordinates_ignore_deep_changes(seed in any::<u64>(), slot in 0usize..3) {
        let mut r = rng(seed);
        let b = random_degree2_braid(&mut r, 3, 2);
        let longs = longitudes(&b).unwrap();
        let base = orr_coordinates(&longs, 2).unwrap();

        // Conjugation by an element of F_2.
        let g = deep_commutator(&mut r, 3, 2);
        let mut conj = longs.clone();
        conj[slot] = g.mul(&conj[slot]).mul(&g.inverse());
        prop_assert_eq!(&orr_coordinates(&conj, 2).unwrap(), &base);

        // Right multiplication by an element of F_4.
        let h = deep_commutator(&mut r, 3, 4);
        let mut tail = longs.clone();
        tail[slot] = tail[slot].mul(&h);
        prop_assert_eq!(&orr_coordinates(&tail, 2).unwrap(), &base);
    }

    #[test]
    fn realized_words_give_their_leading_residue(seed in any::<u64>()) {
        let mut r = rng(seed);
        let factors = r.gen_range(1..=2);
        let w = random_commutator_word(&mut r, 2, factors);
        let b = milnor::words::realize_last_longitude(&w, 3).unwrap();
        let longs = longitudes(&b).unwrap();
        let res = milnor_residue(&longs, 2, 3).unwrap();
        let expected = milnor::magnus::lie_log(&w.with_rank(3).unwrap(), 3).unwrap().homogeneous(2);
        prop_assert_eq!(res.element.part(3).homogeneous(2), expected);
    }
}

#[test]
fn residue_requires_lower_invariants_to_vanish() {
    let longs = longitudes(&braid("s1 s1", 2)).unwrap();
    let err = milnor_residue(&longs, 2, 4).unwrap_err();
    assert_eq!(err.kind(), milnor::ErrorKind::Precondition);
}
