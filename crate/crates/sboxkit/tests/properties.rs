//! Property tests for the transform and table invariants.

use proptest::collection::vec;
use proptest::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use sboxkit::boolfn::{gf2_rank, moebius_transform, BinaryMatrix, SBoxTable, TruthTable};
use sboxkit::oracle;

fn truth_table(n: usize) -> impl Strategy<Value = TruthTable> {
    vec(0u8..=1, 1 << n).prop_map(|bits| TruthTable::new(bits).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = SBoxTable> {
    Just(n).prop_perturb(move |n, mut rng| {
        let mut entries: Vec<u16> = (0..1u32 << n).map(|x| x as u16).collect();
        for i in (1..entries.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            entries.swap(i, j);
        }
        SBoxTable::square(entries).unwrap()
    })
}

proptest! {
    #[test]
    fn parseval_holds(n in 1usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let bits: Vec<u8> = (0..1usize << n).map(|_| (rng.next_u64() & 1) as u8).collect();
        let f = TruthTable::new(bits).unwrap();
        prop_assert_eq!(f.walsh_spectrum().energy(), 1i64 << (2 * n));
    }

    #[test]
    fn walsh_values_even_and_bounded(f in truth_table(5)) {
        let spec = f.walsh_spectrum();
        for &v in spec.values() {
            prop_assert_eq!(v.rem_euclid(2), 0);
            prop_assert!(v.abs() <= 32);
        }
    }

    #[test]
    fn walsh_matches_naive(f in truth_table(4)) {
        let spec = f.walsh_spectrum();
        for w in 0..16u32 {
            prop_assert_eq!(spec.get(w as usize), oracle::naive_walsh(&f, w));
        }
    }

    #[test]
    fn moebius_is_involution(bits in vec(0u8..=1, 32)) {
        let once = moebius_transform(&bits).unwrap();
        let twice = moebius_transform(&once).unwrap();
        prop_assert_eq!(twice, bits);
    }

    #[test]
    fn anf_round_trips(f in truth_table(5)) {
        prop_assert_eq!(f.anf().truth_table(), f);
    }

    #[test]
    fn autocorrelation_spectral_equals_direct(f in truth_table(4)) {
        let ac = f.autocorrelation();
        for a in 0..16usize {
            let direct: i32 = (0..16)
                .map(|x| if f.get(x) == f.get(x ^ a) { 1 } else { -1 })
                .sum();
            prop_assert_eq!(ac.get(a), direct);
        }
        prop_assert_eq!(ac.get(0), 16);
    }

    #[test]
    fn component_map_is_linear(s in permutation(4), u in 0u32..16, v in 0u32..16) {
        let cu = s.component(u).unwrap();
        let cv = s.component(v).unwrap();
        let cuv = s.component(u ^ v).unwrap();
        prop_assert_eq!(cuv, cu.xor(&cv).unwrap());
    }

    #[test]
    fn ddt_shape_invariants(s in permutation(4)) {
        let ddt = s.difference_table();
        for a in 0..16usize {
            prop_assert_eq!(ddt.row(a).iter().sum::<u32>(), 16);
            prop_assert!(ddt.row(a).iter().all(|&c| c % 2 == 0));
            if a != 0 {
                prop_assert_eq!(ddt.get(a, 0), 0);
            }
        }
        prop_assert_eq!(ddt.get(0, 0), 16);
    }

    #[test]
    fn mix_bijectivity_matches_rank(s in permutation(4), rows in vec(0u32..16, 4)) {
        let m = BinaryMatrix::new(rows).unwrap();
        let mixed = s.apply_mix(&m).unwrap();
        prop_assert_eq!(mixed.is_bijective(), m.rank() == 4);
        prop_assert_eq!(oracle::brute_bijectivity(&mixed), m.rank() == 4);
    }

    #[test]
    fn mix_by_identity_is_identity(s in permutation(5)) {
        let id = BinaryMatrix::identity(5).unwrap();
        prop_assert_eq!(s.apply_mix(&id).unwrap(), s);
    }
}

/// The fraction of full-rank random 8x8 GF(2) matrices approaches
/// the product of (1 - 2^-k) for k = 1..8.
#[test]
fn random_matrix_rank_fraction() {
    let trials = 20_000;
    let mut rng = ChaCha12Rng::seed_from_u64(0x5eed);
    let mut full_rank = 0usize;
    for _ in 0..trials {
        let rows: Vec<u32> = (0..8).map(|_| (rng.next_u64() & 0xff) as u32).collect();
        if gf2_rank(&rows) == 8 {
            full_rank += 1;
        }
    }
    let expected: f64 = (1..=8).map(|k| 1.0 - 0.5f64.powi(k)).product();
    let observed = full_rank as f64 / trials as f64;
    assert!(
        (observed - expected).abs() < 0.02,
        "observed {observed}, expected {expected}"
    );
}
