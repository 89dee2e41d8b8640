use proptest::prelude::*;

use pillowcase_core::construct::{BraidTangle, Step};
use pillowcase_core::f2linalg::{tensor_permutation, F2Matrix, GradedF2Space};
use pillowcase_core::khovanov::{jones_from_bracket, reduced_khovanov};
use pillowcase_core::pairing::jones;
use pillowcase_core::pipeline::{rank_table, twisted_complex};
use pillowcase_core::ranks::RankTable;
use pillowcase_core::tangle::{close, orientation_extends, parse_tangle, writhe_counts};
use pillowcase_core::twisted::TwistedComplex;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = F2Matrix> {
    proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
        let entries = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| (i / cols, i % cols));
        F2Matrix::from_entries(rows, cols, entries).unwrap()
    })
}

fn permutation(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

fn step(strands: usize) -> impl Strategy<Value = Step> {
    prop_oneof![
        6 => (0..strands - 1, any::<bool>()).prop_map(|(at, left_over)| Step::Cross { at, left_over }),
        1 => (0..strands, any::<bool>()).prop_map(|(at, vertical_under)| Step::Kink { at, vertical_under }),
    ]
}

fn braid() -> impl Strategy<Value = BraidTangle> {
    let shapes: Vec<(usize, Vec<usize>)> = vec![(2, vec![]), (3, vec![0]), (3, vec![1]), (4, vec![0, 2])];
    (proptest::sample::select(shapes), 0..4usize).prop_flat_map(|((strands, caps), rotation)| {
        proptest::collection::vec(step(strands), 0..7)
            .prop_map(move |steps| BraidTangle::new(strands, &caps, &[], &steps).rotated(rotation))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(std::env::var("PROPTEST_CASES").ok().and_then(|v| v.parse().ok()).unwrap_or(48)))]

    #[test]
    fn shift_round_trip(m in 0usize..5, s in -6i32..6) {
        let v = GradedF2Space::tensor_power(m);
        prop_assert_eq!(v.shift(s).shift(-s), v);
    }

    #[test]
    fn permutations_compose((p, q) in (1usize..5).prop_flat_map(|m| (permutation(m), permutation(m)))) {
        let m = p.len();
        let pq: Vec<usize> = q.iter().map(|&k| p[k]).collect();
        let lhs = tensor_permutation(m, &p).unwrap().mul(&tensor_permutation(m, &q).unwrap()).unwrap();
        prop_assert_eq!(lhs, tensor_permutation(m, &pq).unwrap());
    }

    #[test]
    fn rank_nullity(a in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        let (rank, kernel) = a.rank_and_kernel();
        prop_assert_eq!(rank + kernel.len(), a.cols());
        prop_assert_eq!(a.transpose().rank(), rank);
    }

    #[test]
    fn kron_is_multiplicative(a in matrix(2, 3), b in matrix(3, 2), c in matrix(3, 2), d in matrix(2, 2)) {
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        prop_assert_eq!(lhs, a.mul(&c).unwrap().kron(&b.mul(&d).unwrap()));
    }

    #[test]
    fn diagrams_and_complexes_round_trip(b in braid(), k in 0u8..2) {
        let d = b.oriented(k).unwrap();
        prop_assert_eq!(&parse_tangle(&d.to_json()).unwrap(), &d);
        let tc = twisted_complex(&d, false);
        prop_assert_eq!(TwistedComplex::from_json(&tc.to_json()).unwrap(), tc);
        let t = rank_table(&d, k, false).unwrap();
        prop_assert_eq!(RankTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn random_tangles_match_the_oracle(b in braid(), k in 0u8..2) {
        let d = b.oriented(k).unwrap();
        prop_assert!(orientation_extends(&d, k));
        let ours = rank_table(&d, k, false).unwrap();
        let link = close(&d, k);
        prop_assert_eq!(&ours, &reduced_khovanov(&link).unwrap());
        prop_assert_eq!(jones(&ours).unwrap(), jones_from_bracket(&link).unwrap());
    }

    #[test]
    fn relative_tables_are_translates(b in braid(), k in 0u8..2) {
        let d = b.oriented(k).unwrap();
        let (np, nn) = writhe_counts(&d).unwrap();
        let abs = rank_table(&d, k, false).unwrap();
        let rel = rank_table(&d, k, true).unwrap();
        prop_assert_eq!(rel.translate(np as i32 - 3 * nn as i32, -(nn as i32)).ranks, abs.ranks);
        // without an orientation the same relative table comes out
        prop_assert_eq!(rank_table(&d.without_orientation(), k, false).unwrap(), rel);
    }
}
