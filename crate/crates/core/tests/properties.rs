use std::collections::HashSet;

use proptest::prelude::*;
use ulam_core::channel::{relocate, RelocationTrace};
use ulam_core::codes::{greedy_gv_code, hamming_distance, BlockCode, ReedSolomon};
use ulam_core::perm::{
    lcs_length, lcs_length_dp, restrict, ulam_distance, ulam_distance_dp, DistinctString, Permutation,
};

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn same_length_triple(max_n: usize) -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1..=max_n).prop_flat_map(|n| {
        let p = || Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap());
        (p(), p(), p())
    })
}

/// Two distinct-symbol strings over overlapping symbol pools.
fn distinct_pair() -> impl Strategy<Value = (DistinctString, DistinctString)> {
    let s = || {
        proptest::collection::hash_set(0usize..40, 0..20)
            .prop_flat_map(|set| Just(set.into_iter().collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| DistinctString::new(v).unwrap())
    };
    (s(), s())
}

proptest! {
    #[test]
    fn lcs_matches_dp((a, b) in distinct_pair()) {
        prop_assert_eq!(lcs_length(&a, &b), lcs_length_dp(&a, &b));
    }

    #[test]
    fn ulam_matches_dp((a, b, _) in same_length_triple(60)) {
        prop_assert_eq!(ulam_distance(&a, &b).unwrap(), ulam_distance_dp(&a, &b).unwrap());
    }

    #[test]
    fn metric_axioms((a, b, c) in same_length_triple(40)) {
        let ab = ulam_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, ulam_distance(&b, &a).unwrap());
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(ab < a.len());
        let ac = ulam_distance(&a, &c).unwrap();
        let cb = ulam_distance(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb);
    }

    #[test]
    fn subadditivity((a, b, _) in same_length_triple(64), parts in 1usize..8, seed in any::<u64>()) {
        // label each symbol with a part drawn from the seed
        let label = |s: usize| (s as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(seed) % parts as u64;
        let total = lcs_length(&a, &b);
        let mut sum = 0;
        for part in 0..parts as u64 {
            let keep: HashSet<usize> = (0..a.len()).filter(|&s| label(s) == part).collect();
            sum += lcs_length(&restrict(&a, &keep), &restrict(&b, &keep));
        }
        prop_assert!(total <= sum);
    }

    #[test]
    fn relocation_budget(p in permutation(50), t_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let t = (t_frac * p.len() as f64) as usize;
        let (q, trace) = relocate(&p, t, seed).unwrap();
        prop_assert!(ulam_distance(&p, &q).unwrap() <= t);
        prop_assert_eq!(trace.replay(&p).unwrap(), q.clone());
        let mut buf = Vec::new();
        trace.write_to(&mut buf).unwrap();
        prop_assert_eq!(RelocationTrace::read_from(&buf[..]).unwrap(), trace);
    }

    #[test]
    fn text_round_trip(p in permutation(30)) {
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }

    #[test]
    fn rs_corrects_up_to_radius(msg in proptest::collection::vec(0usize..16, 5), errs in proptest::collection::vec((0usize..15, 1usize..16), 0..=5)) {
        let rs = ReedSolomon::new(16, 15, 5).unwrap();
        let cw = rs.encode(&msg).unwrap();
        let mut w = cw.clone();
        for &(pos, delta) in &errs {
            w[pos] ^= delta;
        }
        let dec = rs.decode(&w).unwrap();
        if hamming_distance(&w, &cw) <= rs.spec().decoding_radius {
            prop_assert_eq!(dec, Some(msg));
        } else if let Some(m) = dec {
            // any answer must be certified
            prop_assert!(hamming_distance(&rs.encode(&m).unwrap(), &w) <= rs.spec().decoding_radius);
        }
    }

    #[test]
    fn gv_round_trip(idx in 0usize..16) {
        let c = greedy_gv_code(2, 7, 3).unwrap();
        let k = c.spec().message_length;
        let msg: Vec<usize> = (0..k).map(|i| (idx >> (k - 1 - i)) & 1).collect();
        let cw = c.encode(&msg).unwrap();
        prop_assert_eq!(c.decode(&cw).unwrap(), Some(msg));
    }
}
