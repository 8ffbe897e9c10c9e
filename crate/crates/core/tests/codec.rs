use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ulam_core::codes::{all_codewords, greedy_gv_code, BlockCode, RepetitionCode};
use ulam_core::ground::{xor_ground_set, GroundSet};
use ulam_core::perm::{lcs_length, restrict, Permutation};
use ulam_core::ulam::{apply_stage, stage_trace, ShufflerTuple, StageLayout, UlamCode};

fn small_code() -> UlamCode {
    // q = 4, D = XOR of all binary words of length 2 (L = 2), C = GV over [4], length 4, d = 3
    let words = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
    let ground = xor_ground_set(4, &words).unwrap();
    UlamCode::new(4, 2, ground, Arc::new(greedy_gv_code(4, 4, 3).unwrap())).unwrap()
}

fn all_tuples(code: &UlamCode) -> Vec<ShufflerTuple> {
    let m: u64 = code.message_count().try_into().unwrap();
    (0..m).map(|x| code.message_to_shufflers(&BigUint::from(x)).unwrap()).collect()
}

#[test]
fn stage_bijectivity_and_locality() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ground = xor_ground_set(4, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
    let layout = StageLayout::new(4, 3).unwrap();
    for _ in 0..200 {
        let mut v: Vec<usize> = (0..64).collect();
        rand::seq::SliceRandom::shuffle(&mut v[..], &mut rng);
        let before = Permutation::new(v).unwrap();
        let stage = rng.gen_range(1..=3);
        let w: Vec<usize> = (0..16).map(|_| rng.gen_range(0..4)).collect();
        let after = apply_stage(&before, &layout, stage, &w, &ground).unwrap();
        // valid permutation by construction; re-check through the checked constructor
        Permutation::new(after.as_slice().to_vec()).unwrap();
        let before_pos = before.positions();
        let after_pos = after.positions();
        let stride = 4usize.pow(3 - stage as u32);
        for s in 0..64 {
            let (a, b) = (before_pos[s], after_pos[s]);
            // only digit `stage` may differ
            assert_eq!(a - (a / stride % 4) * stride, b - (b / stride % 4) * stride);
        }
    }
}

#[test]
fn injective_and_lcs_bound() {
    let code = small_code();
    let tuples = all_tuples(&code);
    let words: Vec<Permutation> = tuples.iter().map(|t| code.encode_shufflers(t).unwrap()).collect();
    let distinct: HashSet<&Permutation> = words.iter().collect();
    assert_eq!(distinct.len(), words.len());
    let upper = code.code_bounds().lcs_upper;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            assert!(lcs_length(&words[i], &words[j]) <= upper);
        }
    }
}

#[test]
fn lcs_frozen_after_first_difference() {
    let code = small_code();
    let tuples = all_tuples(&code);
    let layout = *code.layout();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let a = &tuples[rng.gen_range(0..tuples.len())];
        let b = &tuples[rng.gen_range(0..tuples.len())];
        let Some(j) = (0..layout.levels()).find(|&i| a.0[i] != b.0[i]) else { continue };
        let ta = stage_trace(&layout, code.ground(), a).unwrap();
        let tb = stage_trace(&layout, code.ground(), b).unwrap();
        // stages before j agree, so both share the stage-(j+1) symbol groups
        assert_eq!(ta[j], tb[j]);
        for group in 0..layout.groups() {
            let a_set: HashSet<usize> =
                (0..layout.q()).map(|x| ta[j].as_slice()[layout.position(j + 1, group, x)]).collect();
            let at = |k: usize| lcs_length(&restrict(&ta[k], &a_set), &restrict(&tb[k], &a_set));
            let first = at(j + 1);
            for k in (j + 2)..=layout.levels() {
                assert_eq!(at(k), first);
            }
        }
    }
}

#[test]
fn binary_special_case_matches_raw_shufflers() {
    // n = 8, p = q = 2, D = {01, 10}, C = binary GV code of length 4, d = 2
    let ground = GroundSet::new(vec![
        Permutation::new(vec![0, 1]).unwrap(),
        Permutation::new(vec![1, 0]).unwrap(),
    ])
    .unwrap();
    let c = Arc::new(greedy_gv_code(2, 4, 2).unwrap());
    let code = UlamCode::new(2, 3, ground.clone(), c.clone()).unwrap();
    let layout = StageLayout::new(2, 3).unwrap();
    let cws = all_codewords(c.as_ref()).unwrap();
    let k = c.spec().message_length as u32;
    for x in 0..code.message_count().try_into().unwrap() {
        let x: u64 = x;
        let per = 1u64 << k;
        let parts = [x / (per * per), x / per % per, x % per];
        let tuple = ShufflerTuple(parts.iter().map(|&i| cws[i as usize].clone()).collect());
        let expect = stage_trace(&layout, &ground, &tuple).unwrap().pop().unwrap();
        assert_eq!(code.encode_u64(x).unwrap(), expect);
        assert_eq!(code.decode(&expect).unwrap().message, BigUint::from(x));
    }
}

#[test]
fn decode_every_two_relocation_neighbour() {
    let ground = xor_ground_set(4, &[vec![0, 0], vec![1, 1]]).unwrap();
    let code = UlamCode::new(4, 2, ground, Arc::new(RepetitionCode::new(2, 4).unwrap())).unwrap();
    assert_eq!(code.max_correctable(), Some(2));
    let relocate = |v: &mut Vec<usize>, a: usize, b: usize| {
        let s = v.remove(a);
        v.insert(b, s);
    };
    for x in 0..4u64 {
        let cw = code.encode_u64(x).unwrap();
        let mut seen = HashSet::new();
        for a in 0..16 {
            for b in 0..16 {
                for c in 0..16 {
                    for d in 0..16 {
                        let mut v = cw.as_slice().to_vec();
                        relocate(&mut v, a, b);
                        relocate(&mut v, c, d);
                        if !seen.insert(v.clone()) {
                            continue;
                        }
                        let got = code.decode(&Permutation::new(v).unwrap()).unwrap();
                        assert_eq!(got.message, BigUint::from(x));
                        assert_eq!(got.codeword, cw);
                    }
                }
            }
        }
    }
}
