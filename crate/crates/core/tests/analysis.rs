use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use setecc::analysis::packing::{enumerate_confusable, SmallUniverse};
use setecc::analysis::suite::{run_lemma_suite, SuiteConfig};
use setecc::analysis::{
    ball_upper, boundary_and_influence, count_special_subsets, enumerate_ball, greedy_packing,
    WorkGuard,
};
use setecc::combinatorics::binomial_u64;
use setecc::{BitString, Params, Word};

fn word(rows: &[&str]) -> Word {
    Word::parse_rows(rows).unwrap()
}

fn all_words(m: usize, l: usize) -> Vec<Word> {
    (0u64..1 << l)
        .combinations(m)
        .map(|c| Word::new(c.into_iter().map(|x| BitString::from_u64(x, l))).unwrap())
        .collect()
}

/// Boundary edges by scanning every edge of the cube.
fn boundary_edges(w: &Word) -> Vec<(u64, u64)> {
    let l = w.string_len();
    let inside: BTreeSet<u64> = w.rows().iter().map(|r| r.to_u64()).collect();
    let mut out = Vec::new();
    for x in 0u64..1 << l {
        for i in 0..l {
            let y = x ^ 1 << i;
            if x < y && inside.contains(&x) != inside.contains(&y) {
                // Store the endpoint inside W first.
                out.push(if inside.contains(&x) { (x, y) } else { (y, x) });
            }
        }
    }
    out
}

#[test]
fn example_ball_has_seven_members() {
    let b = enumerate_ball(&word(&["001", "011"]), 1, &WorkGuard::default()).unwrap();
    let expect: BTreeSet<Word> = [
        &["001", "011"][..],
        &["101", "011"],
        &["011"],
        &["000", "011"],
        &["001", "111"],
        &["001"],
        &["001", "010"],
    ]
    .iter()
    .map(|r| word(r))
    .collect();
    assert_eq!(b.members.into_iter().collect::<BTreeSet<_>>(), expect);
    assert_eq!(b.count, 7);
}

#[test]
fn ball_members_are_within_k_flips() {
    let w = word(&["0110", "1011", "0000"]);
    let b = enumerate_ball(&w, 2, &WorkGuard::default()).unwrap();
    assert!(BigUint::from(b.count) <= ball_upper(12, 2));
    for v in &b.members {
        // Cheapest onto map from the rows of w to the rows of v.
        let best = (0..w.size())
            .map(|_| 0..v.size())
            .multi_cartesian_product()
            .filter(|f| f.iter().collect::<BTreeSet<_>>().len() == v.size())
            .map(|f| {
                f.iter()
                    .enumerate()
                    .map(|(i, &j)| w.rows()[i].hamming_distance(&v.rows()[j]))
                    .sum::<usize>()
            })
            .min();
        assert!(best.is_some_and(|u| u <= 2), "{v:?}");
    }
}

#[test]
fn boundary_matches_edge_scan() {
    let g = WorkGuard::default();
    let r = boundary_and_influence(&word(&["001", "011"]), &g).unwrap();
    assert_eq!(r.boundary_size, 4);
    assert_eq!(r.ball1_size, 7);
    assert!(r.ball_bound_holds);
    assert_eq!(
        boundary_and_influence(&word(&["101"]), &g)
            .unwrap()
            .boundary_size,
        3
    );
    for w in all_words(2, 4).into_iter().chain(all_words(3, 3)) {
        let r = boundary_and_influence(&w, &g).unwrap();
        assert_eq!(r.boundary_size, boundary_edges(&w).len() as u64);
        assert!(r.identity_holds);
    }
}

#[test]
fn boundary_bound_is_tight_off_by_the_center() {
    let g = WorkGuard::default();
    let r = boundary_and_influence(&word(&["0011", "0101", "1111"]), &g).unwrap();
    assert_eq!(r.boundary_size, 12);
    assert_eq!(r.ball1_size, 13);
    assert_eq!(r.ball_bound_tight, Some(true));
}

#[test]
fn special_subsets_match_pair_scan() {
    let g = WorkGuard::default();
    for w in all_words(2, 3)
        .into_iter()
        .chain(all_words(3, 4).into_iter().step_by(37))
    {
        let edges = boundary_edges(&w);
        let one = count_special_subsets(&w, 1, &g).unwrap();
        assert_eq!(one.count, BigUint::from(edges.len()));
        for k in 2..=3 {
            let brute = edges
                .iter()
                .combinations(k)
                .filter(|c| c.iter().map(|e| e.0).collect::<BTreeSet<_>>().len() == k)
                .count();
            let r = count_special_subsets(&w, k, &g).unwrap();
            assert_eq!(r.count, BigUint::from(brute), "{w:?} k={k}");
            assert!(r.ball_bound_holds);
        }
    }
    // Closed form for pairs: all pairs minus pairs sharing an inside endpoint.
    let w = word(&["001", "011"]);
    let edges = boundary_edges(&w);
    let shared: u64 = [0b001u64, 0b011]
        .iter()
        .map(|&x| edges.iter().filter(|e| e.0 == x).count() as u64)
        .map(|d| d * d.saturating_sub(1) / 2)
        .sum();
    let expect = binomial_u64(edges.len() as u64, 2) - shared;
    assert_eq!(count_special_subsets(&w, 2, &g).unwrap().count, expect);
    assert_eq!(expect, BigUint::from(4u32));
}

/// `R_K(V)` by testing membership of `V` in the ball of every candidate.
fn receivers_oracle(v: &Word, m: usize, k: usize) -> usize {
    let g = WorkGuard::default();
    all_words(m, v.string_len())
        .iter()
        .filter(|u| enumerate_ball(u, k, &g).unwrap().members.contains(v))
        .count()
}

#[test]
fn receiver_sets_match_oracle_and_bound() {
    let params = Params::new(2, 3, 1).unwrap();
    let u = SmallUniverse::new(params, &WorkGuard::default()).unwrap();
    let limit = 2 * (2 * 2 * 3);
    for (v, n) in u.receiver_sizes() {
        let vw = u.to_word(v);
        assert_eq!(n, receivers_oracle(&vw, 2, 1), "{vw:?}");
        assert!(n <= limit);
    }
    for i in 0..u.len() {
        assert!(u.receivers(u.mask(i)).contains(&i));
    }
}

#[test]
fn confusable_covers_ball_words() {
    let g = WorkGuard::default();
    for w in all_words(2, 3) {
        let c = enumerate_confusable(&w, 1, &g).unwrap();
        let conf: BTreeSet<&Word> = c.confusable.iter().collect();
        let ball = enumerate_ball(&w, 1, &g).unwrap();
        for v in ball.members.iter().filter(|v| v.size() == 2) {
            assert!(conf.contains(v));
        }
        assert!(conf.contains(&w));
    }
}

#[test]
fn greedy_packing_small_cases() {
    let g = WorkGuard::default();
    let p = greedy_packing(Params::new(1, 3, 1).unwrap(), &g).unwrap();
    assert_eq!(p.code, vec![word(&["000"]), word(&["111"])]);
    assert_eq!(p.max_confusable, 7);
    assert!(p.disjoint && p.size_bound_holds);
    for (m, l, k) in [(2, 3, 1), (2, 4, 1), (3, 4, 1), (2, 4, 2)] {
        let p = greedy_packing(Params::new(m, l, k).unwrap(), &g).unwrap();
        assert!(p.disjoint && p.size_bound_holds, "{m} {l} {k}");
        // Pairwise ball disjointness on the word representation as well.
        for (a, b) in p.code.iter().tuple_combinations() {
            let ba: BTreeSet<Word> = enumerate_ball(a, k, &g)
                .unwrap()
                .members
                .into_iter()
                .collect();
            assert!(enumerate_ball(b, k, &g)
                .unwrap()
                .members
                .iter()
                .all(|v| !ba.contains(v)));
        }
    }
}

#[test]
fn small_lemma_suite_passes() {
    let cfg = SuiteConfig {
        max_m: 2,
        max_l: 4,
        ..SuiteConfig::default()
    };
    let r = run_lemma_suite(&cfg).unwrap();
    for l in &r.lemmas {
        assert!(l.passed(), "{l:?}");
    }
    assert!(r.passed);
}

#[test]
fn guard_refuses_large_universe() {
    let err = SmallUniverse::new(Params::new(3, 6, 2).unwrap(), &WorkGuard::new(1000)).unwrap_err();
    assert_eq!(err.kind(), "guard_exceeded");
}
