use std::collections::BTreeSet;

use num::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symlab::boolfn::{apply_perm, is_symmetric_under, Word};
use symlab::cli::{parse_fn, SpecContext};
use symlab::oracles::{approx_degree_with, det_query_complexity, DegreeOptions};
use symlab::perm::{GroupAction, Permutation};
use symlab::shuffle::{
    power_word, shuffle_simulate, symmetrize, FiniteDistribution, FunctionEvaluator, PowerReduction, QueryAlgorithm,
    QueryOracle, ReplayOracle, ScriptedDistinguisher, ShuffleMode, SimError,
};
use symlab::transforms::{
    block_index, distinct_tuples_action, merge_actions, quotient_permutation, restrict_to_orbits,
    unordered_pair_blocks,
};

const CAP: usize = 100_000;

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).expect("bijection"))
}

/// 1–3 random generators on `[n]`, `2 ≤ n ≤ 6`.
fn group_strategy() -> impl Strategy<Value = GroupAction> {
    (2usize..=6).prop_flat_map(|n| {
        prop::collection::vec(perm_strategy(n), 1..=3)
            .prop_map(move |gens| GroupAction::new(n, gens).expect("valid generators"))
    })
}

fn elements(g: &GroupAction) -> BTreeSet<Vec<usize>> {
    g.closure_elements(CAP)
        .expect("small group")
        .into_iter()
        .map(|p| p.images().to_vec())
        .collect()
}

fn word_strategy(n: usize, m: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..m, n)
}

fn rational_distribution(n: usize, m: usize) -> impl Strategy<Value = FiniteDistribution> {
    prop::collection::vec((word_strategy(n, m), 1i64..=7), 1..=5).prop_map(|items| {
        let total: i64 = items.iter().map(|(_, w)| w).sum();
        let mut merged = std::collections::BTreeMap::<Word, BigRational>::new();
        for (x, w) in items {
            *merged.entry(x).or_default() += BigRational::new(w.into(), total.into());
        }
        FiniteDistribution::new(merged).expect("weights sum to one")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_a_group_of_the_stated_order(g in group_strategy()) {
        let els = g.closure_elements(CAP).unwrap();
        let set = elements(&g);
        prop_assert_eq!(BigRational::from_integer(els.len().into()), BigRational::from_integer(g.order().into()));
        prop_assert!(set.contains(&(0..g.degree()).collect::<Vec<_>>()));
        for a in els.iter().take(12) {
            prop_assert!(set.contains(a.inverse().images()));
            for b in els.iter().take(12) {
                prop_assert!(set.contains(a.compose(b).images()));
            }
        }
    }

    #[test]
    fn membership_agrees_with_closure(g in group_strategy(), seed in any::<u64>()) {
        let set = elements(&g);
        let n = g.degree();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample = g.uniform_sample(&mut rng);
        prop_assert!(set.contains(sample.images()));
        for p in symlab::perm::GroupAction::symmetric(n).closure_elements(CAP).unwrap().iter().take(120) {
            prop_assert_eq!(g.contains(p).unwrap(), set.contains(p.images()));
        }
    }

    #[test]
    fn quotient_is_a_homomorphism(k in 3usize..=5, a in 0usize..10_000, b in 0usize..10_000) {
        let angle = distinct_tuples_action(&GroupAction::symmetric(k), 2, CAP).unwrap();
        let blocks = unordered_pair_blocks(&angle.encoding).unwrap();
        let block_of = block_index(angle.degree(), &blocks).unwrap();
        let els = angle.action.closure_elements(CAP).unwrap();
        let (p, s) = (&els[a % els.len()], &els[b % els.len()]);
        let lhs = quotient_permutation(&p.compose(s), &blocks, &block_of).unwrap();
        let rhs = quotient_permutation(p, &blocks, &block_of)
            .unwrap()
            .compose(&quotient_permutation(s, &blocks, &block_of).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn restricting_to_everything_and_self_merge_are_identities(g in group_strategy()) {
        let all: Vec<usize> = (0..g.degree()).collect();
        let r = restrict_to_orbits(&g, &all).unwrap().action;
        prop_assert_eq!(elements(&r), elements(&g));
        let m = merge_actions(&g, &g).unwrap();
        prop_assert_eq!(elements(&m), elements(&g));
    }

    #[test]
    fn merge_contains_both(g in group_strategy(), extra in perm_strategy(6)) {
        let n = g.degree();
        let imgs: Vec<usize> = extra.images().iter().copied().filter(|&v| v < n).collect();
        let h = GroupAction::new(n, vec![Permutation::from_images(imgs).unwrap()]).unwrap();
        let m = elements(&merge_actions(&g, &h).unwrap());
        prop_assert!(elements(&g).is_subset(&m));
        prop_assert!(elements(&h).is_subset(&m));
    }

    #[test]
    fn symmetrize_is_idempotent_and_invariant(nu in rational_distribution(4, 3)) {
        let g = GroupAction::cyclic(4);
        let s = symmetrize(&nu, &g, CAP).unwrap();
        prop_assert!(s.is_invariant_under(&g).unwrap());
        prop_assert_eq!(symmetrize(&s, &g, CAP).unwrap(), s);
    }

    #[test]
    fn small_range_simulation_reads_range_positions(x in word_strategy(5, 5), r in 1usize..5, seed in any::<u64>()) {
        let f = symlab::boolfn::PartialFn::from_predicate("total", 5, 5, |w: &[usize]| Some(w[0] == w[4]));
        let g = GroupAction::trivial(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut o = QueryOracle::new(x.clone());
        let out = shuffle_simulate(&FunctionEvaluator { f: f.clone() }, &g, r, ShuffleMode::UniformBalanced, &mut o, &mut rng).unwrap();
        prop_assert!(out.queries_used <= r);
        prop_assert_eq!(out.queries_used, out.alpha.range_size());
        prop_assert_eq!(o.count(), out.queries_used);
        let y = apply_perm(&x, out.alpha.images()).unwrap();
        prop_assert_eq!(Some(out.value), f.eval(&y));
    }

    #[test]
    fn reduction_transcripts_replay(x in word_strategy(3, 3), positions in prop::collection::vec(0usize..9, 1..=6)) {
        let red = PowerReduction { inner: ScriptedDistinguisher { len: 9, positions: positions.clone() }, n: 3, ell: 2 };
        let mut o = QueryOracle::new(x.clone());
        let out = red.run(&mut o).unwrap();
        prop_assert_eq!(o.count(), 2 * positions.len());
        let transcript = o.transcript(Some(out));
        let parsed = symlab::shuffle::Transcript::from_jsonl(&transcript.to_jsonl()).unwrap();
        let mut replay = ReplayOracle::new(3, &parsed);
        prop_assert_eq!(red.run(&mut replay).unwrap(), out);
        prop_assert!(replay.exhausted());
        let direct = ScriptedDistinguisher { len: 9, positions }.run(&mut QueryOracle::new(power_word(&x, 2))).unwrap();
        prop_assert_eq!(direct, out);
    }

    #[test]
    fn replay_rejects_a_different_algorithm(x in word_strategy(4, 4)) {
        let a = ScriptedDistinguisher { len: 4, positions: vec![0, 1] };
        let b = ScriptedDistinguisher { len: 4, positions: vec![1, 0] };
        let mut o = QueryOracle::new(x);
        let out = a.run(&mut o).unwrap();
        let mut replay = ReplayOracle::new(4, &o.transcript(Some(out)));
        let mismatch = matches!(b.run(&mut replay), Err(SimError::ReplayMismatch(_)));
        prop_assert!(mismatch);
    }
}

const ZOO: [&str; 9] = [
    "triv:3", "xor:2", "xor:3", "and:2", "and:3", "collision:4", "dist(sym:3,1)", "dist(sym:4,2)", "simon:4",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_is_non_increasing_in_epsilon(i in 0usize..ZOO.len(), a in 0i64..=10, b in 0i64..=10) {
        let fs = parse_fn(ZOO[i], &mut SpecContext::new(CAP)).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let opts = DegreeOptions::default();
        let d_lo = approx_degree_with(&fs.f, &BigRational::new(lo.into(), 20.into()), &opts, &fs.symmetry).unwrap().degree;
        let d_hi = approx_degree_with(&fs.f, &BigRational::new(hi.into(), 20.into()), &opts, &fs.symmetry).unwrap().degree;
        prop_assert!(d_lo >= d_hi, "{}: {} at {}/20 < {} at {}/20", ZOO[i], d_lo, lo, d_hi, hi);
    }
}

#[test]
fn degree_at_most_twice_det_on_the_zoo() {
    let mut ctx = SpecContext::new(CAP);
    for s in ZOO.iter().chain(["forr:4", "fortriv:16", "triv:5", "collision:6"].iter()) {
        let fs = parse_fn(s, &mut ctx).unwrap();
        let (det, tree) = det_query_complexity(&fs.f).unwrap();
        for (x, v) in fs.f.entries().unwrap() {
            assert_eq!(tree.eval(&x), v, "{s}: tree wrong on {x:?}");
        }
        let third = BigRational::new(1.into(), 3.into());
        let c = approx_degree_with(&fs.f, &third, &DegreeOptions::default(), &fs.symmetry).unwrap();
        assert!(c.degree <= 2 * det, "{s}: degree {} vs det {det}", c.degree);
        // a depth-D tree is itself a degree-D polynomial in the indicator basis
        assert!(c.degree <= det, "{s}: degree {} vs det {det}", c.degree);
    }
}

#[test]
fn zoo_functions_are_symmetric_under_their_groups() {
    let mut ctx = SpecContext::new(CAP);
    for s in ZOO.iter().chain(["forr:4", "fortriv:16", "collision:6", "dist(cyc:5,2)"].iter()) {
        let fs = parse_fn(s, &mut ctx).unwrap();
        assert!(is_symmetric_under(&fs.f, &fs.group).unwrap().symmetric, "{s}");
    }
}
