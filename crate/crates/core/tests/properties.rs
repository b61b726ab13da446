use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use qdecomp::abacus::RunnerTuple;
use qdecomp::blocks::{block_members, project, BlockId};
use qdecomp::fock::{
    apply_e_beta, apply_f_beta, k_exponent, k_exponent_beta, signed_quantum_int, to_beta, FockContext,
};
use qdecomp::partition::{partitions_of, partitions_up_to, Node};
use qdecomp::{BetaSet, CanonicalEngine, FockVector, LaurentPoly, Partition};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-8i32..=8, -20i64..=20), 0..6).prop_map(LaurentPoly::from_terms)
}

fn partition(max_size: usize) -> impl Strategy<Value = Partition> {
    let all = partitions_up_to(max_size);
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn bar_vec(v: &FockVector) -> Vec<(Partition, LaurentPoly)> {
    v.terms().map(|(l, c)| (l.clone(), c.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bar_is_a_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn evaluation_at_one_is_a_ring_map(a in poly(), b in poly(), c in poly()) {
        let abc = &(&a * &b) + &c;
        prop_assert_eq!(abc.evaluate_at_one(), a.evaluate_at_one() * b.evaluate_at_one() + c.evaluate_at_one());
    }

    #[test]
    fn beta_round_trip(lambda in partition(10), s in -3i64..=3) {
        let b = BetaSet::from_partition(&lambda, s);
        prop_assert_eq!(b.charge(), s);
        prop_assert_eq!(b.to_partition(), lambda);
    }

    #[test]
    fn relations_at_random_charge(n in 2usize..=4, s in -20i64..=20) {
        let r = qdecomp::fock::check_relations(FockContext::new(n, s).unwrap(), 3).unwrap();
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures.first());
    }

    #[test]
    fn f_and_e_change_size_by_one(lambda in partition(7), n in 2usize..=4, s in -3i64..=3, i in 0usize..4) {
        let ctx = FockContext::new(n, s).unwrap();
        let i = i % n;
        let v = FockVector::basis(ctx, lambda.clone());
        prop_assert!(v.apply_f(i).terms().all(|(l, _)| l.size() == lambda.size() + 1));
        prop_assert!(v.apply_e(i).terms().all(|(l, _)| l.size() + 1 == lambda.size()));
    }

    #[test]
    fn partition_and_beta_actions_agree(lambda in partition(7), n in 2usize..=4, s in -3i64..=3, i in 0usize..4) {
        let ctx = FockContext::new(n, s).unwrap();
        let i = i % n;
        let v = FockVector::basis(ctx, lambda.clone());
        let b = to_beta(&v);
        prop_assert_eq!(to_beta(&v.apply_f(i)), apply_f_beta(n, i, &b));
        prop_assert_eq!(to_beta(&v.apply_e(i)), apply_e_beta(n, i, &b));
    }

    #[test]
    fn truncation_postconditions(c in poly()) {
        let (alpha, rest) = c.symmetric_truncation();
        prop_assert_eq!(&alpha + &rest, c);
        prop_assert!(alpha.is_bar_symmetric());
        prop_assert!(rest.in_q_zq());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn truncation_is_unique(c in poly(), d in poly()) {
        let (alpha, rest) = c.symmetric_truncation();
        // Any other split differs by something bar-symmetric and in qZ[q], hence zero.
        let sym = &d + &d.bar();
        let other_rest = &rest - &sym;
        prop_assert!(sym.is_zero() || !other_rest.in_q_zq() || !(&alpha + &sym).is_bar_symmetric());
    }
}

#[test]
fn binomials_are_bar_symmetric() {
    for m in 0..=12 {
        for k in 0..=m {
            assert!(
                LaurentPoly::quantum_binom(m, k).unwrap().is_bar_symmetric(),
                "[{m} {k}]"
            );
        }
    }
}

#[test]
fn node_counts_match_abacus_k_exponent() {
    for lambda in partitions_up_to(10) {
        for n in 2..=5 {
            for s in [-2, 0, 3] {
                let ctx = FockContext::new(n, s).unwrap();
                let b = BetaSet::from_partition(&lambda, s);
                for i in 0..n {
                    assert_eq!(
                        k_exponent(&lambda, i, ctx),
                        k_exponent_beta(n, i, &b),
                        "{lambda} n={n} s={s} i={i}"
                    );
                }
            }
        }
    }
}

#[test]
fn lex_order_matches_beta_sequences() {
    for m in 0..=8 {
        let ps = partitions_of(m);
        for s in -2..=2 {
            let seq = |l: &Partition| {
                BetaSet::from_partition(l, s)
                    .descending()
                    .take(m + 1)
                    .collect::<Vec<_>>()
            };
            for a in &ps {
                for b in &ps {
                    assert_eq!(a.cmp(b), seq(a).cmp(&seq(b)), "{a} {b} s={s}");
                }
            }
        }
    }
}

/// Removable residue-`r` nodes left after cancelling each removable node
/// against the nearest free addable node to its right.
fn bracket_normal_nodes(lambda: &Partition, n: usize, r: usize) -> Vec<Node> {
    let mut word: Vec<(usize, bool, Node)> = Vec::new();
    word.extend(
        lambda
            .removable_nodes(n)
            .into_iter()
            .filter(|x| x.1 == r)
            .map(|x| (x.0.col, true, x.0)),
    );
    word.extend(
        lambda
            .addable_nodes(n)
            .into_iter()
            .filter(|x| x.1 == r)
            .map(|x| (x.0.col, false, x.0)),
    );
    word.sort();
    let mut open = Vec::new();
    for (_, removable, node) in word {
        if removable {
            open.push(node);
        } else {
            open.pop();
        }
    }
    open
}

#[test]
fn normal_nodes_match_bracket_cancellation() {
    for lambda in partitions_up_to(10) {
        for n in 2..=5 {
            for r in 0..n {
                assert_eq!(
                    lambda.normal_nodes(n, r),
                    bracket_normal_nodes(&lambda, n, r),
                    "{lambda} n={n} r={r}"
                );
            }
        }
    }
}

#[test]
fn normal_nodes_need_not_be_closed_to_the_right() {
    let lambda: Partition = "(3,2,1,1)".parse().unwrap();
    let removable: Vec<Node> = lambda
        .removable_nodes(3)
        .into_iter()
        .filter(|x| x.1 == 0)
        .map(|x| x.0)
        .collect();
    assert_eq!(removable, vec![Node::new(4, 1), Node::new(2, 2)]);
    assert_eq!(lambda.normal_nodes(3, 0), vec![Node::new(4, 1)]);
}

#[test]
fn bead_moves_are_node_and_hook_removals() {
    for lambda in partitions_up_to(8) {
        for n in 2..=5 {
            for s in [-1, 0, 2] {
                let b = BetaSet::from_partition(&lambda, s);
                let mut by_bead = BTreeSet::new();
                let mut hooks_by_bead = BTreeSet::new();
                for x in b.explicit_beads() {
                    if !b.contains(x - 1) {
                        let r = (x - s).rem_euclid(n as i64) as usize;
                        by_bead.insert((b.move_bead(x, x - 1).unwrap().to_partition(), r));
                    }
                    if !b.contains(x - n as i64) {
                        hooks_by_bead.insert(b.move_bead(x, x - n as i64).unwrap().to_partition());
                    }
                }
                let by_node: BTreeSet<(Partition, usize)> = lambda
                    .removable_nodes(n)
                    .into_iter()
                    .map(|(x, r)| (lambda.remove_node(x).unwrap(), r))
                    .collect();
                assert_eq!(by_bead, by_node, "{lambda} n={n} s={s}");
                let by_hook: BTreeSet<Partition> = lambda
                    .nodes()
                    .into_iter()
                    .map(|x| lambda.unwrap_rim_hook(x).unwrap())
                    .filter(|h| h.size == n)
                    .map(|h| h.partition)
                    .collect();
                assert_eq!(hooks_by_bead, by_hook, "{lambda} n={n} s={s}");
            }
        }
    }
}

#[test]
fn blocks_partition_each_size() {
    for n in [3, 4] {
        for r in [2, 3] {
            for nt in RunnerTuple::all(n, r) {
                for s in [0, 1] {
                    for m in 0..=8 {
                        let mut seen: BTreeMap<Partition, usize> = BTreeMap::new();
                        let mut ids: Vec<BlockId> = Vec::new();
                        for l in partitions_of(m) {
                            let t = BlockId::of(&l, &nt, s);
                            if !ids.contains(&t) {
                                ids.push(t);
                            }
                        }
                        for t in &ids {
                            for l in block_members(t, m).unwrap().into_iter().filter(|l| l.size() == m) {
                                *seen.entry(l).or_default() += 1;
                            }
                        }
                        assert_eq!(seen.len(), partitions_of(m).len(), "nt={nt} s={s} m={m}");
                        assert!(seen.values().all(|&c| c == 1), "nt={nt} s={s} m={m}");
                    }
                }
            }
        }
    }
}

#[test]
fn signature_order_is_total_per_charge() {
    for nt in RunnerTuple::all(3, 2).into_iter().chain(RunnerTuple::all(4, 3)) {
        for s in [0, 1] {
            let mut sigs = Vec::new();
            for l in partitions_up_to(8) {
                let t = BetaSet::from_partition(&l, s).block_signature(&nt);
                if !sigs.contains(&t) {
                    sigs.push(t);
                }
            }
            for a in &sigs {
                for b in &sigs {
                    let ab = a.partial_cmp(b).expect("comparable");
                    assert_eq!(ab, b.partial_cmp(a).unwrap().reverse());
                    assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
                }
            }
        }
    }
}

#[test]
fn support_duality_of_e_and_f() {
    for n in [2, 3] {
        let ctx = FockContext::new(n, 1).unwrap();
        for lambda in partitions_up_to(6) {
            for i in 0..n {
                let up: BTreeSet<Partition> = FockVector::basis(ctx, lambda.clone())
                    .apply_f(i)
                    .terms()
                    .map(|(l, _)| l.clone())
                    .collect();
                for mu in partitions_of(lambda.size() + 1) {
                    let down = FockVector::basis(ctx, mu.clone()).apply_e(i);
                    assert_eq!(up.contains(&mu), !down.coeff(&lambda).is_zero(), "{lambda} {mu} i={i}");
                }
            }
        }
    }
}

#[test]
fn unshifted_k_breaks_the_commutator() {
    // The operators act on residue i - s; pairing them with K read at residue i fails for s = 1.
    let ctx = FockContext::new(3, 1).unwrap();
    let unshifted = FockContext::new(3, 0).unwrap();
    let mut shifted_ok = true;
    let mut unshifted_ok = true;
    for lambda in partitions_up_to(4) {
        for i in 0..3 {
            let v = FockVector::basis(ctx, lambda.clone());
            let mut comm = v.apply_f(i).apply_e(i);
            comm.add_scaled(&v.apply_e(i).apply_f(i), &-LaurentPoly::one());
            let want = |c: FockContext| {
                FockVector::basis(ctx, lambda.clone()).scaled(&signed_quantum_int(k_exponent(&lambda, i, c)))
            };
            shifted_ok &= bar_vec(&comm) == bar_vec(&want(ctx));
            unshifted_ok &= bar_vec(&comm) == bar_vec(&want(unshifted));
        }
    }
    assert!(shifted_ok);
    assert!(!unshifted_ok);
}

#[test]
fn row_removal() {
    let engine = CanonicalEngine::new();
    for n in [2, 3] {
        for m in 1..=8 {
            for mu in partitions_of(m) {
                let col = engine.column(&mu, n).unwrap();
                for lambda in partitions_of(m) {
                    if lambda.part(1) != mu.part(1) {
                        continue;
                    }
                    let cut = engine
                        .d(&lambda.strip_first_rows(1), &mu.strip_first_rows(1), n)
                        .unwrap();
                    assert_eq!(col.get(&lambda), cut, "n={n} {lambda} {mu}");
                }
            }
        }
    }
}

#[test]
fn nonzero_entries_respect_the_signature_order() {
    let engine = CanonicalEngine::new();
    // (1,1) appears in G((2)) although the two sit in different (1,1)-blocks.
    let two: Partition = "(2)".parse().unwrap();
    let ones: Partition = "(1,1)".parse().unwrap();
    let nt11 = RunnerTuple::new(vec![1, 1]).unwrap();
    assert!(!engine.d(&ones, &two, 2).unwrap().is_zero());
    assert_ne!(BlockId::of(&ones, &nt11, 0), BlockId::of(&two, &nt11, 0));

    for n in [3, 4] {
        for nt in RunnerTuple::all(n, 2) {
            for s in [0, 1] {
                for mu in partitions_up_to(8) {
                    let tm = BetaSet::from_partition(&mu, s).block_signature(&nt);
                    for lambda in engine.column(&mu, n).unwrap().entries.keys() {
                        let tl = BetaSet::from_partition(lambda, s).block_signature(&nt);
                        assert!(tl <= tm, "n={n} nt={nt} s={s} {lambda} in G({mu})");
                    }
                }
            }
        }
    }
}

#[test]
fn projection_commutes_with_parabolic_generators() {
    let engine = CanonicalEngine::new();
    for n in [3, 4] {
        for nt in RunnerTuple::all(n, 2) {
            let boundary: BTreeSet<usize> = (0..nt.len()).map(|j| nt.sigma(j) % n).collect();
            for s in [0, 1] {
                let ctx = FockContext::new(n, s).unwrap();
                for lambda in partitions_up_to(6) {
                    let t = BlockId::of(&lambda, &nt, s);
                    let g = engine.column(&lambda, n).unwrap().to_vector(s);
                    for i in (0..n).filter(|i| !boundary.contains(i)) {
                        let lhs = project(&g.apply_f(i), &t).unwrap();
                        let rhs = project(&g, &t).unwrap().apply_f(i);
                        assert_eq!(bar_vec(&lhs), bar_vec(&rhs), "n={n} nt={nt} s={s} {lambda} i={i}");
                        let lhs = project(&FockVector::basis(ctx, lambda.clone()).apply_e(i), &t).unwrap();
                        let rhs = FockVector::basis(ctx, lambda.clone()).apply_e(i);
                        assert_eq!(bar_vec(&lhs), bar_vec(&rhs));
                    }
                }
            }
        }
    }
}

#[test]
fn induced_block_expansion_matches_full_expansion() {
    let engine = CanonicalEngine::new();
    for n in [3, 4] {
        for nt in RunnerTuple::all(n, 2) {
            let boundary: BTreeSet<usize> = (0..nt.len()).map(|j| nt.sigma(j) % n).collect();
            for s in [0, 1] {
                for lambda in partitions_up_to(5) {
                    let t = BlockId::of(&lambda, &nt, s);
                    let g = engine.column(&lambda, n).unwrap().to_vector(s);
                    for i in (0..n).filter(|i| !boundary.contains(i)) {
                        let full = engine.expand_in_canonical(&g.apply_f(i)).unwrap();
                        let restricted: BTreeMap<Partition, LaurentPoly> =
                            full.into_iter().filter(|(mu, _)| t.contains(mu)).collect();
                        let block_g = project(&g, &t).unwrap().apply_f(i);
                        let block = qdecomp::fk2::expand_in_block(&engine, &block_g, &t).unwrap();
                        assert_eq!(block, restricted, "n={n} nt={nt} s={s} {lambda} i={i}");
                    }
                }
            }
        }
    }
}
