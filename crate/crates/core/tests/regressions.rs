//! Fixed values: figure data and small hand-computed cases.

use std::collections::BTreeSet;

use qdecomp::abacus::{render_abacus, RenderOptions, RunnerTuple};
use qdecomp::blocks::{block_members, lemma12_tuple, BlockId};
use qdecomp::fk2::{cup_matching, fk_column, lbt_coefficients, sign_sequence};
use qdecomp::fock::FockContext;
use qdecomp::partition::{partitions_of, partitions_up_to, Node};
use qdecomp::{BetaSet, CanonicalEngine, FockVector, LaurentPoly, Partition};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn figure() -> Partition {
    p("(13,12,10,8,8,8,6,5,5,3,2,1,1)")
}

fn q(e: i32) -> LaurentPoly {
    LaurentPoly::monomial(e, 1)
}

#[test]
fn figure_one_beads() {
    let b = BetaSet::from_partition(&figure(), 14);
    let top: Vec<i64> = b.descending().take(15).collect();
    assert_eq!(top, vec![26, 24, 21, 18, 17, 16, 13, 11, 10, 7, 5, 3, 2, 0, -1]);
    assert!((-40..0).all(|x| b.contains(x)));
    assert_eq!(b.charge(), 14);
    assert_eq!(b.to_partition(), figure());
    assert_eq!(Node::new(13, 1).residue(9), 6);
}

#[test]
fn figure_one_picture() {
    let b = BetaSet::from_partition(&figure(), 14);
    let text = render_abacus(
        &b,
        9,
        &RenderOptions {
            rows: Some((-2, 2)),
            sections: None,
        },
    );
    let rows: Vec<&str> = text.lines().skip(1).map(|l| &l[4..]).collect();
    assert_eq!(
        rows,
        vec![
            "o o o o o o o o o",
            "o o o o o o o o o",
            "o . o o . o . o .",
            ". o o . o . . o o",
            "o . . o . . o . o",
        ]
    );
    let wide = render_abacus(
        &b,
        9,
        &RenderOptions {
            rows: Some((-2, 2)),
            sections: Some(RunnerTuple::new(vec![4, 2, 3]).unwrap()),
        },
    );
    assert_eq!(wide.lines().nth(3).unwrap(), " 0  o . o o | . o | . o .");
}

#[test]
fn figure_two_sections() {
    let nt = RunnerTuple::new(vec![4, 2, 3]).unwrap();
    let b = BetaSet::from_partition(&figure(), 14);
    let sets = b.section_sets(&nt);
    let set = |xs: &[usize]| xs.iter().copied().collect::<BTreeSet<_>>();
    assert_eq!(
        [sets.get(0, 0), sets.get(0, 1), sets.get(0, 2)],
        [set(&[0, 2, 3]), set(&[1]), set(&[1])]
    );
    assert_eq!(
        [sets.get(1, 0), sets.get(1, 1), sets.get(1, 2)],
        [set(&[1, 2]), set(&[0]), set(&[1, 2])]
    );
    assert_eq!(
        [sets.get(2, 0), sets.get(2, 1), sets.get(2, 2)],
        [set(&[0, 3]), set(&[]), set(&[0, 2])]
    );
    let t = b.block_signature(&nt);
    assert_eq!([t.count(0, 0), t.count(0, 1), t.count(0, 2)], [3, 1, 1]);
    assert_eq!([t.count(1, 0), t.count(1, 1), t.count(1, 2)], [2, 1, 2]);
    assert_eq!([t.count(2, 0), t.count(2, 1), t.count(2, 2)], [2, 0, 2]);
}

#[test]
fn figure_two_runner_split() {
    // Positions read straight off the picture, rows 0..2, re-indexed per section.
    let nt = RunnerTuple::new(vec![4, 2, 3]).unwrap();
    let beads: [(i64, i64); 14] = [
        (0, 0),
        (2, 0),
        (3, 0),
        (5, 0),
        (7, 0),
        (1, 1),
        (2, 1),
        (4, 1),
        (7, 1),
        (8, 1),
        (0, 2),
        (3, 2),
        (6, 2),
        (8, 2),
    ];
    let groups = [(0i64, 4i64), (4, 2), (6, 3)];
    let parts = BetaSet::from_partition(&figure(), 14).runner_split(&nt);
    for (j, &(start, width)) in groups.iter().enumerate() {
        let want: BTreeSet<i64> = beads
            .iter()
            .filter(|(x, _)| *x >= start && *x < start + width)
            .map(|(x, y)| y * width + (x - start))
            .collect();
        let got: BTreeSet<i64> = (0..40).filter(|&x| parts[j].0.contains(x)).collect();
        assert_eq!(got, want, "section {j}");
        assert!((-2 * width..0).all(|x| parts[j].0.contains(x)));
    }
    let merged = BetaSet::runner_merge(&parts.iter().map(|x| x.0.clone()).collect::<Vec<_>>(), &nt).unwrap();
    assert_eq!(merged, BetaSet::from_partition(&figure(), 14));
}

#[test]
fn laurent_examples() {
    let two = LaurentPoly::quantum_int(2).unwrap();
    assert_eq!(two, &q(1) + &q(-1));
    let three = LaurentPoly::quantum_int(3).unwrap();
    assert_eq!(LaurentPoly::quantum_factorial(3), &two * &three);
    let x = LaurentPoly::from_terms([(-3, 4), (0, -1), (5, 7)]);
    assert_eq!((&two * &x).exact_div(&two).unwrap(), x);
    let (alpha, rest) = LaurentPoly::from_terms([(-1, 1), (0, 2), (1, 5)]).symmetric_truncation();
    assert_eq!(alpha, LaurentPoly::from_terms([(-1, 1), (0, 2), (1, 1)]));
    assert_eq!(rest, LaurentPoly::monomial(1, 4));
}

#[test]
fn node_examples() {
    let one = p("(1)");
    let add: Vec<(Node, usize)> = one.addable_nodes(2);
    assert_eq!(add, vec![(Node::new(2, 1), 1), (Node::new(1, 2), 1)]);
    assert_eq!(one.removable_nodes(2), vec![(Node::new(1, 1), 0)]);
    for lambda in partitions_up_to(8) {
        for x in lambda.nodes() {
            let h = lambda.unwrap_rim_hook(x).unwrap();
            assert_eq!(h.partition.wrap_rim_hook(h.landing_row, h.size).unwrap(), lambda);
        }
        for n in 2..=4 {
            let core = lambda.n_core(n);
            assert_eq!(core.n_core(n), core);
        }
    }
}

#[test]
fn characterisation_by_residue_sets() {
    let residue_sets = |l: &Partition, n: usize, s: i64, nt: &RunnerTuple| {
        (0..nt.len())
            .map(|j| {
                let r = (nt.sigma(j) as i64 - s).rem_euclid(n as i64) as usize;
                l.nodes()
                    .into_iter()
                    .filter(|x| x.residue(n) == r)
                    .collect::<BTreeSet<_>>()
            })
            .collect::<Vec<_>>()
    };
    for n in [3, 4] {
        for nt in RunnerTuple::all(n, 2) {
            for s in [0, 1] {
                for m in 0..=7 {
                    let ps = partitions_of(m);
                    for a in &ps {
                        for b in &ps {
                            let same_t = BlockId::of(a, &nt, s) == BlockId::of(b, &nt, s);
                            assert_eq!(
                                same_t,
                                residue_sets(a, n, s, &nt) == residue_sets(b, n, s, &nt),
                                "{a} {b} {nt}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn jantzen_examples() {
    let two = BetaSet::from_partition(&p("(2)"), 0);
    let ones = BetaSet::from_partition(&p("(1,1)"), 0);
    assert!(two.jantzen_successors(2).contains(&ones));
    assert!(two.jantzen_geq(&ones, 2, 20).unwrap());
    assert!(!ones.jantzen_geq(&two, 2, 20).unwrap());
    for nt in [
        RunnerTuple::new(vec![1, 2]).unwrap(),
        RunnerTuple::new(vec![2, 1, 1]).unwrap(),
    ] {
        for lambda in partitions_up_to(8) {
            let b = BetaSet::from_partition(&lambda, 1);
            for c in b.jantzen_successors(nt.n()) {
                assert!(c.block_signature(&nt) <= b.block_signature(&nt), "{lambda}");
            }
        }
    }
}

#[test]
fn fock_examples() {
    let ctx = FockContext::new(2, 0).unwrap();
    let basis = |s: &str| FockVector::basis(ctx, p(s));
    let f = basis("(1)").apply_f(1);
    assert_eq!(f.coeff(&p("(2)")), LaurentPoly::one());
    assert_eq!(f.coeff(&p("(1,1)")), q(1));
    assert_eq!(f.len(), 2);
    assert_eq!(basis("(1,1)").apply_e(1).coeff(&p("(1)")), LaurentPoly::one());
    assert_eq!(basis("(2)").apply_e(1).coeff(&p("(1)")), q(-1));
    assert_eq!(basis("(1)").apply_k(1, 1).coeff(&p("(1)")), q(2));
    let twice = basis("(1)").apply_f(1).apply_f(1);
    let divided = basis("(1)").divided_power_f(1, 2).unwrap();
    assert_eq!(
        divided.scaled(&LaurentPoly::quantum_int(2).unwrap()).into_terms(),
        twice.into_terms()
    );
}

#[test]
fn canonical_examples() {
    let engine = CanonicalEngine::new();
    let g = engine.column(&p("(2)"), 2).unwrap();
    assert_eq!(
        g.sorted_desc(),
        vec![(&p("(2)"), &LaurentPoly::one()), (&p("(1,1)"), &q(1))]
    );
    assert_eq!(
        g.evaluate_at_one().values().map(|x| x.to_string()).collect::<Vec<_>>(),
        vec!["1", "1"]
    );
    let m = engine.decomposition_matrix(2, 2).unwrap();
    assert_eq!(
        m.entries,
        vec![
            vec![LaurentPoly::one(), LaurentPoly::zero()],
            vec![q(1), LaurentPoly::one()]
        ]
    );
    let m = engine.decomposition_matrix(5, 4).unwrap();
    for (i, row) in m.entries.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            assert_eq!(c.is_one(), i == j);
            assert!(i == j || c.is_zero());
        }
    }
    let g = engine.column(&p("(2,1)"), 3).unwrap();
    let top = BetaSet::from_partition(&p("(2,1)"), 0);
    for (lambda, c) in &g.entries {
        assert!(c.has_nonnegative_coeffs());
        assert!(top.jantzen_geq(&BetaSet::from_partition(lambda, 0), 3, 50).unwrap());
    }
    let v = FockVector::basis(FockContext::new(2, 0).unwrap(), p("(1)")).apply_f(1);
    let e = engine.expand_in_canonical(&v).unwrap();
    assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![(p("(2)"), LaurentPoly::one())]);
}

#[test]
fn block_examples() {
    let nt = RunnerTuple::new(vec![2]).unwrap();
    let t = BlockId::of(&Partition::empty(), &nt, 0);
    let members = block_members(&t, 2).unwrap();
    let want: Vec<Partition> = partitions_up_to(2)
        .into_iter()
        .filter(|l| BlockId::of(l, &nt, 0) == t)
        .collect();
    assert_eq!(
        members.iter().collect::<BTreeSet<_>>(),
        want.iter().collect::<BTreeSet<_>>()
    );
    for nt in RunnerTuple::all(3, 2) {
        for lambda in partitions_up_to(8) {
            let t = BlockId::of(&lambda, &nt, 1);
            let smallest = block_members(&t, 8)
                .unwrap()
                .into_iter()
                .min_by_key(|l| l.size())
                .unwrap();
            assert_eq!(t.base_partition(), smallest);
        }
    }
}

#[test]
fn lemma_twelve_example() {
    let (s, nt) = lemma12_tuple(3, &BTreeSet::from([0])).unwrap();
    assert_eq!(s, 1);
    assert_eq!(nt.parts().iter().filter(|&&x| x == 2).count(), 1);
}

#[test]
fn cup_examples() {
    let two = BetaSet::from_partition(&p("(2)"), 0);
    let ones = BetaSet::from_partition(&p("(1,1)"), 0);
    assert!(cup_matching(&sign_sequence(&two)).cups.is_empty());
    assert_eq!(cup_matching(&sign_sequence(&ones)).cups, vec![(-1, 0)]);
    let col = fk_column(&p("(2)"), 0).unwrap();
    assert_eq!(
        col.into_iter().collect::<Vec<_>>(),
        vec![(p("(1,1)"), q(1)), (p("(2)"), LaurentPoly::one())]
    );
}

#[test]
fn normal_node_action_example() {
    let nt = RunnerTuple::new(vec![2]).unwrap();
    let got = lbt_coefficients(&p("(1)"), 1, &nt, 0).unwrap();
    assert_eq!(
        got.into_iter().collect::<Vec<_>>(),
        vec![(p("(2)"), LaurentPoly::one())]
    );
}
