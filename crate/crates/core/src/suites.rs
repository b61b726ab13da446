//! Verification suites shared by the command line and the acceptance tests.
//!
//! Each suite returns one merged report. Work is spread over threads per `μ`
//! and merged in input order, so reports are deterministic.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::json;

use crate::abacus::{BetaSet, RunnerTuple};
use crate::blocks::{
    lemma12_tuple, moved_residues, moves_between, verify_decomp_theorem, verify_move_product, verify_runner_product,
    VerificationReport,
};
use crate::canonical::{CanonicalEngine, ColumnOptions, EliminationOrder, TieBreak};
use crate::error::Result;
use crate::fk2::{branching_vanishing_check, verify_fk_column, verify_lbt};
use crate::fock::{check_relations, FockContext};
use crate::partition::{partitions_of, partitions_up_to, Node, Partition, ResidueClass};

fn merge(
    theorem: &str,
    parameters: serde_json::Value,
    parts: Vec<Result<VerificationReport>>,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(theorem, parameters);
    for p in parts {
        report.absorb(p?);
    }
    Ok(report)
}

/// Commutator, `K`-conjugation and q-Serre relations on all basis vectors up to `max_size`.
pub fn relations(ns: &[usize], ss: &[i64], max_size: usize) -> Result<VerificationReport> {
    let cases: Vec<(usize, i64)> = ns.iter().flat_map(|&n| ss.iter().map(move |&s| (n, s))).collect();
    let parts = cases
        .par_iter()
        .map(|&(n, s)| {
            let r = check_relations(FockContext::new(n, s)?, max_size)?;
            let mut rep = VerificationReport::new("relations", json!({"n": n, "s": s}));
            rep.instances_checked = r.instances_checked;
            rep.failures = r
                .failures
                .iter()
                .map(|f| json!({"n": n, "s": s, "relation": f.relation, "lambda": f.lambda, "i": f.i, "j": f.j}))
                .collect();
            Ok(rep)
        })
        .collect();
    merge("relations", json!({"n": ns, "s": ss, "max_size": max_size}), parts)
}

/// Unitriangularity, positivity and Jantzen support of every column up to `max_size`.
pub fn canonical_invariants(engine: &CanonicalEngine, n: usize, max_size: usize) -> Result<VerificationReport> {
    let mus = partitions_up_to(max_size);
    let parts = mus
        .par_iter()
        .map(|mu| {
            let mut rep = VerificationReport::new("column invariants", json!({"n": n, "mu": mu}));
            let col = engine.column(mu, n)?;
            rep.check(
                col.is_triangular(),
                || json!({"mu": mu, "detail": "not unitriangular in qZ[q]"}),
            );
            let top = BetaSet::from_partition(mu, 0);
            for (lam, c) in &col.entries {
                if lam == mu {
                    continue;
                }
                rep.check(
                    c.has_nonnegative_coeffs() && c.min_exp().is_some_and(|e| e >= 1),
                    || json!({"mu": mu, "lambda": lam, "d": c.to_string(), "detail": "not in qN[q]"}),
                );
                let below = top.jantzen_geq(&BetaSet::from_partition(lam, 0), n, partitions_of(mu.size()).len())?;
                rep.check(
                    below,
                    || json!({"mu": mu, "lambda": lam, "detail": "outside the Jantzen down-set"}),
                );
            }
            Ok(rep)
        })
        .collect();
    merge("column invariants", json!({"n": n, "max_size": max_size}), parts)
}

/// Coefficients of `f_i G(λ)` in the canonical basis are bar-invariant.
pub fn bar_symmetry(engine: &CanonicalEngine, ns: &[usize], ss: &[i64], max_size: usize) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    for &n in ns {
        for &s in ss {
            for lam in partitions_up_to(max_size) {
                cases.push((n, s, lam));
            }
        }
    }
    let parts = cases
        .par_iter()
        .map(|(n, s, lam)| {
            let mut rep = VerificationReport::new("bar-symmetric structure constants", json!({}));
            let g = engine.column(lam, *n)?.to_vector(*s);
            for i in 0..*n {
                let expansion = engine.expand_in_canonical(&g.apply_f(i))?;
                for (mu, c) in expansion {
                    rep.check(
                        c.is_bar_symmetric(),
                        || json!({"n": n, "s": s, "i": i, "lambda": lam, "mu": mu, "coefficient": c.to_string()}),
                    );
                }
            }
            Ok(rep)
        })
        .collect();
    merge(
        "bar-symmetric structure constants",
        json!({"n": ns, "s": ss, "max_size": max_size}),
        parts,
    )
}

/// Runner removal for every tuple with the given numbers of parts.
pub fn runner(
    engine: &CanonicalEngine,
    ns: &[usize],
    rs: &[usize],
    ss: &[i64],
    max_size: usize,
) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    for &n in ns {
        for &r in rs {
            for nt in RunnerTuple::all(n, r) {
                for &s in ss {
                    cases.push((nt.clone(), s));
                }
            }
        }
    }
    let mus = partitions_up_to(max_size);
    let parts = cases
        .par_iter()
        .flat_map_iter(|(nt, s)| mus.iter().map(move |mu| verify_runner_product(engine, mu, nt, *s)))
        .collect();
    merge(
        "runner removal",
        json!({"n": ns, "r": rs, "s": ss, "max_size": max_size}),
        parts,
    )
}

/// Block projection against runner-assembled block columns, for every tuple of each `n`.
pub fn decomp(engine: &CanonicalEngine, ns: &[usize], ss: &[i64], max_size: usize) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    for &n in ns {
        for r in 1..=n {
            for nt in RunnerTuple::all(n, r) {
                for &s in ss {
                    cases.push((nt.clone(), s));
                }
            }
        }
    }
    let mus = partitions_up_to(max_size);
    let parts = cases
        .par_iter()
        .flat_map_iter(|(nt, s)| mus.iter().map(move |mu| verify_decomp_theorem(engine, mu, nt, *s)))
        .collect();
    merge(
        "block projection",
        json!({"n": ns, "s": ss, "max_size": max_size}),
        parts,
    )
}

/// Cup-diagram columns against the engine on every two-runner block.
pub fn fk(engine: &CanonicalEngine, ss: &[i64], max_size: usize) -> Result<VerificationReport> {
    let cases: Vec<(Partition, i64)> = partitions_up_to(max_size)
        .into_iter()
        .flat_map(|mu| ss.iter().map(move |&s| (mu.clone(), s)))
        .collect();
    let parts = cases
        .par_iter()
        .map(|(mu, s)| verify_fk_column(engine, mu, *s))
        .collect();
    merge("cup diagram columns", json!({"s": ss, "max_size": max_size}), parts)
}

/// Nonempty sets of pairwise non-adjacent residues mod `p` with at most `max_len` elements.
pub fn nonadjacent_sets(p: usize, max_len: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    for mask in 1u64..(1 << p) {
        let set: BTreeSet<usize> = (0..p).filter(|&i| mask & (1 << i) != 0).collect();
        if set.len() > max_len {
            continue;
        }
        let cls: Vec<ResidueClass> = set.iter().map(|&i| ResidueClass::new(i as i64, p)).collect();
        let ok = cls
            .iter()
            .enumerate()
            .all(|(a, x)| cls[a + 1..].iter().all(|y| !x.is_adjacent(y)));
        if ok {
            out.push(set);
        }
    }
    out
}

/// The normal-node action formula for every tuple produced from a residue set.
pub fn lbt(engine: &CanonicalEngine, ps: &[usize], max_size: usize) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    for &p in ps {
        for set in nonadjacent_sets(p, p) {
            let (s, nt) = lemma12_tuple(p, &set)?;
            for d in 0..nt.len() {
                if nt.part(d) == 2 {
                    cases.push((nt.clone(), nt.sigma(d) + 1, s));
                }
            }
        }
    }
    let lams = partitions_up_to(max_size);
    let parts = cases
        .par_iter()
        .flat_map_iter(|(nt, k, s)| lams.iter().map(move |lam| verify_lbt(engine, lam, *k, nt, *s)))
        .collect();
    merge("normal-node action", json!({"p": ps, "max_size": max_size}), parts)
}

fn pairwise_nonadjacent(set: &BTreeSet<usize>, p: usize) -> bool {
    let v: Vec<ResidueClass> = set.iter().map(|&i| ResidueClass::new(i as i64, p)).collect();
    v.iter()
        .enumerate()
        .all(|(a, x)| v[a + 1..].iter().all(|y| !x.is_adjacent(y)))
}

fn residue_counts(lam: &Partition, p: usize) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for x in lam.nodes() {
        *m.entry(x.residue(p)).or_default() += 1;
    }
    m
}

/// Product formula for node moves at up to `max_residues` pairwise non-adjacent residues.
pub fn moves(engine: &CanonicalEngine, p: usize, max_size: usize, max_residues: usize) -> Result<VerificationReport> {
    let mus = partitions_up_to(max_size);
    let parts = mus
        .par_iter()
        .map(|mu| {
            let mut rep = VerificationReport::new("move product", json!({}));
            let counts = residue_counts(mu, p);
            for lam in partitions_of(mu.size()) {
                if lam == *mu || residue_counts(&lam, p) != counts {
                    continue;
                }
                let res = moved_residues(&lam, mu, p);
                if res.len() > max_residues || !pairwise_nonadjacent(&res, p) {
                    continue;
                }
                rep.absorb(verify_move_product(engine, mu, p, &moves_between(&lam, mu, p)?)?);
            }
            Ok(rep)
        })
        .collect();
    merge(
        "move product",
        json!({"p": p, "max_size": max_size, "max_residues": max_residues}),
        parts,
    )
}

/// Vanishing of branching coefficients after a removal combined with moves.
pub fn branching(engine: &CanonicalEngine, p: usize, max_size: usize) -> Result<VerificationReport> {
    let mus: Vec<Partition> = partitions_up_to(max_size)
        .into_iter()
        .filter(|m| m.size() > 0)
        .collect();
    let parts = mus
        .par_iter()
        .map(|mu| {
            let mut rep = VerificationReport::new("branching vanishing", json!({}));
            let a: BTreeSet<Node> = mu.nodes().into_iter().collect();
            for lam in partitions_of(mu.size() - 1) {
                let b: BTreeSet<Node> = lam.nodes().into_iter().collect();
                let diff: BTreeSet<usize> = a.symmetric_difference(&b).map(|x| x.residue(p)).collect();
                if !pairwise_nonadjacent(&diff, p) {
                    continue;
                }
                let mut excess: BTreeMap<usize, i64> = BTreeMap::new();
                for x in a.difference(&b) {
                    *excess.entry(x.residue(p)).or_default() += 1;
                }
                for x in b.difference(&a) {
                    *excess.entry(x.residue(p)).or_default() -= 1;
                }
                let shape: Vec<i64> = excess.values().copied().filter(|&c| c != 0).collect();
                if shape != [1] {
                    continue;
                }
                rep.absorb(branching_vanishing_check(engine, mu, p, &lam)?);
            }
            Ok(rep)
        })
        .collect();
    merge("branching vanishing", json!({"p": p, "max_size": max_size}), parts)
}

/// Columns computed with reversed ladder ties and with Jantzen elimination order
/// serialize identically to the default ones.
pub fn determinism(engine: &CanonicalEngine, ns: &[usize], max_size: usize) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    for &n in ns {
        for mu in partitions_up_to(max_size) {
            cases.push((n, mu));
        }
    }
    let variants = [
        ColumnOptions {
            tie_break: TieBreak::Reversed,
            order: EliminationOrder::Lex,
        },
        ColumnOptions {
            tie_break: TieBreak::Forward,
            order: EliminationOrder::Jantzen,
        },
        ColumnOptions {
            tie_break: TieBreak::Reversed,
            order: EliminationOrder::Jantzen,
        },
    ];
    let parts = cases
        .par_iter()
        .map(|(n, mu)| {
            let mut rep = VerificationReport::new("determinism", json!({}));
            let base = serde_json::to_string(&*engine.column(mu, *n)?).expect("column serializes");
            for opts in variants {
                let (col, _) = engine.compute_column(mu, *n, opts)?;
                let other = serde_json::to_string(&col).expect("column serializes");
                rep.check(
                    base == other,
                    || json!({"n": n, "mu": mu, "options": format!("{opts:?}")}),
                );
            }
            Ok(rep)
        })
        .collect();
    merge("determinism", json!({"n": ns, "max_size": max_size}), parts)
}
