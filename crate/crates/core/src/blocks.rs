//! Parabolic blocks of the Fock space and executable checks of the block
//! theorems: projection onto a block, runner removal, and the two-runner
//! reduction used for node moves at pairwise non-adjacent residues.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::abacus::{BetaSet, BlockSignature, RunnerTuple};
use crate::canonical::CanonicalEngine;
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::laurent::LaurentPoly;
use crate::partition::{partitions_of, partitions_up_to, Node, Partition, ResidueClass};

/// A block `F_t`: a signature together with its runner tuple and charge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockId {
    pub signature: BlockSignature,
    pub runner_tuple: RunnerTuple,
    pub charge: i64,
}

impl BlockId {
    pub fn new(signature: BlockSignature) -> Self {
        BlockId {
            runner_tuple: signature.runner_tuple().clone(),
            charge: signature.charge(),
            signature,
        }
    }

    /// The block containing `β_s(λ)`.
    pub fn of(lambda: &Partition, nt: &RunnerTuple, s: i64) -> Self {
        BlockId::new(BetaSet::from_partition(lambda, s).block_signature(nt))
    }

    pub fn contains(&self, lambda: &Partition) -> bool {
        BetaSet::from_partition(lambda, self.charge).block_signature(&self.runner_tuple) == self.signature
    }

    /// `λ_t`, the least member.
    pub fn base_partition(&self) -> Partition {
        self.signature.base_partition()
    }

    /// Residues `σ_j - s` (mod n), `j = 0..r-1`, whose node sets determine the block.
    pub fn boundary_residues(&self) -> BTreeSet<usize> {
        let n = self.runner_tuple.n() as i64;
        (0..self.runner_tuple.len())
            .map(|j| (self.runner_tuple.sigma(j) as i64 - self.charge).rem_euclid(n) as usize)
            .collect()
    }
}

/// `π_t`: keep the terms lying in the block.
pub fn project(v: &FockVector, t: &BlockId) -> Result<FockVector> {
    if v.ctx.s != t.charge || v.ctx.n != t.runner_tuple.n() {
        return Err(Error::BlockMismatch(format!(
            "vector lives in F_{} at n = {}, block has charge {} at n = {}",
            v.ctx.s,
            v.ctx.n,
            t.charge,
            t.runner_tuple.n()
        )));
    }
    let mut out = v.clone();
    out.retain(|l, _| t.contains(l));
    Ok(out)
}

fn nodes_of_residues(lambda: &Partition, n: usize, residues: &BTreeSet<usize>) -> BTreeSet<Node> {
    lambda
        .nodes()
        .into_iter()
        .filter(|x| residues.contains(&x.residue(n)))
        .collect()
}

/// Members of `P_t` of size at most `size_limit`, in increasing lex order.
///
/// Computed twice, by signature and by boundary-residue node sets, and the two
/// lists are required to agree.
pub fn block_members(t: &BlockId, size_limit: usize) -> Result<Vec<Partition>> {
    let n = t.runner_tuple.n();
    let base = t.base_partition();
    let res = t.boundary_residues();
    let base_nodes = nodes_of_residues(&base, n, &res);
    let mut by_sig = Vec::new();
    let mut by_nodes = Vec::new();
    for lam in partitions_up_to(size_limit) {
        if t.contains(&lam) {
            by_sig.push(lam.clone());
        }
        if nodes_of_residues(&lam, n, &res) == base_nodes {
            by_nodes.push(lam);
        }
    }
    by_sig.sort();
    by_nodes.sort();
    if by_sig != by_nodes {
        return Err(Error::BlockMismatch(format!(
            "signature and node-set descriptions of the block of {base} disagree"
        )));
    }
    Ok(by_sig)
}

/// Outcome of a verification run; an empty `failures` list means the check passed.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerificationReport {
    pub theorem: String,
    pub parameters: Value,
    pub instances_checked: usize,
    pub failures: Vec<Value>,
}

impl VerificationReport {
    pub fn new(theorem: &str, parameters: Value) -> Self {
        VerificationReport {
            theorem: theorem.to_string(),
            parameters,
            instances_checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn absorb(&mut self, other: VerificationReport) {
        self.instances_checked += other.instances_checked;
        self.failures.extend(other.failures);
    }

    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.instances_checked += 1;
        if !ok {
            self.failures.push(detail());
        }
    }
}

/// `d^{n}_{λμ}(q)` with the rank-one convention `d^1 = δ`.
fn d_at(engine: &CanonicalEngine, lambda: &Partition, mu: &Partition, n: usize) -> Result<LaurentPoly> {
    if n == 1 {
        return Ok(if lambda == mu {
            LaurentPoly::one()
        } else {
            LaurentPoly::zero()
        });
    }
    engine.d(lambda, mu, n)
}

/// Component partitions and charges of `β_s(λ)` under `nt`.
pub fn split_partition(lambda: &Partition, nt: &RunnerTuple, s: i64) -> Vec<(Partition, i64)> {
    BetaSet::from_partition(lambda, s)
        .runner_split(nt)
        .into_iter()
        .map(|(b, sj)| (b.to_partition(), sj))
        .collect()
}

/// `Π_j d^{n_j}_{λ^(j) μ^(j)}(q)`.
pub fn runner_product_d(
    engine: &CanonicalEngine,
    lambda: &Partition,
    mu: &Partition,
    nt: &RunnerTuple,
    s: i64,
) -> Result<LaurentPoly> {
    let t = BlockId::of(mu, nt, s);
    if !t.contains(lambda) {
        return Err(Error::BlockMismatch(format!(
            "{lambda} and {mu} lie in different blocks for {nt}, s = {s}"
        )));
    }
    let ls = split_partition(lambda, nt, s);
    let ms = split_partition(mu, nt, s);
    let mut acc = LaurentPoly::one();
    for (j, ((l, _), (m, _))) in ls.iter().zip(&ms).enumerate() {
        let d = d_at(engine, l, m, nt.part(j))?;
        if d.is_zero() {
            return Ok(d);
        }
        acc = &acc * &d;
    }
    Ok(acc)
}

/// The block column `G_t(μ)` assembled from the components' block columns.
pub fn block_column_from_runners(
    engine: &CanonicalEngine,
    mu: &Partition,
    nt: &RunnerTuple,
    s: i64,
) -> Result<BTreeMap<Partition, LaurentPoly>> {
    let comps = split_partition(mu, nt, s);
    let mut acc: Vec<(Vec<BetaSet>, LaurentPoly)> = vec![(Vec::new(), LaurentPoly::one())];
    for (j, (mj, sj)) in comps.iter().enumerate() {
        let nj = nt.part(j);
        let entries: Vec<(Partition, LaurentPoly)> = if nj == 1 {
            vec![(mj.clone(), LaurentPoly::one())]
        } else {
            let whole = RunnerTuple::whole(nj);
            let tj = BlockId::of(mj, &whole, *sj);
            engine
                .column(mj, nj)?
                .entries
                .iter()
                .filter(|(l, _)| tj.contains(l))
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect()
        };
        let mut next = Vec::with_capacity(acc.len() * entries.len());
        for (prefix, c) in &acc {
            for (l, x) in &entries {
                let mut p = prefix.clone();
                p.push(BetaSet::from_partition(l, *sj));
                next.push((p, c * x));
            }
        }
        acc = next;
    }
    let mut out = BTreeMap::new();
    for (parts, c) in acc {
        let lam = BetaSet::runner_merge(&parts, nt)?.to_partition();
        out.insert(lam, c);
    }
    Ok(out)
}

/// Compare `π_t(G_s(μ))` with the runner-assembled block column.
pub fn verify_decomp_theorem(
    engine: &CanonicalEngine,
    mu: &Partition,
    nt: &RunnerTuple,
    s: i64,
) -> Result<VerificationReport> {
    let n = nt.n();
    let mut report = VerificationReport::new(
        "block projection",
        json!({"mu": mu, "runner_tuple": nt.parts(), "s": s}),
    );
    let t = BlockId::of(mu, nt, s);
    let g = engine.column(mu, n)?.to_vector(s);
    let lhs: BTreeMap<Partition, LaurentPoly> = project(&g, &t)?.into_terms();
    let rhs = block_column_from_runners(engine, mu, nt, s)?;
    let keys: BTreeSet<&Partition> = lhs.keys().chain(rhs.keys()).collect();
    let first = keys.into_iter().find(|l| lhs.get(*l) != rhs.get(*l));
    report.check(first.is_none(), || {
        let l = first.unwrap();
        json!({
            "lambda": l,
            "projected": lhs.get(l).cloned().unwrap_or_default().to_string(),
            "runners": rhs.get(l).cloned().unwrap_or_default().to_string(),
        })
    });
    Ok(report)
}

/// Compare `d^n_{λμ}(q)` with the runner product for every `λ ⊢ |μ|` in the block of `μ`.
pub fn verify_runner_product(
    engine: &CanonicalEngine,
    mu: &Partition,
    nt: &RunnerTuple,
    s: i64,
) -> Result<VerificationReport> {
    let n = nt.n();
    let mut report = VerificationReport::new("runner removal", json!({"mu": mu, "runner_tuple": nt.parts(), "s": s}));
    let t = BlockId::of(mu, nt, s);
    for lam in partitions_of(mu.size()) {
        if !t.contains(&lam) {
            continue;
        }
        let full = engine.d(&lam, mu, n)?;
        let prod = runner_product_d(engine, &lam, mu, nt, s)?;
        report.check(
            full == prod,
            || json!({"lambda": lam, "full": full.to_string(), "product": prod.to_string()}),
        );
    }
    Ok(report)
}

/// The charge `s ∈ {0, 1}` and tuple with parts in `{1, 2}` attached to a set
/// `I` of pairwise non-adjacent residues mod `p`.
pub fn lemma12_tuple(p: usize, residues: &BTreeSet<usize>) -> Result<(i64, RunnerTuple)> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("need p >= 2, got {p}")));
    }
    if let Some(&bad) = residues.iter().find(|&&i| i >= p) {
        return Err(Error::InvalidArgument(format!("residue {bad} out of range mod {p}")));
    }
    let classes: Vec<ResidueClass> = residues.iter().map(|&i| ResidueClass::new(i as i64, p)).collect();
    for (a, x) in classes.iter().enumerate() {
        for y in &classes[a + 1..] {
            if x.is_adjacent(y) {
                return Err(Error::Precondition(format!(
                    "residues {} and {} are adjacent mod {p}",
                    x.value, y.value
                )));
            }
        }
    }
    let s = residues.contains(&0) as i64;
    let mut sigmas: BTreeSet<usize> = (0..p)
        .filter(|c| !residues.contains(c))
        .map(|c| c + s as usize)
        .collect();
    sigmas.insert(0);
    sigmas.insert(p);
    let sig: Vec<usize> = sigmas.into_iter().collect();
    let nt = RunnerTuple::new(sig.windows(2).map(|w| w[1] - w[0]).collect())?;
    let back: BTreeSet<usize> = (0..nt.len())
        .filter(|&j| nt.part(j) == 2)
        .map(|j| (nt.sigma(j + 1) as i64 - s - 1).rem_euclid(p as i64) as usize)
        .collect();
    assert_eq!(&back, residues, "tuple {nt} does not reproduce the residue set");
    assert!(nt.parts().iter().all(|&x| x <= 2));
    Ok((s, nt))
}

/// Residues of the nodes in the symmetric difference of `[λ]` and `[μ]`.
pub fn moved_residues(lambda: &Partition, mu: &Partition, p: usize) -> BTreeSet<usize> {
    let a: BTreeSet<Node> = lambda.nodes().into_iter().collect();
    let b: BTreeSet<Node> = mu.nodes().into_iter().collect();
    a.symmetric_difference(&b).map(|x| x.residue(p)).collect()
}

/// Replace the residue-`i` nodes of `mu` by those of `lambda`.
pub fn restrict_moves(lambda: &Partition, mu: &Partition, p: usize, i: usize) -> Result<Partition> {
    let mut nodes: BTreeSet<Node> = mu.nodes().into_iter().filter(|x| x.residue(p) != i).collect();
    nodes.extend(lambda.nodes().into_iter().filter(|x| x.residue(p) == i));
    partition_from_nodes(&nodes)
}

fn partition_from_nodes(nodes: &BTreeSet<Node>) -> Result<Partition> {
    let rows = nodes.iter().map(|x| x.row).max().unwrap_or(0);
    let parts: Vec<usize> = (1..=rows)
        .map(|r| nodes.iter().filter(|x| x.row == r).count())
        .collect();
    let lam = Partition::new(parts)?;
    if lam.nodes().into_iter().collect::<BTreeSet<_>>() != *nodes {
        return Err(Error::NotAPartition("node set is not a Young diagram".into()));
    }
    Ok(lam)
}

/// A single node move: `from` is removed, `to` is added.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NodeMove {
    pub from: Node,
    pub to: Node,
}

/// Apply residue-keyed moves to `mu` as one set operation.
pub fn apply_moves(mu: &Partition, p: usize, moves: &BTreeMap<usize, Vec<NodeMove>>) -> Result<Partition> {
    let mut nodes: BTreeSet<Node> = mu.nodes().into_iter().collect();
    for (&i, ms) in moves {
        for m in ms {
            if m.from.residue(p) != i || m.to.residue(p) != i {
                return Err(Error::Precondition(format!(
                    "move {} -> {} is not at residue {i}",
                    m.from, m.to
                )));
            }
            if !nodes.remove(&m.from) || !nodes.insert(m.to) {
                return Err(Error::Precondition(format!(
                    "move {} -> {} does not apply to {mu}",
                    m.from, m.to
                )));
            }
        }
    }
    partition_from_nodes(&nodes)
}

/// The moves carrying `mu` to `lambda`, paired in node order per residue.
pub fn moves_between(lambda: &Partition, mu: &Partition, p: usize) -> Result<BTreeMap<usize, Vec<NodeMove>>> {
    let a: BTreeSet<Node> = lambda.nodes().into_iter().collect();
    let b: BTreeSet<Node> = mu.nodes().into_iter().collect();
    let mut out = BTreeMap::new();
    for i in moved_residues(lambda, mu, p) {
        let from: Vec<Node> = b.difference(&a).filter(|x| x.residue(p) == i).copied().collect();
        let to: Vec<Node> = a.difference(&b).filter(|x| x.residue(p) == i).copied().collect();
        if from.len() != to.len() {
            return Err(Error::Precondition(format!(
                "{lambda} is not obtained from {mu} by moves at residue {i}"
            )));
        }
        out.insert(
            i,
            from.into_iter()
                .zip(to)
                .map(|(from, to)| NodeMove { from, to })
                .collect(),
        );
    }
    Ok(out)
}

/// Check `d^p_{λμ}(q) = Π_{i∈I} d^p_{λ(i),μ}(q)` for `λ` obtained from `μ` by `moves`,
/// and that the runner product over the matching two-runner tuple agrees.
pub fn verify_move_product(
    engine: &CanonicalEngine,
    mu: &Partition,
    p: usize,
    moves: &BTreeMap<usize, Vec<NodeMove>>,
) -> Result<VerificationReport> {
    let lambda = apply_moves(mu, p, moves)?;
    let residues: BTreeSet<usize> = moves.iter().filter(|(_, v)| !v.is_empty()).map(|(&i, _)| i).collect();
    let (s, nt) = lemma12_tuple(p, &residues)?;
    let mut report = VerificationReport::new(
        "move product",
        json!({"mu": mu, "lambda": lambda, "p": p, "residues": residues}),
    );
    let full = engine.d(&lambda, mu, p)?;
    let mut prod = LaurentPoly::one();
    for &i in &residues {
        let li = restrict_moves(&lambda, mu, p, i)?;
        prod = &prod * &engine.d(&li, mu, p)?;
    }
    report.check(
        full == prod,
        || json!({"full": full.to_string(), "product": prod.to_string()}),
    );
    let same_block = BlockId::of(mu, &nt, s).contains(&lambda);
    report.check(
        same_block,
        || json!({"detail": format!("{lambda} left the block of {mu} under {nt}")}),
    );
    if same_block {
        let runners = runner_product_d(engine, &lambda, mu, &nt, s)?;
        report.check(
            runners == full,
            || json!({"full": full.to_string(), "runners": runners.to_string(), "runner_tuple": nt.parts(), "s": s}),
        );
    }
    Ok(report)
}
