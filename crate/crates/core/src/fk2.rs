//! Cup diagrams for two-runner blocks and the closed formulas they give for
//! block canonical bases and for the action of the parabolic `f_k`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::abacus::{BetaSet, BlockSignature, RunnerTuple};
use crate::blocks::{lemma12_tuple, project, split_partition, BlockId, VerificationReport};
use crate::canonical::CanonicalEngine;
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::laurent::LaurentPoly;
use crate::partition::{Node, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Up,
    Down,
    Inert,
}

/// Which bead position of a two-runner row reads as `Down`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FkConvention {
    LeftIsDown,
    LeftIsUp,
}

/// Fixed by agreement with the canonical engine on all two-runner blocks of
/// size at most 4 (see the `calibration` test). Of the four pairings with
/// `FkReading`, only a bead on the left runner reading as `Up` together with
/// the dual reading matches. Flips carry `-q` per cup in the dual rows, so the
/// columns have coefficients in `N[q]` and no inversion `q -> q^-1` is needed.
pub const FK_CONVENTION: FkConvention = FkConvention::LeftIsUp;

/// One symbol per row of a two-runner abacus, rows ascending from `row_lo`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignSequence {
    pub row_lo: i64,
    pub rows: Vec<Sign>,
}

impl SignSequence {
    pub fn get(&self, row: i64) -> Sign {
        if row < self.row_lo {
            return Sign::Inert;
        }
        self.rows
            .get((row - self.row_lo) as usize)
            .copied()
            .unwrap_or(Sign::Inert)
    }

    fn set(&mut self, row: i64, x: Sign) {
        self.rows[(row - self.row_lo) as usize] = x;
    }

    pub fn is_inert(&self) -> bool {
        self.rows.iter().all(|&x| x == Sign::Inert)
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .rows
            .iter()
            .map(|x| match x {
                Sign::Up => '^',
                Sign::Down => 'v',
                Sign::Inert => '.',
            })
            .collect();
        write!(f, "{}:{s}", self.row_lo)
    }
}

fn two_runner_rows(b: &BetaSet) -> (i64, i64) {
    let lo = b.floor().div_euclid(2);
    let hi = b.max_bead().div_euclid(2).max(lo);
    (lo, hi)
}

pub fn sign_sequence_with(b: &BetaSet, conv: FkConvention) -> SignSequence {
    let (lo, hi) = two_runner_rows(b);
    let rows = (lo..=hi)
        .map(|i| match (b.contains(2 * i), b.contains(2 * i + 1)) {
            (true, false) => match conv {
                FkConvention::LeftIsDown => Sign::Down,
                FkConvention::LeftIsUp => Sign::Up,
            },
            (false, true) => match conv {
                FkConvention::LeftIsDown => Sign::Up,
                FkConvention::LeftIsUp => Sign::Down,
            },
            _ => Sign::Inert,
        })
        .collect();
    SignSequence { row_lo: lo, rows }
}

/// Signs of a β-set displayed on the 2-abacus.
pub fn sign_sequence(b: &BetaSet) -> SignSequence {
    sign_sequence_with(b, FK_CONVENTION)
}

/// Inverse of `sign_sequence_with`, given the block signature over `(2)`.
pub fn beta_set_from_signs(seq: &SignSequence, sig: &BlockSignature, conv: FkConvention) -> Result<BetaSet> {
    if sig.runner_tuple().parts() != [2] {
        return Err(Error::InvalidArgument(format!(
            "signature over {} is not two-runner",
            sig.runner_tuple()
        )));
    }
    let lo = sig
        .deviations()
        .map(|((i, _), _)| i)
        .min()
        .unwrap_or(0)
        .min(seq.row_lo)
        .min(0);
    let hi = sig
        .deviations()
        .map(|((i, _), _)| i)
        .max()
        .unwrap_or(0)
        .max(seq.row_lo + seq.rows.len() as i64)
        .max(0);
    let mut beads = Vec::new();
    for i in lo..=hi {
        match (sig.count(i, 0), seq.get(i)) {
            (2, Sign::Inert) => beads.extend([2 * i, 2 * i + 1]),
            (0, Sign::Inert) => {}
            (1, Sign::Inert) => {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has one bead but an inert sign"
                )));
            }
            (1, x) => {
                let left = (x == Sign::Down) == (conv == FkConvention::LeftIsDown);
                beads.push(if left { 2 * i } else { 2 * i + 1 });
            }
            (c, x) => {
                return Err(Error::InvalidArgument(format!("row {i} has {c} beads but sign {x:?}")));
            }
        }
    }
    Ok(BetaSet::from_beads(lo * 2, beads))
}

/// A non-crossing matching of `Down`s with later `Up`s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupDiagram {
    pub cups: Vec<(i64, i64)>,
    pub unmatched: Vec<i64>,
}

impl CupDiagram {
    pub fn to_json(&self) -> serde_json::Value {
        json!({"cups": self.cups, "unmatched": self.unmatched})
    }

    /// Arcs drawn under the sign line, one text line per nesting level.
    pub fn to_ascii(&self, seq: &SignSequence) -> String {
        let w = 3usize;
        let width = seq.rows.len() * w;
        let col = |row: i64| ((row - seq.row_lo) as usize) * w + 1;
        let mut out = String::new();
        let labels: String = (0..seq.rows.len())
            .map(|k| format!("{:^3}", (seq.row_lo + k as i64).to_string()))
            .collect();
        out.push_str(labels.trim_end());
        out.push('\n');
        let signs: String = seq
            .rows
            .iter()
            .map(|x| match x {
                Sign::Up => " ^ ",
                Sign::Down => " v ",
                Sign::Inert => " . ",
            })
            .collect();
        out.push_str(signs.trim_end());
        out.push('\n');
        let mut order: Vec<usize> = (0..self.cups.len()).collect();
        order.sort_by_key(|&k| self.cups[k].1 - self.cups[k].0);
        let mut height = vec![0usize; self.cups.len()];
        for &k in &order {
            let (a, b) = self.cups[k];
            height[k] = 1
                + (0..self.cups.len())
                    .filter(|&m| a < self.cups[m].0 && self.cups[m].1 < b)
                    .map(|m| height[m])
                    .max()
                    .unwrap_or(0);
        }
        let top = height.iter().copied().max().unwrap_or(0);
        for level in 1..=top {
            let mut line = vec![' '; width];
            for (&(a, b), &h) in self.cups.iter().zip(&height) {
                if h > level {
                    line[col(a)] = '|';
                    line[col(b)] = '|';
                } else if h == level {
                    line[col(a)] = '\\';
                    line[col(b)] = '/';
                    for c in line.iter_mut().take(col(b)).skip(col(a) + 1) {
                        *c = '_';
                    }
                }
            }
            let s: String = line.into_iter().collect();
            out.push_str(s.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Bracket matching in ascending row order: `Down` opens, `Up` closes.
pub fn cup_matching(seq: &SignSequence) -> CupDiagram {
    let mut stack = Vec::new();
    let mut cups = Vec::new();
    let mut unmatched = Vec::new();
    for (k, &x) in seq.rows.iter().enumerate() {
        let row = seq.row_lo + k as i64;
        match x {
            Sign::Down => stack.push(row),
            Sign::Up => match stack.pop() {
                Some(a) => cups.push((a, row)),
                None => unmatched.push(row),
            },
            Sign::Inert => {}
        }
    }
    unmatched.extend(stack);
    cups.sort();
    unmatched.sort();
    CupDiagram { cups, unmatched }
}

/// How the cup flips of a sign sequence are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FkReading {
    /// Flips of `μ`'s cups give the column of `G_t(μ)` with weight `q^{|S|}`.
    Column,
    /// Flips of `λ`'s cups give the row of `λ` in the inverse matrix with
    /// weight `(-q)^{|S|}`; columns are recovered by triangular solve.
    Dual,
}

/// Frozen together with `FK_CONVENTION`.
pub const FK_READING: FkReading = FkReading::Dual;

/// The sign sequences reached by flipping subsets of cups, with the number flipped.
pub fn cup_flips(seq: &SignSequence) -> Vec<(SignSequence, u32)> {
    let cups = cup_matching(seq).cups;
    let mut out = Vec::with_capacity(1 << cups.len());
    for mask in 0u64..(1 << cups.len()) {
        let mut flipped = seq.clone();
        for (k, &(a, c)) in cups.iter().enumerate() {
            if mask & (1 << k) != 0 {
                flipped.set(a, Sign::Up);
                flipped.set(c, Sign::Down);
            }
        }
        out.push((flipped, mask.count_ones()));
    }
    out
}

/// Members of the `(2)`-block of `β_s(μ)` having the size of `μ`: every
/// rearrangement of its signs.
pub fn block_arrangements(mu: &Partition, s: i64) -> Result<Vec<Partition>> {
    let b = BetaSet::from_partition(mu, s);
    let sig = b.block_signature(&RunnerTuple::whole(2));
    let seq = sign_sequence_with(&b, FkConvention::LeftIsDown);
    let live: Vec<usize> = (0..seq.rows.len()).filter(|&k| seq.rows[k] != Sign::Inert).collect();
    let downs = live.iter().filter(|&&k| seq.rows[k] == Sign::Down).count();
    if live.len() > 24 {
        return Err(Error::InvalidArgument(format!(
            "{} active rows is too many to enumerate",
            live.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << live.len()) {
        if mask.count_ones() as usize != downs {
            continue;
        }
        let mut x = seq.clone();
        for (k, &row) in live.iter().enumerate() {
            x.rows[row] = if mask & (1 << k) != 0 { Sign::Down } else { Sign::Up };
        }
        out.push(beta_set_from_signs(&x, &sig, FkConvention::LeftIsDown)?.to_partition());
    }
    out.sort();
    Ok(out)
}

fn flip_terms(lambda: &Partition, s: i64, conv: FkConvention, sig: &BlockSignature) -> Result<Vec<(Partition, u32)>> {
    let seq = sign_sequence_with(&BetaSet::from_partition(lambda, s), conv);
    cup_flips(&seq)
        .into_iter()
        .map(|(x, k)| Ok((beta_set_from_signs(&x, sig, conv)?.to_partition(), k)))
        .collect()
}

/// The row of `λ` in the inverse of the block matrix, as read from `λ`'s cups.
pub fn fk_dual_row_with(lambda: &Partition, s: i64, conv: FkConvention) -> Result<BTreeMap<Partition, LaurentPoly>> {
    let sig = BetaSet::from_partition(lambda, s).block_signature(&RunnerTuple::whole(2));
    Ok(flip_terms(lambda, s, conv, &sig)?
        .into_iter()
        .map(|(l, k)| (l, LaurentPoly::monomial(k as i32, if k % 2 == 0 { 1 } else { -1 })))
        .collect())
}

/// The column of `μ` in its `(2)`-block at charge `s` under a chosen convention and reading.
pub fn fk_column_with(
    mu: &Partition,
    s: i64,
    conv: FkConvention,
    reading: FkReading,
) -> Result<BTreeMap<Partition, LaurentPoly>> {
    let sig = BetaSet::from_partition(mu, s).block_signature(&RunnerTuple::whole(2));
    match reading {
        FkReading::Column => Ok(flip_terms(mu, s, conv, &sig)?
            .into_iter()
            .map(|(l, k)| (l, LaurentPoly::monomial(k as i32, 1)))
            .collect()),
        FkReading::Dual => {
            let mut x: BTreeMap<Partition, LaurentPoly> = BTreeMap::new();
            for lam in block_arrangements(mu, s)?.into_iter().rev() {
                if lam > *mu {
                    continue;
                }
                if lam == *mu {
                    x.insert(lam, LaurentPoly::one());
                    continue;
                }
                let mut acc = LaurentPoly::zero();
                for (nu, c) in fk_dual_row_with(&lam, s, conv)? {
                    if nu == lam {
                        continue;
                    }
                    if nu < lam {
                        return Err(Error::Triangularity {
                            mu: mu.to_string(),
                            n: 2,
                            detail: format!("cup flip of {lam} lowers it to {nu}"),
                        });
                    }
                    if let Some(v) = x.get(&nu) {
                        acc -= &(&c * v);
                    }
                }
                if !acc.is_zero() {
                    x.insert(lam, acc);
                }
            }
            Ok(x)
        }
    }
}

/// `G_t(μ)` for `t` the `(2)`-block of `β_s(μ)`.
pub fn fk_column(mu: &Partition, s: i64) -> Result<BTreeMap<Partition, LaurentPoly>> {
    fk_column_with(mu, s, FK_CONVENTION, FK_READING)
}

/// `G_t(μ)` for a tuple with parts in `{1, 2}`, assembled from cup diagrams on each
/// two-runner component.
pub fn fk_block_column(mu: &Partition, nt: &RunnerTuple, s: i64) -> Result<BTreeMap<Partition, LaurentPoly>> {
    if nt.parts().iter().any(|&x| x > 2) {
        return Err(Error::InvalidArgument(format!("tuple {nt} has a part above 2")));
    }
    let mut acc: Vec<(Vec<BetaSet>, LaurentPoly)> = vec![(Vec::new(), LaurentPoly::one())];
    for (j, (mj, sj)) in split_partition(mu, nt, s).into_iter().enumerate() {
        let entries = if nt.part(j) == 1 {
            BTreeMap::from([(mj, LaurentPoly::one())])
        } else {
            fk_column(&mj, sj)?
        };
        let mut next = Vec::new();
        for (prefix, c) in &acc {
            for (l, x) in &entries {
                let mut p = prefix.clone();
                p.push(BetaSet::from_partition(l, sj));
                next.push((p, c * x));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(parts, c)| Ok((BetaSet::runner_merge(&parts, nt)?.to_partition(), c)))
        .collect()
}

/// Compare the cup-diagram column with the engine column restricted to the `(2)`-block,
/// and check the shape of the cup-diagram rows it was solved from.
pub fn verify_fk_column(engine: &CanonicalEngine, mu: &Partition, s: i64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("cup diagram column", json!({"mu": mu, "s": s}));
    let t = BlockId::of(mu, &RunnerTuple::whole(2), s);
    let engine_col = project(&engine.column(mu, 2)?.to_vector(s), &t)?.into_terms();
    let fk = fk_column(mu, s)?;
    let show = |m: &BTreeMap<Partition, LaurentPoly>| {
        m.iter()
            .map(|(l, c)| (l.to_string(), c.to_string()))
            .collect::<BTreeMap<_, _>>()
    };
    report.check(
        engine_col == fk,
        || json!({"clause": "equality", "engine": show(&engine_col), "cups": show(&fk)}),
    );
    let monomial = fk
        .values()
        .all(|c| c.as_monomial().is_some_and(|(_, k)| *k == 1.into()));
    report.check(monomial, || json!({"clause": "monomial", "cups": show(&fk)}));
    let cups = cup_matching(&sign_sequence(&BetaSet::from_partition(mu, s))).cups.len();
    report.check(
        fk.len() == 1 << cups,
        || json!({"clause": "count", "cup_count": cups, "cups": show(&fk)}),
    );
    let row = fk_dual_row_with(mu, s, FK_CONVENTION)?;
    let signed_powers = row.values().all(|c| {
        c.as_monomial()
            .is_some_and(|(e, k)| *k == BigInt::from(-1).pow(e as u32))
    });
    report.check(
        row.len() == 1 << cups && signed_powers,
        || json!({"clause": "dual-row", "cup_count": cups, "row": show(&row)}),
    );
    Ok(report)
}

/// Coordinates of `v` in the block basis `{π_t G_s(μ)}`.
pub fn expand_in_block(
    engine: &CanonicalEngine,
    v: &FockVector,
    t: &BlockId,
) -> Result<BTreeMap<Partition, LaurentPoly>> {
    let mut rest = project(v, t)?;
    if rest.len() != v.len() {
        return Err(Error::BlockMismatch("vector has terms outside the block".into()));
    }
    let mut out = BTreeMap::new();
    while let Some((top, c)) = rest.leading().map(|(l, c)| (l.clone(), c.clone())) {
        let g = project(&engine.column(&top, v.ctx.n)?.to_vector(v.ctx.s), t)?;
        rest.add_scaled(&g, &-c.clone());
        out.insert(top, c);
    }
    Ok(out)
}

/// Predicted coefficients of `f_k(G_t(λ))` in the block canonical basis: `[1 + m]_q`
/// at each `μ = λ + 𝔫` with `𝔫` normal of residue `k - s` and `m` normal nodes of
/// that residue to its right.
pub fn lbt_coefficients(
    lambda: &Partition,
    k: usize,
    nt: &RunnerTuple,
    s: i64,
) -> Result<BTreeMap<Partition, LaurentPoly>> {
    let d = (0..nt.len()).find(|&d| nt.part(d) == 2 && nt.sigma(d) + 1 == k);
    if d.is_none() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} does not open a two-runner section of {nt}"
        )));
    }
    let n = nt.n();
    let r = (k as i64 - s).rem_euclid(n as i64) as usize;
    let mut out = BTreeMap::new();
    for (node, res) in lambda.addable_nodes(n) {
        if res != r {
            continue;
        }
        let mu = lambda.add_node(node)?;
        let normals = mu.normal_nodes(n, r);
        if normals.contains(&node) {
            let right = normals.iter().filter(|x| x.col > node.col).count();
            out.insert(mu, LaurentPoly::quantum_int(1 + right as i64)?);
        }
    }
    Ok(out)
}

/// Compare `lbt_coefficients` with the block expansion of `f_k(G_t(λ))`.
pub fn verify_lbt(
    engine: &CanonicalEngine,
    lambda: &Partition,
    k: usize,
    nt: &RunnerTuple,
    s: i64,
) -> Result<VerificationReport> {
    let n = nt.n();
    let mut report = VerificationReport::new(
        "normal-node action",
        json!({"lambda": lambda, "k": k, "runner_tuple": nt.parts(), "s": s}),
    );
    let predicted = lbt_coefficients(lambda, k, nt, s)?;
    let t = BlockId::of(lambda, nt, s);
    let g = project(&engine.column(lambda, n)?.to_vector(s), &t)?;
    let observed = expand_in_block(engine, &g.apply_f(k), &t)?;
    report.check(observed == predicted, || {
        json!({
            "lambda": lambda, "k": k, "runner_tuple": nt.parts(), "s": s,
            "predicted": predicted.iter().map(|(l, c)| (l.to_string(), c.to_string())).collect::<BTreeMap<_, _>>(),
            "observed": observed.iter().map(|(l, c)| (l.to_string(), c.to_string())).collect::<BTreeMap<_, _>>(),
        })
    });
    report.check(
        observed.values().all(|c| c.is_bar_symmetric()),
        || json!({"detail": "asymmetric coefficient"}),
    );
    Ok(report)
}

/// For `λ` obtained from `μ` by removing one node and moving others at pairwise
/// non-adjacent residues, the coefficient of `G_t(μ)` in `f(G_t(λ))` vanishes unless
/// nothing moved and the removed node is normal, in which case it is `[1 + m]_q`.
pub fn branching_vanishing_check(
    engine: &CanonicalEngine,
    mu: &Partition,
    p: usize,
    lambda: &Partition,
) -> Result<VerificationReport> {
    if lambda.size() + 1 != mu.size() {
        return Err(Error::Precondition(format!(
            "{lambda} is not one node smaller than {mu}"
        )));
    }
    let a: BTreeSet<Node> = lambda.nodes().into_iter().collect();
    let b: BTreeSet<Node> = mu.nodes().into_iter().collect();
    let gone: Vec<Node> = b.difference(&a).copied().collect();
    let new: Vec<Node> = a.difference(&b).copied().collect();
    let mut excess: BTreeMap<usize, i64> = BTreeMap::new();
    for x in &gone {
        *excess.entry(x.residue(p)).or_default() += 1;
    }
    for x in &new {
        *excess.entry(x.residue(p)).or_default() -= 1;
    }
    let removed: Vec<usize> = excess.iter().filter(|(_, &c)| c != 0).map(|(&i, _)| i).collect();
    if removed.len() != 1 || excess[&removed[0]] != 1 {
        return Err(Error::Precondition(format!(
            "{lambda} is not {mu} minus one node plus moves"
        )));
    }
    let i = removed[0];
    let residues: BTreeSet<usize> = excess.keys().copied().collect();
    let (s, nt) = lemma12_tuple(p, &residues)?;
    let moved = new.len();
    let mut report = VerificationReport::new(
        "branching vanishing",
        json!({"mu": mu, "lambda": lambda, "p": p, "residue": i, "moves": moved}),
    );
    let k = (s + i as i64).rem_euclid(p as i64) as usize;
    let t = BlockId::of(lambda, &nt, s);
    let g = project(&engine.column(lambda, p)?.to_vector(s), &t)?;
    let observed = expand_in_block(engine, &g.apply_f(k), &t)?
        .remove(mu)
        .unwrap_or_default();
    let expected = if moved == 0 {
        let node = gone[0];
        let normals = mu.normal_nodes(p, i);
        if normals.contains(&node) {
            LaurentPoly::quantum_int(1 + normals.iter().filter(|x| x.col > node.col).count() as i64)?
        } else {
            LaurentPoly::zero()
        }
    } else {
        LaurentPoly::zero()
    };
    report.check(
        observed == expected,
        || json!({"observed": observed.to_string(), "expected": expected.to_string()}),
    );
    Ok(report)
}
