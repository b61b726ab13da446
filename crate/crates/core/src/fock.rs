//! The level-one Fock space with its quantum affine `sl_n` action.
//!
//! Operator index `i` acts on nodes of residue `(i - s) mod n`; this is the only
//! place the charge shift is applied.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abacus::BetaSet;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::partition::{partitions_up_to, Partition};

/// Rank `n` and charge `s` of a Fock space `F_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockContext {
    pub n: usize,
    pub s: i64,
}

impl FockContext {
    pub fn new(n: usize, s: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("Fock space needs n >= 2, got {n}")));
        }
        Ok(FockContext { n, s })
    }

    /// Residue `i_s = (i - s) mod n` touched by operator index `i`.
    pub fn shifted_residue(&self, i: usize) -> usize {
        (i as i64 - self.s).rem_euclid(self.n as i64) as usize
    }
}

/// A finite linear combination of partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    pub ctx: FockContext,
    terms: BTreeMap<Partition, LaurentPoly>,
}

impl FockVector {
    pub fn zero(ctx: FockContext) -> Self {
        FockVector {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(ctx: FockContext, lambda: Partition) -> Self {
        let mut v = FockVector::zero(ctx);
        v.add_term(lambda, &LaurentPoly::one());
        v
    }

    /// The vacuum `∅`.
    pub fn vacuum(ctx: FockContext) -> Self {
        FockVector::basis(ctx, Partition::empty())
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, LaurentPoly)>>(ctx: FockContext, it: I) -> Self {
        let mut v = FockVector::zero(ctx);
        for (l, c) in it {
            v.add_term(l, &c);
        }
        v
    }

    pub fn add_term(&mut self, lambda: Partition, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(lambda.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &LaurentPoly) {
        for (l, x) in &other.terms {
            self.add_term(l.clone(), &(x * c));
        }
    }

    pub fn scaled(&self, c: &LaurentPoly) -> FockVector {
        let mut v = FockVector::zero(self.ctx);
        v.add_scaled(self, c);
        v
    }

    pub fn coeff(&self, lambda: &Partition) -> LaurentPoly {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Terms in increasing lexicographic order of partitions.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Partition, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Partition, LaurentPoly> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn retain<F: FnMut(&Partition, &LaurentPoly) -> bool>(&mut self, f: F) {
        let mut f = f;
        self.terms.retain(|l, c| f(l, c));
    }

    /// Largest partition in the support.
    pub fn leading(&self) -> Option<(&Partition, &LaurentPoly)> {
        self.terms.iter().next_back()
    }

    pub fn with_context(&self, ctx: FockContext) -> FockVector {
        FockVector {
            ctx,
            terms: self.terms.clone(),
        }
    }

    /// `f_i`: add a node of residue `i_s`, weighted by `q^{N_>}`.
    pub fn apply_f(&self, i: usize) -> FockVector {
        let n = self.ctx.n;
        let r = self.ctx.shifted_residue(i);
        let mut out = FockVector::zero(self.ctx);
        for (lam, c) in &self.terms {
            let add: Vec<_> = lam
                .addable_nodes(n)
                .into_iter()
                .filter(|x| x.1 == r)
                .map(|x| x.0)
                .collect();
            let rem: Vec<_> = lam
                .removable_nodes(n)
                .into_iter()
                .filter(|x| x.1 == r)
                .map(|x| x.0)
                .collect();
            for node in &add {
                let e = add.iter().filter(|x| x.col > node.col).count() as i32
                    - rem.iter().filter(|x| x.col > node.col).count() as i32;
                out.add_term(lam.add_node(*node).expect("addable"), &c.shift(e));
            }
        }
        out
    }

    /// `e_i`: remove a node of residue `i_s`, weighted by `q^{-N_<}` computed on the smaller partition.
    pub fn apply_e(&self, i: usize) -> FockVector {
        let n = self.ctx.n;
        let r = self.ctx.shifted_residue(i);
        let mut out = FockVector::zero(self.ctx);
        for (mu, c) in &self.terms {
            for (node, rr) in mu.removable_nodes(n) {
                if rr != r {
                    continue;
                }
                let lam = mu.remove_node(node).expect("removable");
                let left_add = lam
                    .addable_nodes(n)
                    .into_iter()
                    .filter(|x| x.1 == r && x.0.col < node.col)
                    .count() as i32;
                let left_rem = lam
                    .removable_nodes(n)
                    .into_iter()
                    .filter(|x| x.1 == r && x.0.col < node.col)
                    .count() as i32;
                out.add_term(lam, &c.shift(-(left_add - left_rem)));
            }
        }
        out
    }

    /// `K_i^{±}`: scale `λ` by `q^{±N_i(λ)}`.
    pub fn apply_k(&self, i: usize, sign: i32) -> FockVector {
        let mut out = FockVector::zero(self.ctx);
        for (lam, c) in &self.terms {
            out.add_term(lam.clone(), &c.shift(sign * k_exponent(lam, i, self.ctx)));
        }
        out
    }

    /// `f_i^{(a)} = f_i^a / [a]!`.
    pub fn divided_power_f(&self, i: usize, a: u32) -> Result<FockVector> {
        let mut v = self.clone();
        for _ in 0..a {
            v = v.apply_f(i);
        }
        let fact = LaurentPoly::quantum_factorial(a);
        let mut out = FockVector::zero(self.ctx);
        for (l, c) in v.terms {
            out.add_term(l, &c.exact_div(&fact)?);
        }
        Ok(out)
    }

    pub fn divided_power_e(&self, i: usize, a: u32) -> Result<FockVector> {
        let mut v = self.clone();
        for _ in 0..a {
            v = v.apply_e(i);
        }
        let fact = LaurentPoly::quantum_factorial(a);
        let mut out = FockVector::zero(self.ctx);
        for (l, c) in v.terms {
            out.add_term(l, &c.exact_div(&fact)?);
        }
        Ok(out)
    }

    /// Terms as `[[partition, laurent], ...]`, increasing lexicographic order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.ctx.n,
            "s": self.ctx.s,
            "terms": self.terms.iter().collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(l, c)| if c.is_one() { l.to_string() } else { format!("({c}){l}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `N_i(λ)`: addable minus removable nodes of residue `i_s`.
pub fn k_exponent(lambda: &Partition, i: usize, ctx: FockContext) -> i32 {
    let r = ctx.shifted_residue(i);
    let a = lambda.addable_nodes(ctx.n).iter().filter(|x| x.1 == r).count() as i32;
    let m = lambda.removable_nodes(ctx.n).iter().filter(|x| x.1 == r).count() as i32;
    a - m
}

/// A linear combination of β-sets, used to cross-check the partition formulas.
pub type BetaVector = BTreeMap<BetaSet, LaurentPoly>;

fn beta_add(v: &mut BetaVector, b: BetaSet, c: LaurentPoly) {
    if c.is_zero() {
        return;
    }
    let slot = v.entry(b.clone()).or_default();
    *slot += &c;
    if slot.is_zero() {
        v.remove(&b);
    }
}

/// `f_i(B) = Σ q^{N_>(B,C)} C` over moves `x-1 → x` with `x ≡ i mod n`.
pub fn apply_f_beta(n: usize, i: usize, v: &BetaVector) -> BetaVector {
    let nn = n as i64;
    let mut out = BetaVector::new();
    for (b, c) in v {
        for x in b.floor()..=b.max_bead() + 1 {
            if x.rem_euclid(nn) as usize != i || b.contains(x) || !b.contains(x - 1) {
                continue;
            }
            let above = |res: i64| {
                b.explicit_beads()
                    .filter(|&y| y > x && (y - res).rem_euclid(nn) == 0)
                    .count() as i32
            };
            let e = above(x - 1) - above(x);
            beta_add(&mut out, b.move_bead(x - 1, x).expect("legal"), c.shift(e));
        }
    }
    out
}

/// `e_i(C) = Σ q^{N_<(B,C)} B` over moves `x → x-1` with `x ≡ i mod n`.
pub fn apply_e_beta(n: usize, i: usize, v: &BetaVector) -> BetaVector {
    let nn = n as i64;
    let mut out = BetaVector::new();
    for (cset, c) in v {
        for x in cset.explicit_beads() {
            if x.rem_euclid(nn) as usize != i || cset.contains(x - 1) {
                continue;
            }
            let b = cset.move_bead(x, x - 1).expect("legal");
            let gaps = |res: i64| {
                (b.floor()..x - 1)
                    .filter(|&y| !b.contains(y) && (y - res).rem_euclid(nn) == 0)
                    .count() as i32
            };
            let e = gaps(x - 1) - gaps(x);
            beta_add(&mut out, b, c.shift(e));
        }
    }
    out
}

/// `N_i(B) = #{y ∉ B : y-1 ∈ B, y ≡ i} - #{y ∈ B : y-1 ∉ B, y ≡ i}`.
pub fn k_exponent_beta(n: usize, i: usize, b: &BetaSet) -> i32 {
    let nn = n as i64;
    let mut e = 0;
    for y in b.floor()..=b.max_bead() + 1 {
        if y.rem_euclid(nn) as usize != i {
            continue;
        }
        match (b.contains(y), b.contains(y - 1)) {
            (false, true) => e += 1,
            (true, false) => e -= 1,
            _ => {}
        }
    }
    e
}

/// Affine Cartan matrix entry `a_ij` of type `A_{n-1}^{(1)}`.
pub fn cartan(n: usize, i: usize, j: usize) -> i32 {
    let d = (i as i64 - j as i64).rem_euclid(n as i64) as usize;
    if d == 0 {
        2
    } else if n == 2 {
        -2
    } else if d == 1 || d == n - 1 {
        -1
    } else {
        0
    }
}

/// One violated relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub lambda: Partition,
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub s: i64,
    pub instances_checked: usize,
    pub failures: Vec<RelationFailure>,
}

fn serre<F: Fn(&FockVector, usize) -> FockVector>(
    v: &FockVector,
    i: usize,
    j: usize,
    m: u32,
    op: F,
) -> Result<FockVector> {
    let mut total = FockVector::zero(v.ctx);
    for k in 0..=m {
        let mut w = v.clone();
        for _ in 0..k {
            w = op(&w, i);
        }
        w = op(&w, j);
        for _ in 0..(m - k) {
            w = op(&w, i);
        }
        let mut c = LaurentPoly::quantum_binom(m, k)?;
        if k % 2 == 1 {
            c = -c;
        }
        total.add_scaled(&w, &c);
    }
    Ok(total)
}

/// Check the commutator, `K`-conjugation and both q-Serre relations on every
/// basis vector of size at most `size_limit`.
pub fn check_relations(ctx: FockContext, size_limit: usize) -> Result<RelationReport> {
    let n = ctx.n;
    let qmq = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
    let mut report = RelationReport {
        n,
        s: ctx.s,
        instances_checked: 0,
        failures: Vec::new(),
    };
    for lam in partitions_up_to(size_limit) {
        let v = FockVector::basis(ctx, lam.clone());
        for i in 0..n {
            for j in 0..n {
                let mut fail = |name: &str| {
                    report.failures.push(RelationFailure {
                        relation: name.to_string(),
                        lambda: lam.clone(),
                        i,
                        j,
                    })
                };
                let lhs = {
                    let mut a = v.apply_f(j).apply_e(i);
                    a.add_scaled(&v.apply_e(i).apply_f(j), &LaurentPoly::constant(-1));
                    a
                };
                let mut rhs = FockVector::zero(ctx);
                if i == j {
                    let mut kk = v.apply_k(i, 1);
                    kk.add_scaled(&v.apply_k(i, -1), &LaurentPoly::constant(-1));
                    for (l, c) in kk.terms() {
                        rhs.add_term(l.clone(), &c.exact_div(&qmq)?);
                    }
                }
                if lhs != rhs {
                    fail("commutator");
                }
                let a = cartan(n, i, j);
                let kf = v.apply_k(i, -1).apply_f(j).apply_k(i, 1);
                if kf != v.apply_f(j).scaled(&LaurentPoly::monomial(-a, 1)) {
                    fail("k-f");
                }
                let ke = v.apply_k(i, -1).apply_e(j).apply_k(i, 1);
                if ke != v.apply_e(j).scaled(&LaurentPoly::monomial(a, 1)) {
                    fail("k-e");
                }
                if i != j {
                    let m = (1 - a) as u32;
                    if !serre(&v, i, j, m, |w, k| w.apply_f(k))?.is_zero() {
                        fail("serre-f");
                    }
                    if !serre(&v, i, j, m, |w, k| w.apply_e(k))?.is_zero() {
                        fail("serre-e");
                    }
                }
                report.instances_checked += 1;
            }
        }
    }
    Ok(report)
}

/// Coefficient `(q^N - q^-N)/(q - q^-1)` as a signed quantum integer.
pub fn signed_quantum_int(nn: i32) -> LaurentPoly {
    match nn.cmp(&0) {
        std::cmp::Ordering::Equal => LaurentPoly::zero(),
        std::cmp::Ordering::Greater => LaurentPoly::quantum_int(nn as i64).expect("positive"),
        std::cmp::Ordering::Less => -LaurentPoly::quantum_int(-nn as i64).expect("positive"),
    }
}

/// Convert a partition-indexed vector to β-sets of charge `ctx.s`.
pub fn to_beta(v: &FockVector) -> BetaVector {
    v.terms()
        .map(|(l, c)| (BetaSet::from_partition(l, v.ctx.s), c.clone()))
        .collect()
}

pub fn from_beta(ctx: FockContext, v: &BetaVector) -> FockVector {
    FockVector::from_terms(ctx, v.iter().map(|(b, c)| (b.to_partition(), c.clone())))
}

/// `Σ_λ c_λ(1)`, handy for dimension counts.
pub fn total_at_one(v: &FockVector) -> BigInt {
    v.terms().map(|(_, c)| c.evaluate_at_one()).sum()
}
