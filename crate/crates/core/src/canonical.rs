//! Canonical basis columns `G(μ)` and q-decomposition matrices.
//!
//! For n-regular `μ` the column comes from a ladder first approximation followed
//! by elimination with symmetric truncation. When the ladder approximation is
//! not triangular (n-singular `μ`) the column is solved from the bar involution
//! of the Fock space.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abacus::BetaSet;
use crate::error::{Error, Result};
use crate::fock::{cartan, FockContext, FockVector};
use crate::laurent::LaurentPoly;
use crate::partition::{partitions_of, Partition};
use crate::wedge::BarInvolution;

/// The column `G(μ) = Σ_λ d_{λμ}(q) λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalColumn {
    pub mu: Partition,
    pub n: usize,
    #[serde(with = "pairs")]
    pub entries: BTreeMap<Partition, LaurentPoly>,
}

/// Maps keyed by partitions travel as `[[key, value], ...]`.
mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::laurent::LaurentPoly;
    use crate::partition::Partition;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Partition, LaurentPoly>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Partition, LaurentPoly>, D::Error> {
        Ok(Vec::<(Partition, LaurentPoly)>::deserialize(d)?.into_iter().collect())
    }
}

impl CanonicalColumn {
    pub fn unit(mu: Partition, n: usize) -> Self {
        let entries = BTreeMap::from([(mu.clone(), LaurentPoly::one())]);
        CanonicalColumn { mu, n, entries }
    }

    pub fn get(&self, lambda: &Partition) -> LaurentPoly {
        self.entries.get(lambda).cloned().unwrap_or_default()
    }

    /// Entries by decreasing lexicographic `λ`.
    pub fn sorted_desc(&self) -> Vec<(&Partition, &LaurentPoly)> {
        self.entries.iter().rev().collect()
    }

    pub fn evaluate_at_one(&self) -> BTreeMap<Partition, BigInt> {
        self.entries
            .iter()
            .map(|(l, c)| (l.clone(), c.evaluate_at_one()))
            .collect()
    }

    pub fn to_vector(&self, s: i64) -> FockVector {
        FockVector::from_terms(
            FockContext { n: self.n, s },
            self.entries.iter().map(|(l, c)| (l.clone(), c.clone())),
        )
    }

    /// Unitriangular with off-diagonal entries in `qZ[q]`.
    pub fn is_triangular(&self) -> bool {
        self.get(&self.mu).is_one()
            && self
                .entries
                .iter()
                .all(|(l, c)| l == &self.mu || (l < &self.mu && l.size() == self.mu.size() && c.in_q_zq()))
    }
}

/// Steps `(residue, multiplicity)`; applied as divided powers to the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderPlan {
    pub steps: Vec<(usize, u32)>,
}

/// Order of the steps in a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Forward,
    /// Swap adjacent commuting steps, scanning from the end.
    Reversed,
}

/// Order in which lower partitions are eliminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EliminationOrder {
    #[default]
    Lex,
    /// A linear extension of the Jantzen order, ties broken by increasing lex order.
    Jantzen,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ColumnOptions {
    pub tie_break: TieBreak,
    pub order: EliminationOrder,
}

/// How a column was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    Ladder,
    Bar,
    Trivial,
}

/// Ladders `{(a + (n-1)t, b - t)}`: node `(r, c)` lies on ladder `r - 1 + (n-1)(c - 1)`.
pub fn ladder_plan(mu: &Partition, n: usize) -> LadderPlan {
    let mut ladders: BTreeMap<usize, (usize, u32)> = BTreeMap::new();
    for node in mu.nodes() {
        let l = node.row - 1 + (n - 1) * (node.col - 1);
        let e = ladders.entry(l).or_insert((node.residue(n), 0));
        e.1 += 1;
    }
    LadderPlan {
        steps: ladders.into_values().collect(),
    }
}

fn reverse_ties(plan: &LadderPlan, n: usize) -> LadderPlan {
    let mut steps = plan.steps.clone();
    let mut k = steps.len();
    while k >= 2 {
        let (a, b) = (steps[k - 2].0, steps[k - 1].0);
        if a != b && cartan(n, a, b) == 0 {
            steps.swap(k - 2, k - 1);
            k = k.saturating_sub(2);
        } else {
            k -= 1;
        }
    }
    LadderPlan { steps }
}

/// Apply a plan to the vacuum of `F_s`.
pub fn apply_plan(plan: &LadderPlan, n: usize, s: i64) -> Result<FockVector> {
    let ctx = FockContext::new(n, s)?;
    let mut v = FockVector::vacuum(ctx);
    for &(res, a) in &plan.steps {
        let i = (res as i64 + s).rem_euclid(n as i64) as usize;
        v = v.divided_power_f(i, a)?;
    }
    Ok(v)
}

/// `A(μ)`; fails unless its top term is `μ` with coefficient 1.
pub fn first_approx(mu: &Partition, n: usize, s: i64) -> Result<FockVector> {
    let v = apply_plan(&ladder_plan(mu, n), n, s)?;
    check_top(&v, mu, n)?;
    Ok(v)
}

fn check_top(v: &FockVector, mu: &Partition, n: usize) -> Result<()> {
    let fault = |detail: String| Error::Triangularity {
        mu: mu.to_string(),
        n,
        detail,
    };
    if !v.coeff(mu).is_one() {
        return Err(fault(format!("coefficient of μ is {}", v.coeff(mu))));
    }
    if let Some((top, _)) = v.leading() {
        if top != mu {
            return Err(fault(format!("leading term is {top}")));
        }
    }
    if let Some((l, _)) = v.terms().find(|(l, _)| l.size() != mu.size()) {
        return Err(fault(format!("term {l} has the wrong size")));
    }
    Ok(())
}

/// Shared, thread-safe column engine with a cache keyed by `(n, μ)`.
#[derive(Debug, Default)]
pub struct CanonicalEngine {
    columns: RwLock<HashMap<(usize, Partition), Arc<CanonicalColumn>>>,
    bars: Mutex<HashMap<usize, Arc<BarInvolution>>>,
    warnings: Mutex<Vec<String>>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

/// Cache counters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub columns: usize,
    pub hits: usize,
    pub misses: usize,
}

impl CanonicalEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            columns: self.columns.read().unwrap().len(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    /// Flagged negative coefficients; the theory predicts none.
    pub fn warnings(&self) -> Vec<String> {
        self.warnings.lock().unwrap().clone()
    }

    pub fn cached_columns(&self) -> Vec<Arc<CanonicalColumn>> {
        let mut v: Vec<_> = self.columns.read().unwrap().values().cloned().collect();
        v.sort_by(|a, b| (a.n, a.mu.size(), &b.mu).cmp(&(b.n, b.mu.size(), &a.mu)));
        v
    }

    /// Insert a precomputed column; identical re-insertion is a no-op.
    pub fn insert_column(&self, col: CanonicalColumn) -> Result<()> {
        if !col.is_triangular() {
            return Err(Error::Triangularity {
                mu: col.mu.to_string(),
                n: col.n,
                detail: "cached column is not unitriangular".into(),
            });
        }
        let key = (col.n, col.mu.clone());
        let mut map = self.columns.write().unwrap();
        match map.get(&key) {
            Some(old) if **old != col => Err(Error::InvalidArgument(format!(
                "conflicting cached column for {} at n = {}",
                col.mu, col.n
            ))),
            Some(_) => Ok(()),
            None => {
                map.insert(key, Arc::new(col));
                Ok(())
            }
        }
    }

    pub fn bar(&self, n: usize) -> Arc<BarInvolution> {
        self.bars
            .lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::new(BarInvolution::new(n)))
            .clone()
    }

    /// `G(μ)` at rank `n`; rank 1 gives the unit column.
    pub fn column(&self, mu: &Partition, n: usize) -> Result<Arc<CanonicalColumn>> {
        let key = (n, mu.clone());
        if let Some(hit) = self.columns.read().unwrap().get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(hit.clone());
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let (col, _) = self.compute_column(mu, n, ColumnOptions::default())?;
        let col = Arc::new(col);
        let mut map = self.columns.write().unwrap();
        Ok(map.entry(key).or_insert(col).clone())
    }

    /// Compute without touching the cache entry for `μ` itself.
    pub fn compute_column(&self, mu: &Partition, n: usize, opts: ColumnOptions) -> Result<(CanonicalColumn, Route)> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if n == 1 || mu.size() <= 1 {
            return Ok((CanonicalColumn::unit(mu.clone(), n), Route::Trivial));
        }
        let mut plan = ladder_plan(mu, n);
        if opts.tie_break == TieBreak::Reversed {
            plan = reverse_ties(&plan, n);
        }
        let approx = apply_plan(&plan, n, 0)?;
        let (col, route) = match check_top(&approx, mu, n) {
            Ok(()) => (self.eliminate(mu, n, approx, opts.order)?, Route::Ladder),
            Err(Error::Triangularity { .. }) => (self.column_via_bar(mu, n)?, Route::Bar),
            Err(e) => return Err(e),
        };
        self.validate(&col)?;
        Ok((col, route))
    }

    fn eliminate(
        &self,
        mu: &Partition,
        n: usize,
        mut v: FockVector,
        order: EliminationOrder,
    ) -> Result<CanonicalColumn> {
        let all = partitions_of(mu.size());
        let sequence: Vec<Partition> = match order {
            EliminationOrder::Lex => all.into_iter().filter(|nu| nu < mu).collect(),
            EliminationOrder::Jantzen => jantzen_linear_extension(&all, n)
                .into_iter()
                .filter(|nu| nu != mu)
                .collect(),
        };
        for nu in sequence {
            let c = v.coeff(&nu);
            if c.is_zero() {
                continue;
            }
            let (alpha, _) = c.symmetric_truncation();
            if alpha.is_zero() {
                continue;
            }
            let g = self.column(&nu, n)?.to_vector(v.ctx.s);
            v.add_scaled(&g, &-alpha);
        }
        Ok(CanonicalColumn {
            mu: mu.clone(),
            n,
            entries: v.into_terms(),
        })
    }

    /// Solve `d_{νμ} - \bar{d_{νμ}} = Σ_{ν<κ≤μ} a_{νκ} \bar{d_{κμ}}` top-down, where
    /// `\bar{κ} = Σ a_{νκ} ν` is the Fock space bar involution.
    pub fn column_via_bar(&self, mu: &Partition, n: usize) -> Result<CanonicalColumn> {
        if n == 1 || mu.size() <= 1 {
            return Ok(CanonicalColumn::unit(mu.clone(), n));
        }
        let bar = self.bar(n);
        let mut d: BTreeMap<Partition, LaurentPoly> = BTreeMap::from([(mu.clone(), LaurentPoly::one())]);
        let rows: Vec<(Partition, Arc<BTreeMap<Partition, LaurentPoly>>)> = partitions_of(mu.size())
            .into_iter()
            .filter(|k| k <= mu)
            .map(|k| {
                let r = bar.bar_basis(&k);
                (k, r)
            })
            .collect();
        for nu in partitions_of(mu.size()).into_iter().filter(|nu| nu < mu) {
            let mut r = LaurentPoly::zero();
            for (kappa, row) in &rows {
                if kappa <= &nu {
                    continue;
                }
                if let (Some(dk), Some(a)) = (d.get(kappa), row.get(&nu)) {
                    r += &(a * &dk.bar());
                }
            }
            if !(&r + &r.bar()).is_zero() {
                return Err(Error::Triangularity {
                    mu: mu.to_string(),
                    n,
                    detail: format!("bar system inconsistent at {nu}"),
                });
            }
            let pos = LaurentPoly::from_terms(r.terms().filter(|(e, _)| *e > 0).map(|(e, c)| (e, c.clone())));
            if !pos.is_zero() {
                d.insert(nu, pos);
            }
        }
        Ok(CanonicalColumn {
            mu: mu.clone(),
            n,
            entries: d,
        })
    }

    fn validate(&self, col: &CanonicalColumn) -> Result<()> {
        if !col.is_triangular() {
            return Err(Error::Triangularity {
                mu: col.mu.to_string(),
                n: col.n,
                detail: "result is not unitriangular with off-diagonal entries in qZ[q]".into(),
            });
        }
        for (l, c) in &col.entries {
            if !c.has_nonnegative_coeffs() {
                self.warnings.lock().unwrap().push(format!(
                    "negative coefficient in d_{{{l},{}}} at n = {}: {c}",
                    col.mu, col.n
                ));
            }
        }
        Ok(())
    }

    /// `d_{λμ}(q)`, with `d^1 = δ`.
    pub fn d(&self, lambda: &Partition, mu: &Partition, n: usize) -> Result<LaurentPoly> {
        if lambda.size() != mu.size() {
            return Ok(LaurentPoly::zero());
        }
        Ok(self.column(mu, n)?.get(lambda))
    }

    /// Rows and columns indexed by partitions of `m` in decreasing lex order.
    pub fn decomposition_matrix(&self, n: usize, m: usize) -> Result<DecompositionMatrix> {
        let labels = partitions_of(m);
        let mut entries = Vec::with_capacity(labels.len());
        let cols: Vec<Arc<CanonicalColumn>> = labels.iter().map(|mu| self.column(mu, n)).collect::<Result<_>>()?;
        for lam in &labels {
            entries.push(cols.iter().map(|c| c.get(lam)).collect());
        }
        Ok(DecompositionMatrix {
            n,
            size: m,
            labels,
            entries,
        })
    }

    /// Coordinates of `v` in the canonical basis, by back-substitution.
    pub fn expand_in_canonical(&self, v: &FockVector) -> Result<BTreeMap<Partition, LaurentPoly>> {
        let sizes: BTreeSet<usize> = v.terms().map(|(l, _)| l.size()).collect();
        if sizes.len() > 1 {
            return Err(Error::Precondition("vector spans several size classes".into()));
        }
        let mut rest = v.clone();
        let mut out = BTreeMap::new();
        while let Some((top, c)) = rest.leading().map(|(l, c)| (l.clone(), c.clone())) {
            let g = self.column(&top, v.ctx.n)?.to_vector(v.ctx.s);
            rest.add_scaled(&g, &-c.clone());
            out.insert(top, c);
        }
        Ok(out)
    }
}

/// Kahn's algorithm on one-step Jantzen moves; ties go to the lex-smallest.
fn jantzen_linear_extension(all: &[Partition], n: usize) -> Vec<Partition> {
    let index: HashMap<&Partition, usize> = all.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut indeg = vec![0usize; all.len()];
    let mut succ = vec![Vec::new(); all.len()];
    for (k, p) in all.iter().enumerate() {
        for b in BetaSet::from_partition(p, 0).jantzen_successors(n) {
            let t = index[&b.to_partition()];
            succ[k].push(t);
            indeg[t] += 1;
        }
    }
    let mut ready: BTreeSet<&Partition> = all
        .iter()
        .enumerate()
        .filter(|(k, _)| indeg[*k] == 0)
        .map(|x| x.1)
        .collect();
    let mut out = Vec::with_capacity(all.len());
    while let Some(p) = ready.iter().next().copied() {
        ready.remove(p);
        out.push(p.clone());
        for &t in &succ[index[p]] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.insert(&all[t]);
            }
        }
    }
    out
}

/// `D = (d_{λμ}(q))` with row `λ`, column `μ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionMatrix {
    pub n: usize,
    pub size: usize,
    pub labels: Vec<Partition>,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl DecompositionMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda\\mu");
        for l in &self.labels {
            out.push_str(&format!(",\"{l}\""));
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.entries) {
            out.push_str(&format!("\"{l}\""));
            for c in row {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "size": self.size,
            "labels": self.labels,
            "entries": self.entries,
        })
    }

    pub fn to_latex(&self) -> String {
        let mut out = format!("\\begin{{tabular}}{{c|{}}}\n", "c".repeat(self.labels.len()));
        let header: Vec<String> = self.labels.iter().map(|l| format!("${l}$")).collect();
        out.push_str(&format!(" & {} \\\\\n\\hline\n", header.join(" & ")));
        for (l, row) in self.labels.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(|c| format!("${}$", c.to_latex())).collect();
            out.push_str(&format!("${l}$ & {} \\\\\n", cells.join(" & ")));
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}
