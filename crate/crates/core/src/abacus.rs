//! β-sets, the n-abacus, runner sections, block signatures and the Jantzen order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A set `B ⊂ Z` containing every integer below some bound and finitely many above.
///
/// Canonical form: `floor` is the smallest integer not in `B`, and `beads`
/// holds exactly the elements of `B` above `floor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaSet {
    floor: i64,
    beads: BTreeSet<i64>,
}

impl BetaSet {
    /// The set `{x < below} ∪ extra`, normalized.
    pub fn from_beads<I: IntoIterator<Item = i64>>(below: i64, extra: I) -> Self {
        let mut beads: BTreeSet<i64> = extra.into_iter().filter(|&x| x >= below).collect();
        let mut floor = below;
        while beads.remove(&floor) {
            floor += 1;
        }
        BetaSet { floor, beads }
    }

    /// `β_s(λ) = {λ_i + s - i : i >= 1}`.
    pub fn from_partition(lambda: &Partition, s: i64) -> Self {
        let l = lambda.len() as i64;
        let beads = lambda
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &p)| p as i64 + s - i as i64 - 1);
        BetaSet::from_beads(s - l, beads)
    }

    /// The vacuum `{x < s}`.
    pub fn vacuum(s: i64) -> Self {
        BetaSet::from_beads(s, std::iter::empty())
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Elements above the floor, increasing.
    pub fn explicit_beads(&self) -> impl DoubleEndedIterator<Item = i64> + '_ {
        self.beads.iter().copied()
    }

    pub fn contains(&self, x: i64) -> bool {
        x < self.floor || self.beads.contains(&x)
    }

    /// `|N₀ ∩ B| - |Z_{<0} \ B|`.
    pub fn charge(&self) -> i64 {
        self.floor + self.beads.len() as i64
    }

    pub fn max_bead(&self) -> i64 {
        self.beads.iter().next_back().copied().unwrap_or(self.floor - 1)
    }

    /// Elements in decreasing order, without end.
    pub fn descending(&self) -> impl Iterator<Item = i64> + '_ {
        let f = self.floor;
        self.beads.iter().rev().copied().chain((1..).map(move |k| f - k))
    }

    /// `Par(B)`: the partition with `B = β_{charge}(λ)`.
    pub fn to_partition(&self) -> Partition {
        let s = self.charge();
        let parts = self
            .beads
            .iter()
            .rev()
            .enumerate()
            .map(|(i, &b)| (b - s + i as i64 + 1) as usize)
            .collect();
        Partition::new(parts).expect("β-set yields a partition")
    }

    pub fn move_bead(&self, from: i64, to: i64) -> Result<BetaSet> {
        if !self.contains(from) || self.contains(to) {
            return Err(Error::IllegalMove { from, to });
        }
        let below = self.floor.min(to).min(from);
        let mut all: BTreeSet<i64> = (below..self.floor).collect();
        all.extend(self.beads.iter().copied());
        all.remove(&from);
        all.insert(to);
        Ok(BetaSet::from_beads(below, all))
    }

    /// Slide every bead as far up its runner as it goes; `Par` of the result is the n-core.
    pub fn slide_up(&self, n: usize) -> BetaSet {
        let n = n as i64;
        let mut placed: BTreeSet<i64> = BTreeSet::new();
        for &x in &self.beads {
            let mut y = x;
            while y - n >= self.floor && !placed.contains(&(y - n)) {
                y -= n;
            }
            placed.insert(y);
        }
        BetaSet::from_beads(self.floor, placed)
    }

    /// Rows `[lo, hi]` outside of which rows are full (below) or empty (above).
    fn row_window(&self, n: i64) -> (i64, i64) {
        let lo = self.floor.div_euclid(n);
        let hi = self.max_bead().div_euclid(n).max(lo);
        (lo, hi)
    }

    /// The normalized sets `X_{i,j}(B)` for every row `i` of the window.
    pub fn section_sets(&self, nt: &RunnerTuple) -> SectionSets {
        let n = nt.n() as i64;
        let (lo, hi) = self.row_window(n);
        let mut rows = Vec::new();
        for i in lo..=hi {
            let mut row = vec![BTreeSet::new(); nt.len()];
            for x in i * n..(i + 1) * n {
                if self.contains(x) {
                    let pos = (x - i * n) as usize;
                    let j = nt.section_of(pos);
                    row[j].insert(pos - nt.sigma(j));
                }
            }
            rows.push(row);
        }
        SectionSets {
            nt: nt.clone(),
            row_lo: lo,
            rows,
        }
    }

    pub fn block_signature(&self, nt: &RunnerTuple) -> BlockSignature {
        let sets = self.section_sets(nt);
        let mut counts = BTreeMap::new();
        for i in sets.row_lo.min(0)..=sets.row_hi().max(0) {
            for j in 0..nt.len() {
                counts.insert((i, j), sets.get(i, j).len());
            }
        }
        BlockSignature::from_counts(nt.clone(), counts)
    }

    /// All one-step moves `B \ {a,b} ∪ {a-in, b+in}` with `a > b+in` and both targets vacant.
    pub fn jantzen_successors(&self, n: usize) -> Vec<BetaSet> {
        let n = n as i64;
        let mut out = BTreeSet::new();
        for &a in &self.beads {
            let mut i = 1;
            while a - i * n >= self.floor {
                let shift = i * n;
                if !self.contains(a - shift) {
                    for b in (self.floor - shift)..(a - shift) {
                        if self.contains(b) && !self.contains(b + shift) && b + shift != a - shift {
                            let mut all: BTreeSet<i64> = (self.floor - shift..self.floor).collect();
                            all.extend(self.beads.iter().copied());
                            all.remove(&a);
                            all.remove(&b);
                            all.insert(a - shift);
                            all.insert(b + shift);
                            out.insert(BetaSet::from_beads(self.floor - shift, all));
                        }
                    }
                }
                i += 1;
            }
        }
        out.into_iter().collect()
    }

    /// Whether `target` is reachable from `self` by Jantzen moves (`self ≥_J target`).
    pub fn jantzen_geq(&self, target: &BetaSet, n: usize, depth_limit: usize) -> Result<bool> {
        if self.charge() != target.charge() {
            return Ok(false);
        }
        if self == target {
            return Ok(true);
        }
        if self.to_partition().size() != target.to_partition().size() || *self < *target {
            return Ok(false);
        }
        let mut seen: HashSet<BetaSet> = HashSet::new();
        let mut queue = VecDeque::from([(self.clone(), 0usize)]);
        seen.insert(self.clone());
        while let Some((cur, depth)) = queue.pop_front() {
            for next in cur.jantzen_successors(n) {
                if next == *target {
                    return Ok(true);
                }
                if next < *target || seen.contains(&next) {
                    continue;
                }
                if depth + 1 >= depth_limit {
                    return Err(Error::DepthLimit(depth_limit));
                }
                seen.insert(next.clone());
                queue.push_back((next, depth + 1));
            }
        }
        Ok(false)
    }

    /// Read each runner group as an abacus of its own: `B_j = {x + i n_j : x ∈ X_{i,j}}`.
    pub fn runner_split(&self, nt: &RunnerTuple) -> Vec<(BetaSet, i64)> {
        let sets = self.section_sets(nt);
        let sig = self.block_signature(nt);
        (0..nt.len())
            .map(|j| {
                let nj = nt.part(j) as i64;
                let beads = sets.rows.iter().enumerate().flat_map(|(k, row)| {
                    let i = sets.row_lo + k as i64;
                    row[j].iter().map(move |&x| x as i64 + i * nj)
                });
                let b = BetaSet::from_beads(sets.row_lo * nj, beads.collect::<Vec<_>>());
                let s = sig.component_charge(j);
                debug_assert_eq!(b.charge(), s);
                (b, s)
            })
            .collect()
    }

    /// Inverse of `runner_split`.
    pub fn runner_merge(parts: &[BetaSet], nt: &RunnerTuple) -> Result<BetaSet> {
        if parts.len() != nt.len() {
            return Err(Error::InvalidArgument(format!(
                "{} components for a {}-part runner tuple",
                parts.len(),
                nt.len()
            )));
        }
        let n = nt.n() as i64;
        let lo = parts
            .iter()
            .enumerate()
            .map(|(j, b)| b.floor.div_euclid(nt.part(j) as i64))
            .min()
            .unwrap_or(0);
        let mut beads = Vec::new();
        for (j, b) in parts.iter().enumerate() {
            let nj = nt.part(j) as i64;
            for y in lo * nj..=b.max_bead().max(lo * nj) {
                if b.contains(y) {
                    let (i, x) = (y.div_euclid(nj), y.rem_euclid(nj));
                    beads.push(i * n + nt.sigma(j) as i64 + x);
                }
            }
        }
        Ok(BetaSet::from_beads(lo * n, beads))
    }
}

impl Ord for BetaSet {
    /// Lexicographic comparison of the decreasing β-sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.descending(), other.descending());
        loop {
            let (x, y) = (a.next().unwrap(), b.next().unwrap());
            if x != y {
                return x.cmp(&y);
            }
            if x < self.floor && x < other.floor {
                return Ordering::Equal;
            }
        }
    }
}

impl PartialOrd for BetaSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A composition `(n_1, ..., n_r)` of `n` cutting each abacus row into sections.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RunnerTuple(Vec<usize>);

impl RunnerTuple {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "runner tuple {parts:?} needs positive entries"
            )));
        }
        Ok(RunnerTuple(parts))
    }

    /// The single-section tuple `(n)`.
    pub fn whole(n: usize) -> Self {
        RunnerTuple(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn part(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// `σ_j = n_1 + ... + n_j` (so `σ_0 = 0`).
    pub fn sigma(&self, j: usize) -> usize {
        self.0[..j].iter().sum()
    }

    /// 0-based section containing runner `pos`.
    pub fn section_of(&self, pos: usize) -> usize {
        let mut acc = 0;
        for (j, &nj) in self.0.iter().enumerate() {
            acc += nj;
            if pos < acc {
                return j;
            }
        }
        panic!("runner {pos} outside tuple {self}")
    }

    /// All compositions of `n` into exactly `r` positive parts.
    pub fn all(n: usize, r: usize) -> Vec<RunnerTuple> {
        fn rec(n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<RunnerTuple>) {
            if r == 0 {
                if n == 0 {
                    out.push(RunnerTuple(cur.clone()));
                }
                return;
            }
            for k in 1..=n.saturating_sub(r - 1) {
                cur.push(k);
                rec(n - k, r - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, r, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for RunnerTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for RunnerTuple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("runner tuple {s:?}")))?;
        RunnerTuple::new(parts)
    }
}

/// Section sets over a row window; rows below are full, rows above empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSets {
    pub nt: RunnerTuple,
    pub row_lo: i64,
    pub rows: Vec<Vec<BTreeSet<usize>>>,
}

impl SectionSets {
    pub fn get(&self, i: i64, j: usize) -> BTreeSet<usize> {
        if i < self.row_lo {
            (0..self.nt.part(j)).collect()
        } else {
            self.rows
                .get((i - self.row_lo) as usize)
                .map(|r| r[j].clone())
                .unwrap_or_default()
        }
    }

    pub fn row_hi(&self) -> i64 {
        self.row_lo + self.rows.len() as i64 - 1
    }
}

/// Bead counts `t(i,j)` per row and section, stored as deviations from the vacuum
/// (full rows below zero, empty rows from zero up).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSignature {
    nt: RunnerTuple,
    dev: BTreeMap<(i64, usize), usize>,
}

impl BlockSignature {
    pub fn from_counts(nt: RunnerTuple, counts: BTreeMap<(i64, usize), usize>) -> Self {
        let dev = counts
            .into_iter()
            .filter(|&((i, j), c)| c != Self::vacuum_count(&nt, i, j))
            .collect();
        BlockSignature { nt, dev }
    }

    fn vacuum_count(nt: &RunnerTuple, i: i64, j: usize) -> usize {
        if i < 0 {
            nt.part(j)
        } else {
            0
        }
    }

    pub fn runner_tuple(&self) -> &RunnerTuple {
        &self.nt
    }

    pub fn count(&self, i: i64, j: usize) -> usize {
        self.dev
            .get(&(i, j))
            .copied()
            .unwrap_or_else(|| Self::vacuum_count(&self.nt, i, j))
    }

    /// Positions `(i, j)` where the count differs from the vacuum.
    pub fn deviations(&self) -> impl Iterator<Item = ((i64, usize), usize)> + '_ {
        self.dev.iter().map(|(k, v)| (*k, *v))
    }

    /// `s_j = Σ_{i≥0} t(i,j) + Σ_{i<0} (t(i,j) - n_j)`.
    pub fn component_charge(&self, j: usize) -> i64 {
        self.dev
            .iter()
            .filter(|((_, jj), _)| *jj == j)
            .map(|(&(i, _), &c)| {
                if i < 0 {
                    c as i64 - self.nt.part(j) as i64
                } else {
                    c as i64
                }
            })
            .sum()
    }

    pub fn charge(&self) -> i64 {
        (0..self.nt.len()).map(|j| self.component_charge(j)).sum()
    }

    /// `B_t`: each section filled from its left end.
    pub fn base_beta_set(&self) -> BetaSet {
        let n = self.nt.n() as i64;
        let lo = self.dev.keys().map(|k| k.0).min().unwrap_or(0).min(0);
        let hi = self.dev.keys().map(|k| k.0).max().unwrap_or(0).max(0);
        let mut beads = Vec::new();
        for i in lo..=hi {
            for j in 0..self.nt.len() {
                for x in 0..self.count(i, j) {
                    beads.push(i * n + (self.nt.sigma(j) + x) as i64);
                }
            }
        }
        BetaSet::from_beads(lo * n, beads)
    }

    pub fn base_partition(&self) -> Partition {
        self.base_beta_set().to_partition()
    }
}

impl PartialOrd for BlockSignature {
    /// Defined only between signatures of equal charge over the same tuple: the
    /// largest `(i, j)` where the counts differ decides.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.nt != other.nt || self.charge() != other.charge() {
            return None;
        }
        let keys: BTreeSet<(i64, usize)> = self.dev.keys().chain(other.dev.keys()).copied().collect();
        for &(i, j) in keys.iter().rev() {
            let (a, b) = (self.count(i, j), other.count(i, j));
            if a != b {
                return Some(a.cmp(&b));
            }
        }
        Some(Ordering::Equal)
    }
}

/// Options for `render_abacus`.
#[derive(Clone, Debug, Default)]
pub struct RenderOptions {
    /// Inclusive row range; defaults to one row of margin around the non-vacuum rows.
    pub rows: Option<(i64, i64)>,
    /// Draw section separators for this runner tuple.
    pub sections: Option<RunnerTuple>,
}

/// Fixed-width abacus picture: `o` is a bead, `.` a vacant position.
pub fn render_abacus(b: &BetaSet, n: usize, opts: &RenderOptions) -> String {
    let ni = n as i64;
    let (lo, hi) = opts.rows.unwrap_or_else(|| {
        let mut dev_rows = Vec::new();
        let (wlo, whi) = b.row_window(ni);
        for i in wlo..=whi {
            let full = i < 0;
            if (0..ni).any(|j| b.contains(i * ni + j) != full) {
                dev_rows.push(i);
            }
        }
        match (dev_rows.first(), dev_rows.last()) {
            (Some(&a), Some(&z)) => (a - 1, z + 1),
            _ => (-1, 0),
        }
    });
    let cw = (n - 1).to_string().len();
    let lw = [lo, hi].iter().map(|x| x.to_string().len()).max().unwrap_or(1);
    let boundaries: Vec<usize> = match &opts.sections {
        Some(nt) => (1..nt.len()).map(|j| nt.sigma(j)).collect(),
        None => Vec::new(),
    };
    let line = |label: String, cells: Vec<String>| {
        let mut s = format!("{label:>lw$}  ");
        for (j, c) in cells.iter().enumerate() {
            if j > 0 {
                s.push_str(if boundaries.contains(&j) { " | " } else { " " });
            }
            s.push_str(&format!("{c:>cw$}"));
        }
        s.trim_end().to_string()
    };
    let mut out = vec![line(String::new(), (0..n).map(|j| j.to_string()).collect())];
    for i in lo..=hi {
        let cells = (0..ni)
            .map(|j| if b.contains(i * ni + j) { "o" } else { "." }.to_string())
            .collect();
        out.push(line(i.to_string(), cells));
    }
    out.join("\n") + "\n"
}
