//! Partitions, Young diagram nodes, residues, rim hooks and normal nodes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abacus::BetaSet;
use crate::error::{Error, Result};

/// A partition, stored as its positive parts in weakly decreasing order.
///
/// The derived order is the lexicographic order on parts, which equals the
/// zero-padded comparison because parts are positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

/// A cell of a Young diagram, 1-based `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
}

impl Node {
    pub fn new(row: usize, col: usize) -> Self {
        Node { row, col }
    }

    /// `(col - row) mod n`, never shifted by a charge.
    pub fn residue(&self, n: usize) -> usize {
        (self.col as i64 - self.row as i64).rem_euclid(n as i64) as usize
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A residue class modulo `modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueClass {
    pub value: usize,
    pub modulus: usize,
}

impl ResidueClass {
    pub fn new(value: i64, modulus: usize) -> Self {
        ResidueClass {
            value: value.rem_euclid(modulus as i64) as usize,
            modulus,
        }
    }

    pub fn is_adjacent(&self, other: &ResidueClass) -> bool {
        let d = (self.value as i64 - other.value as i64).rem_euclid(self.modulus as i64);
        d == 1 || d as usize == self.modulus - 1
    }
}

/// Result of unwrapping a rim hook.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RimHook {
    pub partition: Partition,
    pub size: usize,
    pub leg_length: usize,
    /// Row of the result whose β-number received the moved bead.
    pub landing_row: usize,
}

impl RimHook {
    pub fn leg_sign(&self) -> i32 {
        if self.leg_length.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl Partition {
    /// Validates weak decrease; trailing zero parts are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::NotAPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `λ_i` for 1-based `i`, zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, node: Node) -> bool {
        node.row >= 1 && node.col >= 1 && node.col <= self.part(node.row)
    }

    pub fn nodes(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.size());
        for (r, &len) in self.0.iter().enumerate() {
            for c in 1..=len {
                out.push(Node::new(r + 1, c));
            }
        }
        out
    }

    /// Addable nodes with residues, by increasing column.
    pub fn addable_nodes(&self, n: usize) -> Vec<(Node, usize)> {
        let mut out = Vec::new();
        for r in (1..=self.len() + 1).rev() {
            let c = self.part(r) + 1;
            if r == 1 || self.part(r - 1) >= c {
                let node = Node::new(r, c);
                out.push((node, node.residue(n)));
            }
        }
        out
    }

    /// Removable nodes with residues, by increasing column.
    pub fn removable_nodes(&self, n: usize) -> Vec<(Node, usize)> {
        let mut out = Vec::new();
        for r in (1..=self.len()).rev() {
            if self.part(r) > self.part(r + 1) {
                let node = Node::new(r, self.part(r));
                out.push((node, node.residue(n)));
            }
        }
        out
    }

    pub fn add_node(&self, node: Node) -> Result<Partition> {
        let ok = node.col == self.part(node.row) + 1 && (node.row == 1 || self.part(node.row - 1) >= node.col);
        if !ok {
            return Err(Error::Precondition(format!("{node} is not addable to {self}")));
        }
        let mut parts = self.0.clone();
        if node.row > parts.len() {
            parts.push(1);
        } else {
            parts[node.row - 1] += 1;
        }
        Ok(Partition(parts))
    }

    pub fn remove_node(&self, node: Node) -> Result<Partition> {
        let ok = node.col >= 1 && node.col == self.part(node.row) && self.part(node.row + 1) < node.col;
        if !ok {
            return Err(Error::Precondition(format!("{node} is not removable from {self}")));
        }
        let mut parts = self.0.clone();
        parts[node.row - 1] -= 1;
        if parts[node.row - 1] == 0 {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// Removable nodes of residue `r` that are normal, by increasing column.
    ///
    /// A removable node is normal when it, and every addable or removable node
    /// of residue `r` to its right, sees at least as many removable as addable
    /// residue-`r` nodes strictly to its right.
    pub fn normal_nodes(&self, n: usize, r: usize) -> Vec<Node> {
        let add: Vec<Node> = self
            .addable_nodes(n)
            .into_iter()
            .filter(|x| x.1 == r)
            .map(|x| x.0)
            .collect();
        let rem: Vec<Node> = self
            .removable_nodes(n)
            .into_iter()
            .filter(|x| x.1 == r)
            .map(|x| x.0)
            .collect();
        // Every same-residue node X right of the candidate sees at least as many
        // removable as addable nodes in the stretch between the candidate and X.
        let covered = |from: usize, to: usize| {
            let r = rem.iter().filter(|x| x.col > from && x.col <= to).count();
            let a = add.iter().filter(|x| x.col > from && x.col <= to).count();
            r >= a
        };
        rem.iter()
            .copied()
            .filter(|node| {
                rem.iter()
                    .chain(add.iter())
                    .filter(|x| x.col > node.col)
                    .all(|x| covered(node.col, x.col))
            })
            .collect()
    }

    pub fn is_n_regular(&self, n: usize) -> bool {
        self.0.windows(n).all(|w| w[0] != w[n - 1])
    }

    /// Unwrap the rim hook `{(i,j) in λ : i >= a, j >= max(b, λ_{i+1})}`.
    pub fn unwrap_rim_hook(&self, node: Node) -> Result<RimHook> {
        if !self.contains(node) {
            return Err(Error::Precondition(format!("{node} is not a node of {self}")));
        }
        let (a, b) = (node.row, node.col);
        let mut parts = self.0.clone();
        let mut size = 0;
        let mut last = a;
        let mut i = a;
        while i <= self.len() && self.part(i) >= b {
            let keep = b.max(self.part(i + 1)) - 1;
            size += self.part(i) - keep;
            parts[i - 1] = keep;
            last = i;
            i += 1;
        }
        Ok(RimHook {
            partition: Partition::new(parts)?,
            size,
            leg_length: last - a,
            landing_row: last,
        })
    }

    /// Inverse of `unwrap_rim_hook`: move the β-number of `row` up by `size`.
    pub fn wrap_rim_hook(&self, row: usize, size: usize) -> Result<Partition> {
        if row == 0 || size == 0 {
            return Err(Error::Precondition("row and size must be positive".into()));
        }
        let len = self.len().max(row) + size + 1;
        let mut beta: Vec<i64> = (1..=len).map(|i| self.part(i) as i64 - i as i64).collect();
        let target = beta[row - 1] + size as i64;
        if beta.contains(&target) {
            return Err(Error::Precondition(format!(
                "no rim hook of size {size} can be wrapped at row {row} of {self}"
            )));
        }
        beta[row - 1] = target;
        beta.sort_unstable_by(|x, y| y.cmp(x));
        let parts = beta
            .iter()
            .enumerate()
            .map(|(i, b)| (b + i as i64 + 1) as usize)
            .collect();
        Partition::new(parts)
    }

    pub fn n_core(&self, n: usize) -> Partition {
        BetaSet::from_partition(self, 0).slide_up(n).to_partition()
    }

    /// Drop the `k` largest parts.
    pub fn strip_first_rows(&self, k: usize) -> Partition {
        Partition(self.0.iter().skip(k).copied().collect())
    }

    /// All `λ ≠ μ` obtained by removing one residue-`r` node and adding another.
    pub fn move_node_variants(&self, n: usize, r: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        for (x, rx) in self.removable_nodes(n) {
            if rx != r {
                continue;
            }
            let nu = self.remove_node(x).expect("removable");
            for (y, ry) in nu.addable_nodes(n) {
                if ry == r && y != x {
                    out.push(nu.add_node(y).expect("addable"));
                }
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.part(1);
        Partition((1..=m).map(|c| self.0.iter().filter(|&&p| p >= c).count()).collect())
    }
}

/// All partitions of `m` in decreasing lexicographic order.
pub fn partitions_of(m: usize) -> Vec<Partition> {
    fn rec(m: usize, maxp: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if m == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for k in (1..=m.min(maxp)).rev() {
            cur.push(k);
            rec(m - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// All partitions of size at most `m`, grouped by increasing size.
pub fn partitions_up_to(m: usize) -> Vec<Partition> {
    (0..=m).flat_map(partitions_of).collect()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `(3,1^2)`, `[3,1,1]`, `3,1,1`, `3 1 1` and `()`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("partition {s:?}: {msg}"));
        let mut body = s.trim();
        for (open, close) in [('(', ')'), ('[', ']')] {
            if body.starts_with(open) {
                body = body
                    .strip_prefix(open)
                    .and_then(|b| b.strip_suffix(close))
                    .ok_or_else(|| bad("unbalanced brackets"))?;
            }
        }
        let mut parts = Vec::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad("bad exponent"))?),
                None => (tok, 1),
            };
            let v: usize = base.parse().map_err(|_| bad("bad part"))?;
            parts.extend(std::iter::repeat_n(v, exp));
        }
        Partition::new(parts).map_err(|e| bad(&e.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(de)?;
        Partition::new(v).map_err(serde::de::Error::custom)
    }
}
