//! The bar involution of the Fock space, computed on semi-infinite q-wedges.
//!
//! A partition `λ` is the wedge `u_{k_1} ∧ u_{k_2} ∧ ...` with `k_i = λ_i - i`.
//! Its bar image is `(-1)^{r(r-1)/2} q^{κ} u_{k_r} ∧ ... ∧ u_{k_1} ∧ (tail)`,
//! straightened, where `r` is the least multiple of `n` with `r ≥ |λ|` and
//! `κ` counts pairs among the first `r` indices lying in different classes mod `n`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::fock::FockVector;
use crate::laurent::LaurentPoly;
use crate::partition::Partition;

type Wedge = Vec<i64>;
type Combination = Vec<(Wedge, LaurentPoly)>;

/// Bar involution at a fixed rank `n`, with memoized straightening.
#[derive(Debug)]
pub struct BarInvolution {
    n: usize,
    insert_memo: Mutex<HashMap<(i64, Wedge), Arc<Combination>>>,
    rows: Mutex<HashMap<Partition, Arc<BTreeMap<Partition, LaurentPoly>>>>,
}

impl BarInvolution {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "bar involution needs n >= 2");
        BarInvolution {
            n,
            insert_memo: Mutex::new(HashMap::new()),
            rows: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rewrite `u_l ∧ u_m` with `l < m` as ordered two-wedges.
    fn rule(&self, l: i64, m: i64) -> Vec<(LaurentPoly, i64, i64)> {
        let n = self.n as i64;
        if (m - l) % n == 0 {
            return vec![(LaurentPoly::constant(-1), m, l)];
        }
        let i = (m - l).rem_euclid(n);
        let mut out = vec![(LaurentPoly::monomial(-1, -1), m, l)];
        let base = LaurentPoly::from_terms([(-2, 1), (0, -1)]);
        let mut t = 0i64;
        loop {
            let k = t / 2;
            let (x, y, sign) = if t % 2 == 0 {
                (m - i - k * n, l + i + k * n, 1)
            } else {
                (m - (k + 1) * n, l + (k + 1) * n, -1)
            };
            if x <= y {
                break;
            }
            out.push((base.shift(-(t as i32)).scale(&sign.into()), x, y));
            t += 1;
        }
        out
    }

    /// `u_a ∧ W` for an ordered wedge `W`, as ordered wedges.
    fn insert(&self, a: i64, w: &[i64]) -> Arc<Combination> {
        let key = (a, w.to_vec());
        if let Some(hit) = self.insert_memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let result: Combination = if w.is_empty() || a > w[0] {
            let mut v = vec![a];
            v.extend_from_slice(w);
            vec![(v, LaurentPoly::one())]
        } else if a == w[0] {
            Vec::new()
        } else {
            let mut acc: BTreeMap<Wedge, LaurentPoly> = BTreeMap::new();
            for (c, x, y) in self.rule(a, w[0]) {
                for (v, cv) in self.insert(y, &w[1..]).iter() {
                    let cc = &c * cv;
                    for (v2, c2) in self.insert(x, v).iter() {
                        let slot = acc.entry(v2.clone()).or_default();
                        *slot += &(&cc * c2);
                    }
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        let result = Arc::new(result);
        self.insert_memo.lock().unwrap().insert(key, result.clone());
        result
    }

    /// Straighten an arbitrary finite wedge.
    fn straighten(&self, seq: &[i64]) -> BTreeMap<Wedge, LaurentPoly> {
        let mut cur: BTreeMap<Wedge, LaurentPoly> = BTreeMap::from([(Vec::new(), LaurentPoly::one())]);
        for &a in seq.iter().rev() {
            let mut next: BTreeMap<Wedge, LaurentPoly> = BTreeMap::new();
            for (w, c) in &cur {
                for (v, cv) in self.insert(a, w).iter() {
                    let slot = next.entry(v.clone()).or_default();
                    *slot += &(c * cv);
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur
    }

    /// `\bar{λ}` expanded in the partition basis.
    pub fn bar_basis(&self, lambda: &Partition) -> Arc<BTreeMap<Partition, LaurentPoly>> {
        if let Some(hit) = self.rows.lock().unwrap().get(lambda) {
            return hit.clone();
        }
        let n = self.n;
        let size = lambda.size().max(1);
        let r = size.div_ceil(n) * n;
        let ks: Vec<i64> = (1..=r).map(|i| lambda.part(i) as i64 - i as i64).collect();
        let mut kappa = 0i32;
        for a in 0..r {
            for b in a + 1..r {
                if (ks[a] - ks[b]).rem_euclid(n as i64) != 0 {
                    kappa += 1;
                }
            }
        }
        let sign = if (r * (r - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        let factor = LaurentPoly::monomial(kappa, sign);
        let reversed: Vec<i64> = ks.iter().rev().copied().collect();
        let mut out: BTreeMap<Partition, LaurentPoly> = BTreeMap::new();
        for (w, c) in self.straighten(&reversed) {
            let parts = w.iter().enumerate().map(|(i, k)| (k + i as i64 + 1) as usize).collect();
            let mu = Partition::new(parts).expect("ordered wedge above the tail is a partition");
            let slot = out.entry(mu).or_default();
            *slot += &(&c * &factor);
        }
        out.retain(|_, c| !c.is_zero());
        let out = Arc::new(out);
        self.rows.lock().unwrap().insert(lambda.clone(), out.clone());
        out
    }

    /// Semilinear extension to vectors; independent of the charge.
    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.ctx);
        for (lam, c) in v.terms() {
            let cb = c.bar();
            for (mu, a) in self.bar_basis(lam).iter() {
                out.add_term(mu.clone(), &(a * &cb));
            }
        }
        out
    }
}
