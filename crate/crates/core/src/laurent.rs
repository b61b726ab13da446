//! Sparse Laurent polynomials in `q` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An element of `Z[q, q^-1]`, stored as exponent → nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(0, c)
    }

    /// `c * q^e`.
    pub fn monomial<C: Into<BigInt>>(e: i32, c: C) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (e, c) in it {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// The bar involution `q ↦ q^-1`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    pub fn evaluate_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Some `c q^e` with a single term, returned as `(e, c)`.
    pub fn as_monomial(&self) -> Option<(i32, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// True when every exponent is strictly positive (the zero polynomial qualifies).
    pub fn in_q_zq(&self) -> bool {
        self.min_exp().is_none_or(|e| e > 0)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// LaTeX math form, e.g. `q^{-1} + 2 + 5q`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let a = c.abs();
            if c.is_negative() {
                out.push_str(if k == 0 { "-" } else { " - " });
            } else if k > 0 {
                out.push_str(" + ");
            }
            let var = match *e {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{{{e}}}"),
            };
            if *e == 0 || !a.is_one() {
                out.push_str(&a.to_string());
            }
            out.push_str(&var);
        }
        out
    }

    /// Split `c` as `alpha + rest` with `alpha` bar-symmetric and `rest ∈ qZ[q]`.
    pub fn symmetric_truncation(&self) -> (LaurentPoly, LaurentPoly) {
        let mut alpha = LaurentPoly::zero();
        for (e, c) in self.terms.iter() {
            match e.cmp(&0) {
                std::cmp::Ordering::Less => {
                    alpha.add_term(*e, c.clone());
                    alpha.add_term(-*e, c.clone());
                }
                std::cmp::Ordering::Equal => alpha.add_term(0, c.clone()),
                std::cmp::Ordering::Greater => {}
            }
        }
        let rest = self - &alpha;
        (alpha, rest)
    }

    /// Exact quotient `self / den`; fails unless the remainder is zero.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<LaurentPoly, Error> {
        let inexact = || Error::InexactDivision {
            num: self.to_string(),
            den: den.to_string(),
        };
        let (dtop, dlead) = match den.terms.iter().next_back() {
            Some((e, c)) => (*e, c.clone()),
            None => return Err(inexact()),
        };
        let dlow = den.min_exp().unwrap_or(0);
        let floor = match self.min_exp() {
            Some(e) => e - dlow,
            None => return Ok(LaurentPoly::zero()),
        };
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((&rtop, rlead)) = rem.terms.iter().next_back() {
            let t = rtop - dtop;
            if t < floor || !(rlead % &dlead).is_zero() {
                return Err(inexact());
            }
            let c = rlead / &dlead;
            let step = den.shift(t).scale(&c);
            rem -= &step;
            quot.add_term(t, c);
        }
        Ok(quot)
    }

    /// Balanced quantum integer `[m] = q^{1-m} + q^{3-m} + ... + q^{m-1}`.
    pub fn quantum_int(m: i64) -> Result<LaurentPoly, Error> {
        if m <= 0 {
            return Err(Error::InvalidArgument(format!("quantum integer needs m >= 1, got {m}")));
        }
        let m = m as i32;
        Ok(LaurentPoly::from_terms((0..m).map(|k| (1 - m + 2 * k, 1))))
    }

    /// `[m]! = [1][2]...[m]`, with `[0]! = 1`.
    pub fn quantum_factorial(m: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for k in 1..=m {
            out = &out * &LaurentPoly::quantum_int(k as i64).expect("k >= 1");
        }
        out
    }

    /// Gaussian binomial `[m choose k]`, zero when `k > m`.
    pub fn quantum_binom(m: u32, k: u32) -> Result<LaurentPoly, Error> {
        if k > m {
            return Ok(LaurentPoly::zero());
        }
        let num = LaurentPoly::quantum_factorial(m);
        let den = &LaurentPoly::quantum_factorial(k) * &LaurentPoly::quantum_factorial(m - k);
        num.exact_div(&den)
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, e: i32, c: &BigInt, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let var = match e {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{e}"),
    };
    if e == 0 {
        write!(f, "{a}")
    } else if a.is_one() {
        write!(f, "{var}")
    } else {
        write!(f, "{a}*{var}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            fmt_term(f, *e, c, k == 0)?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the text form produced by `Display`, e.g. `q^-1 + 2 - 5*q^3`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |msg: &str| Error::Parse(format!("laurent polynomial {s:?}: {msg}"));
        let t: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad("empty"));
        }
        let mut out = LaurentPoly::zero();
        let mut i = 0;
        while i < t.len() {
            let mut sign = BigInt::one();
            if t[i] == '+' || t[i] == '-' {
                if t[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("expected + or -"));
            }
            let start = i;
            while i < t.len() && t[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<BigInt> = if i > start {
                let digits: String = t[start..i].iter().collect();
                Some(digits.parse().map_err(|_| bad("bad coefficient"))?)
            } else {
                None
            };
            let mut exp = 0i32;
            let mut has_var = false;
            if i < t.len() && t[i] == '*' {
                if coeff.is_none() {
                    return Err(bad("'*' without coefficient"));
                }
                i += 1;
                if i >= t.len() || t[i] != 'q' {
                    return Err(bad("expected q after '*'"));
                }
            }
            if i < t.len() && t[i] == 'q' {
                has_var = true;
                exp = 1;
                i += 1;
                if i < t.len() && t[i] == '^' {
                    i += 1;
                    let es = i;
                    if i < t.len() && t[i] == '-' {
                        i += 1;
                    }
                    while i < t.len() && t[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = t[es..i].iter().collect();
                    exp = digits.parse().map_err(|_| bad("bad exponent"))?;
                }
            }
            if coeff.is_none() && !has_var {
                return Err(bad("empty term"));
            }
            out.add_term(exp, sign * coeff.unwrap_or_else(BigInt::one));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Small(i64),
    Big(String),
}

impl Serialize for LaurentPoly {
    /// `[[exponent, coefficient], ...]` in increasing exponent order; huge coefficients become strings.
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let c = match c.to_i64() {
                Some(x) => Coeff::Small(x),
                None => Coeff::Big(c.to_string()),
            };
            seq.serialize_element(&(e, c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw: Vec<(i32, Coeff)> = Vec::deserialize(de)?;
        let mut p = LaurentPoly::zero();
        for (e, c) in raw {
            let c = match c {
                Coeff::Small(x) => BigInt::from(x),
                Coeff::Big(s) => s.parse().map_err(de::Error::custom)?,
            };
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}
