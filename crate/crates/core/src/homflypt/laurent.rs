use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{factorial, frac, Q};

/// Laurent polynomial in `t` and `z` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    /// `c t^a z^b`.
    pub fn monomial(c: i64, a: i32, b: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, BigInt::from(c));
        p
    }

    /// `(t + t^-1) z^-1`, the value of a two-component unlink.
    pub fn delta() -> Self {
        Self::monomial(1, 1, -1).add(&Self::monomial(1, -1, -1))
    }

    pub fn terms(&self) -> &BTreeMap<(i32, i32), BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: i32, b: i32) -> BigInt {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, a: i32, b: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((a, b)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a + a2, b + b2, c * c2);
            }
        }
        out
    }

    /// Multiplies by `c t^a z^b`.
    pub fn shift(&self, c: i64, a: i32, b: i32) -> Self {
        let c = BigInt::from(c);
        let mut out = Self::zero();
        for (&(x, y), v) in &self.terms {
            out.add_term(x + a, y + b, v * &c);
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes `t ↦ t^-1`.
    pub fn invert_t(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(-a, b, c.clone());
        }
        out
    }

    /// Rewrites the polynomial for the relation `t^-1 P(L+) - t P(L-) = z P(L0)`.
    ///
    /// The two normalizations are related by `t ↦ i t^-1`, `z ↦ i z`; a term
    /// `t^a z^b` picks up `i^(a+b)`, which is real because `a + b` is even
    /// for every link polynomial.
    pub fn to_conway_normalization(&self) -> Result<Self> {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let s = a + b;
            if s.rem_euclid(2) != 0 {
                return Err(Error::Precondition(format!(
                    "term t^{a} z^{b} has odd total degree"
                )));
            }
            let sign = if (s / 2).rem_euclid(2) == 0 { 1 } else { -1 };
            out.add_term(-a, b, c * sign);
        }
        Ok(out)
    }

    /// Coefficient of `z^b` as a polynomial in `t`.
    pub fn z_coefficient(&self, b: i32) -> LaurentPoly1 {
        let mut out = LaurentPoly1::default();
        for (&(a, bb), c) in &self.terms {
            if bb == b {
                out.add_term(a, c.clone());
            }
        }
        out
    }

    pub fn min_z(&self) -> Option<i32> {
        self.terms.keys().map(|&(_, b)| b).min()
    }
}

fn fmt_term(c: &BigInt, parts: &[(char, i32)], first: bool, f: &mut String) {
    let neg = c.is_negative();
    if first {
        if neg {
            f.push('-');
        }
    } else {
        f.push_str(if neg { " - " } else { " + " });
    }
    let mut factors = vec![c.abs().to_string()];
    for &(v, e) in parts {
        match e {
            0 => {}
            1 => factors.push(v.to_string()),
            _ => factors.push(format!("{v}^{e}")),
        }
    }
    f.push_str(&factors.join("*"));
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        // Sorted by z exponent, then t exponent.
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|(&(a, b), _)| (b, a));
        for (i, (&(a, b), c)) in keys.into_iter().enumerate() {
            fmt_term(c, &[('t', a), ('z', b)], i == 0, &mut s);
        }
        write!(f, "{s}")
    }
}

impl Serialize for LaurentPoly2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (&(a, b), c) in &self.terms {
            seq.serialize_element(&(a, b, c.to_string()))?;
        }
        seq.end()
    }
}

/// Laurent polynomial in `t` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly1 {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly1 {
    pub fn from_terms(terms: &[(i32, i64)]) -> Self {
        let mut p = Self::default();
        for &(a, c) in terms {
            p.add_term(a, BigInt::from(c));
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<i32, BigInt> {
        &self.terms
    }

    pub fn add_term(&mut self, a: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    /// Value at `t = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Taylor coefficients of `p(1 + s)` up to `s^n`.
    pub fn taylor_at_one(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n + 1];
        for (&a, c) in &self.terms {
            // (1+s)^a = Σ binom(a, k) s^k, valid for negative a as a series.
            let mut binom = Q::one();
            for (k, slot) in out.iter_mut().enumerate() {
                *slot += &binom * Q::from_integer(c.clone());
                binom = binom * frac(a as i64 - k as i64, k as i64 + 1);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (&a, c)) in self.terms.iter().enumerate() {
            fmt_term(c, &[('t', a)], i == 0, &mut s);
        }
        write!(f, "{s}")
    }
}

impl Serialize for LaurentPoly1 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (&a, c) in &self.terms {
            seq.serialize_element(&(a, c.to_string()))?;
        }
        seq.end()
    }
}

/// `d^n/dt^n log p(t)` at `t = 1`.
pub fn log_deriv(p: &LaurentPoly1, n: usize) -> Result<Q> {
    if !p.at_one().is_one() {
        return Err(Error::Precondition(format!("p(1) = {} is not 1", p.at_one())));
    }
    let mut u = p.taylor_at_one(n);
    u[0] = Q::zero();
    // log(1+u) = Σ (-1)^(j+1) u^j / j
    let mut out = vec![Q::zero(); n + 1];
    let mut pow = u.clone();
    for j in 1..=n {
        let c = frac(if j % 2 == 1 { 1 } else { -1 }, j as i64);
        for (k, x) in pow.iter().enumerate() {
            out[k] += x * &c;
        }
        let mut next = vec![Q::zero(); n + 1];
        for (a, x) in pow.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in u.iter().enumerate() {
                if a + b <= n && !y.is_zero() {
                    next[a + b] += x * y;
                }
            }
        }
        pow = next;
    }
    Ok(&out[n] * Q::from_integer(factorial(n)))
}
