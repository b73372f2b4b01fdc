use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, frac, one, Q};

/// A word in the letters `1..=q`, ordered by length and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn empty() -> Self {
        Monomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    /// `X1*X2`, or `1` for the empty word.
    pub fn render(&self, var: char) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|i| format!("{var}{i}"))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<&[u8]> for Monomial {
    fn from(v: &[u8]) -> Self {
        Monomial(v.to_vec())
    }
}

/// Element of `Q<X_1..X_q>` modulo monomials of degree `>= trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedTensor {
    rank: usize,
    trunc: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl TruncatedTensor {
    pub fn zero(rank: usize, trunc: usize) -> Self {
        TruncatedTensor {
            rank,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize, trunc: usize) -> Self {
        let mut t = Self::zero(rank, trunc);
        t.add_term(Monomial::empty(), one());
        t
    }

    /// The variable `X_i`.
    pub fn var(rank: usize, trunc: usize, i: usize) -> Self {
        Self::monomial(rank, trunc, Monomial(vec![i as u8]), one())
    }

    pub fn monomial(rank: usize, trunc: usize, m: Monomial, c: Q) -> Self {
        let mut t = Self::zero(rank, trunc);
        t.add_term(m, c);
        t
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(
        rank: usize,
        trunc: usize,
        terms: I,
    ) -> Self {
        let mut t = Self::zero(rank, trunc);
        for (m, c) in terms {
            t.add_term(m, c);
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant(&self) -> Q {
        self.coeff(&Monomial::empty())
    }

    /// Adds `c * m`, dropping it when `m` is at or beyond the truncation.
    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if m.degree() >= self.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_scaled(&mut self, other: &TruncatedTensor, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add(&self, other: &TruncatedTensor) -> TruncatedTensor {
        let mut out = self.clone();
        out.add_scaled(other, &one());
        out
    }

    pub fn sub(&self, other: &TruncatedTensor) -> TruncatedTensor {
        let mut out = self.clone();
        out.add_scaled(other, &-one());
        out
    }

    pub fn scale(&self, c: &Q) -> TruncatedTensor {
        let mut out = Self::zero(self.rank, self.trunc);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &TruncatedTensor) -> TruncatedTensor {
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.rank.max(other.rank), trunc);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.degree() + b.degree() < trunc {
                    out.add_term(a.concat(b), x * y);
                }
            }
        }
        out
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &TruncatedTensor) -> TruncatedTensor {
        self.mul(other).sub(&other.mul(self))
    }

    /// Same element with a lower truncation.
    pub fn truncate(&self, trunc: usize) -> TruncatedTensor {
        let mut out = Self::zero(self.rank, trunc.min(self.trunc));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn with_trunc(&self, trunc: usize) -> TruncatedTensor {
        let mut out = Self::zero(self.rank, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The part of degree exactly `d`.
    pub fn homogeneous(&self, d: usize) -> TruncatedTensor {
        self.degree_range(d, d + 1)
    }

    /// The part of degree in `lo..hi`.
    pub fn degree_range(&self, lo: usize, hi: usize) -> TruncatedTensor {
        let mut out = Self::zero(self.rank, self.trunc);
        for (m, c) in &self.terms {
            if m.degree() >= lo && m.degree() < hi {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Lowest degree carrying a nonzero term.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// `log(self)` as a series in `self - 1`; requires constant term 1.
    pub fn log(&self) -> TruncatedTensor {
        assert!(self.constant().is_one(), "log needs constant term 1");
        let mut u = self.clone();
        u.terms.remove(&Monomial::empty());
        let mut out = Self::zero(self.rank, self.trunc);
        let mut pow = u.clone();
        let mut n = 1i64;
        while !pow.is_zero() {
            let c = frac(if n % 2 == 1 { 1 } else { -1 }, n);
            out.add_scaled(&pow, &c);
            pow = pow.mul(&u);
            n += 1;
        }
        out
    }

    /// `exp(self)`; requires zero constant term.
    pub fn exp(&self) -> TruncatedTensor {
        assert!(self.constant().is_zero(), "exp needs zero constant term");
        let mut out = Self::one(self.rank, self.trunc);
        let mut pow = Self::one(self.rank, self.trunc);
        let mut n = 1i64;
        loop {
            pow = pow.mul(self).scale(&frac(1, n));
            if pow.is_zero() {
                break;
            }
            out = out.add(&pow);
            n += 1;
        }
        out
    }

    /// Unshuffle coproduct, with every `X_i` primitive.
    pub fn coproduct(&self) -> TensorSquare {
        let mut out = TensorSquare::default();
        for (m, c) in &self.terms {
            let d = m.degree();
            for mask in 0u32..(1u32 << d) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (p, &i) in m.0.iter().enumerate() {
                    if mask & (1 << p) != 0 {
                        left.push(i);
                    } else {
                        right.push(i);
                    }
                }
                out.add_term(Monomial(left), Monomial(right), c.clone());
            }
        }
        out
    }

    /// Whether `Δ(a) = a⊗1 + 1⊗a`.
    pub fn is_primitive(&self) -> bool {
        if !self.constant().is_zero() {
            return false;
        }
        let mut delta = self.coproduct();
        for (m, c) in &self.terms {
            delta.add_term(m.clone(), Monomial::empty(), -c.clone());
            delta.add_term(Monomial::empty(), m.clone(), -c.clone());
        }
        delta.terms.is_empty()
    }
}

impl fmt::Display for TruncatedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.degree() == 0 {
                s.push_str(&fmt_q(&a));
            } else if a.is_one() {
                s.push_str(&m.render('X'));
            } else {
                s.push_str(&format!("{}*{}", fmt_q(&a), m.render('X')));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        write!(f, "{s} + O({})", self.trunc)
    }
}

/// Element of the tensor square, used for coproducts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorSquare {
    pub terms: BTreeMap<(Monomial, Monomial), Q>,
}

impl TensorSquare {
    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: Q) {
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

    pub fn coeff(&self, a: &[u8], b: &[u8]) -> Q {
        self.terms
            .get(&(Monomial(a.to_vec()), Monomial(b.to_vec())))
            .cloned()
            .unwrap_or_else(Q::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn x(i: usize) -> TruncatedTensor {
        TruncatedTensor::var(2, 4, i)
    }

    #[test]
    fn coproduct_examples() {
        let d = TruncatedTensor::one(2, 4).coproduct();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.coeff(&[], &[]), q(1));
        let d = x(1).coproduct();
        assert_eq!(d.coeff(&[1], &[]), q(1));
        assert_eq!(d.coeff(&[], &[1]), q(1));
        assert_eq!(d.terms.len(), 2);
        let d = x(1).mul(&x(2)).coproduct();
        assert_eq!(d.terms.len(), 4);
        assert_eq!(d.coeff(&[1, 2], &[]), q(1));
        assert_eq!(d.coeff(&[1], &[2]), q(1));
        assert_eq!(d.coeff(&[2], &[1]), q(1));
        assert_eq!(d.coeff(&[], &[1, 2]), q(1));
    }

    #[test]
    fn primitivity() {
        assert!(x(1).is_primitive());
        assert!(!x(1).mul(&x(2)).is_primitive());
        assert!(x(1).commutator(&x(2)).is_primitive());
        assert!(!TruncatedTensor::one(2, 4).is_primitive());
    }

    #[test]
    fn exp_log_inverse() {
        let a = x(1).add(&x(1).commutator(&x(2)).scale(&q(3)));
        assert_eq!(a.exp().log(), a);
    }

    #[test]
    fn display() {
        let t = TruncatedTensor::one(2, 3).add(&x(1).commutator(&x(2)).truncate(3));
        assert_eq!(t.to_string(), "1 + X1*X2 - X2*X1 + O(3)");
    }
}
