use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use serde::Serialize;

use super::tensor::{Monomial, TruncatedTensor};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, one, Q};

/// Whether `w` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| {
        let rot = w[i..].iter().chain(&w[..i]);
        w.iter().lt(rot)
    })
}

/// All Lyndon words of length `n` over `1..=q`, in lexicographic order (Duval).
pub fn lyndon_words(q: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if q == 0 || n == 0 {
        return out;
    }
    let q = q as u8;
    let mut w: Vec<u8> = vec![1];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&q) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(c) => *c += 1,
        }
    }
    out
}

/// Lyndon words of every length in `lo..hi`, ordered by length then lexicographically.
pub fn lyndon_basis(q: usize, lo: usize, hi: usize) -> Vec<Vec<u8>> {
    (lo.max(1)..hi).flat_map(|n| lyndon_words(q, n)).collect()
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> (&[u8], &[u8]) {
    assert!(w.len() >= 2);
    let split = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("every word of length >= 2 has a Lyndon suffix");
    (&w[..split], &w[split..])
}

type BracketCache = RwLock<HashMap<Vec<u8>, Arc<BTreeMap<Monomial, Q>>>>;

fn cache() -> &'static BracketCache {
    static CACHE: OnceLock<BracketCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Expansion of the standard bracketing `P_w` in the tensor algebra.
pub fn lyndon_bracket(w: &[u8]) -> Arc<BTreeMap<Monomial, Q>> {
    if let Some(v) = cache().read().expect("cache poisoned").get(w) {
        return v.clone();
    }
    let terms = if w.len() == 1 {
        BTreeMap::from([(Monomial(w.to_vec()), one())])
    } else {
        let (u, v) = standard_factorization(w);
        let pu = lyndon_bracket(u);
        let pv = lyndon_bracket(v);
        let trunc = w.len() + 1;
        let a = TruncatedTensor::from_terms(0, trunc, pu.iter().map(|(m, c)| (m.clone(), c.clone())));
        let b = TruncatedTensor::from_terms(0, trunc, pv.iter().map(|(m, c)| (m.clone(), c.clone())));
        a.commutator(&b).terms().clone()
    };
    let terms = Arc::new(terms);
    cache()
        .write()
        .expect("cache poisoned")
        .insert(w.to_vec(), terms.clone());
    terms
}

/// Element of the free Lie algebra in Lyndon coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieElement {
    rank: usize,
    coords: BTreeMap<Monomial, Q>,
}

impl LieElement {
    pub fn zero(rank: usize) -> Self {
        LieElement {
            rank,
            coords: BTreeMap::new(),
        }
    }

    /// The basis element `P_w`; panics if `w` is not Lyndon.
    pub fn basis(rank: usize, w: &[u8]) -> Self {
        assert!(is_lyndon(w), "{w:?} is not a Lyndon word");
        let mut e = Self::zero(rank);
        e.add_coord(Monomial(w.to_vec()), one());
        e
    }

    pub fn generator(rank: usize, i: usize) -> Self {
        Self::basis(rank, &[i as u8])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coords(&self) -> &BTreeMap<Monomial, Q> {
        &self.coords
    }

    pub fn coord(&self, w: &[u8]) -> Q {
        self.coords
            .get(&Monomial(w.to_vec()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_coord(&mut self, w: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coords.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.coords {
            self.add_coord(w.clone(), x * c);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(other, &one());
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(other, &-one());
        out
    }

    pub fn scale(&self, c: &Q) -> LieElement {
        let mut out = Self::zero(self.rank);
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&-one())
    }

    /// Part of degree in `lo..hi`.
    pub fn degree_range(&self, lo: usize, hi: usize) -> LieElement {
        LieElement {
            rank: self.rank,
            coords: self
                .coords
                .iter()
                .filter(|(w, _)| w.degree() >= lo && w.degree() < hi)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous(&self, d: usize) -> LieElement {
        self.degree_range(d, d + 1)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.coords.keys().next().map(Monomial::degree)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.coords.keys().next_back().map(Monomial::degree)
    }

    /// Expansion in the tensor algebra modulo degree `trunc`.
    pub fn to_tensor(&self, trunc: usize) -> TruncatedTensor {
        let mut out = TruncatedTensor::zero(self.rank, trunc);
        for (w, c) in &self.coords {
            if w.degree() >= trunc {
                continue;
            }
            for (m, x) in lyndon_bracket(&w.0).iter() {
                out.add_term(m.clone(), x * c);
            }
        }
        out
    }
}

/// Lyndon coordinates of a primitive tensor with zero constant term.
///
/// Repeatedly removes the least monomial, which must be a Lyndon word, by
/// subtracting the matching multiple of its standard bracketing.
pub fn lie_coordinates(a: &TruncatedTensor) -> Result<LieElement> {
    let mut rest = a.clone();
    let mut out = LieElement::zero(a.rank());
    while let Some((m, c)) = rest.terms().iter().next().map(|(m, c)| (m.clone(), c.clone())) {
        if !is_lyndon(&m.0) {
            return Err(Error::NotPrimitive { degree: m.degree() });
        }
        for (v, x) in lyndon_bracket(&m.0).iter() {
            rest.add_term(v.clone(), -(x * &c));
        }
        out.add_coord(m, c);
    }
    Ok(out)
}

/// `[a, b]` in Lyndon coordinates, dropping degrees `>= trunc`.
pub fn lie_bracket(a: &LieElement, b: &LieElement, trunc: usize) -> Result<LieElement> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch {
            left: a.rank,
            right: b.rank,
        });
    }
    let ta = a.to_tensor(trunc);
    let tb = b.to_tensor(trunc);
    lie_coordinates(&ta.commutator(&tb))
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let lines: Vec<String> = self
            .coords
            .iter()
            .map(|(w, c)| format!("{} : {}", bracket_string(&w.0), fmt_q(c)))
            .collect();
        write!(f, "{}", lines.join("\n"))
    }
}

/// `[x1,[x1,x2]]` for the Lyndon word `112`.
pub fn bracket_string(w: &[u8]) -> String {
    if w.len() == 1 {
        return format!("x{}", w[0]);
    }
    let (u, v) = standard_factorization(w);
    format!("[{},{}]", bracket_string(u), bracket_string(v))
}

/// Lyndon word as a digit string, `"112"`.
pub fn word_key(w: &[u8]) -> String {
    w.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(if w.iter().any(|&i| i > 9) { "." } else { "" })
}

impl Serialize for LieElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.coords.len()))?;
        for (w, c) in &self.coords {
            m.serialize_entry(&word_key(&w.0), &fmt_q(c))?;
        }
        m.end()
    }
}

/// Witt ranks `N_1, ..., N_{h_max}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WittTable {
    pub q: usize,
    pub ranks: Vec<usize>,
}

impl WittTable {
    /// `N_h`, zero outside the computed range start.
    pub fn n(&self, h: usize) -> usize {
        if h == 0 {
            0
        } else {
            self.ranks[h - 1]
        }
    }
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut res = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Witt number by the necklace formula `(1/h) Σ_{d|h} μ(d) q^{h/d}`.
pub fn witt_mobius(q: usize, h: usize) -> usize {
    if h == 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for d in 1..=h {
        if h % d == 0 {
            total += mobius(d) as i128 * (q as i128).pow((h / d) as u32);
        }
    }
    (total / h as i128) as usize
}

/// Witt ranks computed by Lyndon enumeration and checked against the necklace formula.
pub fn witt_ranks(q: usize, h_max: usize) -> Result<WittTable> {
    if q == 0 {
        return Err(Error::InvalidInput("q must be at least 1".into()));
    }
    let mut ranks = Vec::with_capacity(h_max);
    for h in 1..=h_max {
        let by_count = lyndon_words(q, h).len();
        if by_count != witt_mobius(q, h) {
            return Err(Error::Consistency(format!(
                "Lyndon count {by_count} differs from necklace formula at h={h}"
            )));
        }
        ranks.push(by_count);
    }
    Ok(WittTable { q, ranks })
}

/// Whether every coefficient is an integer.
pub fn is_integral(e: &LieElement) -> bool {
    e.coords.values().all(|c| c.is_integer())
}
