//! Exterior algebra of `𝔏/𝔏_{≥k}` with the Chevalley–Eilenberg boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::magnus::{bracket_string, lie_bracket, lyndon_basis, witt_ranks, LieElement, Monomial};
use crate::rational::{fmt_q, Q};

/// Wedge of distinct Lyndon basis words, stored in increasing order.
pub type Wedge = Vec<Monomial>;

/// A homogeneous chain in `Λ^n(𝔏/𝔏_{≥k})` over `q` generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulChain {
    pub q: usize,
    pub k: usize,
    pub n: usize,
    terms: BTreeMap<Wedge, Q>,
}

/// Sorts `w` in place, returning the permutation sign, or `None` on a repeat.
fn sort_wedge(w: &mut [Monomial]) -> Option<bool> {
    let mut neg = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
        if j > 0 && w[j - 1] == w[j] {
            return None;
        }
    }
    Some(neg)
}

impl KoszulChain {
    pub fn zero(q: usize, k: usize, n: usize) -> Self {
        KoszulChain {
            q,
            k,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<Wedge, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · w_1 ∧ ⋯ ∧ w_n`; factors of degree `≥ k` vanish.
    pub fn add_wedge(&mut self, w: &[Monomial], c: &Q) {
        assert_eq!(w.len(), self.n, "wedge length");
        if c.is_zero() || w.iter().any(|m| m.degree() >= self.k) {
            return;
        }
        let mut w = w.to_vec();
        let Some(neg) = sort_wedge(&mut w) else {
            return;
        };
        let c = if neg { -c.clone() } else { c.clone() };
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    /// Multilinear expansion of `a_1 ∧ ⋯ ∧ a_n`.
    pub fn wedge(q: usize, k: usize, factors: &[LieElement]) -> KoszulChain {
        let mut out = KoszulChain::zero(q, k, factors.len());
        let mut acc: Vec<(Vec<Monomial>, Q)> = vec![(Vec::new(), Q::one())];
        for f in factors {
            let mut next = Vec::new();
            for (w, c) in &acc {
                for (m, x) in f.coords() {
                    if m.degree() >= k {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(m.clone());
                    next.push((w2, c * x));
                }
            }
            acc = next;
        }
        for (w, c) in acc {
            out.add_wedge(&w, &c);
        }
        out
    }

    pub fn add_scaled(&mut self, other: &KoszulChain, c: &Q) {
        for (w, x) in &other.terms {
            self.add_wedge(w, &(x * c));
        }
    }

    pub fn add(&self, other: &KoszulChain) -> KoszulChain {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &KoszulChain) -> KoszulChain {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> KoszulChain {
        let mut out = KoszulChain::zero(self.q, self.k, self.n);
        out.add_scaled(self, c);
        out
    }

    /// The same chain in a smaller truncation, dropping factors of degree `≥ k`.
    pub fn reduce(&self, k: usize) -> KoszulChain {
        let mut out = KoszulChain::zero(self.q, k, self.n);
        for (w, c) in &self.terms {
            out.add_wedge(w, c);
        }
        out
    }

    /// Split by multidegree (occurrences of each generator).
    fn blocks(&self) -> BTreeMap<Vec<usize>, KoszulChain> {
        let mut out: BTreeMap<Vec<usize>, KoszulChain> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(multidegree(self.q, w))
                .or_insert_with(|| KoszulChain::zero(self.q, self.k, self.n))
                .add_wedge(w, c);
        }
        out
    }
}

impl fmt::Display for KoszulChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let factors: Vec<String> = w.iter().map(|m| bracket_string(&m.0)).collect();
                format!("{} {}", fmt_q(c), factors.join("∧"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for KoszulChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            let key: Vec<String> = w.iter().map(|m| crate::magnus::word_key(&m.0)).collect();
            m.serialize_entry(&key.join("^"), &fmt_q(c))?;
        }
        m.end()
    }
}

fn multidegree(q: usize, w: &[Monomial]) -> Vec<usize> {
    let mut d = vec![0; q];
    for m in w {
        for &i in &m.0 {
            d[i as usize - 1] += 1;
        }
    }
    d
}

type BracketTable = RwLock<HashMap<(usize, usize, Monomial, Monomial), Arc<LieElement>>>;

fn basis_bracket(q: usize, k: usize, a: &Monomial, b: &Monomial) -> Result<Arc<LieElement>> {
    static CACHE: OnceLock<BracketTable> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (q, k, a.clone(), b.clone());
    if let Some(v) = cache.read().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(lie_bracket(
        &LieElement::basis(q, &a.0),
        &LieElement::basis(q, &b.0),
        k,
    )?);
    cache.write().expect("cache poisoned").insert(key, v.clone());
    Ok(v)
}

/// `∂(h_1 ∧ ⋯ ∧ h_n) = Σ_{i<j} (-1)^{i+j} [h_i, h_j] ∧ h_1 ∧ ⋯ ĥ_i ⋯ ĥ_j ⋯ ∧ h_n`.
pub fn koszul_boundary(c: &KoszulChain) -> Result<KoszulChain> {
    if c.n == 0 {
        return Err(Error::InvalidInput("the boundary of a 0-chain is undefined".into()));
    }
    let mut out = KoszulChain::zero(c.q, c.k, c.n - 1);
    for (w, x) in &c.terms {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let br = basis_bracket(c.q, c.k, &w[i], &w[j])?;
                if br.is_zero() {
                    continue;
                }
                // 0-based positions give the same parity as 1-based ones.
                let sign = if (i + j) % 2 == 0 { x.clone() } else { -x.clone() };
                let rest: Vec<Monomial> = w
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != i && p != j)
                    .map(|(_, m)| m.clone())
                    .collect();
                for (m, y) in br.coords() {
                    let mut wedge = Vec::with_capacity(c.n - 1);
                    wedge.push(m.clone());
                    wedge.extend(rest.iter().cloned());
                    out.add_wedge(&wedge, &(&sign * y));
                }
            }
        }
    }
    Ok(out)
}

/// All wedges of `n` distinct basis words of `𝔏/𝔏_{≥k}` with the given multidegree.
fn wedges_with(q: usize, k: usize, n: usize, md: &[usize]) -> Vec<Wedge> {
    let basis: Vec<Monomial> = lyndon_basis(q, 1, k)
        .into_iter()
        .map(Monomial)
        .filter(|m| multidegree(q, std::slice::from_ref(m)).iter().zip(md).all(|(a, b)| a <= b))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        basis: &[Monomial],
        start: usize,
        n: usize,
        q: usize,
        md: &[usize],
        cur: &mut Vec<Monomial>,
        out: &mut Vec<Wedge>,
    ) {
        let d = multidegree(q, cur);
        if d.iter().zip(md).any(|(a, b)| a > b) {
            return;
        }
        if cur.len() == n {
            if d == md {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..basis.len() {
            cur.push(basis[i].clone());
            rec(basis, i + 1, n, q, md, cur, out);
            cur.pop();
        }
    }
    rec(&basis, 0, n, q, md, &mut cur, &mut out);
    out
}

/// Matrix of `∂_n` from the `n`-wedges to the `(n-1)`-wedges of one multidegree.
fn boundary_matrix(q: usize, k: usize, cols: &[Wedge], rows: &[Wedge]) -> Result<QMatrix> {
    let row_of: HashMap<&Wedge, usize> = rows.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let n = cols.first().map(Vec::len).unwrap_or(1);
    let mut m = QMatrix::zeros(rows.len(), cols.len());
    for (j, w) in cols.iter().enumerate() {
        let mut c = KoszulChain::zero(q, k, n);
        c.add_wedge(w, &Q::one());
        for (v, x) in koszul_boundary(&c)?.terms {
            let i = *row_of
                .get(&v)
                .ok_or_else(|| Error::Consistency("boundary left its multidegree".into()))?;
            m.data[i][j] = x;
        }
    }
    Ok(m)
}

/// Cycles modulo boundaries in one multidegree.
#[derive(Debug, Clone)]
pub struct H3Block {
    pub multidegree: Vec<usize>,
    pub weight: usize,
    /// The 3-wedges of this multidegree; coordinates of chains refer to them.
    pub wedges: Vec<Wedge>,
    /// An independent set of boundaries followed by the chosen cycle representatives.
    presentation: QMatrix,
    boundaries: usize,
    pub representatives: Vec<KoszulChain>,
}

/// Homology basis of `Λ^3(𝔏/𝔏_{≥k})`.
#[derive(Debug, Clone)]
pub struct H3Basis {
    pub q: usize,
    pub k: usize,
    pub basis_id: String,
    pub blocks: Vec<H3Block>,
}

impl H3Basis {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.representatives.len()).sum()
    }

    /// Dimension contributed by multidegrees of total weight `w`.
    pub fn dim_in_weight(&self, w: usize) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.weight == w)
            .map(|b| b.representatives.len())
            .sum()
    }

    pub fn representatives(&self) -> Vec<KoszulChain> {
        self.blocks.iter().flat_map(|b| b.representatives.iter().cloned()).collect()
    }

    /// Homology coordinates of a 3-cycle.
    pub fn coordinates(&self, c: &KoszulChain) -> Result<Vec<Q>> {
        if c.n != 3 || c.q != self.q || c.k != self.k {
            return Err(Error::InvalidInput(format!(
                "expected a 3-chain over q={}, k={}",
                self.q, self.k
            )));
        }
        if !koszul_boundary(c)?.is_zero() {
            return Err(Error::InvalidInput("chain is not a cycle".into()));
        }
        let parts = c.blocks();
        let mut out = Vec::with_capacity(self.dim());
        // Multidegrees without a block have no homology, so only blocks matter.
        for b in &self.blocks {
            let Some(part) = parts.get(&b.multidegree) else {
                out.extend(std::iter::repeat_with(Q::zero).take(b.representatives.len()));
                continue;
            };
            let rhs: Vec<Q> = b
                .wedges
                .iter()
                .map(|w| part.terms.get(w).cloned().unwrap_or_else(Q::zero))
                .collect();
            let x = b
                .presentation
                .solve(&rhs)
                .ok_or_else(|| Error::Consistency("cycle outside the homology presentation".into()))?;
            out.extend(x[b.boundaries..].iter().cloned());
        }
        Ok(out)
    }
}

fn build_block(q: usize, k: usize, md: &[usize]) -> Result<H3Block> {
    let c3 = wedges_with(q, k, 3, md);
    let c2 = wedges_with(q, k, 2, md);
    let c4 = wedges_with(q, k, 4, md);
    let d3 = boundary_matrix(q, k, &c3, &c2)?;
    let cycles = d3.nullspace();
    let mut cols: Vec<Vec<Q>> = Vec::new();
    if !c4.is_empty() {
        let d4 = boundary_matrix(q, k, &c4, &c3)?;
        for p in d4.echelon().pivots {
            cols.push(d4.column(p));
        }
    }
    let boundaries = cols.len();
    let mut candidate = cols.clone();
    candidate.extend(cycles.iter().cloned());
    let pivots = QMatrix::from_columns(c3.len(), &candidate).echelon().pivots;
    if !pivots.iter().copied().take(boundaries).eq(0..boundaries) {
        return Err(Error::Consistency("boundary columns are dependent".into()));
    }
    let mut representatives = Vec::new();
    for &p in &pivots[boundaries..] {
        let v = &candidate[p];
        cols.push(v.clone());
        let mut ch = KoszulChain::zero(q, k, 3);
        for (w, x) in c3.iter().zip(v) {
            ch.add_wedge(w, x);
        }
        representatives.push(ch);
    }
    Ok(H3Block {
        multidegree: md.to_vec(),
        weight: md.iter().sum(),
        presentation: QMatrix::from_columns(c3.len(), &cols),
        boundaries,
        wedges: c3,
        representatives,
    })
}

fn h3_cache() -> &'static RwLock<HashMap<(usize, usize), Arc<H3Basis>>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Arc<H3Basis>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Σ_{h=k}^{2k-2} (q N_h - N_{h+1})`.
pub fn h3_dimension(q: usize, k: usize) -> Result<usize> {
    let w = witt_ranks(q, 2 * k)?;
    Ok((k..2 * k - 1).map(|h| q * w.n(h) - w.n(h + 1)).sum())
}

/// Homology basis of `H_3(𝔏/𝔏_{≥k})`, ordered by (weight, multidegree), memoized.
pub fn h3_basis(q: usize, k: usize) -> Result<Arc<H3Basis>> {
    if q == 0 || k < 2 {
        return Err(Error::InvalidInput(format!("need q >= 1 and k >= 2, got q={q}, k={k}")));
    }
    if let Some(b) = h3_cache().read().expect("cache poisoned").get(&(q, k)) {
        return Ok(b.clone());
    }
    let basis: Vec<Monomial> = lyndon_basis(q, 1, k).into_iter().map(Monomial).collect();
    let mut mds = BTreeSet::new();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            for c in b + 1..basis.len() {
                let md = multidegree(q, &[basis[a].clone(), basis[b].clone(), basis[c].clone()]);
                mds.insert((md.iter().sum::<usize>(), md));
            }
        }
    }
    let mut blocks = Vec::new();
    for (_, md) in mds {
        let b = build_block(q, k, &md)?;
        if !b.representatives.is_empty() {
            blocks.push(b);
        }
    }
    let h = H3Basis {
        q,
        k,
        basis_id: format!("h3-q{q}k{k}-lex"),
        blocks,
    };
    let w = witt_ranks(q, 2 * k)?;
    for weight in 3..=3 * (k - 1) {
        let expected = if weight > k && weight < 2 * k {
            q * w.n(weight - 1) - w.n(weight)
        } else {
            0
        };
        if h.dim_in_weight(weight) != expected {
            return Err(Error::Consistency(format!(
                "H3 in weight {weight} has dimension {}, expected {expected}",
                h.dim_in_weight(weight)
            )));
        }
    }
    let h = Arc::new(h);
    h3_cache().write().expect("cache poisoned").insert((q, k), h.clone());
    Ok(h)
}

/// Solves `∂_3 t = s` blockwise, scanning pivot columns forwards or backwards.
pub(crate) fn solve_boundary(s: &KoszulChain, reverse: bool) -> Result<Option<KoszulChain>> {
    let mut t = KoszulChain::zero(s.q, s.k, 3);
    for (md, part) in s.blocks() {
        let c3 = wedges_with(s.q, s.k, 3, &md);
        let c2: Vec<Wedge> = wedges_with(s.q, s.k, 2, &md);
        let d3 = boundary_matrix(s.q, s.k, &c3, &c2)?;
        let rhs: Vec<Q> = c2
            .iter()
            .map(|w| part.terms.get(w).cloned().unwrap_or_else(Q::zero))
            .collect();
        let mut order: Vec<usize> = (0..c3.len()).collect();
        if reverse {
            order.reverse();
        }
        let Some(x) = d3.solve_with(&rhs, &order) else {
            return Ok(None);
        };
        for (w, c) in c3.iter().zip(&x) {
            t.add_wedge(w, c);
        }
    }
    Ok(Some(t))
}
