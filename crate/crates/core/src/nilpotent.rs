//! Bracket maps `ℚ^q ⊗ 𝔏_{k..m-1} → 𝔏_{k+1..m}`, their kernels, Milnor
//! residues and Orr coordinates.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::magnus::{
    lcs_degree, lie_bracket, lie_log, lyndon_words, witt_ranks, LieElement, Monomial,
};
use crate::rational::{frac, Q};
use crate::words::Word;

/// An element `Σ_ℓ x_ℓ ⊗ a_ℓ` of `ℚ^q ⊗ 𝔏`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlotLie {
    parts: Vec<LieElement>,
}

impl SlotLie {
    pub fn zero(q: usize) -> Self {
        SlotLie {
            parts: vec![LieElement::zero(q); q],
        }
    }

    /// `x_slot ⊗ a` with `slot` 1-based.
    pub fn single(slot: usize, a: LieElement) -> Result<Self> {
        let q = a.rank();
        if slot == 0 || slot > q {
            return Err(Error::IndexOutOfRange { index: slot, rank: q });
        }
        let mut z = Self::zero(q);
        z.parts[slot - 1] = a;
        Ok(z)
    }

    pub fn from_parts(parts: Vec<LieElement>) -> Result<Self> {
        let q = parts.len();
        if let Some(p) = parts.iter().find(|p| p.rank() != q) {
            return Err(Error::RankMismatch {
                left: q,
                right: p.rank(),
            });
        }
        Ok(SlotLie { parts })
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    /// Component in slot `l`, 1-based.
    pub fn part(&self, l: usize) -> &LieElement {
        &self.parts[l - 1]
    }

    pub fn parts(&self) -> &[LieElement] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(LieElement::is_zero)
    }

    pub fn add(&self, other: &SlotLie) -> SlotLie {
        SlotLie {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &SlotLie) -> SlotLie {
        SlotLie {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> SlotLie {
        SlotLie {
            parts: self.parts.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &SlotLie, c: &Q) {
        for (a, b) in self.parts.iter_mut().zip(&other.parts) {
            a.add_scaled(b, c);
        }
    }

    pub fn homogeneous(&self, d: usize) -> SlotLie {
        SlotLie {
            parts: self.parts.iter().map(|a| a.homogeneous(d)).collect(),
        }
    }

    pub fn degree_range(&self, lo: usize, hi: usize) -> SlotLie {
        SlotLie {
            parts: self.parts.iter().map(|a| a.degree_range(lo, hi)).collect(),
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.parts.iter().filter_map(LieElement::min_degree).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.parts.iter().filter_map(LieElement::max_degree).max()
    }
}

impl std::fmt::Display for SlotLie {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut any = false;
        for (i, p) in self.parts.iter().enumerate() {
            for line in p.to_string().lines().filter(|_| !p.is_zero()) {
                writeln!(f, "x{} ⊗ {}", i + 1, line)?;
                any = true;
            }
        }
        if !any {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for SlotLie {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        for (i, p) in self.parts.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            m.serialize_entry(&(i + 1).to_string(), p)?;
        }
        m.end()
    }
}

/// `Σ_ℓ [X_ℓ, z_ℓ]` for `z` supported in degrees `k..m-1`.
pub fn bracket_map(z: &SlotLie, k: usize, m: usize) -> Result<LieElement> {
    if k == 0 || k >= m {
        return Err(Error::InvalidInput(format!("need 1 <= k < m, got k={k}, m={m}")));
    }
    if let (Some(lo), Some(hi)) = (z.min_degree(), z.max_degree()) {
        if lo < k || hi >= m {
            return Err(Error::InvalidInput(format!(
                "degrees {lo}..={hi} outside {k}..{m}"
            )));
        }
    }
    let q = z.rank();
    let mut out = LieElement::zero(q);
    for (i, p) in z.parts.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
        let x = LieElement::generator(q, i + 1);
        out = out.add(&lie_bracket(&x, p, m + 1)?);
    }
    Ok(out)
}

/// One coordinate of `ℚ^q ⊗ 𝔏`: degree, 1-based slot, Lyndon word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct KernelColumn {
    pub degree: usize,
    pub slot: usize,
    pub word: Vec<u8>,
}

/// Kernel of the bracket map on degrees `k..m-1`.
#[derive(Debug, Clone, Serialize)]
pub struct BracketKernel {
    pub q: usize,
    pub k: usize,
    pub m: usize,
    pub basis_id: String,
    /// Every coordinate of the domain, ordered by (degree, slot, word).
    pub columns: Vec<KernelColumn>,
    /// Basis vectors, each the unique kernel element that is 1 at its free column.
    pub basis: Vec<SlotLie>,
    /// Free column of each basis vector.
    pub free_columns: Vec<usize>,
    /// Rank of the bracket matrix.
    pub matrix_rank: usize,
}

impl BracketKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `z` in the basis; errors when `z` is not in the kernel.
    pub fn coordinates(&self, z: &SlotLie) -> Result<Vec<Q>> {
        if z.rank() != self.q {
            return Err(Error::RankMismatch {
                left: self.q,
                right: z.rank(),
            });
        }
        let coords: Vec<Q> = self
            .free_columns
            .iter()
            .map(|&c| {
                let col = &self.columns[c];
                z.part(col.slot).coord(&col.word)
            })
            .collect();
        let mut back = SlotLie::zero(self.q);
        for (b, c) in self.basis.iter().zip(&coords) {
            back.add_scaled(b, c);
        }
        if back != *z {
            return Err(Error::Consistency("element is not in the bracket kernel".into()));
        }
        Ok(coords)
    }
}

/// `Σ_{h=k}^{m-1} (q N_h - N_{h+1})`.
pub fn kernel_dimension(q: usize, k: usize, m: usize) -> Result<usize> {
    let w = witt_ranks(q, m.max(1))?;
    Ok((k..m).map(|h| q * w.n(h) - w.n(h + 1)).sum())
}

fn kernel_cache() -> &'static RwLock<HashMap<(usize, usize, usize), Arc<BracketKernel>>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize, usize), Arc<BracketKernel>>>> =
        OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Exact kernel basis of the bracket map, memoized per `(q, k, m)`.
pub fn kernel_basis(q: usize, k: usize, m: usize) -> Result<Arc<BracketKernel>> {
    if q == 0 || k == 0 || k >= m {
        return Err(Error::InvalidInput(format!(
            "need q >= 1 and 1 <= k < m, got q={q}, k={k}, m={m}"
        )));
    }
    if let Some(b) = kernel_cache().read().expect("cache poisoned").get(&(q, k, m)) {
        return Ok(b.clone());
    }
    let built = Arc::new(build_kernel(q, k, m)?);
    kernel_cache()
        .write()
        .expect("cache poisoned")
        .insert((q, k, m), built.clone());
    Ok(built)
}

fn build_kernel(q: usize, k: usize, m: usize) -> Result<BracketKernel> {
    let mut columns = Vec::new();
    let mut basis = Vec::new();
    let mut free_columns = Vec::new();
    let mut matrix_rank = 0;
    for h in k..m {
        let words = lyndon_words(q, h);
        let rows = lyndon_words(q, h + 1);
        let row_of: HashMap<&[u8], usize> =
            rows.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let offset = columns.len();
        let mut block = Vec::new();
        for slot in 1..=q {
            let x = LieElement::generator(q, slot);
            for w in &words {
                let img = lie_bracket(&x, &LieElement::basis(q, w), h + 2)?;
                let mut col = vec![Q::zero(); rows.len()];
                for (mono, c) in img.coords() {
                    col[row_of[mono.0.as_slice()]] = c.clone();
                }
                block.push(col);
                columns.push(KernelColumn {
                    degree: h,
                    slot,
                    word: w.clone(),
                });
            }
        }
        let mat = QMatrix::from_columns(rows.len(), &block);
        matrix_rank += mat.rank();
        for (free, v) in mat.nullspace_indexed() {
            let mut z = SlotLie::zero(q);
            for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let col = &columns[offset + i];
                z.parts[col.slot - 1].add_coord(Monomial(col.word.clone()), c.clone());
            }
            basis.push(z);
            free_columns.push(offset + free);
        }
    }
    let expected = kernel_dimension(q, k, m)?;
    if basis.len() != expected {
        return Err(Error::Consistency(format!(
            "kernel dimension {} differs from the Witt count {expected}",
            basis.len()
        )));
    }
    Ok(BracketKernel {
        q,
        k,
        m,
        basis_id: format!("q{q}k{k}m{m}-lex"),
        columns,
        basis,
        free_columns,
        matrix_rank,
    })
}

/// `Σ_j x_j ⊗ ℓ̃_j` in degrees `k..m-1`, where `ℓ_j = log θ(λ_j)` and
/// `ℓ̃_j = Σ_n (ad X_j)^n ℓ_j / (n+1)!`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorResidue {
    pub q: usize,
    pub k: usize,
    pub m: usize,
    pub element: SlotLie,
}

/// Milnor residue of a longitude tuple, for `k < m <= 2k`.
///
/// The relation `Π [x_j, λ_j] = 1` gives `Σ_j (e^{ad X_j} - 1) ℓ_j = 0` through
/// degree `2k`, which is `bracket_map` of this element.
pub fn milnor_residue(longs: &[Word], k: usize, m: usize) -> Result<MilnorResidue> {
    let q = longs.len();
    if q == 0 {
        return Err(Error::InvalidInput("no longitudes".into()));
    }
    if k == 0 || m <= k || m > 2 * k {
        return Err(Error::InvalidInput(format!("need 1 <= k < m <= 2k, got k={k}, m={m}")));
    }
    for (i, l) in longs.iter().enumerate() {
        if l.rank() != q {
            return Err(Error::RankMismatch {
                left: q,
                right: l.rank(),
            });
        }
        let d = lcs_degree(l, k);
        if !d.at_least(k) {
            return Err(Error::AssumptionViolated {
                index: i + 1,
                degree: d.value(),
                required: k,
            });
        }
    }
    let mut parts = Vec::with_capacity(q);
    for (i, l) in longs.iter().enumerate() {
        let ell = lie_log(l, m)?;
        parts.push(ad_exp_quotient_lie(&ell, i + 1, m)?);
    }
    let element = SlotLie::from_parts(parts)?.degree_range(k, m);
    let check = bracket_map(&element, k, m)?;
    if !check.is_zero() {
        return Err(Error::Consistency(format!(
            "bracket of the residue does not vanish: {check}"
        )));
    }
    Ok(MilnorResidue { q, k, m, element })
}

fn ad_exp_quotient_lie(a: &LieElement, j: usize, m: usize) -> Result<LieElement> {
    let x = LieElement::generator(a.rank(), j);
    let mut out = LieElement::zero(a.rank());
    let mut term = a.degree_range(0, m);
    let mut n = 1i64;
    while !term.is_zero() {
        out = out.add(&term);
        n += 1;
        term = lie_bracket(&x, &term, m)?.scale(&frac(1, n));
    }
    Ok(out)
}

/// Coordinates of the degree `k..2k-1` residue in `kernel_basis(q, k, 2k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrrCoordinates {
    pub k: usize,
    pub basis_id: String,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub coords: Vec<Q>,
}

pub fn orr_coordinates(longs: &[Word], k: usize) -> Result<OrrCoordinates> {
    let res = milnor_residue(longs, k, 2 * k)?;
    let kernel = kernel_basis(res.q, k, 2 * k)?;
    Ok(OrrCoordinates {
        k,
        basis_id: kernel.basis_id.clone(),
        coords: kernel.coordinates(&res.element)?,
    })
}

/// `(Σ_{h=k}^{2k-1} (q N_h - N_{h+1}), Σ_{h=k}^{2k-2} (q N_h - N_{h+1}))`.
pub fn orr_ranks(q: usize, k: usize) -> Result<(usize, usize)> {
    if q == 0 || k == 0 {
        return Err(Error::InvalidInput(format!("need q, k >= 1, got q={q}, k={k}")));
    }
    let w = witt_ranks(q, 2 * k)?;
    let term = |h: usize| q * w.n(h) - w.n(h + 1);
    Ok((
        (k..2 * k).map(term).sum(),
        (k..2 * k - 1).map(term).sum(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{longitudes, BraidWord};

    fn gen(q: usize, i: usize) -> LieElement {
        LieElement::generator(q, i)
    }

    #[test]
    fn bracket_examples() {
        let z = SlotLie::from_parts(vec![gen(2, 2), gen(2, 1)]).unwrap();
        assert!(bracket_map(&z, 1, 2).unwrap().is_zero());
        let z = SlotLie::single(1, gen(2, 2)).unwrap();
        assert_eq!(bracket_map(&z, 1, 2).unwrap(), LieElement::basis(2, &[1, 2]));
        assert!(bracket_map(&z, 2, 3).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(2, 1, 2).unwrap().dim(), 3);
        assert_eq!(kernel_basis(3, 2, 3).unwrap().dim(), 1);
        assert_eq!(kernel_basis(1, 2, 5).unwrap().dim(), 0);
        let kb = kernel_basis(3, 2, 4).unwrap();
        assert_eq!(kb.basis_id, "q3k2m4-lex");
        for z in &kb.basis {
            assert!(bracket_map(z, 2, 4).unwrap().is_zero());
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(orr_ranks(3, 2).unwrap(), (7, 1));
        assert_eq!(orr_ranks(2, 2).unwrap().1, 0);
        assert_eq!(orr_ranks(3, 1).unwrap().1, 0);
    }

    #[test]
    fn trivial_and_borromean() {
        let triv = longitudes(&BraidWord::trivial(3)).unwrap();
        assert!(milnor_residue(&triv, 2, 4).unwrap().element.is_zero());
        assert!(orr_coordinates(&triv, 2).unwrap().coords.iter().all(Zero::is_zero));

        let b = BraidWord::parse("s1 s2^-1 s1 s2^-1 s1 s2^-1", 3).unwrap();
        let longs = longitudes(&b).unwrap();
        let o = orr_coordinates(&longs, 2).unwrap();
        assert_eq!(o.coords.len(), 7);
        assert!(!o.coords[0].is_zero());
        assert!(milnor_residue(&longs, 3, 5).is_err());
    }
}
