use rayon::prelude::*;
use serde::Serialize;

use super::laurent::{log_deriv, LaurentPoly1, LaurentPoly2};
use super::pd::{braid_closure, cable_braid, fused_closure, PdDiagram};
use super::skein::{Heuristic, SkeinEngine, DEFAULT_CACHE_LIMIT};
use crate::error::{Error, Result};
use crate::magnus::lcs_degree;
use crate::rational::{factorial, Q};
use crate::words::{longitudes, BraidWord};

/// Cabling data of an index `I = i_1 ⋯ i_m` over strands `1..=q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CablePattern {
    pub index: Vec<usize>,
    /// `r_i`: how often strand `i` occurs in the index.
    pub multiplicities: Vec<usize>,
    /// `D(I)`: the `c`-th occurrence of `i` replaced by the cable copy `(i, c)`,
    /// given as its 0-based position among all copies in lexicographic order.
    pub sequence: Vec<usize>,
}

impl CablePattern {
    pub fn new(q: usize, index: &[usize]) -> Result<Self> {
        if index.is_empty() {
            return Err(Error::InvalidInput("empty index".into()));
        }
        let mut r = vec![0usize; q];
        for &i in index {
            if i == 0 || i > q {
                return Err(Error::IndexOutOfRange { index: i, rank: q });
            }
            r[i - 1] += 1;
        }
        let mut seen = vec![0usize; q];
        let sequence = index
            .iter()
            .map(|&i| {
                let base: usize = r[..i - 1].iter().sum();
                seen[i - 1] += 1;
                base + seen[i - 1] - 1
            })
            .collect();
        Ok(CablePattern {
            index: index.to_vec(),
            multiplicities: r,
            sequence,
        })
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Every nonempty subsequence of `D(I)`, by bitmask order.
    pub fn subsequences(&self) -> Vec<Vec<usize>> {
        let m = self.sequence.len();
        (1u32..(1 << m))
            .map(|mask| {
                (0..m)
                    .filter(|&k| mask & (1 << k) != 0)
                    .map(|k| self.sequence[k])
                    .collect()
            })
            .collect()
    }
}

/// Closure of the cabled braid.
pub fn cable(b: &BraidWord, pattern: &CablePattern) -> Result<PdDiagram> {
    Ok(braid_closure(&cable_braid(b, &pattern.multiplicities)?))
}

/// Knot `L_J` fusing the cable components listed in `j`.
pub fn fuse_closure(b: &BraidWord, pattern: &CablePattern, j: &[usize]) -> Result<PdDiagram> {
    if j.is_empty() {
        return Err(Error::InvalidInput("empty fusion sequence".into()));
    }
    let cabled = cable_braid(b, &pattern.multiplicities)?;
    fused_closure(&cabled, j)
}

/// `P_0` of a knot polynomial, in the normalization where it satisfies `P_0(1) = 1`.
pub fn p0(p: &LaurentPoly2) -> Result<LaurentPoly1> {
    if let Some(z) = p.min_z() {
        if z < 0 {
            return Err(Error::Precondition(format!(
                "z^{z} occurs, so the polynomial is not that of a knot"
            )));
        }
    }
    let p = p.to_conway_normalization()?;
    let c = p.z_coefficient(0);
    if c.at_one() != 1.into() {
        return Err(Error::Precondition(format!("P0(1) = {} instead of 1", c.at_one())));
    }
    Ok(c)
}

/// One term of the fusion sum.
#[derive(Debug, Clone, Serialize)]
pub struct FusionTerm {
    pub subsequence: Vec<usize>,
    pub crossings: usize,
    pub p0: LaurentPoly1,
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub log_derivative: Q,
}

/// μ_I through the HOMFLYPT polynomials of the fused cables.
#[derive(Debug, Clone, Serialize)]
pub struct HomflyMu {
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub value: Q,
    pub degree: usize,
    pub terms: Vec<FusionTerm>,
}

/// Smallest lower central series degree among the longitudes, capped at `cap`.
pub fn longitude_degree(b: &BraidWord, cap: usize) -> Result<usize> {
    let longs = longitudes(b)?;
    Ok(longs
        .iter()
        .map(|l| lcs_degree(l, cap).value())
        .min()
        .unwrap_or(cap))
}

/// `μ_I = -1/(n! 2^n) Σ_J (-1)^(m-|J|) (log P_0(L_J))^(n)(1)` with `m = |I|`, `n = m - 1`,
/// for `3 ≤ m ≤ 2k + 2`.
///
/// The sum runs over every nonempty subsequence `J` of `D(I)`. It is exact when
/// the invariants of the proper subindices of `I` vanish; otherwise it depends on
/// the fusion disk up to multiples of those lower invariants.
pub fn mu_via_homflypt(b: &BraidWord, index: &[usize], heuristic: Heuristic) -> Result<HomflyMu> {
    mu_via_homflypt_with(b, index, heuristic, DEFAULT_CACHE_LIMIT)
}

/// [`mu_via_homflypt`] with an explicit memo size for each skein evaluation.
pub fn mu_via_homflypt_with(
    b: &BraidWord,
    index: &[usize],
    heuristic: Heuristic,
    cache_limit: usize,
) -> Result<HomflyMu> {
    if !b.is_pure() {
        return Err(Error::NotPure);
    }
    let pattern = CablePattern::new(b.strands(), index)?;
    let m = pattern.len();
    let k = longitude_degree(b, m)?;
    if m < 3 || m > 2 * k + 2 {
        return Err(Error::DegreeWindow { length: m, degree: k });
    }
    let cabled = cable_braid(b, &pattern.multiplicities)?;
    let terms: Vec<FusionTerm> = pattern
        .subsequences()
        .into_par_iter()
        .map(|j| {
            let d = fused_closure(&cabled, &j)?;
            let mut engine = SkeinEngine::new(heuristic, cache_limit);
            let p = p0(&engine.evaluate(&d))?;
            let log_derivative = log_deriv(&p, m - 1)?;
            Ok(FusionTerm {
                subsequence: j,
                crossings: d.len(),
                p0: p,
                log_derivative,
            })
        })
        .collect::<Result<_>>()?;
    let mut sum = Q::from_integer(0.into());
    for t in &terms {
        if (m - t.subsequence.len()) % 2 == 0 {
            sum += &t.log_derivative;
        } else {
            sum -= &t.log_derivative;
        }
    }
    let n = m - 1;
    let denom = Q::from_integer(factorial(n) * (num_bigint::BigInt::from(1) << n));
    Ok(HomflyMu {
        value: -sum / denom,
        degree: k,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn pattern_sequence() {
        let p = CablePattern::new(3, &[2, 1, 2, 3]).unwrap();
        assert_eq!(p.multiplicities, vec![1, 2, 1]);
        assert_eq!(p.sequence, vec![1, 0, 2, 3]);
        assert_eq!(p.subsequences().len(), 15);
        assert!(CablePattern::new(2, &[3]).is_err());
    }

    #[test]
    fn p0_examples() {
        assert_eq!(p0(&LaurentPoly2::one()).unwrap(), LaurentPoly1::from_terms(&[(0, 1)]));
        assert!(p0(&LaurentPoly2::delta()).is_err());
        let tre = braid_closure(&BraidWord::parse("s1 s1 s1", 2).unwrap());
        let p = p0(&crate::homflypt::homfly(&tre)).unwrap();
        assert_eq!(p.at_one(), 1.into());
    }

    #[test]
    fn trivial_braid_gives_zero() {
        let b = BraidWord::trivial(3);
        let r = mu_via_homflypt(&b, &[1, 2, 3], Heuristic::FirstFound).unwrap();
        assert_eq!(r.value, q(0));
    }
}
