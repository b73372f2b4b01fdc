//! Magnus expansions, the free Lie algebra and Milnor invariants.

mod dense;
mod lie;
mod tensor;

pub use lie::{
    bracket_string, is_integral, is_lyndon, lie_bracket, lie_coordinates, lyndon_basis,
    lyndon_bracket, lyndon_words, standard_factorization, witt_mobius, witt_ranks, word_key,
    LieElement, WittTable,
};
pub use tensor::{Monomial, TensorSquare, TruncatedTensor};

use crate::error::{Error, Result};
use crate::rational::{frac, Q};
use crate::words::Word;

fn check_trunc(m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidInput("truncation must be at least 1".into()));
    }
    Ok(())
}

fn expand_with(w: &Word, m: usize, factor: impl Fn(usize, i8) -> TruncatedTensor) -> TruncatedTensor {
    let q = w.rank();
    let mut out = TruncatedTensor::one(q, m);
    for l in w.letters() {
        out = out.mul(&factor(l.index, l.exp));
    }
    out
}

fn sparse_magnus(w: &Word, m: usize) -> TruncatedTensor {
    let q = w.rank();
    expand_with(w, m, |i, e| {
        let x = TruncatedTensor::var(q, m, i);
        let mut f = TruncatedTensor::one(q, m);
        if e > 0 {
            f.add_scaled(&x, &frac(1, 1));
        } else {
            let mut p = TruncatedTensor::one(q, m);
            for n in 1..m {
                p = p.mul(&x);
                f.add_scaled(&p, &frac(if n % 2 == 1 { -1 } else { 1 }, 1));
            }
        }
        f
    })
}

fn sparse_exp(w: &Word, m: usize) -> TruncatedTensor {
    let q = w.rank();
    expand_with(w, m, |i, e| {
        TruncatedTensor::var(q, m, i)
            .scale(&frac(e as i64, 1))
            .exp()
    })
}

/// `M_m(w)`: the Magnus expansion sending `x_i` to `1 + X_i`.
pub fn magnus_expand(w: &Word, m: usize) -> Result<TruncatedTensor> {
    check_trunc(m)?;
    Ok(dense::expand(w, m, dense::Kind::Magnus).unwrap_or_else(|| sparse_magnus(w, m)))
}

/// The group-like expansion sending `x_i` to `exp(X_i)`.
pub fn exp_expand(w: &Word, m: usize) -> Result<TruncatedTensor> {
    check_trunc(m)?;
    Ok(dense::expand(w, m, dense::Kind::Exp).unwrap_or_else(|| sparse_exp(w, m)))
}

/// `log M_m(w)`.
pub fn log_magnus(w: &Word, m: usize) -> Result<TruncatedTensor> {
    Ok(magnus_expand(w, m)?.log())
}

/// `log` of the group-like expansion; always primitive.
pub fn log_exp_expand(w: &Word, m: usize) -> Result<TruncatedTensor> {
    Ok(exp_expand(w, m)?.log())
}

/// Coefficient of `X_{i_1} ⋯ X_{i_{m-1}}` in `M_m(λ_{i_m})`.
pub fn mu_invariant(longs: &[Word], index: &[usize]) -> Result<Q> {
    let q = longs.len();
    if index.len() < 2 {
        return Err(Error::InvalidInput("a Milnor index needs at least two entries".into()));
    }
    for &i in index {
        if i == 0 || i > q {
            return Err(Error::IndexOutOfRange { index: i, rank: q });
        }
    }
    let m = index.len();
    let last = index[m - 1];
    let mono = Monomial(index[..m - 1].iter().map(|&i| i as u8).collect());
    Ok(magnus_expand(&longs[last - 1], m)?.coeff(&mono))
}

/// Lower central series degree as seen through `M_{m_cap}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LcsDegree {
    Exact(usize),
    AtLeast(usize),
}

impl LcsDegree {
    /// Whether the word lies in `F_k`.
    pub fn at_least(self, k: usize) -> bool {
        match self {
            LcsDegree::Exact(d) => d >= k,
            LcsDegree::AtLeast(d) => d >= k,
        }
    }

    pub fn value(self) -> usize {
        match self {
            LcsDegree::Exact(d) | LcsDegree::AtLeast(d) => d,
        }
    }
}

/// Largest `k` such that `M(w) - 1` has no term of degree below `k`.
pub fn lcs_degree(w: &Word, m_cap: usize) -> LcsDegree {
    let m_cap = m_cap.max(1);
    let mut t = magnus_expand(w, m_cap).expect("truncation checked");
    t.add_term(Monomial::empty(), -Q::from_integer(1.into()));
    match t.min_degree() {
        Some(d) => LcsDegree::Exact(d),
        None => LcsDegree::AtLeast(m_cap),
    }
}

/// Lyndon coordinates of `log` of the group-like expansion of `w`.
pub fn lie_log(w: &Word, m: usize) -> Result<LieElement> {
    lie_coordinates(&log_exp_expand(w, m)?)
}

/// `Σ_{n≥0} (ad X_j)^n a / (n+1)!` modulo degree `m`.
pub fn ad_exp_quotient(a: &TruncatedTensor, j: usize, m: usize) -> TruncatedTensor {
    let x = TruncatedTensor::var(a.rank(), m, j);
    let mut out = TruncatedTensor::zero(a.rank(), m);
    let mut term = a.truncate(m);
    let mut n = 1i64;
    while !term.is_zero() {
        out.add_scaled(&term, &frac(1, 1));
        n += 1;
        term = x.commutator(&term).scale(&frac(1, n));
    }
    out
}

/// Whether `a` and `b` agree in every degree below `m`.
pub fn agree_below(a: &TruncatedTensor, b: &TruncatedTensor, m: usize) -> bool {
    a.truncate(m) == b.truncate(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::words::commutator;

    fn w(rank: usize, s: &[i32]) -> Word {
        Word::from_signed(rank, s).unwrap()
    }

    #[test]
    fn dense_matches_sparse() {
        let words = [
            w(3, &[1, 2, -1, -2, 3, 3, -1, 2, 2, -3]),
            w(2, &[-1, -1, -1, 2, 1, -2, -2]),
            w(3, &[3, -2, 1, 1, 1, -3, 2]),
        ];
        for x in &words {
            for m in 1..6 {
                assert_eq!(dense::expand(x, m, dense::Kind::Magnus).unwrap(), sparse_magnus(x, m));
                assert_eq!(dense::expand(x, m, dense::Kind::Exp).unwrap(), sparse_exp(x, m));
            }
        }
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(magnus_expand(&Word::identity(2), 4).unwrap(), TruncatedTensor::one(2, 4));
        assert_eq!(magnus_expand(&w(2, &[1]), 3).unwrap().to_string(), "1 + X1 + O(3)");
        let c = commutator(&w(2, &[1]), &w(2, &[2])).unwrap();
        assert_eq!(magnus_expand(&c, 3).unwrap().to_string(), "1 + X1*X2 - X2*X1 + O(3)");
        assert!(magnus_expand(&c, 0).is_err());
    }

    #[test]
    fn log_examples() {
        assert!(log_magnus(&Word::identity(2), 4).unwrap().is_zero());
        let l = log_magnus(&w(1, &[1]), 4).unwrap();
        assert_eq!(l.to_string(), "X1 - 1/2*X1*X1 + 1/3*X1*X1*X1 + O(4)");
        let c = commutator(&w(2, &[1]), &w(2, &[2])).unwrap();
        assert_eq!(log_magnus(&c, 3).unwrap().to_string(), "X1*X2 - X2*X1 + O(3)");
    }

    #[test]
    fn lie_coordinates_of_triple_commutator() {
        let x1 = w(2, &[1]);
        let x2 = w(2, &[2]);
        let c = commutator(&commutator(&x1, &x2).unwrap(), &x2).unwrap();
        let l = log_magnus(&c, 4).unwrap().homogeneous(3);
        let e = lie_coordinates(&l).unwrap();
        assert_eq!(e, LieElement::basis(2, &[1, 2, 2]));
    }

    #[test]
    fn lcs_examples() {
        let x1 = w(3, &[1]);
        let x2 = w(3, &[2]);
        let x3 = w(3, &[3]);
        assert_eq!(lcs_degree(&x1, 5), LcsDegree::Exact(1));
        let c = commutator(&x1, &x2).unwrap();
        assert_eq!(lcs_degree(&c, 5), LcsDegree::Exact(2));
        let cc = commutator(&c, &x3).unwrap();
        assert_eq!(lcs_degree(&cc, 5), LcsDegree::Exact(3));
        assert_eq!(lcs_degree(&Word::identity(3), 5), LcsDegree::AtLeast(5));
    }

    #[test]
    fn mu_of_trivial_longitudes() {
        let longs = vec![Word::identity(3); 3];
        assert_eq!(mu_invariant(&longs, &[1, 2, 3]).unwrap(), q(0));
        assert!(mu_invariant(&longs, &[1, 4]).is_err());
    }

    #[test]
    fn group_like_log_is_primitive() {
        let x = w(3, &[1, 2, -1, 3, 3, -2, 1]);
        assert!(log_exp_expand(&x, 5).unwrap().is_primitive());
    }
}
