//! Free group words, braid words and the Artin action.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnus::{magnus_expand, TruncatedTensor};

/// A generator `x_index` raised to `exp`, which is `1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub index: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(index: usize, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter { index, exp }
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            exp: -self.exp,
        }
    }
}

/// A freely reduced word in the free group on `x_1, ..., x_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Freely reduces `letters`, checking every index against `rank`.
pub fn free_reduce(letters: &[Letter], rank: usize) -> Result<Word> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if l.index == 0 || l.index > rank {
            return Err(Error::IndexOutOfRange {
                index: l.index,
                rank,
            });
        }
        if l.exp != 1 && l.exp != -1 {
            return Err(Error::InvalidInput(format!("exponent {} is not ±1", l.exp)));
        }
        push_reduced(&mut out, l);
    }
    Ok(Word { rank, letters: out })
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// The commutator `a b a^-1 b^-1`.
pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch {
            left: a.rank,
            right: b.rank,
        });
    }
    Ok(a.mul(b).mul(&a.inverse()).mul(&b.inverse()))
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        free_reduce(&[Letter::new(index, 1)], rank)
    }

    pub fn from_signed(rank: usize, letters: &[i32]) -> Result<Self> {
        let ls: Vec<Letter> = letters
            .iter()
            .map(|&a| Letter::new(a.unsigned_abs() as usize, if a > 0 { 1 } else { -1 }))
            .collect();
        free_reduce(&ls, rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same word viewed in a free group of larger rank.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        free_reduce(&self.letters, rank)
    }

    pub fn mul(&self, other: &Word) -> Word {
        assert_eq!(self.rank, other.rank, "rank mismatch in word product");
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Word {
            rank: self.rank,
            letters: out,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.index == index)
            .map(|l| l.exp as i64)
            .sum()
    }

    /// Replaces every generator `x_i` by `images[i - 1]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let rank = images.first().map_or(self.rank, |w| w.rank);
        let mut out = Vec::new();
        for l in &self.letters {
            let img = &images[l.index - 1];
            if l.exp > 0 {
                for &a in &img.letters {
                    push_reduced(&mut out, a);
                }
            } else {
                for a in img.letters.iter().rev() {
                    push_reduced(&mut out, a.inverse());
                }
            }
        }
        Word { rank, letters: out }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.exp > 0 {
                    format!("x{}", l.index)
                } else {
                    format!("x{}^-1", l.index)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

const MAX_POWER: u32 = 10_000;

/// Reads `p<index>` or `p<index>^<power>` as a run of unit letters.
fn parse_token(tok: &str, prefix: char) -> Result<Vec<(usize, i8)>> {
    let body = tok
        .strip_prefix(prefix)
        .ok_or_else(|| Error::Parse(format!("token {tok:?} must start with '{prefix}'")))?;
    let (num, power) = match body.split_once('^') {
        Some((n, p)) => (
            n,
            p.parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
        ),
        None => (body, 1),
    };
    let index = num
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad index in {tok:?}")))?;
    if power.unsigned_abs() > MAX_POWER {
        return Err(Error::Parse(format!("exponent in {tok:?} exceeds {MAX_POWER}")));
    }
    let unit = if power < 0 { -1 } else { 1 };
    Ok(vec![(index, unit); power.unsigned_abs() as usize])
}

impl Word {
    /// Parses `x1 x2^-1 ...`; `1` or the empty string is the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            for (index, exp) in parse_token(tok, 'x')? {
                letters.push(Letter::new(index, exp));
            }
        }
        free_reduce(&letters, rank)
    }
}

/// A braid word on `strands` strands; `(i, e)` stands for `σ_i^e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidInput("a braid needs at least one strand".into()));
        }
        for &(i, e) in &letters {
            if i == 0 || i >= strands {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: strands - 1,
                });
            }
            if e != 1 && e != -1 {
                return Err(Error::InvalidInput(format!("exponent {e} is not ±1")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn trivial(strands: usize) -> Self {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// Parses `s1^-1 s2 s3^2 ...`.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            letters.extend(parse_token(tok, 's')?);
        }
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Stacks `other` below `self`.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::RankMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    /// Cancels adjacent `σ_i σ_i^-1` pairs.
    pub fn reduced(&self) -> BraidWord {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.letters.len());
        for &(i, e) in &self.letters {
            if out.last() == Some(&(i, -e)) {
                out.pop();
            } else {
                out.push((i, e));
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    /// `perm[p]` is the top position of the strand that ends at bottom position `p` (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &(i, _) in &self.letters {
            at.swap(i - 1, i);
        }
        at
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(p, &s)| p == s)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, e)| {
                if e > 0 {
                    format!("s{i}")
                } else {
                    format!("s{i}^-1")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_token(s, 'x')?.as_slice() {
            [(index, exp)] => Ok(Letter::new(*index, *exp)),
            _ => Err(Error::Parse(format!("{s:?} is not a single letter"))),
        }
    }
}

fn generator_images(n: usize, i: usize, e: i8) -> Vec<Word> {
    let mut imgs: Vec<Word> = (1..=n)
        .map(|j| Word {
            rank: n,
            letters: vec![Letter::new(j, 1)],
        })
        .collect();
    let xi = Letter::new(i, 1);
    let xj = Letter::new(i + 1, 1);
    if e > 0 {
        imgs[i - 1].letters = vec![xi, xj, xi.inverse()];
        imgs[i].letters = vec![xi];
    } else {
        imgs[i - 1].letters = vec![xj];
        imgs[i].letters = vec![xj.inverse(), xi, xj];
    }
    imgs
}

/// Image of `w` under the automorphism induced by `b`.
///
/// `σ_i` sends `x_i` to `x_i x_{i+1} x_i^-1` and `x_{i+1}` to `x_i`; the
/// letters of `b` act in reading order, so the first letter acts first.
pub fn artin_apply(b: &BraidWord, w: &Word) -> Result<Word> {
    if w.rank != b.strands {
        return Err(Error::RankMismatch {
            left: b.strands,
            right: w.rank,
        });
    }
    let mut cur = w.clone();
    for &(i, e) in &b.letters {
        cur = cur.substitute(&generator_images(b.strands, i, e));
    }
    Ok(cur)
}

/// Images `φ(x_1), ..., φ(x_n)` of the generators under the Artin action.
pub fn artin_images(b: &BraidWord) -> Vec<Word> {
    let n = b.strands;
    // Composing substitutions in reverse lets each letter be applied once.
    let mut imgs: Vec<Word> = (1..=n)
        .map(|j| Word {
            rank: n,
            letters: vec![Letter::new(j, 1)],
        })
        .collect();
    for &(i, e) in b.letters.iter().rev() {
        let g = generator_images(n, i, e);
        imgs = g.iter().map(|gw| gw.substitute(&imgs)).collect();
    }
    imgs
}

/// The word `w_l` with `φ(x_l) = w_l x_l w_l^-1` for a pure braid.
pub fn conjugators(b: &BraidWord) -> Result<Vec<Word>> {
    if !b.is_pure() {
        return Err(Error::NotPure);
    }
    artin_images(b)
        .into_iter()
        .enumerate()
        .map(|(j, img)| split_conjugate(&img, j + 1))
        .collect()
}

fn split_conjugate(img: &Word, l: usize) -> Result<Word> {
    let n = img.letters.len();
    let bad = || Error::Consistency(format!("image of x{l} is not a conjugate of x{l}: {img}"));
    if n % 2 == 0 {
        return Err(bad());
    }
    let k = n / 2;
    if img.letters[k] != Letter::new(l, 1) {
        return Err(bad());
    }
    let w = Word {
        rank: img.rank,
        letters: img.letters[..k].to_vec(),
    };
    if w.inverse().letters != img.letters[k + 1..] {
        return Err(bad());
    }
    Ok(w)
}

/// Zero-framed longitudes `λ_1, ..., λ_q` of a pure braid.
///
/// With `φ(x_l) = w_l x_l w_l^-1` and `S_l = x_{l+1} ⋯ x_q`, the longitude is
/// `S_l φ(S_l)^-1 w_l x_l^-e` where `e` is the `x_l`-exponent sum of `w_l`.
/// This representative satisfies `[x_1,λ_1] ⋯ [x_q,λ_q] = 1` on the nose and
/// agrees with `w_l x_l^-e` modulo one degree above the Milnor degree.
pub fn longitudes(b: &BraidWord) -> Result<Vec<Word>> {
    if !b.is_pure() {
        return Err(Error::NotPure);
    }
    let n = b.strands;
    let imgs = artin_images(b);
    let mut out = Vec::with_capacity(n);
    // suffix[l] = S_l and its image, built from the right.
    let mut s = Word::identity(n);
    let mut phi_s = Word::identity(n);
    let mut rev = Vec::with_capacity(n);
    for l in (1..=n).rev() {
        let w = split_conjugate(&imgs[l - 1], l)?;
        let e = w.exponent_sum(l);
        let xl = Word {
            rank: n,
            letters: vec![Letter::new(l, 1)],
        };
        let lam = s.mul(&phi_s.inverse()).mul(&w).mul(&xl.pow(-e));
        rev.push(lam);
        s = xl.mul(&s);
        phi_s = imgs[l - 1].mul(&phi_s);
    }
    out.extend(rev.into_iter().rev());
    Ok(out)
}

/// The band generator `σ_{j,n} = σ_{n-1} ⋯ σ_{j+1} σ_j^2 σ_{j+1}^-1 ⋯ σ_{n-1}^-1`.
pub fn band_generator(j: usize, n: usize) -> Vec<(usize, i8)> {
    let mut out = Vec::new();
    for p in (j + 1..n).rev() {
        out.push((p, 1));
    }
    out.push((j, 1));
    out.push((j, 1));
    for p in j + 1..n {
        out.push((p, -1));
    }
    out
}

/// A pure braid on `q + 1` strands whose last longitude is `w` modulo `F_m`.
///
/// Each letter `x_j^±1` of `w` becomes the band generator `σ_{j,q+1}^±1`.
/// The result is checked through the Magnus expansion before it is returned.
pub fn realize_last_longitude(w: &Word, m: usize) -> Result<BraidWord> {
    let q = w.rank;
    let n = q + 1;
    let mut letters = Vec::new();
    for l in &w.letters {
        let band = band_generator(l.index, n);
        if l.exp > 0 {
            letters.extend(band);
        } else {
            letters.extend(band.iter().rev().map(|&(i, e)| (i, -e)));
        }
    }
    let b = BraidWord::new(n, letters)?;
    let longs = longitudes(&b)?;
    let target = magnus_expand(&w.with_rank(n)?, m)?;
    let got: TruncatedTensor = magnus_expand(&longs[q], m)?;
    if got != target {
        return Err(Error::Consistency(format!(
            "realized braid has last longitude {} instead of {w} modulo F_{m}",
            longs[q]
        )));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &[i32]) -> Word {
        Word::from_signed(rank, s).unwrap()
    }

    #[test]
    fn reduction() {
        assert!(w(2, &[1, -1]).is_empty());
        assert_eq!(w(2, &[1, 2, -2, 1]), w(2, &[1, 1]));
        assert_eq!(w(2, &[1, 2, -1]).len(), 3);
        assert!(Word::from_signed(2, &[3]).is_err());
    }

    #[test]
    fn powers_in_text() {
        assert_eq!(Word::parse("x1^2 x2^-3", 2).unwrap(), w(2, &[1, 1, -2, -2, -2]));
        assert!(Word::parse("x1^0", 2).unwrap().is_empty());
        assert_eq!(
            BraidWord::parse("s1^2 s2^-1", 3).unwrap().letters(),
            &[(1, 1), (1, 1), (2, -1)]
        );
        assert!(BraidWord::parse("s1^x", 2).is_err());
    }

    #[test]
    fn commutators() {
        let c = commutator(&w(3, &[1]), &w(3, &[2])).unwrap();
        assert_eq!(c, w(3, &[1, 2, -1, -2]));
        assert!(commutator(&w(3, &[1]), &w(3, &[1])).unwrap().is_empty());
        let c = commutator(&w(3, &[3]), &w(3, &[1, 2, -1])).unwrap();
        assert_eq!(c, w(3, &[3, 1, 2, -1, -3, 1, -2, -1]));
        assert!(commutator(&w(2, &[1]), &w(3, &[1])).is_err());
    }

    #[test]
    fn artin_examples() {
        let s1 = BraidWord::parse("s1", 2).unwrap();
        assert_eq!(artin_apply(&s1, &w(2, &[1])).unwrap(), w(2, &[1, 2, -1]));
        let s11 = BraidWord::parse("s1 s1^-1", 2).unwrap();
        let x = w(2, &[1, 2, 2, -1, 2]);
        assert_eq!(artin_apply(&s11, &x).unwrap(), x);
        let sq = BraidWord::parse("s1 s1", 2).unwrap();
        assert_eq!(artin_apply(&sq, &w(2, &[1])).unwrap(), w(2, &[1, 2, 1, -2, -1]));
    }

    #[test]
    fn images_match_apply() {
        let b = BraidWord::parse("s1^-1 s2 s1^-1 s2 s1 s2^-1 s2", 3).unwrap();
        let imgs = artin_images(&b);
        for j in 1..=3 {
            assert_eq!(imgs[j - 1], artin_apply(&b, &w(3, &[j as i32])).unwrap());
        }
    }

    #[test]
    fn purity() {
        assert!(!BraidWord::parse("s1", 2).unwrap().is_pure());
        assert!(BraidWord::parse("s1 s1", 2).unwrap().is_pure());
        assert!(BraidWord::parse("s1^-1 s2 s1^-1 s2 s1^-1 s2", 3).unwrap().is_pure());
    }

    #[test]
    fn parsing_round_trip() {
        let b = BraidWord::parse("s1^-1 s2 s1^-1", 3).unwrap();
        assert_eq!(b.to_string(), "s1^-1 s2 s1^-1");
        assert!(BraidWord::parse("s3", 3).is_err());
        assert!(BraidWord::parse("t1", 3).is_err());
        let x = Word::parse("x1 x2^-1 x2 x3", 3).unwrap();
        assert_eq!(x.to_string(), "x1 x3");
        assert_eq!(Word::parse("1", 2).unwrap().to_string(), "1");
    }

    #[test]
    fn trivial_longitudes() {
        let l = longitudes(&BraidWord::trivial(3)).unwrap();
        assert!(l.iter().all(Word::is_empty));
        assert_eq!(longitudes(&BraidWord::parse("s1", 2).unwrap()), Err(Error::NotPure));
    }

    #[test]
    fn full_twist_longitudes() {
        let l = longitudes(&BraidWord::parse("s1 s1", 2).unwrap()).unwrap();
        assert_eq!(l[0].exponent_sum(1), 0);
        assert_eq!(l[0].exponent_sum(2), 1);
        assert_eq!(l[1].exponent_sum(1), 1);
        assert_eq!(l[1].exponent_sum(2), 0);
    }

    #[test]
    fn realize_small() {
        assert!(realize_last_longitude(&Word::identity(2), 4).unwrap().is_empty());
        let b = realize_last_longitude(&w(1, &[1]), 3).unwrap();
        assert_eq!(b, BraidWord::parse("s1 s1", 2).unwrap());
        let c = commutator(&w(2, &[1]), &w(2, &[2])).unwrap();
        let b = realize_last_longitude(&c, 3).unwrap();
        assert_eq!(b.strands(), 3);
        assert!(b.is_pure());
    }
}
