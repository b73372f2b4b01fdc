#![allow(dead_code)]

use milnor::magnus::{LieElement, Monomial};
use milnor::rational::Q;
use milnor::words::{BraidWord, Word};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const BORROMEAN: &str = "s1^-1 s2 s1^-1 s2 s1^-1 s2";

/// Seed from `MILNOR_SEED`, or `default`.
pub fn seeded_rng(default: u64) -> ChaCha8Rng {
    let seed = std::env::var("MILNOR_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default);
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn braid(s: &str, n: usize) -> BraidWord {
    BraidWord::parse(s, n).unwrap()
}

/// `A_ij = σ_{j-1}⋯σ_{i+1} σ_i^2 σ_{i+1}^-1⋯σ_{j-1}^-1`.
pub fn a(i: usize, j: usize, n: usize) -> BraidWord {
    let mut out = Vec::new();
    for p in (i + 1..j).rev() {
        out.push((p, 1));
    }
    out.push((i, 1));
    out.push((i, 1));
    for p in i + 1..j {
        out.push((p, -1));
    }
    BraidWord::new(n, out).unwrap()
}

pub fn cat(x: &BraidWord, y: &BraidWord) -> BraidWord {
    x.concat(y).unwrap()
}

pub fn bcomm(x: &BraidWord, y: &BraidWord) -> BraidWord {
    cat(&cat(x, y), &cat(&x.inverse(), &y.inverse()))
}

fn random_generator<R: Rng>(rng: &mut R, n: usize) -> BraidWord {
    let i = rng.gen_range(1..n);
    let j = rng.gen_range(i + 1..=n);
    let g = a(i, j, n);
    if rng.gen_bool(0.5) {
        g
    } else {
        g.inverse()
    }
}

/// Random pure braid on `n >= 2` strands with at most `max_len` letters.
pub fn random_pure_braid<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> BraidWord {
    let mut b = BraidWord::trivial(n);
    loop {
        let mut g = random_generator(rng, n);
        if rng.gen_bool(0.3) {
            let k = rng.gen_range(1..n);
            let c = BraidWord::new(n, vec![(k, if rng.gen_bool(0.5) { 1 } else { -1 })]).unwrap();
            g = cat(&cat(&c, &g), &c.inverse());
        }
        if b.len() + g.len() > max_len {
            return b;
        }
        b = cat(&b, &g);
    }
}

/// Random pure braid whose longitudes lie in `F_2`: a product of commutators.
pub fn random_degree2_braid<R: Rng>(rng: &mut R, n: usize, factors: usize) -> BraidWord {
    let mut b = BraidWord::trivial(n);
    for _ in 0..factors {
        let x = random_generator(rng, n);
        let y = random_generator(rng, n);
        b = cat(&b, &bcomm(&x, &y));
    }
    b
}

pub fn random_word<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    Word::from_signed(rank, &letters).unwrap()
}

/// Random product of commutators of short words.
pub fn random_commutator_word<R: Rng>(rng: &mut R, rank: usize, factors: usize) -> Word {
    let mut w = Word::identity(rank);
    for _ in 0..factors {
        let la = rng.gen_range(1..=2);
        let x = random_word(rng, rank, la);
        let lb = rng.gen_range(1..=2);
        let y = random_word(rng, rank, lb);
        w = w.mul(&milnor::words::commutator(&x, &y).unwrap());
    }
    w
}

/// Words of length `h` over `1..=q` that are strictly smaller than every
/// proper rotation, by brute force over all `q^h` words.
pub fn lyndon_count_brute(q: usize, h: usize) -> usize {
    if h == 0 {
        return 0;
    }
    let total = q.pow(h as u32);
    let mut count = 0;
    for mut r in 0..total {
        let mut w = vec![0usize; h];
        for j in (0..h).rev() {
            w[j] = r % q;
            r /= q;
        }
        let is_lyndon = (1..h).all(|s| {
            let rot: Vec<usize> = w[s..].iter().chain(&w[..s]).copied().collect();
            w < rot
        });
        if is_lyndon {
            count += 1;
        }
    }
    count
}

/// Random integer combination of Lyndon basis elements in degrees `lo..hi`.
pub fn random_lie<R: Rng>(rng: &mut R, q: usize, lo: usize, hi: usize) -> LieElement {
    let mut e = LieElement::zero(q);
    for w in milnor::magnus::lyndon_basis(q, lo, hi) {
        if rng.gen_bool(0.4) {
            let c: i64 = rng.gen_range(-3..=3);
            e.add_coord(Monomial(w), Q::from_integer(c.into()));
        }
    }
    e
}
