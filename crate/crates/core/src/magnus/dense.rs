//! Word expansions on a dense integer array, one slot per monomial of degree `< m`.
//!
//! The group-like expansion stores degree-`d` coefficients multiplied by `d!`,
//! which keeps them integral: a product of factors `X_i^n / n!` with `Σ n = d`
//! has a denominator dividing `d!`.

use num_bigint::BigInt;

use super::tensor::{Monomial, TruncatedTensor};
use crate::rational::{factorial, Q};
use crate::words::Word;

#[derive(Clone, Copy, PartialEq, Eq)]
pub(super) enum Kind {
    /// `x_i ↦ 1 + X_i`.
    Magnus,
    /// `x_i ↦ exp(X_i)`.
    Exp,
}

struct Layout {
    q: usize,
    /// `offset[d]` is the first slot of degree `d`; `offset[m]` is the total.
    offset: Vec<usize>,
}

impl Layout {
    fn new(q: usize, m: usize) -> Option<Self> {
        let mut offset = vec![0usize; m + 1];
        for d in 0..m {
            offset[d + 1] = offset[d].checked_add(q.checked_pow(d as u32)?)?;
        }
        // Larger layouts are left to the sparse path.
        (offset[m] <= 1 << 22).then_some(Layout { q, offset })
    }

    fn monomial(&self, d: usize, mut r: usize) -> Monomial {
        let mut w = vec![0u8; d];
        for j in (0..d).rev() {
            w[j] = (r % self.q) as u8 + 1;
            r /= self.q;
        }
        Monomial(w)
    }
}

/// Expansion of `w` modulo degree `m`, or `None` when a coefficient overflows.
pub(super) fn expand(w: &Word, m: usize, kind: Kind) -> Option<TruncatedTensor> {
    let q = w.rank();
    if q == 0 {
        return Some(TruncatedTensor::one(q, m));
    }
    let lay = Layout::new(q, m)?;
    let binom: Vec<Vec<i128>> = (0..m)
        .map(|d| {
            let mut row = vec![1i128; d + 1];
            for n in 1..d {
                row[n] = row[n - 1] * (d - n + 1) as i128 / n as i128;
            }
            row
        })
        .collect();
    let mut cur = vec![0i128; lay.offset[m]];
    cur[0] = 1;
    let mut next = cur.clone();
    for l in w.letters() {
        let digit = l.index - 1;
        let neg = l.exp < 0;
        for d in 0..m {
            let level = lay.offset[d + 1] - lay.offset[d];
            for r in 0..level {
                let mut acc = cur[lay.offset[d] + r];
                let (mut rr, mut dd, mut n) = (r, d, 1usize);
                while dd > 0 && rr % q == digit {
                    rr /= q;
                    dd -= 1;
                    if kind == Kind::Magnus && !neg && n > 1 {
                        break;
                    }
                    let mut c = cur[lay.offset[dd] + rr];
                    if kind == Kind::Exp {
                        c = c.checked_mul(binom[d][n])?;
                    }
                    acc = if neg && n % 2 == 1 {
                        acc.checked_sub(c)?
                    } else {
                        acc.checked_add(c)?
                    };
                    n += 1;
                }
                next[lay.offset[d] + r] = acc;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let mut out = TruncatedTensor::zero(q, m);
    for d in 0..m {
        let scale = match kind {
            Kind::Exp => factorial(d),
            Kind::Magnus => BigInt::from(1),
        };
        for r in 0..lay.offset[d + 1] - lay.offset[d] {
            let c = cur[lay.offset[d] + r];
            if c != 0 {
                out.add_term(lay.monomial(d, r), Q::new(BigInt::from(c), scale.clone()));
            }
        }
    }
    Some(out)
}
