//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::Q;

/// Row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Q>>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: QMatrix,
    /// `pivots[r]` is the pivot column of row `r`.
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Row reduction choosing pivots by scanning columns in `order`.
    pub fn echelon_with(&self, order: &[usize]) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.data[i][c].is_zero()) else {
                continue;
            };
            m.data.swap(r, p);
            let inv = Q::one() / &m.data[r][c];
            for x in m.data[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = m.data[r].clone();
            for i in 0..m.rows {
                if i == r || m.data[i][c].is_zero() {
                    continue;
                }
                let f = m.data[i][c].clone();
                for (x, y) in m.data[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn echelon(&self) -> Echelon {
        self.echelon_with(&(0..self.cols).collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Null space basis: one vector per free column, in increasing column order.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        self.nullspace_indexed().into_iter().map(|(_, v)| v).collect()
    }

    /// Null space basis paired with the free column each vector is 1 on.
    pub fn nullspace_indexed(&self) -> Vec<(usize, Vec<Q>)> {
        let e = self.echelon();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &e.pivots {
                v[p] = true;
            }
            v
        };
        (0..self.cols)
            .filter(|&f| !pivot_set[f])
            .map(|f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &p) in e.pivots.iter().enumerate() {
                    let x = &e.matrix.data[r][f];
                    if !x.is_zero() {
                        v[p] = -x.clone();
                    }
                }
                (f, v)
            })
            .collect()
    }

    /// One solution of `A x = b` with every non-pivot unknown set to zero.
    pub fn solve_with(&self, b: &[Q], order: &[usize]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = self.clone();
        for (row, x) in aug.data.iter_mut().zip(b) {
            row.push(x.clone());
        }
        aug.cols += 1;
        let e = aug.echelon_with(order);
        // Rows past the pivots must have a zero right-hand side.
        for r in e.pivots.len()..e.matrix.rows {
            if !e.matrix.data[r][self.cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in e.pivots.iter().enumerate() {
            x[p] = e.matrix.data[r][self.cols].clone();
        }
        Some(x)
    }

    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        self.solve_with(b, &(0..self.cols).collect::<Vec<_>>())
    }
}

/// Indices of a maximal linearly independent subset of `vectors`, greedily from the front.
pub fn independent_subset(len: usize, vectors: &[Vec<Q>]) -> Vec<usize> {
    let m = QMatrix::from_columns(len, vectors);
    m.echelon().pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn mat(rows: &[&[i64]]) -> QMatrix {
        QMatrix {
            rows: rows.len(),
            cols: rows[0].len(),
            data: rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(),
        }
    }

    #[test]
    fn kernel_and_rank() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solving() {
        let a = mat(&[&[1, 1], &[1, -1]]);
        assert_eq!(a.solve(&[q(3), q(1)]).unwrap(), vec![q(2), q(1)]);
        let b = mat(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[q(1), q(3)]).is_none());
        let x = b.solve_with(&[q(1), q(2)], &[1, 0]).unwrap();
        assert_eq!(x, vec![q(0), q(1)]);
    }
}
