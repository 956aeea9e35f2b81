//! Small dense matrices over the exact scalars. Ranks in this artifact stay
//! tiny (<= 6), so plain rational Gaussian elimination is the right tool.

use super::ExactScalar;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct MatQ {
    nrows: usize,
    ncols: usize,
    data: Vec<ExactScalar>, // row-major
}

impl MatQ {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        MatQ {
            nrows,
            ncols,
            data: vec![ExactScalar::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatQ::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        MatQ {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: Vec<Vec<ExactScalar>>) -> Self {
        MatQ::from_rows(cols).transpose()
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        MatQ::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn col(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.nrows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> MatQ {
        let mut t = MatQ::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &MatQ) -> MatQ {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch");
        let mut out = MatQ::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    if !other[(k, j)].is_zero() {
                        let p = &self[(i, k)] * &other[(k, j)];
                        out[(i, j)] += p;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(self.ncols, v.len(), "dimension mismatch");
        (0..self.nrows)
            .map(|i| {
                let mut acc = ExactScalar::zero();
                for j in 0..self.ncols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn det(&self) -> ExactScalar {
        assert_eq!(self.nrows, self.ncols, "det of non-square matrix");
        let n = self.nrows;
        let mut m = self.clone();
        let mut det = ExactScalar::one();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !m[(i, col)].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return ExactScalar::zero(),
            };
            if pivot != col {
                m.swap_rows(pivot, col);
                det = -det;
            }
            let p = m[(col, col)].clone();
            det *= &p;
            for i in col + 1..n {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = &m[(i, col)] / &p;
                for j in col..n {
                    let s = &m[(col, j)] * &factor;
                    m[(i, j)] -= s;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<MatQ> {
        assert_eq!(self.nrows, self.ncols, "inverse of non-square matrix");
        let n = self.nrows;
        let mut m = self.clone();
        let mut inv = MatQ::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !m[(i, col)].is_zero())?;
            if pivot != col {
                m.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = m[(col, col)].clone();
            for j in 0..n {
                m[(col, j)] /= &p;
                inv[(col, j)] /= &p;
            }
            for i in 0..n {
                if i == col || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in 0..n {
                    let s = &m[(col, j)] * &factor;
                    m[(i, j)] -= s;
                    let s = &inv[(col, j)] * &factor;
                    inv[(i, j)] -= s;
                }
            }
        }
        Some(inv)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..self.ncols {
            if rank == self.nrows {
                break;
            }
            let pivot = (rank..self.nrows).find(|&i| !m[(i, col)].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            m.swap_rows(pivot, rank);
            let p = m[(rank, col)].clone();
            for i in rank + 1..self.nrows {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = &m[(i, col)] / &p;
                for j in col..self.ncols {
                    let s = &m[(rank, j)] * &factor;
                    m[(i, j)] -= s;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_symmetric(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for i in 0..self.nrows {
            for j in 0..i {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    /// Sylvester criterion: all leading principal minors strictly positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        for k in 1..=self.nrows {
            let mut sub = MatQ::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    sub[(i, j)] = self[(i, j)].clone();
                }
            }
            if sub.det() <= ExactScalar::zero() {
                return false;
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols && *self == MatQ::identity(self.nrows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.nrows)
            .map(|i| self.row(i).iter().map(super::to_f64).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for MatQ {
    type Output = ExactScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ExactScalar {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ExactScalar {
        &mut self.data[i * self.ncols + j]
    }
}

impl fmt::Debug for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatQ {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = self.row(i).iter().map(super::format_exact).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = MatQ::from_i64_rows(&[&[2, 1], &[-1, 1]]);
        assert_eq!(m.det(), rat_int(3));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn singular_matrix() {
        let m = MatQ::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.det(), rat_int(0));
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn positive_definite() {
        // inverse Cartan of su3
        let g = MatQ::from_rows(vec![
            vec![rat(2, 3), rat(1, 3)],
            vec![rat(1, 3), rat(2, 3)],
        ]);
        assert!(g.is_positive_definite());
        let bad = MatQ::from_i64_rows(&[&[1, 2], &[2, 1]]);
        assert!(!bad.is_positive_definite());
    }
}
