//! Smith normal form over the integers, with both unimodular transforms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major. Only what the SNF needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatI {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<BigInt>,
}

impl MatI {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        MatI {
            nrows,
            ncols,
            data: vec![BigInt::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatI::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        MatI {
            nrows,
            ncols,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MatI) -> MatI {
        assert_eq!(self.ncols, other.nrows);
        let mut out = MatI::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// row[a] += c * row[b]
    fn add_row(&mut self, a: usize, b: usize, c: &BigInt) {
        for j in 0..self.ncols {
            let s = c * &self[(b, j)];
            self[(a, j)] += s;
        }
    }

    /// col[a] += c * col[b]
    fn add_col(&mut self, a: usize, b: usize, c: &BigInt) {
        for i in 0..self.nrows {
            let s = c * &self[(i, b)];
            self[(i, a)] += s;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.ncols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    pub fn det(&self) -> BigInt {
        // Determinant via the rational path; inputs are small.
        let m = super::MatQ::from_rows(
            (0..self.nrows)
                .map(|i| {
                    (0..self.ncols)
                        .map(|j| super::ExactScalar::from_integer(self[(i, j)].clone()))
                        .collect()
                })
                .collect(),
        );
        let d = m.det();
        assert!(num_traits::One::is_one(d.denom()));
        d.numer().clone()
    }
}

impl std::ops::Index<(usize, usize)> for MatI {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatI {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.ncols + j]
    }
}

/// Result of the Smith normal form: `u * a * v = diag(d)` with `u`, `v`
/// unimodular and d_i | d_{i+1}, all d_i >= 0.
pub struct SnfResult {
    pub diag: Vec<BigInt>,
    pub u: MatI,
    pub v: MatI,
}

/// Smith normal form of an integer matrix.
pub fn snf(a: &MatI) -> SnfResult {
    let mut b = a.clone();
    let mut u = MatI::identity(a.nrows);
    let mut v = MatI::identity(a.ncols);
    let n = a.nrows.min(a.ncols);

    for k in 0..n {
        loop {
            // Find the entry of minimal nonzero absolute value in the
            // trailing block and move it to (k, k).
            let mut best: Option<(usize, usize)> = None;
            for i in k..a.nrows {
                for j in k..a.ncols {
                    if b[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if b[(i, j)].abs() < b[(bi, bj)].abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => break, // trailing block is zero
            };
            b.swap_rows(k, pi);
            u.swap_rows(k, pi);
            b.swap_cols(k, pj);
            v.swap_cols(k, pj);

            // Clear the rest of row k and column k.
            let mut dirty = false;
            for i in k + 1..a.nrows {
                if b[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&b[(i, k)] / &b[(k, k)]);
                b.add_row(i, k, &q);
                u.add_row(i, k, &q);
                if !b[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..a.ncols {
                if b[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&b[(k, j)] / &b[(k, k)]);
                b.add_col(j, k, &q);
                v.add_col(j, k, &q);
                if !b[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Enforce divisibility: if some trailing entry is not divisible
            // by the pivot, fold its row in and restart this k.
            let piv = b[(k, k)].clone();
            let mut fixed = true;
            'scan: for i in k + 1..a.nrows {
                for j in k + 1..a.ncols {
                    if (&b[(i, j)] % &piv).is_zero() {
                        continue;
                    }
                    b.add_row(k, i, &BigInt::one());
                    u.add_row(k, i, &BigInt::one());
                    fixed = false;
                    break 'scan;
                }
            }
            if fixed {
                break;
            }
        }
        if b[(k, k)].is_negative() {
            b.negate_row(k);
            u.negate_row(k);
        }
    }

    SnfResult {
        diag: (0..n).map(|k| b[(k, k)].clone()).collect(),
        u,
        v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_postconditions(a: &MatI, r: &SnfResult) {
        // u * a * v is the stated diagonal
        let prod = r.u.mul(a).mul(&r.v);
        for i in 0..a.nrows {
            for j in 0..a.ncols {
                let expect = if i == j && i < r.diag.len() {
                    r.diag[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(prod[(i, j)], expect, "diagonal mismatch at ({i},{j})");
            }
        }
        // transforms unimodular
        assert_eq!(r.u.det().abs(), BigInt::one());
        assert_eq!(r.v.det().abs(), BigInt::one());
        // divisibility chain
        for w in r.diag.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility violated");
            } else {
                assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn one_by_one() {
        let a = MatI::from_i64_rows(&[&[2]]);
        let r = snf(&a);
        assert_eq!(r.diag, vec![BigInt::from(2)]);
        check_postconditions(&a, &r);
    }

    #[test]
    fn identity_two() {
        let a = MatI::identity(2);
        let r = snf(&a);
        assert_eq!(r.diag, vec![BigInt::one(), BigInt::one()]);
        check_postconditions(&a, &r);
    }

    #[test]
    fn su3_root_pair() {
        // gamma_12, gamma_13 in the fundamental-weight basis of su3
        let a = MatI::from_i64_rows(&[&[2, 1], &[-1, 1]]);
        let r = snf(&a);
        assert_eq!(r.diag, vec![BigInt::one(), BigInt::from(3)]);
        check_postconditions(&a, &r);
    }

    #[test]
    fn rank_deficient() {
        let a = MatI::from_i64_rows(&[&[2, 4], &[1, 2]]);
        let r = snf(&a);
        assert_eq!(r.diag, vec![BigInt::one(), BigInt::zero()]);
        check_postconditions(&a, &r);
    }
}
