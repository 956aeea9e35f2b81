//! Rational covectors in the ambient coordinates.

use super::{format_exact, ExactScalar};
use num_complex::Complex64;
use num_traits::Zero;
use std::fmt;

/// A linear form (covector) with exact rational coefficients: the value at a
/// point with coordinates `y` is `sum_j coeffs[j] * y[j]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<ExactScalar>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<ExactScalar>) -> Self {
        LinearForm { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        LinearForm {
            coeffs: vec![ExactScalar::zero(); rank],
        }
    }

    /// Form with a single unit coefficient at `k` (the coordinate form Y_{k+1}).
    pub fn coordinate(rank: usize, k: usize) -> Self {
        let mut c = vec![ExactScalar::zero(); rank];
        c[k] = super::rat_int(1);
        LinearForm { coeffs: c }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        LinearForm {
            coeffs: coeffs.iter().map(|&c| super::rat_int(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &ExactScalar {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the last nonzero coefficient (the innermost variable the form
    /// depends on, in the residue regime |Z_r| << ... << |Z_1|).
    pub fn innermost_nonzero(&self) -> Option<usize> {
        (0..self.coeffs.len()).rev().find(|&j| !self.coeffs[j].is_zero())
    }

    pub fn apply(&self, point: &[ExactScalar]) -> ExactScalar {
        assert_eq!(point.len(), self.coeffs.len(), "rank mismatch");
        let mut acc = ExactScalar::zero();
        for (c, y) in self.coeffs.iter().zip(point) {
            if !c.is_zero() {
                acc += c * y;
            }
        }
        acc
    }

    pub fn apply_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.coeffs.len(), "rank mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, z) in self.coeffs.iter().zip(point) {
            if !c.is_zero() {
                acc += z * super::to_f64(c);
            }
        }
        acc
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Is `other` a nonzero scalar multiple of `self`?
    pub fn proportional_to(&self, other: &LinearForm) -> bool {
        if self.rank() != other.rank() || self.is_zero() || other.is_zero() {
            return false;
        }
        let j = self.innermost_nonzero().unwrap();
        if other.coeffs[j].is_zero() {
            return false;
        }
        let s = &other.coeffs[j] / &self.coeffs[j];
        self.scale(&s) == *other
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = format_exact(c);
            if first {
                if cs == "1" {
                    write!(f, "Y{}", j + 1)?;
                } else if cs == "-1" {
                    write!(f, "-Y{}", j + 1)?;
                } else {
                    write!(f, "{}*Y{}", cs, j + 1)?;
                }
                first = false;
            } else if cs.starts_with('-') {
                if cs == "-1" {
                    write!(f, "-Y{}", j + 1)?;
                } else {
                    write!(f, "{}*Y{}", cs, j + 1)?;
                }
            } else if cs == "1" {
                write!(f, "+Y{}", j + 1)?;
            } else {
                write!(f, "+{}*Y{}", cs, j + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
