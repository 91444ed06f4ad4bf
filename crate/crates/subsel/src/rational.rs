//! Exact rational scalars and dense matrices.
//!
//! Everything here is arbitrary-precision: `BigRational` entries, Gaussian
//! elimination without pivot-growth concerns, and a division-free-in-spirit
//! Faddeev–LeVerrier characteristic polynomial (it only ever divides by
//! small integers). Coefficient growth is unbounded by design; callers keep
//! dimensions at desk scale.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for a rational p/q from machine integers.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer as a rational.
pub fn rat_int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Falling factorial n·(n−1)⋯(n−terms+1) as a big integer; empty product is 1.
pub fn falling(n: u64, terms: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..terms {
        acc *= BigInt::from(n - j);
    }
    acc
}

/// a!/b! for a ≥ b, as a rational.
pub fn factorial_ratio(a: u64, b: u64) -> BigRational {
    assert!(a >= b, "factorial_ratio requires a >= b");
    BigRational::from_integer(falling(a, a - b))
}

/// C(n, k) capped: `None` when the value exceeds `cap`.
pub fn binomial_capped(n: usize, k: usize, cap: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Dense matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> RatMat {
        RatMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "RatMat::mul shape mismatch");
        RatMat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigRational::zero();
            for t in 0..self.cols {
                acc += &self[(i, t)] * &other[(t, j)];
            }
            acc
        })
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &BigRational) -> RatMat {
        RatMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn trace(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let mut acc = BigRational::zero();
        for i in 0..self.rows {
            acc += &self[(i, i)];
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    /// Solves self · X = rhs by fraction-exact Gaussian elimination.
    /// Returns `None` when self is singular.
    pub fn solve(&self, rhs: &RatMat) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols, "solve requires a square matrix");
        assert_eq!(self.rows, rhs.rows, "solve rhs shape mismatch");
        let n = self.rows;
        let w = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot_row != col {
                for j in 0..n {
                    let tmp = a[(pivot_row, j)].clone();
                    a[(pivot_row, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                }
                for j in 0..w {
                    let tmp = b[(pivot_row, j)].clone();
                    b[(pivot_row, j)] = b[(col, j)].clone();
                    b[(col, j)] = tmp;
                }
            }
            let pivot = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &pivot;
            }
            for j in 0..w {
                b[(col, j)] = &b[(col, j)] / &pivot;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let v = &a[(col, j)] * &factor;
                    a[(r, j)] = &a[(r, j)] - &v;
                }
                for j in 0..w {
                    let v = &b[(col, j)] * &factor;
                    b[(r, j)] = &b[(r, j)] - &v;
                }
            }
        }
        Some(b)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].to_f64().expect("rational out of f64 range")
        })
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Cayley transform (I − S)(I + S)⁻¹ of a rational skew-symmetric matrix.
/// The result is exactly orthogonal.
pub fn cayley_orthogonal(skew: &RatMat) -> Result<RatMat> {
    if !skew.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let n = skew.rows();
    let id = RatMat::identity(n);
    let i_plus = id.add(skew);
    let i_minus = id.sub(skew);
    // (I − S) and (I + S)⁻¹ commute, so the one-sided solve is enough.
    i_plus.solve(&i_minus).ok_or(Error::SingularCayley)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_and_binomial() {
        assert_eq!(falling(5, 3), BigInt::from(60));
        assert_eq!(falling(5, 0), BigInt::one());
        assert_eq!(binomial_capped(6, 3, 1000), Some(20));
        assert_eq!(binomial_capped(60, 30, 1_000_000), None);
        assert_eq!(binomial_capped(4, 9, 10), Some(0));
    }

    #[test]
    fn solve_recovers_inverse() {
        let mut a = RatMat::identity(3);
        a[(0, 1)] = rat(1, 2);
        a[(2, 0)] = rat(-3, 4);
        let inv = a.solve(&RatMat::identity(3)).unwrap();
        assert_eq!(a.mul(&inv), RatMat::identity(3));
    }

    #[test]
    fn singular_solve_is_none() {
        let mut a = RatMat::zeros(2, 2);
        a[(0, 0)] = rat_int(1);
        a[(1, 0)] = rat_int(2);
        assert!(a.solve(&RatMat::identity(2)).is_none());
    }

    #[test]
    fn cayley_is_orthogonal() {
        let mut s = RatMat::zeros(2, 2);
        s[(0, 1)] = rat(1, 2);
        s[(1, 0)] = rat(-1, 2);
        let q = cayley_orthogonal(&s).unwrap();
        assert_eq!(q[(0, 0)], rat(3, 5));
        assert_eq!(q[(0, 1)], rat(-4, 5));
        assert_eq!(q.mul(&q.transpose()), RatMat::identity(2));
    }

    #[test]
    fn cayley_rejects_non_skew() {
        let mut s = RatMat::zeros(2, 2);
        s[(0, 1)] = rat(1, 2);
        s[(1, 0)] = rat(1, 2);
        assert!(matches!(
            cayley_orthogonal(&s),
            Err(Error::NotSkewSymmetric)
        ));
    }
}
