//! Univariate real polynomials over two coefficient backends.
//!
//! `Poly<f64>` is the numerical workhorse of the selection loop;
//! `Poly<BigRational>` backs the exact identity checks and the
//! brute-force oracles. One generic implementation serves both; the
//! only backend-sensitive point is divisibility (exact remainder versus
//! a tolerance), captured by [`Coeff::EXACT`]. Conversion goes rational
//! to float only, never the reverse.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::RatMat;

/// Relative remainder tolerance for float deflation.
const DEFLATE_REL_TOL: f64 = 1e-9;
/// Imaginary parts above `1e-6 · (1 + spectral radius)` mean the input was
/// not real-rooted; interlacing theory guarantees real roots, so this
/// signals a construction bug upstream rather than round-off.
const REAL_ROOT_IMAG_TOL: f64 = 1e-6;

/// Coefficient backend: exact rationals or IEEE doubles.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    /// True when arithmetic is exact and divisibility checks demand a zero remainder.
    const EXACT: bool;
    fn from_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn from_f64_approx(v: f64) -> Self;
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Coeff for f64 {
    const EXACT: bool = false;
    fn from_int(v: i64) -> f64 {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64_approx(v: f64) -> f64 {
        v
    }
}

impl Coeff for BigRational {
    const EXACT: bool = true;
    fn from_int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64_approx(v: f64) -> BigRational {
        BigRational::from_float(v).expect("finite float expected")
    }
}

/// Base for power deflation: divide out `x^e` or `(x−1)^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeflateBase {
    X,
    XMinusOne,
}

impl DeflateBase {
    fn root<T: Coeff>(self) -> T {
        match self {
            DeflateBase::X => T::zero(),
            DeflateBase::XMinusOne => T::one(),
        }
    }
    fn name(self) -> &'static str {
        match self {
            DeflateBase::X => "x",
            DeflateBase::XMinusOne => "x-1",
        }
    }
}

/// Dense univariate polynomial, ascending coefficients, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type RationalPoly = Poly<BigRational>;
pub type FloatPoly = Poly<f64>;

impl<T: Coeff> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    /// Builds from ascending coefficients and trims exact trailing zeros.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&v| T::from_int(v)).collect())
    }

    /// Monic product Π (x − rᵢ).
    pub fn from_roots(roots: &[T]) -> Self {
        let mut p = Poly::one();
        for r in roots {
            let lin = Poly::from_coeffs(vec![r.clone().neg(), T::one()]);
            p = p.mul_poly(&lin);
        }
        p
    }

    /// c·x^deg.
    pub fn monomial(deg: usize, c: T) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Coeff::magnitude).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add_poly(&self, other: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub_poly(&self, other: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_poly(&self, other: &Poly<T>) -> Poly<T> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &T) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Normalizes the leading coefficient to one; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly<T> {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Poly<T> {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_int(i as i64))
            .collect();
        Poly::from_coeffs(out)
    }

    /// k-fold formal derivative.
    pub fn derivative_k(&self, k: usize) -> Poly<T> {
        let mut p = self.clone();
        for _ in 0..k {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// Multiply by x^e.
    pub fn mul_x_pow(&self, e: usize) -> Poly<T> {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); e];
        out.extend(self.coeffs.iter().cloned());
        Poly { coeffs: out }
    }

    /// Multiply by (x−1)^e.
    pub fn mul_xm1_pow(&self, e: usize) -> Poly<T> {
        let lin = Poly::from_coeffs(vec![T::one().neg(), T::one()]);
        let mut p = self.clone();
        for _ in 0..e {
            p = p.mul_poly(&lin);
        }
        p
    }

    /// Divides out `base^e`, requiring (near-)exact divisibility.
    ///
    /// Exact backend: every remainder must vanish identically. Float backend:
    /// remainders up to `1e-9 · max|coeff|` of the input are tolerated.
    pub fn deflate_power(&self, base: DeflateBase, e: usize) -> Result<Poly<T>> {
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        let tol = if T::EXACT {
            0.0
        } else {
            DEFLATE_REL_TOL * self.max_abs_coeff().max(1e-300)
        };
        let c: T = base.root();
        let mut p = self.clone();
        for _ in 0..e {
            if p.degree() == 0 {
                let residual = p.coeff(0).magnitude();
                return Err(Error::NotDivisible {
                    base: base.name(),
                    residual,
                });
            }
            let d = p.degree();
            // synthetic division by (x − c)
            let mut q = vec![T::zero(); d];
            q[d - 1] = p.coeff(d);
            for j in (0..d - 1).rev() {
                q[j] = p.coeff(j + 1) + c.clone() * q[j + 1].clone();
            }
            let rem = p.coeff(0) + c.clone() * q[0].clone();
            let bad = if T::EXACT {
                !rem.is_zero()
            } else {
                rem.magnitude() > tol
            };
            if bad {
                return Err(Error::NotDivisible {
                    base: base.name(),
                    residual: rem.magnitude(),
                });
            }
            p = Poly::from_coeffs(q);
        }
        Ok(p)
    }

    /// Exact coefficient transform x ↦ 1−x (binomial recombination).
    pub fn reflect(&self) -> Poly<T> {
        let mut acc = Poly::zero();
        // power = (1−x)^j, built incrementally
        let mut power = Poly::one();
        let lin = Poly::from_coeffs(vec![T::one(), T::one().neg()]);
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                power = power.mul_poly(&lin);
            }
            if !a.is_zero() {
                acc = acc.add_poly(&power.scale(a));
            }
        }
        acc
    }

    /// Coefficients c₀..c_k of p in the Bernstein basis of degree k,
    /// p = Σ cᵢ·C(k,i)·xⁱ(1−x)^{k−i}.
    pub fn bernstein_coeffs(&self, k: usize) -> Result<Vec<T>> {
        if self.degree() > k && !self.is_zero() {
            return Err(Error::BernsteinDegree {
                degree: self.degree(),
                basis: k,
            });
        }
        let pascal = pascal_rows::<T>(k);
        let mut out = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let mut c = T::zero();
            for (j, a) in self.coeffs.iter().enumerate() {
                if j > i || a.is_zero() {
                    continue;
                }
                // C(i,j)/C(k,j) · a_j
                c = c + pascal[i][j].clone() / pascal[k][j].clone() * a.clone();
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Inverse of [`Poly::bernstein_coeffs`]: monomial form of Σ cᵢ B_{k,i}.
    pub fn from_bernstein(coeffs: &[T]) -> Poly<T> {
        assert!(!coeffs.is_empty(), "Bernstein coefficient list is empty");
        let k = coeffs.len() - 1;
        let pascal = pascal_rows::<T>(k);
        // (1−x)^j for j = 0..k
        let lin = Poly::from_coeffs(vec![T::one(), T::one().neg()]);
        let mut one_minus_x_pows = Vec::with_capacity(k + 1);
        one_minus_x_pows.push(Poly::one());
        for j in 1..=k {
            let prev: &Poly<T> = &one_minus_x_pows[j - 1];
            one_minus_x_pows.push(prev.mul_poly(&lin));
        }
        let mut acc = Poly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = one_minus_x_pows[k - i]
                .mul_x_pow(i)
                .scale(&(c.clone() * pascal[k][i].clone()));
            acc = acc.add_poly(&term);
        }
        acc
    }

    pub fn to_float(&self) -> Poly<f64> {
        Poly::from_coeffs(self.coeffs.iter().map(Coeff::to_f64).collect())
    }

    /// All real roots, descending with multiplicity. Works on either backend;
    /// the rational backend converts to floats first (never the reverse).
    pub fn real_roots(&self) -> Result<RootList> {
        self.to_float().real_roots_f64()
    }

    /// j-th largest real root (1-indexed, counting multiplicity).
    pub fn kth_largest_root(&self, j: usize) -> Result<f64> {
        let roots = self.real_roots()?;
        roots.kth_largest(j).ok_or_else(|| {
            Error::Domain(format!(
                "root index {j} out of range for degree {}",
                self.degree()
            ))
        })
    }
}

/// Pascal's triangle rows 0..=k built in the coefficient type itself,
/// so exact backends stay exact and large degrees never overflow.
fn pascal_rows<T: Coeff>(k: usize) -> Vec<Vec<T>> {
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(k + 1);
    rows.push(vec![T::one()]);
    for r in 1..=k {
        let prev = &rows[r - 1];
        let mut row = Vec::with_capacity(r + 1);
        row.push(T::one());
        for c in 1..r {
            row.push(prev[c - 1].clone() + prev[c].clone());
        }
        row.push(T::one());
        rows.push(row);
    }
    rows
}

impl<T: Coeff + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·x")?,
                _ => write!(f, "({c})·x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl<'a, T: Coeff> Add for &'a Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &'a Poly<T>) -> Poly<T> {
        self.add_poly(rhs)
    }
}

impl<'a, T: Coeff> Sub for &'a Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &'a Poly<T>) -> Poly<T> {
        self.sub_poly(rhs)
    }
}

impl<'a, T: Coeff> Mul for &'a Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &'a Poly<T>) -> Poly<T> {
        self.mul_poly(rhs)
    }
}

/// Real roots of a real-rooted polynomial, descending, with the largest
/// imaginary residue discarded on the way (float backend only).
#[derive(Debug, Clone)]
pub struct RootList {
    roots: Vec<f64>,
    residual_imag: f64,
}

impl RootList {
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn residual_imag(&self) -> f64 {
        self.residual_imag
    }

    /// j-th largest root, 1-indexed.
    pub fn kth_largest(&self, j: usize) -> Option<f64> {
        if j == 0 {
            return None;
        }
        self.roots.get(j - 1).copied()
    }

    pub fn smallest(&self) -> Option<f64> {
        self.roots.last().copied()
    }

    pub fn largest(&self) -> Option<f64> {
        self.roots.first().copied()
    }
}

impl Poly<f64> {
    fn real_roots_f64(&self) -> Result<RootList> {
        if self.is_zero() {
            return Err(Error::RootFinding("zero polynomial has no roots".into()));
        }
        let monic = self.monic();
        let d = monic.degree();
        if d == 0 {
            return Ok(RootList {
                roots: Vec::new(),
                residual_imag: 0.0,
            });
        }
        let eigs = companion_eigenvalues(&monic);
        let spectral_radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let residual_imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let tolerance = REAL_ROOT_IMAG_TOL * (1.0 + spectral_radius);
        if residual_imag > tolerance {
            return Err(Error::NotRealRooted {
                residual: residual_imag,
                tolerance,
            });
        }
        let deriv = monic.derivative();
        let mut roots: Vec<f64> = eigs
            .iter()
            .map(|z| newton_refine(&monic, &deriv, z.re))
            .collect();
        roots.sort_by(|a, b| b.partial_cmp(a).expect("roots are finite"));
        Ok(RootList {
            roots,
            residual_imag,
        })
    }
}

/// Eigenvalues of the balanced companion matrix of a monic polynomial.
fn companion_eigenvalues(monic: &Poly<f64>) -> Vec<Complex<f64>> {
    let d = monic.degree();
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -monic.coeff(i);
    }
    balance_in_place(&mut comp);
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Parlett–Reinsch balancing (radix 2), as used ahead of eigenvalue
/// computations to reduce the norm spread of companion matrices.
fn balance_in_place(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let radix = 2.0f64;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| a[(j, i)].abs()).sum();
            let mut r: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            if c == 0.0 || r == 0.0 || !c.is_finite() || !r.is_finite() {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / radix {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while c >= r * radix {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if c + r < 0.95 * s && f != 1.0 {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// One guarded Newton step from the companion eigenvalue estimate.
fn newton_refine(p: &Poly<f64>, dp: &Poly<f64>, x: f64) -> f64 {
    let fx = p.eval(&x);
    let dfx = dp.eval(&x);
    if dfx == 0.0 || !dfx.is_finite() {
        return x;
    }
    let x1 = x - fx / dfx;
    if x1.is_finite() && p.eval(&x1).abs() <= fx.abs() {
        x1
    } else {
        x
    }
}

/// Maximum absolute asymmetry tolerated by the float characteristic polynomial.
const SYMMETRY_TOL: f64 = 1e-12;

/// Monic characteristic polynomial det(xI − M) of a symmetric float matrix,
/// computed from its eigenvalues.
pub fn charpoly_gram_f64(m: &DMatrix<f64>) -> Result<Poly<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "characteristic polynomial needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut asym = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = m.clone().symmetric_eigen();
    let roots: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    Ok(Poly::from_roots(&roots))
}

/// Monic characteristic polynomial det(xI − M) of a symmetric rational matrix
/// via Faddeev–LeVerrier (exact; divisions are by small integers only).
pub fn charpoly_gram_rational(m: &RatMat) -> Result<Poly<BigRational>> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "characteristic polynomial needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric(f64::NAN));
    }
    let n = m.rows();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    if n == 0 {
        return Ok(Poly::from_coeffs(coeffs));
    }
    let mut work = m.clone();
    coeffs[n - 1] = -work.trace();
    for j in 2..=n {
        let mut shifted = work;
        for i in 0..n {
            let v = &shifted[(i, i)] + &coeffs[n - j + 1];
            shifted[(i, i)] = v;
        }
        work = m.mul(&shifted);
        coeffs[n - j] = -(work.trace() / BigRational::from_integer(BigInt::from(j as i64)));
    }
    Ok(Poly::from_coeffs(coeffs))
}
