//! Expected characteristic polynomials of the selection tree.
//!
//! The tree nodes are partial selections T; the node polynomial is (a
//! positive multiple of) the average of p_S(x) = det(xI − Y_S Y_Sᵀ) over all
//! size-k supersets S ⊇ T. The root node has the closed form
//!
//!   f_∅(x) = (m−k)!/m! · (x−1)^{−(m−n−k)} ∂ₓᵏ[(x−1)^{m−n} xⁿ],
//!
//! and interior nodes follow from the derivative-operator update
//!
//!   Σ_{S⊇T} p_S(1−x) ∝ x^{−(m−n−k)} ∂ₓ^{k−t}[x^{m−n−t}·det(xI − (I−U_T))],
//!
//! with U_T the accumulated Gram matrix of the chosen columns. Every recipe
//! here is validated against [`brute_force_average`], which enumerates the
//! supersets directly; on the exact backend the two must agree identically.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{IsotropicFrame, RationalFrame, SubsetIndex};
use crate::poly::{charpoly_gram_f64, charpoly_gram_rational, Coeff, DeflateBase, Poly};
use crate::rational::{binomial_capped, factorial_ratio, falling, RatMat};

/// Guard for the brute-force enumerations.
pub const SUBSET_ENUM_CAP: u64 = 1_000_000;

/// The (m, n, k) triple of one interlacing family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl FamilyParams {
    pub fn new(m: usize, n: usize, k: usize) -> Result<Self> {
        if n == 0 || m == 0 || k == 0 || k > m || n > m {
            return Err(Error::Domain(format!(
                "family parameters need 1 <= n <= m and 1 <= k <= m, got m={m}, n={n}, k={k}"
            )));
        }
        Ok(FamilyParams { m, n, k })
    }
}

/// Root-node polynomial f_∅, exact and monic of degree n.
pub fn f_empty(p: FamilyParams) -> Result<Poly<BigRational>> {
    let FamilyParams { m, n, k } = p;
    // (x-1)^{m-n} x^n
    let base = Poly::<BigRational>::one().mul_xm1_pow(m - n).mul_x_pow(n);
    let deriv = base.derivative_k(k);
    let e = m as i64 - n as i64 - k as i64;
    let shaped = if e >= 0 {
        deriv
            .deflate_power(DeflateBase::XMinusOne, e as usize)
            .map_err(|err| {
                Error::Formula(format!("root-node deflation by (x-1)^{e} failed: {err}"))
            })?
    } else {
        deriv.mul_xm1_pow((-e) as usize)
    };
    let scale = BigRational::one() / factorial_ratio(m as u64, (m - k) as u64);
    let f = shaped.scale(&scale);
    debug_assert_eq!(f.degree(), n);
    debug_assert!(f.leading().is_some_and(|c| c.is_one()));
    Ok(f)
}

/// Float view of the root-node polynomial.
pub fn f_empty_float(p: FamilyParams) -> Result<Poly<f64>> {
    Ok(f_empty(p)?.to_float())
}

/// Bernstein coefficients c₀..c_k of g_∅:
/// cᵢ = (−1)ⁱ · n!/(n−k+i)! · (m−n)!/(m−n−i)! for i ≤ min(m−n, k), else 0.
pub fn g_empty_bernstein_coeffs(p: FamilyParams) -> Result<Vec<BigRational>> {
    let FamilyParams { m, n, k } = p;
    if k > n {
        return Err(Error::Domain(format!(
            "g_empty defined only for k <= n, got k={k}, n={n}"
        )));
    }
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        if i > m - n {
            out.push(BigRational::zero());
            continue;
        }
        let mut c = BigRational::from_integer(
            falling(n as u64, (k - i) as u64) * falling((m - n) as u64, i as u64),
        );
        if i % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    Ok(out)
}

/// Deflated root polynomial g_∅(x) = (−1)ᵏ · m!/(m−k)! · f_∅(x)/x^{n−k},
/// degree exactly k. Also constructible from its Bernstein coefficients;
/// both routes are computed and must agree identically.
pub fn g_empty(p: FamilyParams) -> Result<Poly<BigRational>> {
    let FamilyParams { m, n, k } = p;
    if k > n {
        return Err(Error::Domain(format!(
            "g_empty defined only for k <= n, got k={k}, n={n}"
        )));
    }
    let f = f_empty(p)?;
    let deflated = f
        .deflate_power(DeflateBase::X, n - k)
        .map_err(|err| Error::Formula(format!("f_empty lacks the x^{} factor: {err}", n - k)))?;
    let mut scale = factorial_ratio(m as u64, (m - k) as u64);
    if k % 2 == 1 {
        scale = -scale;
    }
    let g = deflated.scale(&scale);
    let bernstein = Poly::from_bernstein(&g_empty_bernstein_coeffs(p)?);
    if g != bernstein {
        return Err(Error::Formula(
            "g_empty deflation route disagrees with its Bernstein coefficients".into(),
        ));
    }
    debug_assert_eq!(g.degree(), k);
    Ok(g)
}

/// A partial selection over a float frame: the chosen indices, their
/// accumulated Gram matrix U_T, and the frame being selected from.
/// Values are immutable; extending a selection produces a new state.
#[derive(Debug, Clone)]
pub struct SelectionState<'a> {
    frame: &'a IsotropicFrame,
    k: usize,
    chosen: SubsetIndex,
    gram: DMatrix<f64>,
}

impl<'a> SelectionState<'a> {
    pub fn new(frame: &'a IsotropicFrame, k: usize) -> Result<Self> {
        if k == 0 || k > frame.count() {
            return Err(Error::Domain(format!(
                "subset size k={k} out of range for {} columns",
                frame.count()
            )));
        }
        Ok(SelectionState {
            frame,
            k,
            chosen: SubsetIndex::empty(),
            gram: DMatrix::zeros(frame.dim(), frame.dim()),
        })
    }

    pub fn frame(&self) -> &IsotropicFrame {
        self.frame
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn chosen(&self) -> &SubsetIndex {
        &self.chosen
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.chosen.size()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// New state with column `i` added to the selection.
    pub fn with_column(&self, i: usize) -> Result<SelectionState<'a>> {
        if self.len() >= self.k {
            return Err(Error::Domain(format!(
                "selection already holds k={} columns",
                self.k
            )));
        }
        if i >= self.frame.count() {
            return Err(Error::InvalidSubset(format!(
                "column {i} out of range for {} columns",
                self.frame.count()
            )));
        }
        let chosen = self.chosen.with(i)?;
        let mut gram = self.gram.clone();
        let y = self.frame.matrix().column(i);
        gram.ger(1.0, &y, &y, 1.0);
        Ok(SelectionState {
            frame: self.frame,
            k: self.k,
            chosen,
            gram,
        })
    }
}

/// Shared conditional-polynomial pipeline, generic over the backend.
///
/// `q` must be det(xI − (I − U_T)). Returns the monic node polynomial.
fn conditional_from_q<T: Coeff>(
    q: Poly<T>,
    m: usize,
    n: usize,
    t: usize,
    k: usize,
) -> Result<Poly<T>> {
    let e_pre = m as i64 - n as i64 - t as i64;
    let mut h = if e_pre >= 0 {
        q.mul_x_pow(e_pre as usize)
    } else {
        q.deflate_power(DeflateBase::X, (-e_pre) as usize)?
    };
    for _ in 0..(k - t) {
        h = h.derivative();
        if !T::EXACT {
            let scale = h.max_abs_coeff();
            if scale > 0.0 && scale.is_finite() {
                h = h.scale(&T::from_f64_approx(1.0 / scale));
            }
        }
    }
    let e_post = m as i64 - n as i64 - k as i64;
    let shaped = if e_post >= 0 {
        h.deflate_power(DeflateBase::X, e_post as usize)?
    } else {
        h.mul_x_pow((-e_post) as usize)
    };
    Ok(shaped.reflect().monic())
}

/// Monic conditional expected polynomial of a partial float selection:
/// a positive multiple of the average of p_S over all S ⊇ chosen, #S = k.
pub fn conditional_poly(state: &SelectionState<'_>) -> Result<Poly<f64>> {
    let n = state.frame().dim();
    let m = state.frame().count();
    let i_minus_u = DMatrix::<f64>::identity(n, n) - state.gram();
    let q = charpoly_gram_f64(&i_minus_u)?;
    conditional_from_q(q, m, n, state.len(), state.k())
}

/// Exact-backend conditional polynomial over a rational frame.
pub fn conditional_poly_rational(
    frame: &RationalFrame,
    k: usize,
    chosen: &SubsetIndex,
) -> Result<Poly<BigRational>> {
    let n = frame.dim();
    let m = frame.count();
    chosen.validate_for(m)?;
    if k == 0 || k > m || chosen.size() > k {
        return Err(Error::Domain(format!(
            "need #chosen <= k <= m, got #chosen={}, k={k}, m={m}",
            chosen.size()
        )));
    }
    let gram = frame.gram_of(chosen)?;
    let i_minus_u = RatMat::identity(n).sub(&gram);
    let q = charpoly_gram_rational(&i_minus_u)?;
    conditional_from_q(q, m, n, chosen.size(), k)
}

fn completions(m: usize, chosen: &SubsetIndex, k: usize) -> Result<Vec<SubsetIndex>> {
    let t = chosen.size();
    let free: Vec<usize> = (0..m).filter(|i| !chosen.contains(*i)).collect();
    if binomial_capped(free.len(), k - t, SUBSET_ENUM_CAP).is_none() {
        return Err(Error::TooManySubsets {
            m: free.len(),
            k: k - t,
            cap: SUBSET_ENUM_CAP,
        });
    }
    let mut subsets = Vec::new();
    for extra in free.into_iter().combinations(k - t) {
        let mut s = chosen.indices().to_vec();
        s.extend(extra);
        s.sort_unstable();
        subsets.push(SubsetIndex::new(s).expect("distinct sorted indices"));
    }
    Ok(subsets)
}

/// Average of p_S(x) = det(xI − Y_S Y_Sᵀ) over all S ⊇ chosen with #S = k,
/// by direct enumeration. The independent oracle for [`conditional_poly`].
pub fn brute_force_average(
    frame: &IsotropicFrame,
    k: usize,
    chosen: &SubsetIndex,
) -> Result<Poly<f64>> {
    chosen.validate_for(frame.count())?;
    if k == 0 || k > frame.count() || chosen.size() > k {
        return Err(Error::Domain(format!(
            "need #chosen <= k <= m, got #chosen={}, k={k}, m={}",
            chosen.size(),
            frame.count()
        )));
    }
    let subsets = completions(frame.count(), chosen, k)?;
    let mut acc = Poly::<f64>::zero();
    for s in &subsets {
        let p = charpoly_gram_f64(&frame.gram_of(s)?)?;
        acc = acc.add_poly(&p);
    }
    Ok(acc.scale(&(1.0 / subsets.len() as f64)))
}

/// Exact average of the rational node polynomials, same contract as
/// [`brute_force_average`].
pub fn brute_force_average_rational(
    frame: &RationalFrame,
    k: usize,
    chosen: &SubsetIndex,
) -> Result<Poly<BigRational>> {
    chosen.validate_for(frame.count())?;
    if k == 0 || k > frame.count() || chosen.size() > k {
        return Err(Error::Domain(format!(
            "need #chosen <= k <= m, got #chosen={}, k={k}, m={}",
            chosen.size(),
            frame.count()
        )));
    }
    let subsets = completions(frame.count(), chosen, k)?;
    let mut acc = Poly::<BigRational>::zero();
    for s in &subsets {
        let p = charpoly_gram_rational(&frame.gram_of(s)?)?;
        acc = acc.add_poly(&p);
    }
    let count = BigRational::from_integer(BigInt::from(subsets.len() as i64));
    Ok(acc.scale(&(BigRational::one() / count)))
}

/// Exact check of the derivative interchange identity
/// ∂ₓᵏ(x−1)^{m−n}xⁿ = (m−n)!/(m−k)! · x^{−(k−n)} · ∂ₓⁿ(x−1)^{m−k}xᵏ
/// for n ≤ k ≤ m.
pub fn knh_identity_check(m: usize, n: usize, k: usize) -> Result<bool> {
    if !(n <= k && k <= m && n >= 1) {
        return Err(Error::Domain(format!(
            "identity requires 1 <= n <= k <= m, got m={m}, n={n}, k={k}"
        )));
    }
    let lhs = Poly::<BigRational>::one()
        .mul_xm1_pow(m - n)
        .mul_x_pow(n)
        .derivative_k(k);
    let rhs_core = Poly::<BigRational>::one()
        .mul_xm1_pow(m - k)
        .mul_x_pow(k)
        .derivative_k(n);
    let rhs_deflated = match rhs_core.deflate_power(DeflateBase::X, k - n) {
        Ok(p) => p,
        Err(_) => return Ok(false),
    };
    let rhs = rhs_deflated.scale(&factorial_ratio((m - n) as u64, (m - k) as u64));
    Ok(lhs == rhs)
}
