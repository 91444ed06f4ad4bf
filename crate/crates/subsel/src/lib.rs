//! Column subset selection that maximizes the minimum singular value.
//!
//! Given a real n×m matrix A and a target size k, this crate selects a
//! k-column submatrix A_S whose minimum singular value carries a provable
//! lower bound, by greedy descent of a tree of expected characteristic
//! polynomials (an interlacing family). It also evaluates the closed-form
//! lower bound the selection certifies, the explicit quadratic/cubic roots
//! available when k or the rank is 2 or 3, and several baseline bounds for
//! comparison.
//!
//! Layout:
//! - [`linalg`]: dense matrices, thin SVD, isotropic frames (float and
//!   exact-rational), σ_min of submatrices.
//! - [`poly`]: univariate polynomials over rational/float backends, real
//!   root extraction, Bernstein conversion, characteristic polynomials.
//! - [`expected`]: expected characteristic polynomials of the selection
//!   tree and the brute-force averaging oracle.
//! - [`bounds`]: the closed-form bound calculus and baseline comparisons.
//! - [`selector`]: the greedy and brute-force selection engines plus
//!   certificate verification.
//! - [`cli`]: the `subsel` command-line surface (CSV/JSON in, reports out).
//!
//! Start with the `examples/` directory; each file exercises one capability
//! end to end.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod expected;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod selector;

pub use error::{Error, Result};
pub use linalg::{
    random_isotropic_frame, rational_isotropic_frame, sigma_min_sub, thin_svd, IsotropicFrame,
    RationalFrame, SubsetIndex, TargetMatrix,
};
pub use poly::{FloatPoly, Poly, RationalPoly, RootList};
pub use selector::{select_brute_force, select_interlacing, verify_certificate, SelectionResult};
