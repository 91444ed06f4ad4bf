//! Selection engines: greedy descent of the interlacing-family tree,
//! brute-force optimal selection, and certificate verification.
//!
//! The greedy reduces A to its isotropic frame Y, then grows the subset one
//! column at a time, at each step keeping the candidate whose conditional
//! expected polynomial has the largest decision root (k-th largest root for
//! k ≤ rank, smallest root for k ≥ rank). Interlacing guarantees the chosen
//! leaf's root dominates the root of the tree's root node, which in turn
//! dominates the closed-form bound; both facts are returned as certificates.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::bounds::main_bound;
use crate::error::{Error, Result};
use crate::expected::{conditional_poly, SelectionState};
use crate::linalg::{sigma_min_sub_rank, thin_svd, SubsetIndex, TargetMatrix};
use crate::poly::{DeflateBase, Poly};
use crate::rational::binomial_capped;

/// Default root-precision parameter ε; the root finder's refined companion
/// eigenvalues are comfortably inside this at desk scale.
pub const DEFAULT_EPSILON: f64 = 1e-10;
/// Monic-coefficient threshold below which a low-order coefficient is
/// treated as a forced zero root during decision-root extraction.
const ZERO_COEFF_TOL: f64 = 1e-10;
/// Slack applied to every certificate inequality.
pub const VERIFY_SLACK: f64 = 1e-9;
/// Enumeration cap for brute-force selection.
pub const BRUTE_FORCE_CAP: u64 = 1_000_000;

/// One greedy step: the chosen column and its winning decision root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep {
    pub index: usize,
    pub root: f64,
}

/// Output of a selection run, with both certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// The selected columns, ascending.
    pub subset: SubsetIndex,
    /// σ_min(A_S)², rank-aware (min(k, rank)-th largest singular value squared).
    pub sigma_min_sq: f64,
    /// Decision root of the root-node polynomial f_∅; a lower bound on
    /// σ_min(A_S)²/σ_min(A)² for the returned subset.
    pub root_certificate: f64,
    /// Closed-form bound: main_bound(m, rank, k) · σ_min(A)².
    pub bound_certificate: f64,
    /// Effective root-precision parameter of the run.
    pub epsilon: f64,
    /// Per-step chosen index and winning root (empty for brute force).
    pub trace: Vec<SelectionStep>,
}

/// Decision root of a node polynomial over a dim×count frame.
///
/// For k ≥ dim this is the smallest root; for k < dim it is the k-th largest,
/// realized by deflating the forced zero roots (low-order coefficients under
/// 1e-10 on the monic polynomial) and taking the smallest of what remains.
/// Every node polynomial also carries the exact factor (x−1)^{k+dim−count}
/// when k+dim > count; that factor is deflated before root extraction, since
/// a clustered multiple root at 1 would otherwise defeat the eigensolver.
pub(crate) fn decision_root(p: &Poly<f64>, k: usize, dim: usize, count: usize) -> Result<f64> {
    let p = p.monic();
    if p.is_zero() {
        return Err(Error::RootFinding("zero node polynomial".into()));
    }
    let mut core = p;
    if k < dim {
        let mut z = 0;
        while z < core.degree() && core.coeff(z).abs() < ZERO_COEFF_TOL {
            z += 1;
        }
        if z > 0 {
            core = core.deflate_power(DeflateBase::X, z)?;
        }
    }
    let ones = (k + dim).saturating_sub(count);
    if ones > 0 {
        core = core.deflate_power(DeflateBase::XMinusOne, ones)?;
    }
    if core.degree() == 0 {
        // every remaining root sits at 1
        return Ok(1.0);
    }
    Ok(core.real_roots()?.smallest().unwrap_or(1.0))
}

fn validate_selection_args(a: &TargetMatrix, k: usize) -> Result<()> {
    if k < 1 || k > a.cols() {
        return Err(Error::Domain(format!(
            "subset size k={k} out of range for {} columns",
            a.cols()
        )));
    }
    Ok(())
}

/// Greedy interlacing selection of k columns of A.
///
/// Requires 1 ≤ k ≤ m, a nonzero A, and ε ∈ (0, 1/k). When rank(A) = r < n,
/// the selection runs in the r-dimensional frame and all certificates
/// substitute r for n.
pub fn select_interlacing(a: &TargetMatrix, k: usize, epsilon: f64) -> Result<SelectionResult> {
    validate_selection_args(a, k)?;
    if !(epsilon > 0.0 && epsilon < 1.0 / k as f64) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, 1/k), got epsilon={epsilon}, k={k}"
        )));
    }
    let thin = thin_svd(a)?;
    let frame = &thin.frame;
    let r = frame.dim();
    let m = frame.count();
    let mut state = SelectionState::new(frame, k)?;
    let root_certificate = node_root(&state, k, r)?;
    let mut trace: Vec<SelectionStep> = Vec::with_capacity(k);
    for _step in 0..k {
        let candidates: Vec<usize> = (0..m).filter(|i| !state.chosen().contains(*i)).collect();
        let scored: Vec<(usize, f64)> = candidates
            .into_par_iter()
            .map(|i| -> Result<(usize, f64)> {
                let child = state.with_column(i)?;
                let root = node_root(&child, k, r)?;
                Ok((i, root))
            })
            .collect::<Result<Vec<_>>>()?;
        // max root, ties by lowest index; sequential fold keeps the result
        // independent of the parallel schedule
        let (best_i, best_root) = scored
            .into_iter()
            .fold(None::<(usize, f64)>, |acc, (i, root)| match acc {
                None => Some((i, root)),
                Some((bi, br)) => {
                    if root > br || (root == br && i < bi) {
                        Some((i, root))
                    } else {
                        Some((bi, br))
                    }
                }
            })
            .expect("at least one candidate remains");
        state = state.with_column(best_i)?;
        trace.push(SelectionStep {
            index: best_i,
            root: best_root,
        });
    }
    let subset = state.chosen().clone();
    finish_result(a, subset, k, r, root_certificate, epsilon, trace)
}

/// Decision root of the root-node polynomial f_∅ at (m, rank, k), computed
/// along the same float path the selector uses. This is the value stored in
/// `SelectionResult::root_certificate`.
pub fn root_certificate_for(a: &TargetMatrix, k: usize) -> Result<f64> {
    validate_selection_args(a, k)?;
    let thin = thin_svd(a)?;
    let r = thin.frame.dim();
    let state = SelectionState::new(&thin.frame, k)?;
    node_root(&state, k, r)
}

fn node_root(state: &SelectionState<'_>, k: usize, r: usize) -> Result<f64> {
    let p = conditional_poly(state).map_err(|e| node_error(state, e))?;
    decision_root(&p, k, r, state.frame().count()).map_err(|e| node_error(state, e))
}

fn node_error(state: &SelectionState<'_>, e: Error) -> Error {
    Error::RootFinding(format!(
        "node {:?} of the selection tree: {e}",
        state.chosen().indices()
    ))
}

fn finish_result(
    a: &TargetMatrix,
    subset: SubsetIndex,
    k: usize,
    r: usize,
    root_certificate: f64,
    epsilon: f64,
    trace: Vec<SelectionStep>,
) -> Result<SelectionResult> {
    let sigma_min_sq = sigma_min_sub_rank(a, &subset, r)?.powi(2);
    let sigma_min_a_sq = a.sigma_min_positive().powi(2);
    let bound_certificate = main_bound(a.cols(), r, k)? * sigma_min_a_sq;
    Ok(SelectionResult {
        subset,
        sigma_min_sq,
        root_certificate,
        bound_certificate,
        epsilon,
        trace,
    })
}

/// Exact argmax of σ_min over all C(m, k) subsets (ties: lexicographically
/// smallest). Guarded at C(m, k) ≤ 10⁶.
pub fn select_brute_force(a: &TargetMatrix, k: usize) -> Result<SelectionResult> {
    validate_selection_args(a, k)?;
    if binomial_capped(a.cols(), k, BRUTE_FORCE_CAP).is_none() {
        return Err(Error::TooManySubsets {
            m: a.cols(),
            k,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let thin = thin_svd(a)?;
    let r = thin.frame.dim();
    let state = SelectionState::new(&thin.frame, k)?;
    let root_certificate = node_root(&state, k, r)?;
    // lexicographic enumeration; strict improvement keeps the lex-smallest tie
    let mut best: Option<(SubsetIndex, f64)> = None;
    for combo in (0..a.cols()).combinations(k) {
        let s = SubsetIndex::new(combo).expect("combinations are sorted");
        let v = sigma_min_sub_rank(a, &s, r)?.powi(2);
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((s, v));
        }
    }
    let (subset, sigma_min_sq) = best.expect("k >= 1 guarantees a subset");
    let sigma_min_a_sq = a.sigma_min_positive().powi(2);
    let bound_certificate = main_bound(a.cols(), r, k)? * sigma_min_a_sq;
    Ok(SelectionResult {
        subset,
        sigma_min_sq,
        root_certificate,
        bound_certificate,
        epsilon: 0.0,
        trace: Vec::new(),
    })
}

/// One verified inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckLine {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({:.17e} >= {:.17e})",
            self.label,
            if self.pass { "pass" } else { "FAIL" },
            self.lhs,
            self.rhs
        )
    }
}

/// Certificate verification verdict; failures are carried, not raised.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub bound_check: CheckLine,
    pub root_check: CheckLine,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.bound_check.pass && self.root_check.pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.bound_check)?;
        write!(f, "{}", self.root_check)
    }
}

/// Recomputes σ_min(A_S)², σ_min(A)² and the closed-form bound, then checks
///
///   σ_min(A_S)² ≥ (1−kε)·main_bound·σ_min(A)² − 1e-9            (bound)
///   σ_min(A_S)²/σ_min(A)² ≥ root_certificate − 1e-9             (root)
///
/// The root check is the tighter of the two since the root dominates the
/// closed-form factor.
pub fn verify_certificate(a: &TargetMatrix, result: &SelectionResult) -> Result<Verdict> {
    result.subset.validate_for(a.cols())?;
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let r = a.rank();
    let k = result.subset.size();
    let sigma_sq = sigma_min_sub_rank(a, &result.subset, r)?.powi(2);
    let sigma_a_sq = a.sigma_min_positive().powi(2);
    let bound = main_bound(a.cols(), r, k)?;
    let eps_factor = 1.0 - k as f64 * result.epsilon;
    let bound_rhs = eps_factor * bound * sigma_a_sq - VERIFY_SLACK;
    let bound_check = CheckLine {
        label: "bound-certificate",
        lhs: sigma_sq,
        rhs: bound_rhs,
        pass: sigma_sq >= bound_rhs,
    };
    let ratio = sigma_sq / sigma_a_sq;
    let root_rhs = result.root_certificate - VERIFY_SLACK;
    let root_check = CheckLine {
        label: "root-certificate",
        lhs: ratio,
        rhs: root_rhs,
        pass: ratio >= root_rhs,
    };
    Ok(Verdict {
        bound_check,
        root_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expected::f_empty_float;
    use crate::expected::FamilyParams;
    use crate::linalg::{random_gaussian, random_rational_skew, rational_isotropic_frame};
    use nalgebra::DMatrix;

    fn target(n: usize, m: usize, seed: u64) -> TargetMatrix {
        TargetMatrix::new(random_gaussian(n, m, seed)).unwrap()
    }

    #[test]
    fn identity_selection() {
        let a = TargetMatrix::new(DMatrix::identity(3, 3)).unwrap();
        for k in 1..=2 {
            let r = select_interlacing(&a, k, DEFAULT_EPSILON).unwrap();
            assert_eq!(r.subset.indices(), (0..k).collect::<Vec<_>>().as_slice());
            assert!((r.sigma_min_sq - 1.0).abs() < 1e-9);
            assert!(r.root_certificate <= 1.0 + 1e-12);
            let verdict = verify_certificate(&a, &r).unwrap();
            assert!(verdict.pass(), "{verdict}");
        }
    }

    #[test]
    fn exact_frame_selection_sandwich() {
        let skew = random_rational_skew(4, 2, 3, 9);
        let frame = rational_isotropic_frame(&skew, 2).unwrap();
        let a = TargetMatrix::new(frame.to_frame().matrix().clone()).unwrap();
        let sel = select_interlacing(&a, 2, DEFAULT_EPSILON).unwrap();
        let brute = select_brute_force(&a, 2).unwrap();
        let f = f_empty_float(FamilyParams::new(4, 2, 2).unwrap()).unwrap();
        let r2 = decision_root(&f, 2, 2, 4).unwrap();
        assert!(sel.sigma_min_sq >= r2 - 1e-9);
        assert!(sel.sigma_min_sq <= brute.sigma_min_sq + 1e-12);
    }

    #[test]
    fn guarantee_on_random_instance() {
        let a = target(3, 9, 5);
        let sigma_a_sq = a.sigma_min_positive().powi(2);
        for k in 2..=8 {
            let r = select_interlacing(&a, k, DEFAULT_EPSILON).unwrap();
            let bound = main_bound(9, 3, k).unwrap();
            let guarantee = (1.0 - k as f64 * DEFAULT_EPSILON) * bound * sigma_a_sq;
            assert!(
                r.sigma_min_sq >= guarantee - 1e-9,
                "k={k}: {} < {guarantee}",
                r.sigma_min_sq
            );
            assert!(r.sigma_min_sq / sigma_a_sq >= r.root_certificate - 1e-9);
            // the root certificate itself dominates the closed-form factor
            assert!(r.root_certificate >= bound - 1e-9);
            assert!(verify_certificate(&a, &r).unwrap().pass());
        }
    }

    #[test]
    fn greedy_trace_is_nondecreasing() {
        let a = target(4, 10, 17);
        for k in [2usize, 4, 7] {
            let r = select_interlacing(&a, k, DEFAULT_EPSILON).unwrap();
            let mut prev = r.root_certificate;
            for step in &r.trace {
                assert!(
                    step.root >= prev - 1e-9,
                    "k={k}: step root {} fell below {prev}",
                    step.root
                );
                prev = step.root;
            }
        }
    }

    #[test]
    fn brute_force_ignores_zero_column() {
        let a = TargetMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let r = select_brute_force(&a, 2).unwrap();
        assert_eq!(r.subset.indices(), &[0, 1]);
    }

    #[test]
    fn brute_force_dominates_greedy() {
        let a = target(2, 5, 3);
        let greedy = select_interlacing(&a, 2, DEFAULT_EPSILON).unwrap();
        let brute = select_brute_force(&a, 2).unwrap();
        assert!(brute.sigma_min_sq >= greedy.sigma_min_sq - 1e-12);
    }

    #[test]
    fn brute_force_dominates_expected_root() {
        let a = target(3, 8, 11);
        let brute = select_brute_force(&a, 4).unwrap();
        let sigma_a_sq = a.sigma_min_positive().powi(2);
        assert!(brute.sigma_min_sq >= brute.root_certificate * sigma_a_sq - 1e-9);
    }

    #[test]
    fn verify_rejects_bad_subset() {
        // two nearly parallel columns make {0,1} fail the certificate
        let a = TargetMatrix::from_rows(&[vec![1.0, 1.0, 0.0, 0.7], vec![0.0, 1e-6, 1.0, 0.7]])
            .unwrap();
        let good = select_interlacing(&a, 2, DEFAULT_EPSILON).unwrap();
        assert!(verify_certificate(&a, &good).unwrap().pass());
        let mut bad = good.clone();
        bad.subset = SubsetIndex::new(vec![0, 1]).unwrap();
        bad.sigma_min_sq = sigma_min_sub_rank(&a, &bad.subset, a.rank())
            .unwrap()
            .powi(2);
        assert!(!verify_certificate(&a, &bad).unwrap().pass());
    }

    #[test]
    fn whole_matrix_selection_passes() {
        let a = target(2, 4, 21);
        let r = select_interlacing(&a, 4, 1e-11).unwrap();
        assert_eq!(r.subset.indices(), &[0, 1, 2, 3]);
        assert!((r.bound_certificate - a.sigma_min_positive().powi(2)).abs() < 1e-12);
        assert!(verify_certificate(&a, &r).unwrap().pass());
    }

    #[test]
    fn rank_deficient_target_runs_in_frame_dim() {
        // 3x6 with rank 2: selection must still certify against rank-aware sigma
        let base = random_gaussian(2, 6, 33);
        let lift = random_gaussian(3, 2, 34);
        let a = TargetMatrix::new(lift * base).unwrap();
        assert_eq!(a.rank(), 2);
        for k in [1usize, 2, 3] {
            let r = select_interlacing(&a, k, DEFAULT_EPSILON).unwrap();
            assert!(verify_certificate(&a, &r).unwrap().pass());
        }
    }

    #[test]
    fn determinism_across_thread_counts() {
        let a = target(3, 10, 8);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let r1 = single.install(|| select_interlacing(&a, 5, DEFAULT_EPSILON).unwrap());
        let r4 = many.install(|| select_interlacing(&a, 5, DEFAULT_EPSILON).unwrap());
        assert_eq!(r1.subset, r4.subset);
        assert_eq!(r1.sigma_min_sq, r4.sigma_min_sq);
    }

    #[test]
    fn scaling_equivariance() {
        let a_mat = random_gaussian(3, 8, 29);
        let a = TargetMatrix::new(a_mat.clone()).unwrap();
        let base = select_interlacing(&a, 4, DEFAULT_EPSILON).unwrap();
        for c in [2.0, 0.5, 3.0] {
            let scaled = TargetMatrix::new(&a_mat * c).unwrap();
            let r = select_interlacing(&scaled, 4, DEFAULT_EPSILON).unwrap();
            assert_eq!(r.subset, base.subset, "scale {c} changed the subset");
        }
    }

    #[test]
    fn argument_validation() {
        let a = target(2, 4, 1);
        assert!(select_interlacing(&a, 0, 1e-10).is_err());
        assert!(select_interlacing(&a, 5, 1e-10).is_err());
        assert!(select_interlacing(&a, 2, 0.0).is_err());
        assert!(select_interlacing(&a, 2, 0.6).is_err());
        let zero = TargetMatrix::new(DMatrix::zeros(2, 4)).unwrap();
        assert!(matches!(
            select_interlacing(&zero, 2, 1e-10),
            Err(Error::ZeroMatrix)
        ));
        assert!(matches!(
            select_brute_force(&target(2, 60, 2), 30),
            Err(Error::TooManySubsets { .. })
        ));
    }
}
