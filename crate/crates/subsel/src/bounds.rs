//! Closed-form lower-bound calculus.
//!
//! The headline quantity is the factor
//!
//!   (|n−k|+1) / (α·(min(k,n)·m − n·k) + |n−k|+1)
//!
//! multiplying σ_min(A)², with α ∈ (0,1] assembled from the h₁/h₂ expressions
//! below. α < 1 is exactly what beats the older bounds, so this module also
//! evaluates those baselines and reports who dominates whom. Everything is
//! double precision with explicit guards on denominators and radicands;
//! negative radicands within 1e-12 of zero are clamped (they arise on the
//! m = n+k branch boundary).

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Numerical slack for branch-boundary agreement and radicand clamping.
const BRANCH_TOL: f64 = 1e-12;

/// h₁(m, x₂, x₃) = 4·(x₃−1)/x₃²·(1 − (x₃−1)(m−x₃+1)/((m−x₂)·x₂)).
pub fn h1(m: f64, x2: f64, x3: f64) -> Result<f64> {
    if x3 < 1.0 {
        return Err(Error::Domain(format!("h1 needs x3 >= 1, got x3={x3}")));
    }
    if x2 < 1.0 {
        return Err(Error::Domain(format!("h1 needs x2 >= 1, got x2={x2}")));
    }
    if m <= x2 {
        return Err(Error::Domain(format!(
            "h1 denominator (m-x2)·x2 needs m > x2, got m={m}, x2={x2}"
        )));
    }
    Ok(4.0 * (x3 - 1.0) / (x3 * x3) * (1.0 - (x3 - 1.0) * (m - x3 + 1.0) / ((m - x2) * x2)))
}

/// h₂(m, x₂, x₃) = 4·(x₂+1−x₃)(m−x₂−1)(x₂+x₃+1−m) / ((m−x₃)·x₃·(m−x₂)²).
pub fn h2(m: f64, x2: f64, x3: f64) -> Result<f64> {
    if x3 < 1.0 {
        return Err(Error::Domain(format!("h2 needs x3 >= 1, got x3={x3}")));
    }
    if m <= x3 {
        return Err(Error::Domain(format!(
            "h2 denominator (m-x3)·x3 needs m > x3, got m={m}, x3={x3}"
        )));
    }
    if m <= x2 {
        return Err(Error::Domain(format!(
            "h2 denominator (m-x2)^2 needs m > x2, got m={m}, x2={x2}"
        )));
    }
    Ok(4.0 * (x2 + 1.0 - x3) * (m - x2 - 1.0) * (x2 + x3 + 1.0 - m)
        / ((m - x3) * x3 * (m - x2) * (m - x2)))
}

/// Which case of the four-branch α definition fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaBranch {
    /// m ≥ n+k and k ≤ n: h₁(m, n, k).
    #[serde(rename = "h1-n-k")]
    H1Nk,
    /// m ≥ n+k and k ≥ n: h₁(m, k, n).
    #[serde(rename = "h1-k-n")]
    H1Kn,
    /// m ≤ n+k and k ≤ n: h₂(m, n, k).
    #[serde(rename = "h2-n-k")]
    H2Nk,
    /// m ≤ n+k and k ≥ n: h₂(m, k, n).
    #[serde(rename = "h2-k-n")]
    H2Kn,
    /// The bound's α-term vanishes (k = m or m = n); α is reported as 1.
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl fmt::Display for AlphaBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlphaBranch::H1Nk => "h1-n-k",
            AlphaBranch::H1Kn => "h1-k-n",
            AlphaBranch::H2Nk => "h2-n-k",
            AlphaBranch::H2Kn => "h2-k-n",
            AlphaBranch::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

fn alpha_from_h(h: f64) -> Result<f64> {
    if !(-BRANCH_TOL..=1.0 + BRANCH_TOL).contains(&h) {
        return Err(Error::Formula(format!(
            "h = {h} outside [0,1]; formula used off its domain"
        )));
    }
    let radicand = (1.0 - h).clamp(0.0, 1.0);
    Ok(0.5 + 0.5 * radicand.sqrt())
}

/// α of the main bound: four-branch selection on (m vs n+k) × (k vs n).
///
/// On the overlapping boundaries (m = n+k, k = n) every applicable branch is
/// evaluated and they must agree to 1e-12; a disagreement is reported as an
/// error rather than silently picking one.
pub fn alpha(m: usize, n: usize, k: usize) -> Result<(f64, AlphaBranch)> {
    if m < n + 1 {
        return Err(Error::Domain(format!(
            "alpha needs m >= n+1, got m={m}, n={n}"
        )));
    }
    if k < 1 || k > m - 1 {
        return Err(Error::Domain(format!(
            "alpha needs 1 <= k <= m-1, got k={k}, m={m}"
        )));
    }
    let (mf, nf, kf) = (m as f64, n as f64, k as f64);
    let mut branches: Vec<(AlphaBranch, f64)> = Vec::with_capacity(2);
    if m >= n + k && k <= n {
        branches.push((AlphaBranch::H1Nk, alpha_from_h(h1(mf, nf, kf)?)?));
    }
    if m >= n + k && k >= n {
        branches.push((AlphaBranch::H1Kn, alpha_from_h(h1(mf, kf, nf)?)?));
    }
    if m <= n + k && k <= n {
        branches.push((AlphaBranch::H2Nk, alpha_from_h(h2(mf, nf, kf)?)?));
    }
    if m <= n + k && k >= n {
        branches.push((AlphaBranch::H2Kn, alpha_from_h(h2(mf, kf, nf)?)?));
    }
    let (first_branch, first) = branches[0];
    for &(other_branch, other) in &branches[1..] {
        if (other - first).abs() > BRANCH_TOL {
            return Err(Error::Formula(format!(
                "alpha branches disagree at (m,n,k)=({m},{n},{k}): {first_branch}={first}, {other_branch}={other}"
            )));
        }
    }
    Ok((first, first_branch))
}

/// α for reports, tolerating the degenerate cases k = m and m = n where the
/// α-term of the bound vanishes and any α yields the same bound.
pub fn alpha_or_degenerate(m: usize, n: usize, k: usize) -> Result<(f64, AlphaBranch)> {
    if k == m || m == n {
        Ok((1.0, AlphaBranch::Degenerate))
    } else {
        alpha(m, n, k)
    }
}

/// The bound factor with a caller-supplied α (α = 1 reproduces the plain
/// greedy baseline on the k ≥ n side).
pub fn main_bound_with_alpha(m: usize, n: usize, k: usize, alpha: f64) -> f64 {
    let gap = n.abs_diff(k) as f64 + 1.0;
    let term = (k.min(n) * m) as f64 - (n * k) as f64;
    gap / (alpha * term + gap)
}

/// Main lower-bound factor on σ_min(A_{S₀})²/σ_min(A)² for the best size-k
/// subset: (|n−k|+1)/(α·(min(k,n)·m − n·k) + |n−k|+1).
pub fn main_bound(m: usize, n: usize, k: usize) -> Result<f64> {
    if n < 1 || m < n || k < 1 || k > m {
        return Err(Error::Domain(format!(
            "main_bound needs 1 <= n <= m and 1 <= k <= m, got m={m}, n={n}, k={k}"
        )));
    }
    let term = (k.min(n) * m) as f64 - (n * k) as f64;
    if term == 0.0 {
        // k = m or m = n: the only/forced selection already attains σ_min(A).
        return Ok(1.0);
    }
    let (a, _) = alpha(m, n, k)?;
    Ok(main_bound_with_alpha(m, n, k, a))
}

/// Basis-extraction corollary (k = n): 1/(α·n(m−n) + 1) with the two-branch α
/// split at m = 2n. Cross-checked against `main_bound(m, n, n)`.
pub fn corollary_bound(m: usize, n: usize) -> Result<f64> {
    if m < n + 1 {
        return Err(Error::Domain(format!(
            "corollary needs m >= n+1, got m={m}, n={n}"
        )));
    }
    let (mf, nf) = (m as f64, n as f64);
    let mut alphas: Vec<f64> = Vec::with_capacity(2);
    if m >= 2 * n {
        alphas.push(alpha_from_h(h1(mf, nf, nf)?)?);
    }
    if m <= 2 * n {
        alphas.push(alpha_from_h(h2(mf, nf, nf)?)?);
    }
    if alphas.len() == 2 && (alphas[0] - alphas[1]).abs() > BRANCH_TOL {
        return Err(Error::Formula(format!(
            "corollary alpha branches disagree at (m,n)=({m},{n})"
        )));
    }
    let a = alphas[0];
    let bound = 1.0 / (a * nf * (mf - nf) + 1.0);
    let main = main_bound(m, n, n)?;
    if (bound - main).abs() > BRANCH_TOL {
        return Err(Error::Formula(format!(
            "corollary bound {bound} disagrees with main bound {main} at (m,n)=({m},{n})"
        )));
    }
    Ok(bound)
}

/// g₁(m, x) = (x − √(x(m−x)/(m−1)))/m: the smaller root of
/// m(m−1)t² − 2x(m−1)t + x(x−1).
pub fn g1(m: f64, x: f64) -> Result<f64> {
    if !(2.0..=m - 1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "g1 needs 2 <= x <= m-1, got x={x}, m={m}"
        )));
    }
    Ok((x - (x * (m - x) / (m - 1.0)).sqrt()) / m)
}

/// g₂(m, x): the smallest root of
/// m(m−1)(m−2)t³ − 3x(m−1)(m−2)t² + 3x(x−1)(m−2)t − x(x−1)(x−2),
/// in the trigonometric form of the three-real-root resolution.
pub fn g2(m: f64, x: f64) -> Result<f64> {
    if !(3.0..=m - 1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "g2 needs 3 <= x <= m-1, got x={x}, m={m}"
        )));
    }
    let spread = (x * (m - x) / (m - 1.0)).sqrt();
    let raw = (m - 2.0 * x) / (m - 2.0) * ((m - 1.0) / (x * (m - x))).sqrt();
    if raw.abs() > 1.0 + BRANCH_TOL {
        return Err(Error::Domain(format!(
            "g2 arccos argument {raw} outside [-1,1]"
        )));
    }
    let angle = raw.clamp(-1.0, 1.0).acos() / 3.0 + 2.0 * std::f64::consts::PI / 3.0;
    Ok(x / m + 2.0 / m * spread * angle.cos())
}

/// The explicit-root bound of the k,n ∈ {2,3} theorem, when applicable.
pub fn explicit_bound(m: usize, n: usize, k: usize) -> Option<f64> {
    let mf = m as f64;
    if k == 2 && n >= 2 {
        g1(mf, n as f64).ok()
    } else if k == 3 && n >= 3 {
        g2(mf, n as f64).ok()
    } else if n == 2 && k >= 2 {
        g1(mf, k as f64).ok()
    } else if n == 3 && k >= 3 {
        g2(mf, k as f64).ok()
    } else {
        None
    }
}

/// Baseline bound values; each entry is present only on its stated domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    /// 1/(n(m−n)+1), for k = n on isotropic input.
    pub hong_pan: Option<f64>,
    /// (2−√2·√((m−2)/(m−1)))/m, the refined n = k = 2 value.
    pub hong_pan_n2: Option<f64>,
    /// (k−n+1)/(n(m−k)+k−n+1), greedy removal bound for n ≤ k ≤ m−1.
    pub greedy: Option<f64>,
    /// (√((k+1)(m−n)) − √(n(m−k−1)))²/m², for n ≤ k ≤ m−1.
    pub xu21: Option<f64>,
    /// (1−√(k/n))²·n/m, restricted-invertibility bound for k < n.
    pub spielman17: Option<f64>,
}

/// Evaluates every applicable baseline at (m, n, k).
pub fn baseline_bounds(m: usize, n: usize, k: usize) -> Baselines {
    let (mf, nf, kf) = (m as f64, n as f64, k as f64);
    let hong_pan = (k == n).then(|| 1.0 / (nf * (mf - nf) + 1.0));
    let hong_pan_n2 = (k == 2 && n == 2 && m >= 3)
        .then(|| (2.0 - 2.0f64.sqrt() * ((mf - 2.0) / (mf - 1.0)).sqrt()) / mf);
    let greedy = (n <= k && k < m).then(|| (kf - nf + 1.0) / (nf * (mf - kf) + kf - nf + 1.0));
    let xu21 = (n <= k && k < m).then(|| {
        let lhs = ((kf + 1.0) * (mf - nf)).sqrt();
        let rhs = (nf * (mf - kf - 1.0)).sqrt();
        (lhs - rhs).powi(2) / (mf * mf)
    });
    let spielman17 = (k < n).then(|| (1.0 - (kf / nf).sqrt()).powi(2) * nf / mf);
    Baselines {
        hong_pan,
        hong_pan_n2,
        greedy,
        xu21,
        spielman17,
    }
}

/// Strict-dominance flags of the main bound over each applicable baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dominance {
    pub main_gt_hong_pan: Option<bool>,
    pub main_gt_hong_pan_n2: Option<bool>,
    pub main_gt_greedy: Option<bool>,
    pub main_gt_xu21: Option<bool>,
    pub main_gt_spielman17: Option<bool>,
}

/// One (m, n, k) worth of bounds: α and its branch, the main factor, the
/// explicit root value when k or n is 2 or 3, baselines, and dominance flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub alpha_branch: AlphaBranch,
    pub main_bound: f64,
    pub explicit_bound: Option<f64>,
    pub baselines: Baselines,
    pub dominance: Dominance,
}

/// Full bound comparison at (m, n, k); needs m ≥ n+1 and 1 ≤ k ≤ m−1.
pub fn compare_report(m: usize, n: usize, k: usize) -> Result<BoundReport> {
    if m < n + 1 {
        return Err(Error::Domain(format!(
            "bound report needs m >= n+1, got m={m}, n={n}"
        )));
    }
    if k < 1 || k > m - 1 {
        return Err(Error::Domain(format!(
            "bound report needs 1 <= k <= m-1, got k={k}, m={m}"
        )));
    }
    let (alpha_val, alpha_branch) = alpha(m, n, k)?;
    let main = main_bound(m, n, k)?;
    let baselines = baseline_bounds(m, n, k);
    let dominance = Dominance {
        main_gt_hong_pan: baselines.hong_pan.map(|b| main > b),
        main_gt_hong_pan_n2: baselines.hong_pan_n2.map(|b| main > b),
        main_gt_greedy: baselines.greedy.map(|b| main > b),
        main_gt_xu21: baselines.xu21.map(|b| main > b),
        main_gt_spielman17: baselines.spielman17.map(|b| main > b),
    };
    Ok(BoundReport {
        m,
        n,
        k,
        alpha: alpha_val,
        alpha_branch,
        main_bound: main,
        explicit_bound: explicit_bound(m, n, k),
        baselines,
        dominance,
    })
}
