//! Dense real matrix layer: target matrices with detected rank, thin SVD,
//! isotropic (Parseval) frames in float and exact-rational form, and the
//! minimum singular value of column submatrices.

use nalgebra::{DMatrix, DVector};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{cayley_orthogonal, rat, RatMat};

/// Default relative threshold separating genuine rank deficiency from round-off.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Maximum allowed max-abs deviation of YYᵀ from I for float frames.
pub const FRAME_RESIDUAL_TOL: f64 = 1e-8;

/// Strictly increasing list of column indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetIndex {
    indices: Vec<usize>,
}

impl SubsetIndex {
    /// Requires strictly increasing indices.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(
                "indices must be strictly increasing".into(),
            ));
        }
        Ok(SubsetIndex { indices })
    }

    /// Sorts, then requires distinctness.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        SubsetIndex::new(indices)
    }

    pub fn empty() -> Self {
        SubsetIndex {
            indices: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// New subset with `i` inserted; errors when already present.
    pub fn with(&self, i: usize) -> Result<SubsetIndex> {
        if self.contains(i) {
            return Err(Error::InvalidSubset(format!("index {i} already chosen")));
        }
        let mut indices = self.indices.clone();
        indices.push(i);
        indices.sort_unstable();
        Ok(SubsetIndex { indices })
    }

    /// All indices lie in [0, m).
    pub fn validate_for(&self, m: usize) -> Result<()> {
        match self.indices.last() {
            Some(&last) if last >= m => Err(Error::InvalidSubset(format!(
                "index {last} out of range for {m} columns"
            ))),
            _ => Ok(()),
        }
    }
}

/// Dense real input matrix with its detected numerical rank.
#[derive(Debug, Clone)]
pub struct TargetMatrix {
    data: DMatrix<f64>,
    singular_values: Vec<f64>,
    rank: usize,
    rank_tolerance: f64,
}

impl TargetMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        Self::with_rank_tolerance(data, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tolerance(data: DMatrix<f64>, rank_tolerance: f64) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        let mut singular_values: Vec<f64> = data
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        singular_values.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        let sigma_max = singular_values.first().copied().unwrap_or(0.0);
        let rank = singular_values
            .iter()
            .filter(|&&s| s > rank_tolerance * sigma_max && s > 0.0)
            .count();
        Ok(TargetMatrix {
            data,
            singular_values,
            rank,
            rank_tolerance,
        })
    }

    /// Rows of equal length, row-major.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged rows in matrix input".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        TargetMatrix::new(DMatrix::from_row_slice(rows.len(), cols, &flat))
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Singular values, descending (all min(n, m) of them).
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Smallest positive singular value σ_r; the quantity every bound scales by.
    pub fn sigma_min_positive(&self) -> f64 {
        if self.rank == 0 {
            0.0
        } else {
            self.singular_values[self.rank - 1]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// Columns indexed by `s`, in order.
    pub fn submatrix(&self, s: &SubsetIndex) -> DMatrix<f64> {
        let cols: Vec<usize> = s.indices().to_vec();
        self.data.select_columns(&cols)
    }
}

/// Where a frame came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameOrigin {
    /// Built by exact rational construction (zero gram residual by arithmetic).
    ExactConstruction,
    /// The right factor of the thin SVD of a target matrix.
    SvdOfTarget,
    /// Orthonormalized random rows.
    RandomOrthonormal,
}

/// SVD factors attached to a frame produced by [`thin_svd`].
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// n×r matrix with orthonormal columns.
    pub u: DMatrix<f64>,
    /// Positive singular values, descending.
    pub sigma: Vec<f64>,
}

/// Y ∈ ℝ^{n×m} with YYᵀ = I_n (to tolerance).
#[derive(Debug, Clone)]
pub struct IsotropicFrame {
    matrix: DMatrix<f64>,
    gram_residual: f64,
    origin: FrameOrigin,
    svd_factors: Option<SvdFactors>,
}

impl IsotropicFrame {
    pub fn from_matrix(matrix: DMatrix<f64>, origin: FrameOrigin) -> Result<Self> {
        let residual = gram_residual(&matrix);
        if residual > FRAME_RESIDUAL_TOL {
            return Err(Error::NotIsotropic(residual));
        }
        Ok(IsotropicFrame {
            matrix,
            gram_residual: residual,
            origin,
            svd_factors: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn count(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> DVector<f64> {
        self.matrix.column(j).into_owned()
    }

    pub fn gram_residual(&self) -> f64 {
        self.gram_residual
    }

    pub fn origin(&self) -> FrameOrigin {
        self.origin
    }

    pub fn svd_factors(&self) -> Option<&SvdFactors> {
        self.svd_factors.as_ref()
    }

    /// Y_S Y_Sᵀ for a column subset.
    pub fn gram_of(&self, s: &SubsetIndex) -> Result<DMatrix<f64>> {
        s.validate_for(self.count())?;
        let n = self.dim();
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for j in s.iter() {
            let y = self.matrix.column(j);
            gram.ger(1.0, &y, &y, 1.0);
        }
        Ok(gram)
    }
}

fn gram_residual(y: &DMatrix<f64>) -> f64 {
    let n = y.nrows();
    let gram = y * y.transpose();
    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((gram[(i, j)] - target).abs());
        }
    }
    residual
}

/// Thin SVD A = U Σ Y of a rank-r target matrix.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub frame: IsotropicFrame,
}

/// Thin SVD restricted to the detected rank: U is n×r with orthonormal
/// columns, Σ holds the r positive singular values descending, and the
/// frame Y is r×m with YYᵀ = I_r.
pub fn thin_svd(a: &TargetMatrix) -> Result<ThinSvd> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let svd = a.data().clone().svd(true, true);
    let u_full = svd.u.expect("u requested");
    let v_t_full = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .expect("singular values are finite")
    });
    let r = a.rank();
    let kept: Vec<usize> = order[..r].to_vec();
    let u = u_full.select_columns(&kept);
    let sigma: Vec<f64> = kept.iter().map(|&i| svd.singular_values[i]).collect();
    let y = v_t_full.select_rows(&kept);
    let gram_res = gram_residual(&y);
    let frame = IsotropicFrame {
        matrix: y,
        gram_residual: gram_res,
        origin: FrameOrigin::SvdOfTarget,
        svd_factors: Some(SvdFactors {
            u,
            sigma: sigma.clone(),
        }),
    };
    if frame.gram_residual > FRAME_RESIDUAL_TOL {
        return Err(Error::NotIsotropic(frame.gram_residual));
    }
    Ok(ThinSvd {
        u: frame.svd_factors.as_ref().unwrap().u.clone(),
        sigma,
        frame,
    })
}

/// All singular values of the submatrix A_S, descending; there are
/// min(k, n) of them, computed from the smaller of the two Gram matrices.
pub fn singular_values_sub(a: &TargetMatrix, s: &SubsetIndex) -> Result<Vec<f64>> {
    s.validate_for(a.cols())?;
    if s.is_empty() {
        return Err(Error::InvalidSubset("subset must be nonempty".into()));
    }
    let sub = a.submatrix(s);
    let (n, k) = (sub.nrows(), sub.ncols());
    let gram = if k <= n {
        sub.transpose() * &sub
    } else {
        &sub * sub.transpose()
    };
    let eig = gram.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(vals)
}

/// σ_min(A_S): the min(k, n)-th largest singular value of A_S.
///
/// For k ≤ n this is min over unit x ∈ ℝᵏ of ‖A_S x‖; for k > n it is the
/// min over unit x ∈ ℝⁿ of ‖A_Sᵀ x‖. Both reduce to the smallest eigenvalue
/// of the smaller Gram matrix, which is the normative route here.
pub fn sigma_min_sub(a: &TargetMatrix, s: &SubsetIndex) -> Result<f64> {
    let vals = singular_values_sub(a, s)?;
    Ok(*vals.last().expect("nonempty subset checked"))
}

/// Rank-aware variant: the min(k, r)-th largest singular value of A_S,
/// which is what the bounds control when rank(A) = r replaces n.
pub fn sigma_min_sub_rank(a: &TargetMatrix, s: &SubsetIndex, r: usize) -> Result<f64> {
    let vals = singular_values_sub(a, s)?;
    let idx = s.size().min(r.max(1)) - 1;
    Ok(vals.get(idx).copied().unwrap_or(0.0))
}

/// Exactly isotropic frame over the rationals.
#[derive(Debug, Clone)]
pub struct RationalFrame {
    matrix: RatMat,
}

impl RationalFrame {
    /// Requires YYᵀ = I exactly.
    pub fn new(matrix: RatMat) -> Result<Self> {
        let n = matrix.rows();
        let m = matrix.cols();
        if n == 0 || n > m {
            return Err(Error::FrameShape { n, m });
        }
        let gram = matrix.mul(&matrix.transpose());
        if gram != RatMat::identity(n) {
            return Err(Error::NotIsotropic(
                gram.sub(&RatMat::identity(n)).max_abs_f64(),
            ));
        }
        Ok(RationalFrame { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn count(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.matrix
    }

    /// Y_S Y_Sᵀ, exact.
    pub fn gram_of(&self, s: &SubsetIndex) -> Result<RatMat> {
        s.validate_for(self.count())?;
        let n = self.dim();
        let mut gram = RatMat::zeros(n, n);
        for j in s.iter() {
            for a in 0..n {
                for b in 0..n {
                    let v = &self.matrix[(a, j)] * &self.matrix[(b, j)];
                    gram[(a, b)] = &gram[(a, b)] + &v;
                }
            }
        }
        Ok(gram)
    }

    /// Float view of the same frame. The conversion rounds each entry once,
    /// so the float residual is at machine-epsilon scale.
    pub fn to_frame(&self) -> IsotropicFrame {
        let matrix = self.matrix.to_f64();
        let gram_residual = gram_residual(&matrix);
        IsotropicFrame {
            matrix,
            gram_residual,
            origin: FrameOrigin::ExactConstruction,
            svd_factors: None,
        }
    }
}

/// Exactly isotropic frame from the Cayley transform of a rational
/// skew-symmetric m×m matrix: the first `dim` rows of (I−S)(I+S)⁻¹.
pub fn rational_isotropic_frame(skew: &RatMat, dim: usize) -> Result<RationalFrame> {
    let m = skew.rows();
    if dim == 0 || dim > m {
        return Err(Error::FrameShape { n: dim, m });
    }
    let q = cayley_orthogonal(skew)?;
    let y = RatMat::from_fn(dim, m, |i, j| q[(i, j)].clone());
    RationalFrame::new(y)
}

/// Deterministic rational skew-symmetric matrix with entries p/den, |p| ≤ max_num.
pub fn random_rational_skew(m: usize, max_num: i64, den: i64, seed: u64) -> RatMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = RatMat::zeros(m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            let p: i64 = rng.random_range(-max_num..=max_num);
            s[(i, j)] = rat(p, den);
            s[(j, i)] = rat(-p, den);
        }
    }
    s
}

/// Deterministic Gaussian matrix (standard normal entries, row-major fill).
pub fn random_gaussian(n: usize, m: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(n, m, |_, _| rng.sample(StandardNormal))
}

/// Random isotropic frame: Gaussian rows orthonormalized by modified
/// Gram–Schmidt with one reorthogonalization pass. Deterministic per seed.
pub fn random_isotropic_frame(n: usize, m: usize, seed: u64) -> Result<IsotropicFrame> {
    if n == 0 || n > m {
        return Err(Error::FrameShape { n, m });
    }
    let g = random_gaussian(n, m, seed);
    let mut rows: Vec<DVector<f64>> = (0..n).map(|i| g.row(i).transpose()).collect();
    for i in 0..n {
        for _pass in 0..2 {
            for j in 0..i {
                let proj = rows[i].dot(&rows[j]);
                let adj = &rows[j] * proj;
                rows[i] -= adj;
            }
        }
        let norm = rows[i].norm();
        if norm < 1e-12 {
            return Err(Error::Formula(
                "Gaussian rows were numerically dependent".into(),
            ));
        }
        rows[i] /= norm;
    }
    let y = DMatrix::from_fn(n, m, |i, j| rows[i][j]);
    let gram_residual = gram_residual(&y);
    if gram_residual > 1e-10 {
        return Err(Error::NotIsotropic(gram_residual));
    }
    Ok(IsotropicFrame {
        matrix: y,
        gram_residual,
        origin: FrameOrigin::RandomOrthonormal,
        svd_factors: None,
    })
}
