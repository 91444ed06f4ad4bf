use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero matrix has no frame")]
    ZeroMatrix,

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("frame requires 1 <= n <= m, got n={n}, m={m}")]
    FrameShape { n: usize, m: usize },

    #[error("I + S is singular over the rationals; Cayley transform undefined")]
    SingularCayley,

    #[error("matrix not skew-symmetric")]
    NotSkewSymmetric,

    #[error("matrix not symmetric within tolerance (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("frame residual {0:.3e} exceeds isotropy tolerance")]
    NotIsotropic(f64),

    #[error("polynomial not numerically real-rooted: residual imaginary part {residual:.3e} exceeds {tolerance:.3e}")]
    NotRealRooted { residual: f64, tolerance: f64 },

    #[error("{base} does not divide the polynomial: residual magnitude {residual:.3e}")]
    NotDivisible { base: &'static str, residual: f64 },

    #[error("polynomial degree {degree} exceeds Bernstein basis degree {basis}")]
    BernsteinDegree { degree: usize, basis: usize },

    #[error("combinatorial guard exceeded: C({m},{k}) > {cap}")]
    TooManySubsets { m: usize, k: usize, cap: u64 },

    #[error("parameter domain violation: {0}")]
    Domain(String),

    #[error("internal formula violation: {0}")]
    Formula(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("input parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
