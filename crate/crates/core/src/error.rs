use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group element is at or beyond the cut locus of exp")]
    OutOfPrincipalDomain,
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("tangent vector is not based at the given point")]
    BaseMismatch,
    #[error("diffeomorphism is not invertible: shear bound {bound} >= 1")]
    NotInvertible { bound: f64 },
    #[error("groupoid elements are not composable: range of the first differs from source of the second")]
    NotComposable,
    #[error("groupoid elements are of different variants")]
    VariantMismatch,
    #[error("hbar = {0} is outside (0, 1]")]
    HbarOutOfRange(f64),
    #[error("graph not supported: {0}")]
    UnsupportedGraph(String),
    #[error("band overflow: {residual:e} exceeds the tolerance {tolerance:e}")]
    BandOverflow { residual: f64, tolerance: f64 },
    #[error("grid or matrix dimension mismatch: {0}")]
    GridMismatch(String),
    #[error("hbar = {hbar} is not admissible on a grid of {grid} points (need 1/m with integer 1 <= m <= grid/2)")]
    HbarNotAdmissible { hbar: f64, grid: usize },
    #[error("polynomial degree {degree} exceeds the representable bound {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("symbol is not affine on the dual algebra (degree {0}); no operator ordering is fixed")]
    NonlinearSymbol(usize),
    #[error("operator quantization on L2({0}) is not implemented")]
    UnsupportedGroup(&'static str),
    #[error("mollifier width {width} is below twice the group grid spacing {spacing}")]
    WidthTooSmallForGrid { width: f64, spacing: f64 },
    #[error("graph system has no refinement data below level {0}")]
    NoRefinement(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("cannot read {path}: {source}")]
    FileUnreadable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
