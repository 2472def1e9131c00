//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by geometry, quadrature, solvers, and the scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),

    #[error("degenerate semi-axes: all must be strictly positive, got {0:?}")]
    DegenerateAxes([f64; 3]),

    #[error("point lies on the focal degenerate set; confocal coordinates are not uniquely defined there")]
    DegenerateCoordinates,

    #[error("subdivision level {0} exceeds the maximum of {1}")]
    SubdivisionTooLarge(u32, u32),

    #[error("iteration failed to contract in {context}")]
    ConvergenceFailure { context: &'static str },

    #[error("finite-difference stencil at ({0}, {1}, {2}) with step {3} leaves the shell")]
    StencilLeavesShell(f64, f64, f64, f64),

    #[error("interface system is singular for the given conductivities")]
    SingularInterfaceSystem,

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("no positive root for the matrix conductivity")]
    NoPositiveRoot,

    #[error("field evaluated outside its domain at ({0}, {1}, {2})")]
    EvaluationOutsideDomain(f64, f64, f64),

    #[error("collocation matrix is rank deficient: achieved rank {rank} of {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("auxiliary source surface intersects the shell")]
    SourceSurfaceIntersectsShell,

    #[error("radial fit needs at least 3 radii, got {0}")]
    InsufficientRadii(usize),

    #[error("seed required for stochastic task `{0}`")]
    SeedRequired(String),

    #[error("quadratic fit is ill-conditioned: sample spread is degenerate")]
    IllConditionedFit,

    #[error("contrast parameter undefined: {0}")]
    ContrastSingular(&'static str),

    #[error("core and shell meshes intersect or are not strictly nested")]
    MeshesIntersect,

    #[error("fundamental solution is singular at the origin")]
    SingularPoint,

    #[error("mesh is not a closed oriented surface: {0}")]
    InvalidMesh(String),

    #[error("disconnected shell region is not supported")]
    DisconnectedShell,

    #[error("scenario schema error: {0}")]
    SchemaError(String),

    #[error("threshold failed: {0}")]
    ThresholdFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
