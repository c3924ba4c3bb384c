use thiserror::Error;

/// Errors shared across the lattice, Higgs, solver and limits modules.
#[derive(Debug, Error)]
pub enum HsError {
    #[error("invalid form degree: {context} would leave bidegree ({p},{q}) outside 0..={n}")]
    InvalidDegree { context: &'static str, p: isize, q: isize, n: usize },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("ill-conditioned metric: condition number {cond:.3e} exceeds {limit:.1e}")]
    Conditioning { cond: f64, limit: f64 },

    #[error("matrix field is singular at site {site}")]
    Singular { site: usize },

    #[error("integrability violated: ‖φ∧φ‖ = {norm:.3e} exceeds tolerance {tol:.1e}")]
    Integrability { norm: f64, tol: f64 },

    #[error("spectral data not in the rank-one locus at site {site}: residual {residual:.3e}")]
    NotInBx { site: usize, residual: f64 },

    #[error("near-degenerate spectrum: eigenvalue gap {gap:.3e} below tolerance {tol:.1e}")]
    DegenerateSpectrum { gap: f64, tol: f64 },

    #[error("rank overflow: {requested} exceeds supported maximum {max}")]
    RankOverflow { requested: usize, max: usize },

    #[error("moment-map flow diverged at iteration {iteration}: residual {residual:.3e} grew 10x from minimum {min_residual:.3e}")]
    Divergence { iteration: usize, residual: f64, min_residual: f64 },

    #[error("no spectral data: the limiting characteristic coefficients vanish identically")]
    NoSpectralData,

    #[error("field cannot be normalized: L² norm is zero")]
    Normalization,

    #[error("sweep stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<HsError>,
    },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed field dump: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, HsError>;
