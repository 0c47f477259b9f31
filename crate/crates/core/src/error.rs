use thiserror::Error;

/// Errors raised by the simulation and analysis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("eigenvalue {value:.3e} below PSD tolerance")]
    NotPsd { value: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    EigenNoConvergence { sweeps: usize, off: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound:.3e}")]
    QuadratureNoConvergence { estimate: f64, error_bound: f64 },

    #[error("unsupported integration degree {0} (supported: 2..=6)")]
    UnsupportedDegree(u32),

    #[error("{what} = {value} outside domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("basis index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("qubit count {n} exceeds configured maximum {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("invalid qubit specification: {0}")]
    InvalidQubits(String),

    #[error("gate is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("measurement branch has vanishing probability {probability:.3e}")]
    ImpossibleBranch { probability: f64 },

    #[error("mapping is not a permutation of the basis")]
    NotPermutation,

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("Rényi degree 1 is the von Neumann entropy; call von_neumann instead")]
    RenyiDegreeOne,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("iterative solver did not converge: residual {residual:.3e}")]
    SolverNoConvergence { residual: f64 },

    #[error("oracle contract violated: {0}")]
    OracleContract(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty support: {0}")]
    EmptySupport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
