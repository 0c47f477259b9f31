//! Entanglement trajectories of simulated quantum algorithms.
//!
//! The crate simulates desk-scale quantum computations on a dense
//! statevector, samples reduced-density-matrix spectra at checkpoints and
//! compares the resulting `(λ0, entropy)` trajectories against the tight
//! analytic boundaries and the random-matrix flexible boundaries.

pub mod boundaries;
pub mod error;
pub mod export;
pub mod numerics;
pub mod rmt;
pub mod rng;
pub mod scenarios;
pub mod spectral;
pub mod statevector;
pub mod tolerances;

pub use boundaries::{BoundaryCurve, CurveName, CurveParams};
pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, C64};
pub use rng::Stream;
pub use spectral::{ReducedDensityMatrix, Spectrum, TrajectoryPoint};
pub use statevector::{Bipartition, StateVector};
