//! Reproducible trajectory generators: adiabatic Exact Cover, Grover with a
//! pluggable oracle, semiclassical Shor, and k-almost Prime states.

pub mod exact_cover;
pub mod grover;
pub mod primes;
pub mod shor;

use serde::{Deserialize, Serialize};

use crate::boundaries::{flexible_e, tight_containment};
use crate::spectral::TrajectoryPoint;
use crate::tolerances;

pub use exact_cover::{
    adiabatic_trajectory, ec_ground_state, ec_hamiltonians, EcHamiltonian, EcInstance,
};
pub use grover::{
    grover_custom_oracle_trajectory, grover_ec_trajectory, grover_iterations, EcOracle,
    GroverOracle, GroverRun, TableOracle,
};
pub use primes::{omega, omega_sieve, prime_state, prime_trajectory, PrimeKind, PrimeStateSpec};
pub use shor::{shor_trajectory, ShorConfig, ShorOutcome, ShorRun};

/// Ordered checkpoints of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub scenario: String,
    pub config: serde_json::Value,
    pub points: Vec<TrajectoryPoint>,
    pub seeds: Vec<u64>,
}

/// A point sitting above the flexible curve by more than the slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlexibleExceedance {
    pub sequence: usize,
    pub label: String,
    pub excess: f64,
}

impl Trajectory {
    pub fn new(scenario: impl Into<String>, config: serde_json::Value) -> Self {
        Self {
            scenario: scenario.into(),
            config,
            points: Vec::new(),
            seeds: Vec::new(),
        }
    }

    /// Appends a point, assigning the next sequence number.
    pub fn push(&mut self, point: TrajectoryPoint) {
        let seq = self.points.len();
        self.points.push(point.with_sequence(seq));
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sequence numbers of points outside the tight region.
    pub fn containment_violations(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| !tight_containment(p.lambda0, p.entropy, p.alpha, tolerances::CONTAINMENT.value))
            .map(|p| p.sequence)
            .collect()
    }

    /// Points with E > flexible_E(λ0, α, β) + slack. These are findings,
    /// not errors: the flexible curve is a typical value, not a bound.
    pub fn flexible_exceedances(&self, slack: f64) -> Vec<FlexibleExceedance> {
        self.points
            .iter()
            .filter_map(|p| {
                let f = flexible_e(p.lambda0.min(1.0), p.alpha as f64, p.beta as f64).ok()?;
                let excess = p.entropy - f;
                (excess > slack).then(|| FlexibleExceedance {
                    sequence: p.sequence,
                    label: p.label.clone(),
                    excess,
                })
            })
            .collect()
    }
}
