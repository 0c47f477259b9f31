//! Shared fixtures for the kernel benchmarks.

use entrack_core::{Bipartition, StateVector, Stream};

/// Seeded Haar-random state with its natural bipartition.
pub fn random_state(n: usize, seed: u64) -> (StateVector, Bipartition) {
    let state = StateVector::random(n, Stream::new(seed)).expect("fixture size within limits");
    let part = Bipartition::natural(n).expect("n >= 1");
    (state, part)
}
