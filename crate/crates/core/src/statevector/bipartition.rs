use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Split of an n-qubit register into subsystem A and its complement.
///
/// `subsystem[k]` supplies bit k of the row index of the reshaped
/// coefficient matrix; `complement` likewise for the column index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    subsystem: Vec<usize>,
    complement: Vec<usize>,
    swapped: bool,
}

impl Bipartition {
    /// Builds a bipartition, relabelling so that A is the smaller side.
    pub fn new(n: usize, subsystem: &[usize]) -> Result<Self> {
        let mut b = Self::unordered(n, subsystem)?;
        if b.subsystem.len() > b.complement.len() {
            std::mem::swap(&mut b.subsystem, &mut b.complement);
            b.swapped = true;
        }
        Ok(b)
    }

    /// Keeps the requested subsystem as A even when it is the larger side.
    pub fn unordered(n: usize, subsystem: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidBipartition("empty register".into()));
        }
        let mut used = vec![false; n];
        for &q in subsystem {
            if q >= n {
                return Err(Error::InvalidBipartition(format!(
                    "qubit {q} outside register of {n}"
                )));
            }
            if used[q] {
                return Err(Error::InvalidBipartition(format!("qubit {q} listed twice")));
            }
            used[q] = true;
        }
        let complement = (0..n).filter(|&q| !used[q]).collect();
        Ok(Self {
            n,
            subsystem: subsystem.to_vec(),
            complement,
            swapped: false,
        })
    }

    /// High ⌊n/2⌋ qubits against the low ⌈n/2⌉.
    pub fn natural(n: usize) -> Result<Self> {
        let high: Vec<usize> = (n - n / 2..n).collect();
        Self::new(n, &high)
    }

    /// Seeded shuffle of the qubit indices; the first ⌊n/2⌋ form A.
    pub fn random_half(n: usize, stream: Stream) -> Result<Self> {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut stream.rng());
        let mut a = idx[..n / 2].to_vec();
        a.sort_unstable();
        Self::new(n, &a)
    }

    /// The same cut with the two sides exchanged, without reordering.
    pub fn flipped(&self) -> Self {
        Self {
            n: self.n,
            subsystem: self.complement.clone(),
            complement: self.subsystem.clone(),
            swapped: !self.swapped,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subsystem(&self) -> &[usize] {
        &self.subsystem
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// True when the caller's requested subsystem became the complement.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    pub fn alpha(&self) -> usize {
        1 << self.subsystem.len()
    }

    pub fn beta(&self) -> usize {
        1 << self.complement.len()
    }
}
