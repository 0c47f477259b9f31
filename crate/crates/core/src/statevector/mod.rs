//! Dense n-qubit statevector simulation.
//!
//! Qubit 0 is the least significant bit of the basis index, so the basis
//! state `|p_{n−1} … p_0⟩` is stored at index `Σ p_k 2^k`.

mod bipartition;
pub mod gates;
mod qft;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::Stream;

pub use bipartition::Bipartition;
pub use gates::{ControlledOp, Gate2};
pub use qft::dft_entry;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Below this many amplitudes kernels stay sequential.
pub(crate) const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    Ok(())
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn new_basis(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        if index >= 1usize << n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Equal superposition of all 2^n basis states.
    pub fn new_uniform(n: usize) -> Result<Self> {
        check_size(n)?;
        if n == 0 {
            return Err(Error::InvalidQubits("uniform state needs n >= 1".into()));
        }
        let a = (-(n as f64) / 2.0 * std::f64::consts::LN_2).exp();
        Ok(Self {
            n,
            amps: vec![C64::new(a, 0.0); 1 << n],
        })
    }

    /// Wraps amplitudes whose length is a power of two and whose norm is 1
    /// within 1e-9.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!("{len} amplitudes is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        check_size(n)?;
        let s = Self { n, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Dimension(format!("state norm² {norm} is not 1")));
        }
        Ok(s)
    }

    /// Normalizes arbitrary (non-zero) amplitudes.
    pub fn from_unnormalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Dimension("cannot normalize a zero vector".into()));
        }
        for z in &mut amps {
            *z /= norm;
        }
        Self::from_amplitudes(amps)
    }

    /// Haar-random pure state (normalized complex Gaussian vector).
    pub fn random(n: usize, stream: Stream) -> Result<Self> {
        check_size(n)?;
        let mut rng = stream.rng();
        let amps = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_unnormalized(amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// |⟨self|other⟩|², for states of equal size.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .norm_sqr()
    }

    /// Probability that the listed qubits read `value` (qubits[0] is the
    /// least significant bit of `value`).
    pub fn register_probability(&self, qubits: &[usize], value: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                qubits
                    .iter()
                    .enumerate()
                    .all(|(k, &q)| ((i >> q) & 1) == ((value >> k) & 1))
            })
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::InvalidQubits(format!(
                "qubit {q} out of range for {} qubits",
                self.n
            )));
        }
        Ok(())
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// Probability of reading 1 on `target`.
    pub fn prob_one(&self, target: usize) -> Result<f64> {
        self.check_qubit(target)?;
        let bit = 1usize << target;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }

    /// Projects `target` onto `outcome` and renormalizes.
    pub fn project(&mut self, target: usize, outcome: u8) -> Result<()> {
        let p1 = self.prob_one(target)?;
        let p = if outcome == 1 { p1 } else { 1.0 - p1 };
        if p < 1e-12 {
            return Err(Error::ImpossibleBranch { probability: p });
        }
        let bit = 1usize << target;
        let keep = if outcome == 1 { bit } else { 0 };
        let scale = 1.0 / p.sqrt();
        for (i, z) in self.amps.iter_mut().enumerate() {
            if i & bit == keep {
                *z *= scale;
            } else {
                *z = C64::new(0.0, 0.0);
            }
        }
        Ok(())
    }

    /// Born-rule measurement of one qubit; the state collapses in place.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, target: usize, rng: &mut R) -> Result<u8> {
        let p1 = self.prob_one(target)?;
        let u: f64 = rng.random();
        let outcome = u8::from(u < p1);
        self.project(target, outcome)?;
        Ok(outcome)
    }

    /// Applies the basis permutation `|i⟩ → |f(i)⟩`.
    ///
    /// Used as the fast path for classical reversible blocks; `f` must be a
    /// bijection on `0..2^n`.
    pub fn apply_permutation<F>(&mut self, f: F) -> Result<()>
    where
        F: Fn(usize) -> usize + Sync,
    {
        let len = self.amps.len();
        let mut out = vec![C64::new(0.0, 0.0); len];
        let mut seen = vec![false; len];
        for (i, &a) in self.amps.iter().enumerate() {
            let j = f(i);
            if j >= len || seen[j] {
                return Err(Error::NotPermutation);
            }
            seen[j] = true;
            out[j] = a;
        }
        self.amps = out;
        Ok(())
    }

    /// Multiplies each amplitude by `phase(i)`, which must have unit modulus.
    pub fn apply_diagonal<F>(&mut self, phase: F)
    where
        F: Fn(usize) -> C64 + Sync,
    {
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, z)| *z *= phase(i));
        } else {
            for (i, z) in self.amps.iter_mut().enumerate() {
                *z *= phase(i);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_constructor() {
        let s = StateVector::new_basis(2, 0).unwrap();
        assert_eq!(s.amplitude(0), C64::new(1.0, 0.0));
        let x = StateVector::new_basis(4, 1).unwrap();
        assert_eq!(x.probability(1), 1.0);
        assert!(matches!(
            StateVector::new_basis(1, 2),
            Err(Error::IndexOutOfRange { index: 2, n: 1 })
        ));
        assert!(matches!(
            StateVector::new_basis(25, 0),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn uniform_constructor() {
        let s = StateVector::new_uniform(1).unwrap();
        assert!((s.amplitude(0).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let s2 = StateVector::new_uniform(2).unwrap();
        assert!(s2.amplitudes().iter().all(|z| (z.re - 0.5).abs() < 1e-15));
        let s10 = StateVector::new_uniform(10).unwrap();
        assert!((s10.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_certain_outcome() {
        let mut s = StateVector::new_basis(1, 1).unwrap();
        let mut rng = Stream::new(0).rng();
        for _ in 0..10 {
            assert_eq!(s.measure_qubit(0, &mut rng).unwrap(), 1);
        }
        assert!(matches!(
            s.project(0, 0),
            Err(Error::ImpossibleBranch { .. })
        ));
    }

    #[test]
    fn measurement_is_seed_reproducible() {
        let run = |seed| {
            let mut rng = Stream::new(seed).rng();
            (0..32)
                .map(|_| {
                    let mut s = StateVector::new_basis(1, 0).unwrap();
                    s.apply_1q(0, gates::H).unwrap();
                    s.measure_qubit(0, &mut rng).unwrap()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(11), run(11));
        assert_ne!(run(11), run(12));
    }

    #[test]
    fn bell_collapse() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); 4];
        amps[0] = C64::new(h, 0.0);
        amps[3] = C64::new(h, 0.0);
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        s.project(0, 0).unwrap();
        assert!((s.probability(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        let mut s = StateVector::new_uniform(3).unwrap();
        assert_eq!(s.apply_permutation(|i| i / 2), Err(Error::NotPermutation));
        s.apply_permutation(|i| (i + 3) % 8).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn register_probability_reads_bits() {
        let s = StateVector::new_basis(4, 0b1010).unwrap();
        assert_eq!(s.register_probability(&[1, 3], 0b11), 1.0);
        assert_eq!(s.register_probability(&[0, 1], 0b10), 1.0);
        assert_eq!(s.register_probability(&[0, 1], 0b01), 0.0);
    }
}
