//! Quantum Fourier transform on a sub-register.
//!
//! `qubits[0]` is the least significant bit of the sub-register value `j`;
//! the forward transform maps `|j⟩ → 2^{-m/2} Σ_k ω^{jk} |k⟩` with
//! `ω = e^{2πi/2^m}`, final bit-reversal swaps included.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::gates::{ControlledOp, H};
use super::StateVector;
use crate::error::{Error, Result};

impl StateVector {
    pub fn apply_qft(&mut self, qubits: &[usize], inverse: bool) -> Result<()> {
        let mut seen = 0usize;
        for &q in qubits {
            self.check_qubit(q)?;
            if seen & (1 << q) != 0 {
                return Err(Error::InvalidQubits(format!("duplicate qubit {q} in QFT")));
            }
            seen |= 1 << q;
        }
        if qubits.is_empty() {
            return Ok(());
        }
        if qubits.len() == self.n() && qubits.iter().enumerate().all(|(i, &q)| i == q) {
            self.qft_full_fft(inverse);
            Ok(())
        } else {
            self.qft_gates(qubits, inverse)
        }
    }

    /// Gate-level circuit; always available, used as the reference.
    pub fn qft_gates(&mut self, qubits: &[usize], inverse: bool) -> Result<()> {
        let m = qubits.len();
        if !inverse {
            for i in (0..m).rev() {
                self.kernel_1q(qubits[i], 0, &H);
                for j in (0..i).rev() {
                    let theta = PI / (1u64 << (i - j)) as f64;
                    self.apply_controlled(&[qubits[j]], ControlledOp::Phase(qubits[i], theta))?;
                }
            }
            for i in 0..m / 2 {
                self.swap(qubits[i], qubits[m - 1 - i])?;
            }
        } else {
            for i in 0..m / 2 {
                self.swap(qubits[i], qubits[m - 1 - i])?;
            }
            for i in 0..m {
                for j in 0..i {
                    let theta = -PI / (1u64 << (i - j)) as f64;
                    self.apply_controlled(&[qubits[j]], ControlledOp::Phase(qubits[i], theta))?;
                }
                self.kernel_1q(qubits[i], 0, &H);
            }
        }
        Ok(())
    }

    fn qft_full_fft(&mut self, inverse: bool) {
        let len = self.len();
        let mut planner = FftPlanner::<f64>::new();
        // rustfft's "inverse" carries e^{+2πi jk/N}, which is the forward QFT.
        let fft = if inverse {
            planner.plan_fft_forward(len)
        } else {
            planner.plan_fft_inverse(len)
        };
        let amps = self.amps_mut();
        fft.process(amps);
        let scale = 1.0 / (len as f64).sqrt();
        for z in amps.iter_mut() {
            *z *= scale;
        }
    }
}

/// Dense DFT matrix entry ω^{jk}/√M, used by tests.
pub fn dft_entry(m: usize, j: usize, k: usize) -> C64 {
    let dim = 1usize << m;
    let angle = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
    C64::from_polar(1.0 / (dim as f64).sqrt(), angle)
}
