//! Single-qubit gates and controlled operations.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{StateVector, PAR_THRESHOLD};
use crate::error::{Error, Result};

/// Row-major 2×2 gate matrix.
pub type Gate2 = [[C64; 2]; 2];

const O: C64 = C64 { re: 0.0, im: 0.0 };
const I1: C64 = C64 { re: 1.0, im: 0.0 };
const S2: C64 = C64 {
    re: FRAC_1_SQRT_2,
    im: 0.0,
};

pub const H: Gate2 = [[S2, S2], [S2, C64 { re: -FRAC_1_SQRT_2, im: 0.0 }]];
pub const X: Gate2 = [[O, I1], [I1, O]];
pub const Z: Gate2 = [[I1, O], [O, C64 { re: -1.0, im: 0.0 }]];
pub const IDENTITY: Gate2 = [[I1, O], [O, I1]];

/// diag(1, e^{iθ}).
pub fn phase(theta: f64) -> Gate2 {
    [[I1, O], [O, C64::from_polar(1.0, theta)]]
}

/// Rotation about X by angle θ.
pub fn rx(theta: f64) -> Gate2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ]
}

/// max |(U†U − I)_{ij}|.
pub fn unitarity_deviation(g: &Gate2) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut s = O;
            for k in 0..2 {
                s += g[k][i].conj() * g[k][j];
            }
            let target = if i == j { I1 } else { O };
            dev = dev.max((s - target).norm());
        }
    }
    dev
}

fn check_unitary(g: &Gate2) -> Result<()> {
    let deviation = unitarity_deviation(g);
    if deviation > 1e-12 {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Operation applied on the subspace where all controls read 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlledOp {
    X(usize),
    Swap(usize, usize),
    Phase(usize, f64),
    Unitary(usize, Gate2),
}

impl ControlledOp {
    fn targets(&self) -> Vec<usize> {
        match *self {
            ControlledOp::X(t) | ControlledOp::Phase(t, _) | ControlledOp::Unitary(t, _) => vec![t],
            ControlledOp::Swap(a, b) => vec![a, b],
        }
    }
}

#[inline]
fn apply_pair(g: &Gate2, a: &mut C64, b: &mut C64) {
    let (x, y) = (*a, *b);
    *a = g[0][0] * x + g[0][1] * y;
    *b = g[1][0] * x + g[1][1] * y;
}

impl StateVector {
    /// Applies `gate` to `target`.
    pub fn apply_1q(&mut self, target: usize, gate: Gate2) -> Result<()> {
        self.check_qubit(target)?;
        check_unitary(&gate)?;
        self.kernel_1q(target, 0, &gate);
        Ok(())
    }

    /// Applies `op` where every qubit in `controls` is 1.
    pub fn apply_controlled(&mut self, controls: &[usize], op: ControlledOp) -> Result<()> {
        let targets = op.targets();
        let mut mask = 0usize;
        for &q in controls.iter().chain(&targets) {
            self.check_qubit(q)?;
        }
        for &c in controls {
            if mask & (1 << c) != 0 || targets.contains(&c) {
                return Err(Error::InvalidQubits(format!(
                    "control {c} repeated or overlaps a target"
                )));
            }
            mask |= 1 << c;
        }
        match op {
            ControlledOp::X(t) => self.kernel_1q(t, mask, &X),
            ControlledOp::Unitary(t, g) => {
                check_unitary(&g)?;
                self.kernel_1q(t, mask, &g);
            }
            ControlledOp::Phase(t, theta) => {
                let sel = mask | (1 << t);
                let w = C64::from_polar(1.0, theta);
                self.apply_diagonal(|i| if i & sel == sel { w } else { I1 });
            }
            ControlledOp::Swap(a, b) => {
                if a == b {
                    return Err(Error::InvalidQubits(format!("swap of qubit {a} with itself")));
                }
                let (ba, bb) = (1usize << a, 1usize << b);
                let amps = self.amps_mut();
                for i in 0..amps.len() {
                    if i & mask == mask && i & ba != 0 && i & bb == 0 {
                        amps.swap(i, i ^ ba ^ bb);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.apply_controlled(&[control], ControlledOp::X(target))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.apply_controlled(&[], ControlledOp::Swap(a, b))
    }

    /// Stride-partitioned 2×2 kernel restricted to indices containing `mask`.
    pub(crate) fn kernel_1q(&mut self, target: usize, mask: usize, g: &Gate2) {
        let stride = 1usize << target;
        let amps = self.amps_mut();
        let work = |(block, chunk): (usize, &mut [C64])| {
            let base = block * 2 * stride;
            let (lo, hi) = chunk.split_at_mut(stride);
            for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + j) & mask == mask {
                    apply_pair(g, a, b);
                }
            }
        };
        if amps.len() >= PAR_THRESHOLD {
            amps.par_chunks_mut(2 * stride).enumerate().for_each(work);
        } else {
            amps.chunks_mut(2 * stride).enumerate().for_each(work);
        }
    }
}
