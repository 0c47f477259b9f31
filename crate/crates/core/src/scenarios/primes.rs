//! k-almost Prime states and their unions.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Trajectory;
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::spectral::{qft_compare, trajectory_point, TrajectoryPoint};
use crate::statevector::{Bipartition, StateVector};

pub const MAX_PRIME_QUBITS: usize = 20;

/// Ω(x) for every x < `limit` via a smallest-prime-factor sieve
/// (Ω(0) = Ω(1) = 0).
pub fn omega_sieve(limit: usize) -> Vec<u8> {
    let mut spf = vec![0u32; limit];
    for i in 2..limit {
        if spf[i] == 0 {
            let mut j = i;
            while j < limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut omega = vec![0u8; limit];
    for x in 2..limit {
        omega[x] = omega[x / spf[x] as usize] + 1;
    }
    omega
}

/// Number of prime factors of `x` counted with multiplicity.
pub fn omega(x: u64) -> Result<u32> {
    if x < 2 {
        return Err(Error::Domain {
            what: "x",
            value: x as f64,
            domain: "[2, ∞)",
        });
    }
    let (mut x, mut count, mut p) = (x, 0, 2u64);
    while p * p <= x {
        while x % p == 0 {
            x /= p;
            count += 1;
        }
        p += 1;
    }
    Ok(count + u32::from(x > 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeKind {
    /// Exactly k prime factors.
    P,
    /// At most k prime factors.
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeStateSpec {
    pub n: usize,
    pub kind: PrimeKind,
    pub k: u32,
}

impl PrimeStateSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_PRIME_QUBITS || !self.n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "prime states need even n in 2..={MAX_PRIME_QUBITS}, got {}",
                self.n
            )));
        }
        if self.k == 0 || self.k as usize >= self.n {
            return Err(Error::Config(format!("k = {} outside 1..n-1", self.k)));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self.kind {
            PrimeKind::P => format!("P_{}", self.k),
            PrimeKind::U => format!("U_{}", self.k),
        }
    }

    fn includes(&self, omega: u8) -> bool {
        let w = u32::from(omega);
        match self.kind {
            PrimeKind::P => w == self.k,
            PrimeKind::U => w >= 1 && w <= self.k,
        }
    }
}

/// Integers in [2, 2^n) selected by `spec`, ascending.
pub fn prime_support(spec: &PrimeStateSpec, sieve: &[u8]) -> Result<Vec<usize>> {
    spec.validate()?;
    let limit = 1usize << spec.n;
    if sieve.len() < limit {
        return Err(Error::Dimension(format!("sieve of {} entries below 2^{}", sieve.len(), spec.n)));
    }
    let support: Vec<usize> = (2..limit).filter(|&x| spec.includes(sieve[x])).collect();
    if support.is_empty() {
        return Err(Error::EmptySupport(spec.label()));
    }
    Ok(support)
}

fn state_from_support(n: usize, support: &[usize]) -> Result<StateVector> {
    let a = 1.0 / (support.len() as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for &x in support {
        amps[x] = C64::new(a, 0.0);
    }
    StateVector::from_amplitudes(amps)
}

/// Uniform superposition over the support of `spec`.
pub fn prime_state(spec: &PrimeStateSpec) -> Result<StateVector> {
    spec.validate()?;
    let sieve = omega_sieve(1 << spec.n);
    state_from_support(spec.n, &prime_support(spec, &sieve)?)
}

/// Points for P_k and U_k, k = 1..n−1, under the natural bipartition;
/// with `with_qft` each is followed by its full-register QFT image.
pub fn prime_trajectory(n: usize, with_qft: bool) -> Result<Trajectory> {
    PrimeStateSpec {
        n,
        kind: PrimeKind::P,
        k: 1,
    }
    .validate()?;
    let sieve = omega_sieve(1 << n);
    let part = Bipartition::natural(n)?;
    let all: Vec<usize> = (0..n).collect();
    let degrees = [2.0, 3.0];
    let mut traj = Trajectory::new("primes", json!({ "n": n, "qft": with_qft }));
    let mut counts = Vec::new();
    for k in 1..n as u32 {
        for kind in [PrimeKind::P, PrimeKind::U] {
            let spec = PrimeStateSpec { n, kind, k };
            let support = prime_support(&spec, &sieve)?;
            if kind == PrimeKind::P {
                counts.push(support.len());
            }
            let state = state_from_support(n, &support)?;
            if with_qft {
                let (before, after) = qft_compare(&state, &part, &all, &degrees)?;
                traj.push(relabel(before, spec.label()));
                traj.push(relabel(after, format!("qft({})", spec.label())));
            } else {
                traj.push(trajectory_point(&state, &part, spec.label(), &degrees)?);
            }
        }
    }
    traj.config["pi_k"] = json!(counts);
    Ok(traj)
}

fn relabel(mut p: TrajectoryPoint, label: String) -> TrajectoryPoint {
    p.label = label;
    p
}
