//! Partial trace, entanglement spectrum and entanglement measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigvalsh, ComplexMatrix};
use crate::statevector::{Bipartition, StateVector};

/// Eigenvalues in [−PSD_TOLERANCE, 0) are clamped to 0.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Eigenvalues below this count as zero for Hartley entropy and the gap.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// ρ_A for a pure bipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    alpha: usize,
    beta: usize,
    data: ComplexMatrix,
}

impl ReducedDensityMatrix {
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.data
    }
}

/// Offsets of every value of a sub-register inside the full basis index.
fn scatter_offsets(qubits: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize; 1 << qubits.len()];
    for (k, &q) in qubits.iter().enumerate() {
        let half = 1usize << k;
        for v in 0..half {
            offs[v + half] = offs[v] | (1 << q);
        }
    }
    offs
}

/// The α×β coefficient matrix M with ρ_A = M M†.
pub fn coefficient_matrix(state: &StateVector, part: &Bipartition) -> Result<ComplexMatrix> {
    if part.n() != state.n() {
        return Err(Error::InvalidBipartition(format!(
            "bipartition of {} qubits applied to a {}-qubit state",
            part.n(),
            state.n()
        )));
    }
    let rows = scatter_offsets(part.subsystem());
    let cols = scatter_offsets(part.complement());
    let amps = state.amplitudes();
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for &r in &rows {
        data.extend(cols.iter().map(|&c| amps[r | c]));
    }
    ComplexMatrix::from_vec(rows.len(), cols.len(), data)
}

pub fn partial_trace(state: &StateVector, part: &Bipartition) -> Result<ReducedDensityMatrix> {
    let m = coefficient_matrix(state, part)?;
    Ok(ReducedDensityMatrix {
        alpha: part.alpha(),
        beta: part.beta(),
        data: m.gram(),
    })
}

/// Descending, clamped eigenvalues of a reduced density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
    alpha: usize,
    beta: usize,
}

impl Spectrum {
    /// Sorts descending and clamps tiny negatives; rejects larger ones.
    pub fn from_values(mut values: Vec<f64>, alpha: usize, beta: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension("empty spectrum".into()));
        }
        for v in &mut values {
            if !v.is_finite() || *v < -PSD_TOLERANCE {
                return Err(Error::NotPsd { value: *v });
            }
            *v = v.max(0.0);
        }
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self {
            values,
            alpha,
            beta,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn lambda0(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda1(&self) -> f64 {
        self.values.get(1).copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Eigenvalues above [`ZERO_THRESHOLD`].
    pub fn nonzero(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied().filter(|&v| v > ZERO_THRESHOLD)
    }
}

pub fn spectrum(rho: &ReducedDensityMatrix) -> Result<Spectrum> {
    let values = eigvalsh(&rho.data)?;
    Spectrum::from_values(values, rho.alpha, rho.beta)
}

/// Spectrum of ρ_A directly from a state.
pub fn state_spectrum(state: &StateVector, part: &Bipartition) -> Result<Spectrum> {
    spectrum(&partial_trace(state, part)?)
}

/// −Σ λ ln λ in nats, with 0·ln 0 = 0.
pub fn von_neumann(s: &Spectrum) -> f64 {
    let e: f64 = s
        .values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.ln())
        .sum();
    e.max(0.0)
}

/// Rényi entropy of real degree `d ≥ 0`, `d ≠ 1`.
pub fn renyi(s: &Spectrum, d: f64) -> Result<f64> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::Domain {
            what: "Rényi degree",
            value: d,
            domain: "[0, ∞), d ≠ 1",
        });
    }
    if d == 1.0 {
        return Err(Error::RenyiDegreeOne);
    }
    if d == 0.0 {
        return Ok((s.nonzero().count() as f64).ln());
    }
    // log-sum-exp keeps large degrees finite
    let logs: Vec<f64> = s
        .values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| d * v.ln())
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
    Ok((lse / (1.0 - d)).max(0.0))
}

/// d → ∞ limit of the Rényi entropy, −ln λ0.
pub fn min_entropy(s: &Spectrum) -> f64 {
    -s.lambda0().ln()
}

/// ln(λ0/λ1), or +∞ when λ1 vanishes.
pub fn ent_gap(s: &Spectrum) -> f64 {
    let l1 = s.lambda1();
    if l1 < ZERO_THRESHOLD {
        f64::INFINITY
    } else {
        (s.lambda0() / l1).ln()
    }
}

/// Plotting value of a gap: +∞ is drawn at 2 ln α.
pub fn gap_for_plot(gap: f64, alpha: usize) -> f64 {
    if gap.is_infinite() {
        2.0 * (alpha as f64).ln()
    } else {
        gap
    }
}

/// One sampled point of an entanglement trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub label: String,
    pub sequence: usize,
    pub lambda0: f64,
    pub entropy: f64,
    /// ln(λ0/λ1); `f64::INFINITY` for rank-1 spectra.
    #[serde(with = "gap_serde")]
    pub gap: f64,
    /// (degree, value) pairs in the requested order.
    pub renyi: Vec<(f64, f64)>,
    pub alpha: usize,
    pub beta: usize,
    #[serde(skip)]
    pub spectrum: Option<Spectrum>,
}

mod gap_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad gap value {t}"))),
        }
    }
}

impl TrajectoryPoint {
    pub fn from_spectrum(label: impl Into<String>, s: Spectrum, renyi_degrees: &[f64]) -> Result<Self> {
        let renyi = renyi_degrees
            .iter()
            .map(|&d| renyi(&s, d).map(|v| (d, v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            label: label.into(),
            sequence: 0,
            lambda0: s.lambda0(),
            entropy: von_neumann(&s),
            gap: ent_gap(&s),
            renyi,
            alpha: s.alpha(),
            beta: s.beta(),
            spectrum: Some(s),
        })
    }

    pub fn renyi_value(&self, d: f64) -> Option<f64> {
        self.renyi.iter().find(|(k, _)| *k == d).map(|&(_, v)| v)
    }

    pub fn with_sequence(mut self, sequence: usize) -> Self {
        self.sequence = sequence;
        self
    }
}

pub fn trajectory_point(
    state: &StateVector,
    part: &Bipartition,
    label: impl Into<String>,
    renyi_degrees: &[f64],
) -> Result<TrajectoryPoint> {
    TrajectoryPoint::from_spectrum(label, state_spectrum(state, part)?, renyi_degrees)
}

/// Points before and after a QFT on `qft_qubits`; the input is not mutated.
pub fn qft_compare(
    state: &StateVector,
    part: &Bipartition,
    qft_qubits: &[usize],
    renyi_degrees: &[f64],
) -> Result<(TrajectoryPoint, TrajectoryPoint)> {
    let before = trajectory_point(state, part, "original", renyi_degrees)?;
    let mut copy = state.clone();
    copy.apply_qft(qft_qubits, false)?;
    let after = trajectory_point(&copy, part, "qft", renyi_degrees)?.with_sequence(1);
    Ok((before, after))
}
