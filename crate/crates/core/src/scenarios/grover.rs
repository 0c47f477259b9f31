//! Grover search with a pluggable phase oracle.
//!
//! Register layout: search qubits `0..n`, the oracle's work qubits
//! `n..n+w`, and one phase ancilla `n+w` prepared in |−⟩. Each iteration
//! emits four checkpoints: after the oracle's compute stage, after the
//! central marking gate, after uncompute, and after diffusion.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::exact_cover::EcInstance;
use super::Trajectory;
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::rng::Stream;
use crate::spectral::trajectory_point;
use crate::statevector::{gates, Bipartition, ControlledOp, StateVector, MAX_QUBITS};

/// Largest register on which the oracle contract is checked exhaustively.
pub const CONTRACT_CHECK_QUBITS: usize = 12;

/// ⌊(π/4)·√(2^n/M)⌋.
pub fn grover_iterations(n: usize, marked: usize) -> Result<usize> {
    if marked == 0 || n >= usize::BITS as usize || marked >= 1usize << n {
        return Err(Error::Config(format!("need 1 <= M < 2^n (n={n}, M={marked})")));
    }
    Ok((FRAC_PI_4 * ((1u64 << n) as f64 / marked as f64).sqrt()).floor() as usize)
}

/// A reversible marking circuit split into compute / mark / uncompute.
///
/// Composed, the three stages must act on |x⟩|0…0⟩|−⟩ as a phase flip
/// exactly when `is_marked(x)`, returning the work qubits to |0…0⟩.
pub trait GroverOracle: Sync {
    fn name(&self) -> String;
    fn search_qubits(&self) -> usize;
    fn work_qubits(&self) -> usize;
    fn is_marked(&self, x: usize) -> bool;
    fn compute(&self, state: &mut StateVector) -> Result<()>;
    /// Central gate: flips `phase_qubit` where the predicate holds.
    fn mark(&self, state: &mut StateVector, phase_qubit: usize) -> Result<()>;
    fn uncompute(&self, state: &mut StateVector) -> Result<()>;

    fn total_qubits(&self) -> usize {
        self.search_qubits() + self.work_qubits() + 1
    }
}

/// Exact Cover oracle: one ancilla per clause holding "exactly one bit set".
#[derive(Debug, Clone)]
pub struct EcOracle {
    inst: EcInstance,
}

impl EcOracle {
    pub fn new(inst: EcInstance) -> Self {
        Self { inst }
    }

    fn clause_gates(&self, state: &mut StateVector, j: usize, reverse: bool) -> Result<()> {
        let c = self.inst.clauses()[j];
        let anc = self.inst.n() + j;
        // parity of the three bits, corrected by their AND: 1 iff exactly one is set
        let toffoli = |s: &mut StateVector| s.apply_controlled(&c, ControlledOp::X(anc));
        if reverse {
            toffoli(state)?;
        }
        for &b in &c {
            state.cnot(b, anc)?;
        }
        if !reverse {
            toffoli(state)?;
        }
        Ok(())
    }
}

impl GroverOracle for EcOracle {
    fn name(&self) -> String {
        "exact_cover".into()
    }

    fn search_qubits(&self) -> usize {
        self.inst.n()
    }

    fn work_qubits(&self) -> usize {
        self.inst.clauses().len()
    }

    fn is_marked(&self, x: usize) -> bool {
        self.inst.satisfies(x)
    }

    fn compute(&self, state: &mut StateVector) -> Result<()> {
        (0..self.work_qubits()).try_for_each(|j| self.clause_gates(state, j, false))
    }

    fn mark(&self, state: &mut StateVector, phase_qubit: usize) -> Result<()> {
        let n = self.inst.n();
        let controls: Vec<usize> = (n..n + self.work_qubits()).collect();
        state.apply_controlled(&controls, ControlledOp::X(phase_qubit))
    }

    fn uncompute(&self, state: &mut StateVector) -> Result<()> {
        (0..self.work_qubits())
            .rev()
            .try_for_each(|j| self.clause_gates(state, j, true))
    }
}

/// Oracle given by a truth table, realized as a basis permutation writing
/// f(x) into a single work qubit.
#[derive(Debug, Clone)]
pub struct TableOracle {
    n: usize,
    marked: Vec<bool>,
}

impl TableOracle {
    pub fn new(n: usize, marked_states: &[usize]) -> Result<Self> {
        if n == 0 || n + 2 > MAX_QUBITS {
            return Err(Error::TooManyQubits { n: n + 2, max: MAX_QUBITS });
        }
        let mut marked = vec![false; 1 << n];
        for &x in marked_states {
            *marked
                .get_mut(x)
                .ok_or(Error::IndexOutOfRange { index: x, n })? = true;
        }
        Ok(Self { n, marked })
    }

    fn flip_work(&self, state: &mut StateVector) -> Result<()> {
        let mask = (1usize << self.n) - 1;
        let work = 1usize << self.n;
        state.apply_permutation(|i| if self.marked[i & mask] { i ^ work } else { i })
    }
}

impl GroverOracle for TableOracle {
    fn name(&self) -> String {
        "table".into()
    }

    fn search_qubits(&self) -> usize {
        self.n
    }

    fn work_qubits(&self) -> usize {
        1
    }

    fn is_marked(&self, x: usize) -> bool {
        self.marked[x]
    }

    fn compute(&self, state: &mut StateVector) -> Result<()> {
        self.flip_work(state)
    }

    fn mark(&self, state: &mut StateVector, phase_qubit: usize) -> Result<()> {
        state.cnot(self.n, phase_qubit)
    }

    fn uncompute(&self, state: &mut StateVector) -> Result<()> {
        self.flip_work(state)
    }
}

fn minus_ancilla(state: &mut StateVector, q: usize) -> Result<()> {
    state.apply_1q(q, gates::X)?;
    state.apply_1q(q, gates::H)
}

/// Checks the phase-flip contract on every search basis state; returns the
/// number of marked states. Skipped (None) above [`CONTRACT_CHECK_QUBITS`].
pub fn verify_oracle(oracle: &dyn GroverOracle) -> Result<Option<usize>> {
    let total = oracle.total_qubits();
    if total > CONTRACT_CHECK_QUBITS {
        return Ok(None);
    }
    let n = oracle.search_qubits();
    let phase = total - 1;
    let mut marked = 0;
    for x in 0..1usize << n {
        let mut init = StateVector::new_basis(total, x)?;
        minus_ancilla(&mut init, phase)?;
        let mut st = init.clone();
        oracle.compute(&mut st)?;
        oracle.mark(&mut st, phase)?;
        oracle.uncompute(&mut st)?;
        let inner: C64 = init
            .amplitudes()
            .iter()
            .zip(st.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let expected = if oracle.is_marked(x) { -1.0 } else { 1.0 };
        if (inner - C64::new(expected, 0.0)).norm() > 1e-9 {
            return Err(Error::OracleContract(format!(
                "basis state {x}: ⟨in|out⟩ = {inner}, expected {expected}"
            )));
        }
        marked += usize::from(oracle.is_marked(x));
    }
    if marked == 0 || marked == 1 << n {
        return Err(Error::OracleContract(format!(
            "oracle marks {marked} of {} states",
            1usize << n
        )));
    }
    Ok(Some(marked))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverRun {
    pub trajectory: Trajectory,
    pub iterations: usize,
    pub marked: usize,
    /// Probability that the search register reads a marked state.
    pub success_probability: f64,
    /// One seeded sample of the final search register.
    pub measured: usize,
}

fn diffusion(state: &mut StateVector, n: usize) -> Result<()> {
    for q in 0..n {
        state.apply_1q(q, gates::H)?;
        state.apply_1q(q, gates::X)?;
    }
    let controls: Vec<usize> = (0..n - 1).collect();
    state.apply_controlled(&controls, ControlledOp::Phase(n - 1, PI))?;
    for q in 0..n {
        state.apply_1q(q, gates::X)?;
        state.apply_1q(q, gates::H)?;
    }
    Ok(())
}

/// Runs Grover with `oracle`; `iterations` defaults to the floor formula.
pub fn grover_custom_oracle_trajectory(
    oracle: &dyn GroverOracle,
    seed: u64,
    iterations: Option<usize>,
) -> Result<GroverRun> {
    let n = oracle.search_qubits();
    let total = oracle.total_qubits();
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits { n: total, max: MAX_QUBITS });
    }
    let marked = match verify_oracle(oracle)? {
        Some(m) => m,
        None => {
            let m = (0..1usize << n).filter(|&x| oracle.is_marked(x)).count();
            if m == 0 {
                return Err(Error::OracleContract("oracle marks no state".into()));
            }
            m
        }
    };
    let t = match iterations {
        Some(t) => t,
        None => grover_iterations(n, marked)?,
    };
    let phase = total - 1;
    let search: Vec<usize> = (0..n).collect();
    let part = Bipartition::new(total, &search)?;
    let degrees = [2.0, 3.0];

    let mut state = StateVector::new_basis(total, 0)?;
    for q in 0..n {
        state.apply_1q(q, gates::H)?;
    }
    minus_ancilla(&mut state, phase)?;

    let config = json!({
        "oracle": oracle.name(),
        "search_qubits": n,
        "work_qubits": oracle.work_qubits(),
        "total_qubits": total,
        "iterations": t,
        "marked": marked,
        "seed": seed,
    });
    let mut traj = Trajectory::new("grover", config);
    traj.seeds = vec![seed];
    traj.push(trajectory_point(&state, &part, "init", &degrees)?);
    for i in 1..=t {
        oracle.compute(&mut state)?;
        traj.push(trajectory_point(&state, &part, format!("it{i}/pre_mark"), &degrees)?);
        oracle.mark(&mut state, phase)?;
        traj.push(trajectory_point(&state, &part, format!("it{i}/post_mark"), &degrees)?);
        oracle.uncompute(&mut state)?;
        traj.push(trajectory_point(&state, &part, format!("it{i}/post_uncompute"), &degrees)?);
        diffusion(&mut state, n)?;
        traj.push(trajectory_point(&state, &part, format!("it{i}/post_diffusion"), &degrees)?);
    }

    let mut dist = vec![0.0; 1 << n];
    let mask = (1usize << n) - 1;
    for (i, z) in state.amplitudes().iter().enumerate() {
        dist[i & mask] += z.norm_sqr();
    }
    let success_probability = (0..1usize << n)
        .filter(|&x| oracle.is_marked(x))
        .map(|x| dist[x])
        .sum();
    let u: f64 = Stream::new(seed).named("grover-measure").rng().random();
    let mut acc = 0.0;
    let measured = dist
        .iter()
        .position(|p| {
            acc += p;
            acc > u
        })
        .unwrap_or(mask);

    Ok(GroverRun {
        trajectory: traj,
        iterations: t,
        marked,
        success_probability,
        measured,
    })
}

pub fn grover_ec_trajectory(inst: &EcInstance, seed: u64) -> Result<GroverRun> {
    let oracle = EcOracle::new(inst.clone());
    let mut run = grover_custom_oracle_trajectory(&oracle, seed, None)?;
    run.trajectory.config["instance"] = json!(inst.clauses());
    Ok(run)
}
