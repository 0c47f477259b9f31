//! Exact Cover instances and the adiabatic ground-state trajectory.
//!
//! H(s) = (1−s) H0 + s Hp with H0 = Σ_i d_i (1 − σx_i)/2, where d_i is the
//! number of clauses containing bit i (at least 1), and Hp[z] the number of
//! clauses violated by z.

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::Trajectory;
use crate::error::{Error, Result};
use crate::numerics::{lanczos_ground, LanczosOptions, C64};
use crate::rng::Stream;
use crate::spectral::trajectory_point;
use crate::statevector::{Bipartition, StateVector, MAX_QUBITS};

/// Largest register solved by [`ec_ground_state`].
pub const MAX_GROUND_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcInstance {
    n: usize,
    clauses: Vec<[usize; 3]>,
    known_solution: Option<usize>,
}

impl EcInstance {
    pub fn new(n: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Config(format!("EC bit count {n} outside 1..={MAX_QUBITS}")));
        }
        for c in &clauses {
            if c.iter().any(|&i| i >= n) || c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::Config(format!("invalid clause {c:?} for {n} bits")));
            }
        }
        Ok(Self {
            n,
            clauses,
            known_solution: None,
        })
    }

    /// Attaches a solution, checking that it satisfies every clause.
    pub fn with_solution(mut self, z: usize) -> Result<Self> {
        if z >= 1 << self.n || !self.satisfies(z) {
            return Err(Error::Config(format!("{z:b} does not satisfy the instance")));
        }
        self.known_solution = Some(z);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    pub fn known_solution(&self) -> Option<usize> {
        self.known_solution
    }

    /// Clause satisfied iff exactly one of its bits is 1.
    pub fn clause_satisfied(clause: &[usize; 3], z: usize) -> bool {
        clause.iter().map(|&i| (z >> i) & 1).sum::<usize>() == 1
    }

    pub fn violations(&self, z: usize) -> usize {
        self.clauses
            .iter()
            .filter(|c| !Self::clause_satisfied(c, z))
            .count()
    }

    pub fn satisfies(&self, z: usize) -> bool {
        self.violations(z) == 0
    }

    /// All satisfying assignments by exhaustive search.
    pub fn solutions(&self) -> Vec<usize> {
        (0..1usize << self.n).filter(|&z| self.satisfies(z)).collect()
    }

    /// Rejection-samples `c` random clauses until exactly one assignment
    /// satisfies them.
    pub fn generate_unique(n: usize, c: usize, stream: Stream) -> Result<Self> {
        if !(3..=20).contains(&n) {
            return Err(Error::Config(format!("instance generation needs 3 <= n <= 20, got {n}")));
        }
        let mut rng = stream.rng();
        for _ in 0..1_000_000 {
            let clauses: Vec<[usize; 3]> = (0..c)
                .map(|_| {
                    let mut picked = rand::seq::index::sample(&mut rng, n, 3).into_vec();
                    picked.sort_unstable();
                    [picked[0], picked[1], picked[2]]
                })
                .collect();
            let inst = Self::new(n, clauses)?;
            let sols = inst.solutions();
            if sols.len() == 1 {
                return inst.with_solution(sols[0]);
            }
        }
        Err(Error::Config(format!("no unique-solution instance found for n={n}, c={c}")))
    }

    /// Parses `n c`, then c lines of three 0-based indices, with an
    /// optional `# solution <bits>` line (most significant bit first).
    pub fn parse(text: &str) -> Result<Self> {
        let mut solution = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(bits) = rest.trim().strip_prefix("solution") {
                    solution = Some(bits.trim().to_string());
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(nums);
        }
        let header = rows.first().ok_or_else(|| Error::Parse("empty instance file".into()))?;
        let [n, c] = header[..] else {
            return Err(Error::Parse("first line must be `n c`".into()));
        };
        if rows.len() - 1 != c {
            return Err(Error::Parse(format!("header declares {c} clauses, found {}", rows.len() - 1)));
        }
        let clauses = rows[1..]
            .iter()
            .map(|r| match r[..] {
                [a, b, d] => Ok([a, b, d]),
                _ => Err(Error::Parse(format!("clause line {r:?} needs three indices"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let inst = Self::new(n, clauses)?;
        match solution {
            None => Ok(inst),
            Some(bits) => {
                if bits.len() != n || !bits.chars().all(|ch| ch == '0' || ch == '1') {
                    return Err(Error::Parse(format!("solution {bits:?} is not {n} bits")));
                }
                let z = usize::from_str_radix(&bits, 2).map_err(|e| Error::Parse(e.to_string()))?;
                inst.with_solution(z)
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {}\n", c[0], c[1], c[2]));
        }
        if let Some(z) = self.known_solution {
            out.push_str(&format!("# solution {:0width$b}\n", z, width = self.n));
        }
        out
    }
}

/// Matrix-free H(s) for an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct EcHamiltonian {
    n: usize,
    driver: Vec<f64>,
    problem: Vec<f64>,
}

impl EcHamiltonian {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Weights d_i of the transverse-field driver.
    pub fn driver_weights(&self) -> &[f64] {
        &self.driver
    }

    /// Diagonal of Hp.
    pub fn problem_diagonal(&self) -> &[f64] {
        &self.problem
    }

    /// y = H(s) x.
    pub fn apply(&self, s: f64, x: &[f64], y: &mut [f64]) {
        let t = 1.0 - s;
        let half_sum: f64 = 0.5 * self.driver.iter().sum::<f64>();
        for (z, yz) in y.iter_mut().enumerate() {
            let mut flip = 0.0;
            for (i, &d) in self.driver.iter().enumerate() {
                flip += d * x[z ^ (1 << i)];
            }
            *yz = s * self.problem[z] * x[z] + t * (half_sum * x[z] - 0.5 * flip);
        }
    }
}

pub fn ec_hamiltonians(inst: &EcInstance) -> EcHamiltonian {
    let mut driver = vec![0.0f64; inst.n];
    for c in &inst.clauses {
        for &i in c {
            driver[i] += 1.0;
        }
    }
    for d in &mut driver {
        *d = d.max(1.0);
    }
    let problem = (0..1usize << inst.n).map(|z| inst.violations(z) as f64).collect();
    EcHamiltonian {
        n: inst.n,
        driver,
        problem,
    }
}

/// Ground state of H(s) by restarted Lanczos from a seeded start vector.
pub fn ec_ground_state(inst: &EcInstance, s: f64, stream: Stream) -> Result<StateVector> {
    if inst.clauses.is_empty() {
        return Err(Error::Config("instance has no clauses".into()));
    }
    if inst.n > MAX_GROUND_QUBITS {
        return Err(Error::TooManyQubits {
            n: inst.n,
            max: MAX_GROUND_QUBITS,
        });
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            what: "interpolation s",
            value: s,
            domain: "[0, 1]",
        });
    }
    let h = ec_hamiltonians(inst);
    let dim = 1usize << inst.n;
    let mut rng = stream.rng();
    let start: Vec<f64> = (0..dim).map(|_| 1.0 + 0.5 * rng.random::<f64>()).collect();
    let opts = LanczosOptions {
        tol: 1e-9,
        ..LanczosOptions::default()
    };
    let (_, mut psi) = lanczos_ground(|x, y| h.apply(s, x, y), start, opts)?;
    // H(s) is stoquastic, so the ground state can be taken nonnegative
    if psi.iter().sum::<f64>() < 0.0 {
        psi.iter_mut().for_each(|x| *x = -*x);
    }
    StateVector::from_unnormalized(psi.into_iter().map(|x| C64::new(x, 0.0)).collect())
}

/// Ground-state points on s = 0, s_step, …, 1 for `partitions` seeded
/// random half-splits.
pub fn adiabatic_trajectory(
    inst: &EcInstance,
    s_step: f64,
    partitions: usize,
    seed: u64,
) -> Result<Trajectory> {
    let n = inst.n;
    if !n.is_multiple_of(2) {
        return Err(Error::Config(format!("half-splits need an even bit count, got {n}")));
    }
    if !(s_step > 0.0 && s_step <= 1.0) || partitions == 0 {
        return Err(Error::Config("need 0 < s_step <= 1 and partitions >= 1".into()));
    }
    let root = Stream::new(seed);
    let cut_root = root.named("partitions");
    let solve_root = root.named("lanczos");
    let cuts = (0..partitions)
        .map(|p| Bipartition::random_half(n, cut_root.split(p as u64)))
        .collect::<Result<Vec<_>>>()?;
    let steps = (1.0 / s_step).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    let states = grid
        .par_iter()
        .enumerate()
        .map(|(k, &s)| ec_ground_state(inst, s, solve_root.split(k as u64)))
        .collect::<Result<Vec<_>>>()?;

    let config = json!({
        "n": n,
        "clauses": inst.clauses,
        "s_step": s_step,
        "partitions": partitions,
        "seed": seed,
        "subsystems": cuts.iter().map(|c| c.subsystem().to_vec()).collect::<Vec<_>>(),
    });
    let mut traj = Trajectory::new("adiabatic", config);
    traj.seeds = vec![seed];
    for (s, state) in grid.iter().zip(&states) {
        for (p, cut) in cuts.iter().enumerate() {
            let label = format!("s={s:.2}/cut{p}");
            traj.push(trajectory_point(state, cut, label, &[2.0, 3.0])?);
        }
    }
    Ok(traj)
}
