//! Semiclassical Shor order finding on Beauregard's 2n+3 qubit layout.
//!
//! Qubits `0..n` hold x, `n..2n+1` hold the (n+1)-qubit adder register b,
//! `2n+1` is the adder's overflow ancilla and `2n+2` the single control
//! qubit that is measured and reset every round. A controlled U_c is
//! CM(c) → cSWAP(x, b) → CM(c⁻¹)⁻¹, and ρ_x is sampled on either side of
//! the cSWAP.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Trajectory;
use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::spectral::{trajectory_point, Spectrum};
use crate::statevector::{gates, Bipartition, ControlledOp, StateVector};

pub const MAX_SHOR_N: u64 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShorConfig {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub a: u64,
    pub seed: u64,
}

/// How the controlled modular multipliers are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultiplierPath {
    /// Basis permutation on the (control, x, b) registers.
    #[default]
    Permutation,
    /// Gate-level Draper-adder circuit; slow, used as a reference.
    Gates,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Modular inverse by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// Smallest r ≥ 1 with a^r ≡ 1 (mod N), by brute force.
pub fn classical_order(a: u64, modulus: u64) -> Option<u64> {
    if gcd(a, modulus) != 1 {
        return None;
    }
    let mut v = a % modulus;
    for r in 1..=modulus {
        if v == 1 {
            return Some(r);
        }
        v = v * a % modulus;
    }
    None
}

fn is_prime(x: u64) -> bool {
    x >= 2 && (2..).take_while(|p| p * p <= x).all(|p| !x.is_multiple_of(p))
}

fn is_prime_power(x: u64) -> bool {
    (2..=x).find(|p| x.is_multiple_of(*p)).is_some_and(|p| {
        let mut y = x;
        while y.is_multiple_of(p) {
            y /= p;
        }
        y == 1
    })
}

impl ShorConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.modulus;
        if !(15..=MAX_SHOR_N).contains(&n) || n.is_multiple_of(2) || is_prime(n) || is_prime_power(n) {
            return Err(Error::Config(format!(
                "N = {n} must be an odd composite <= {MAX_SHOR_N} that is not a prime power"
            )));
        }
        if self.a <= 1 || self.a >= n {
            return Err(Error::Config(format!("a = {} must satisfy 1 < a < N", self.a)));
        }
        Ok(())
    }

    /// Bit length n of N.
    pub fn bits(&self) -> usize {
        (u64::BITS - self.modulus.leading_zeros()) as usize
    }

    pub fn total_qubits(&self) -> usize {
        2 * self.bits() + 3
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShorOutcome {
    Factors { p: u64, q: u64 },
    /// gcd(a, N) was already a factor; no circuit was run.
    TrivialFactor { p: u64, q: u64 },
    Failure { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShorRun {
    pub trajectory: Trajectory,
    pub outcome: ShorOutcome,
    /// Control-qubit outcomes, round 0 first (least significant phase bit).
    pub measurements: Vec<u8>,
    pub measured_phase: u64,
    pub order: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    n: usize,
    modulus: u64,
}

impl Layout {
    fn x(&self, i: usize) -> usize {
        i
    }
    fn b(&self, i: usize) -> usize {
        self.n + i
    }
    fn anc(&self) -> usize {
        2 * self.n + 1
    }
    fn ctrl(&self) -> usize {
        2 * self.n + 2
    }
    fn b_qubits(&self) -> Vec<usize> {
        (0..=self.n).map(|i| self.b(i)).collect()
    }
}

/// Controlled b ← b ± c·x mod N on the subspace b < N.
fn cmult_permutation(st: &mut StateVector, l: &Layout, c: u64, subtract: bool) -> Result<()> {
    let n = l.n;
    let xmask = (1usize << n) - 1;
    let bmask = (1usize << (n + 1)) - 1;
    let ctrl = 1usize << l.ctrl();
    let m = l.modulus;
    st.apply_permutation(|i| {
        if i & ctrl == 0 {
            return i;
        }
        let x = (i & xmask) as u64;
        let b = ((i >> n) & bmask) as u64;
        if b >= m {
            return i;
        }
        let cx = c * x % m;
        let nb = if subtract { (b + m - cx) % m } else { (b + cx) % m };
        (i & !(bmask << n)) | ((nb as usize) << n)
    })
}

#[derive(Debug, Clone)]
enum Op {
    /// φADD(value) on b in Fourier space, under `controls`.
    Add { value: i64, controls: Vec<usize> },
    Qft { inverse: bool },
    Cnot(usize, usize),
    X(usize),
}

impl Op {
    fn inverse(&self) -> Op {
        match self {
            Op::Add { value, controls } => Op::Add {
                value: -value,
                controls: controls.clone(),
            },
            Op::Qft { inverse } => Op::Qft { inverse: !inverse },
            other => other.clone(),
        }
    }

    fn apply(&self, st: &mut StateVector, l: &Layout) -> Result<()> {
        match self {
            Op::Add { value, controls } => {
                let width = 1i64 << (l.n + 1);
                for q in 0..=l.n {
                    let k = (value.rem_euclid(width) << q).rem_euclid(width);
                    let theta = 2.0 * PI * k as f64 / width as f64;
                    st.apply_controlled(controls, ControlledOp::Phase(l.b(q), theta))?;
                }
                Ok(())
            }
            Op::Qft { inverse } => st.apply_qft(&l.b_qubits(), *inverse),
            Op::Cnot(c, t) => st.cnot(*c, *t),
            Op::X(q) => st.apply_1q(*q, gates::X),
        }
    }
}

/// Doubly-controlled φADD(a)MOD(N) in Fourier space.
fn add_mod_ops(l: &Layout, a: i64, c1: usize, c2: usize) -> Vec<Op> {
    let m = l.modulus as i64;
    let msb = l.b(l.n);
    let cc = vec![c1, c2];
    vec![
        Op::Add { value: a, controls: cc.clone() },
        Op::Add { value: -m, controls: vec![] },
        Op::Qft { inverse: true },
        Op::Cnot(msb, l.anc()),
        Op::Qft { inverse: false },
        Op::Add { value: m, controls: vec![l.anc()] },
        Op::Add { value: -a, controls: cc.clone() },
        Op::Qft { inverse: true },
        Op::X(msb),
        Op::Cnot(msb, l.anc()),
        Op::X(msb),
        Op::Qft { inverse: false },
        Op::Add { value: a, controls: cc },
    ]
}

/// Controlled b ← b + c·x mod N as a gate sequence.
fn cmult_ops(l: &Layout, c: u64) -> Vec<Op> {
    let mut ops = vec![Op::Qft { inverse: false }];
    for i in 0..l.n {
        let coeff = (c % l.modulus) * ((1u64 << i) % l.modulus) % l.modulus;
        ops.extend(add_mod_ops(l, coeff as i64, l.ctrl(), l.x(i)));
    }
    ops.push(Op::Qft { inverse: true });
    ops
}

fn cmult_gates(st: &mut StateVector, l: &Layout, c: u64, subtract: bool) -> Result<()> {
    let ops = cmult_ops(l, c);
    if subtract {
        ops.iter().rev().try_for_each(|op| op.inverse().apply(st, l))
    } else {
        ops.iter().try_for_each(|op| op.apply(st, l))
    }
}

fn cmult(st: &mut StateVector, l: &Layout, c: u64, subtract: bool, path: MultiplierPath) -> Result<()> {
    match path {
        MultiplierPath::Permutation => cmult_permutation(st, l, c, subtract),
        MultiplierPath::Gates => cmult_gates(st, l, c, subtract),
    }
}

/// Test hook: applies the controlled multiplier block to a state laid out
/// for modulus `modulus` with `n` bits.
pub fn apply_cmult(
    st: &mut StateVector,
    n: usize,
    modulus: u64,
    c: u64,
    subtract: bool,
    path: MultiplierPath,
) -> Result<()> {
    if st.n() != 2 * n + 3 {
        return Err(Error::InvalidQubits(format!(
            "multiplier on {} qubits needs 2n+3 = {}",
            st.n(),
            2 * n + 3
        )));
    }
    cmult(st, &Layout { n, modulus }, c, subtract, path)
}

/// Convergent denominators of y/2^bits, smallest first.
fn convergent_denominators(y: u64, bits: usize) -> Vec<u64> {
    let (mut num, mut den) = (y as u128, 1u128 << bits);
    let (mut h0, mut h1) = (0u128, 1u128);
    let (mut k0, mut k1) = (1u128, 0u128);
    let mut out = Vec::new();
    while den != 0 {
        let q = num / den;
        (num, den) = (den, num - q * den);
        (h0, h1) = (h1, q * h1 + h0);
        (k0, k1) = (k1, q * k1 + k0);
        let _ = h0;
        if k1 > 0 {
            out.push(k1 as u64);
        }
    }
    out
}

fn order_from_phase(y: u64, bits: usize, a: u64, m: u64) -> Option<u64> {
    if y == 0 {
        return None;
    }
    for q in convergent_denominators(y, bits) {
        if q >= m {
            break;
        }
        for k in 1..=4u64 {
            let r = q * k;
            if r < m && pow_mod(a, r, m) == 1 {
                return Some(r);
            }
        }
    }
    None
}

/// Runs the semiclassical circuit and the classical post-processing.
pub fn shor_trajectory(cfg: &ShorConfig) -> Result<ShorRun> {
    shor_trajectory_with(cfg, MultiplierPath::Permutation)
}

pub fn shor_trajectory_with(cfg: &ShorConfig, path: MultiplierPath) -> Result<ShorRun> {
    cfg.validate()?;
    let (m, a) = (cfg.modulus, cfg.a);
    let n = cfg.bits();
    let total = cfg.total_qubits();
    let config = json!({
        "N": m, "a": a, "n": n, "seed": cfg.seed, "total_qubits": total,
        "alpha": 1u64 << n, "beta": 1u64 << (n + 3),
    });
    let mut traj = Trajectory::new("shor", config);
    traj.seeds = vec![cfg.seed];
    let g = gcd(a, m);
    if g != 1 {
        return Ok(ShorRun {
            trajectory: traj,
            outcome: ShorOutcome::TrivialFactor { p: g, q: m / g },
            measurements: vec![],
            measured_phase: 0,
            order: None,
        });
    }

    let l = Layout { n, modulus: m };
    let x_qubits: Vec<usize> = (0..n).collect();
    let part = Bipartition::new(total, &x_qubits)?;
    let degrees = [2.0, 3.0];
    let mut rng = Stream::new(cfg.seed).named("shor-measure").rng();
    let mut st = StateVector::new_basis(total, 1)?;
    let rounds = 2 * n;
    let mut bits = Vec::with_capacity(rounds);
    for j in 0..rounds {
        let c = pow_mod(a, 1u64 << (rounds - 1 - j), m);
        let c_inv = inv_mod(c, m).ok_or_else(|| Error::Config("multiplier not invertible".into()))?;
        st.apply_1q(l.ctrl(), gates::H)?;
        cmult(&mut st, &l, c, false, path)?;
        traj.push(trajectory_point(&st, &part, format!("r{j}/pre_swap"), &degrees)?);
        for i in 0..n {
            st.apply_controlled(&[l.ctrl()], ControlledOp::Swap(l.x(i), l.b(i)))?;
        }
        traj.push(trajectory_point(&st, &part, format!("r{j}/post_swap"), &degrees)?);
        cmult(&mut st, &l, c_inv, true, path)?;

        let theta: f64 = -2.0
            * PI
            * bits
                .iter()
                .enumerate()
                .map(|(k, &b): (usize, &u8)| f64::from(b) / (1u64 << (j - k + 1)) as f64)
                .sum::<f64>();
        st.apply_1q(l.ctrl(), gates::phase(theta))?;
        st.apply_1q(l.ctrl(), gates::H)?;
        let bit = st.measure_qubit(l.ctrl(), &mut rng)?;
        if bit == 1 {
            st.apply_1q(l.ctrl(), gates::X)?;
        }
        bits.push(bit);
    }
    let y: u64 = bits.iter().enumerate().map(|(k, &b)| u64::from(b) << k).sum();
    let order = order_from_phase(y, rounds, a, m);
    let outcome = match order {
        None => ShorOutcome::Failure {
            reason: format!("no order candidate from phase {y}/2^{rounds}"),
        },
        Some(r) if r % 2 == 1 => ShorOutcome::Failure {
            reason: format!("order {r} is odd"),
        },
        Some(r) => {
            let h = pow_mod(a, r / 2, m);
            if h == m - 1 {
                ShorOutcome::Failure {
                    reason: format!("a^(r/2) = -1 mod N for r = {r}"),
                }
            } else {
                let p = gcd(h + m - 1, m);
                if p > 1 && p < m {
                    ShorOutcome::Factors { p: p.min(m / p), q: p.max(m / p) }
                } else {
                    ShorOutcome::Failure {
                        reason: format!("trivial gcd for r = {r}"),
                    }
                }
            }
        }
    };
    traj.config["measured_phase"] = json!(y);
    Ok(ShorRun {
        trajectory: traj,
        outcome,
        measurements: bits,
        measured_phase: y,
        order,
    })
}

/// m when the spectrum is {½} ∪ {2^m copies of 2^{−(m+1)}} (within 1e-9).
pub fn post_swap_family(s: &Spectrum) -> Option<u32> {
    let v: Vec<f64> = s.nonzero().collect();
    if (v[0] - 0.5).abs() > 1e-9 || v.len() < 2 {
        return None;
    }
    let k = v.len() - 1;
    if !k.is_power_of_two() {
        return None;
    }
    let each = 0.5 / k as f64;
    v[1..]
        .iter()
        .all(|x| (x - each).abs() <= 1e-9)
        .then_some(k.trailing_zeros())
}

/// m when the spectrum is {(m+1)/(2m)} ∪ {m−1 copies of 1/(2m)}.
pub fn pre_swap_family(s: &Spectrum) -> Option<usize> {
    let v: Vec<f64> = s.nonzero().collect();
    let m = v.len();
    let mf = m as f64;
    if (v[0] - (mf + 1.0) / (2.0 * mf)).abs() > 1e-9 {
        return None;
    }
    v[1..]
        .iter()
        .all(|x| (x - 0.5 / mf).abs() <= 1e-9)
        .then_some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(gcd(21, 14), 7);
        assert_eq!(pow_mod(7, 4, 15), 1);
        assert_eq!(inv_mod(7, 15), Some(13));
        assert_eq!(inv_mod(5, 15), None);
        assert_eq!(classical_order(7, 15), Some(4));
        assert_eq!(classical_order(2, 21), Some(6));
    }

    #[test]
    fn config_validation() {
        let ok = ShorConfig { modulus: 15, a: 7, seed: 0 };
        assert!(ok.validate().is_ok());
        assert_eq!(ok.total_qubits(), 11);
        for bad in [9, 16, 17, 27, 65] {
            assert!(ShorConfig { modulus: bad, a: 2, seed: 0 }.validate().is_err(), "{bad}");
        }
        assert!(ShorConfig { modulus: 15, a: 1, seed: 0 }.validate().is_err());
    }

    #[test]
    fn trivial_factor_short_circuit() {
        let run = shor_trajectory(&ShorConfig { modulus: 15, a: 6, seed: 0 }).unwrap();
        assert_eq!(run.outcome, ShorOutcome::TrivialFactor { p: 3, q: 5 });
        assert!(run.trajectory.is_empty());
    }

    #[test]
    fn continued_fractions() {
        // 3/4 of 2^8 → denominator 4
        assert_eq!(order_from_phase(192, 8, 7, 15), Some(4));
        assert_eq!(order_from_phase(0, 8, 7, 15), None);
    }

    fn random_valid_state(n: usize, modulus: u64, seed: u64) -> StateVector {
        use rand::Rng;
        let total = 2 * n + 3;
        let mut rng = Stream::new(seed).rng();
        let amps = (0..1usize << total)
            .map(|i| {
                let b = (i >> n) & ((1 << (n + 1)) - 1);
                let anc = (i >> (2 * n + 1)) & 1;
                if b as u64 >= modulus || anc == 1 {
                    C64::new(0.0, 0.0)
                } else {
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                }
            })
            .collect();
        StateVector::from_unnormalized(amps).unwrap()
    }

    #[test]
    fn gate_multiplier_matches_permutation() {
        for &(n, modulus) in &[(3usize, 5u64), (3, 7)] {
            for c in 1..modulus {
                for subtract in [false, true] {
                    let orig = random_valid_state(n, modulus, c);
                    let mut p = orig.clone();
                    apply_cmult(&mut p, n, modulus, c, subtract, MultiplierPath::Permutation).unwrap();
                    let mut g = orig.clone();
                    apply_cmult(&mut g, n, modulus, c, subtract, MultiplierPath::Gates).unwrap();
                    let diff = p
                        .amplitudes()
                        .iter()
                        .zip(g.amplitudes())
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    assert!(diff < 1e-10, "N={modulus} c={c} sub={subtract}: {diff}");
                }
            }
        }
    }

    #[test]
    fn families() {
        let post = Spectrum::from_values(vec![0.5, 0.125, 0.125, 0.125, 0.125], 8, 8).unwrap();
        assert_eq!(post_swap_family(&post), Some(2));
        let pre = Spectrum::from_values(vec![0.75, 0.25, 0.0], 4, 4).unwrap();
        assert_eq!(pre_swap_family(&pre), Some(2));
        let other = Spectrum::from_values(vec![0.6, 0.4], 2, 2).unwrap();
        assert_eq!(pre_swap_family(&other), None);
        assert_eq!(post_swap_family(&other), None);
    }

    #[test]
    fn gate_and_permutation_runs_agree() {
        let cfg = ShorConfig { modulus: 15, a: 7, seed: 3 };
        let fast = shor_trajectory(&cfg).unwrap();
        let slow = shor_trajectory_with(&cfg, MultiplierPath::Gates).unwrap();
        assert_eq!(fast.measurements, slow.measurements);
        for (p, q) in fast.trajectory.points.iter().zip(&slow.trajectory.points) {
            assert!((p.lambda0 - q.lambda0).abs() < 1e-9, "{}", p.label);
            assert!((p.entropy - q.entropy).abs() < 1e-9, "{}", p.label);
        }
    }

    #[test]
    fn factors_fifteen_for_most_seeds() {
        let wins = (0..20)
            .filter(|&seed| {
                let run = shor_trajectory(&ShorConfig { modulus: 15, a: 7, seed }).unwrap();
                if let Some(r) = run.order {
                    assert_eq!(pow_mod(7, r, 15), 1);
                }
                matches!(run.outcome, ShorOutcome::Factors { p: 3, q: 5 })
            })
            .count();
        // phase is k/4 uniformly; k odd (prob ½) always recovers r = 4,
        // k = 2 gives denominator 2, and its multiple 4 is the order
        assert!(wins >= 10, "{wins}");
    }
}
