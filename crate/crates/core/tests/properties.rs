use std::f64::consts::PI;

use proptest::prelude::*;

use entrack_core::boundaries::{exact_upper, f1, f2, f2_attained, f3, flexible_e, flexible_gap, g3, page_entropy};
use entrack_core::export::{parse_trajectory_csv, trajectory_csv};
use entrack_core::numerics::{closed_form_integral, eigvalsh, quadrature, IntegralKind};
use entrack_core::rmt::sample_random_rho;
use entrack_core::scenarios::primes::{omega, omega_sieve, prime_support, PrimeKind, PrimeStateSpec};
use entrack_core::scenarios::Trajectory;
use entrack_core::spectral::{ent_gap, min_entropy, partial_trace, renyi, spectrum, state_spectrum, von_neumann, trajectory_point};
use entrack_core::statevector::{gates, ControlledOp};
use entrack_core::{Bipartition, ComplexMatrix, StateVector, Stream, C64};

fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
    use rand::Rng;
    let mut rng = Stream::new(seed).rng();
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.random::<f64>() * 4.0 - 2.0, 0.0);
        for j in 0..i {
            let z = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

#[derive(Debug, Clone)]
enum Step {
    H(usize),
    Rx(usize, f64),
    Phase(usize, f64),
    Cnot(usize, usize),
    Swap(usize, usize),
    Toffoli(usize, usize, usize),
    Qft(bool),
}

const N: usize = 6;

fn step() -> impl Strategy<Value = Step> {
    let q = 0..N;
    let angle = -PI..PI;
    prop_oneof![
        q.clone().prop_map(Step::H),
        (q.clone(), angle.clone()).prop_map(|(a, t)| Step::Rx(a, t)),
        (q.clone(), angle).prop_map(|(a, t)| Step::Phase(a, t)),
        (q.clone(), q.clone()).prop_map(|(a, b)| Step::Cnot(a, b)),
        (q.clone(), q.clone()).prop_map(|(a, b)| Step::Swap(a, b)),
        (q.clone(), q.clone(), q).prop_map(|(a, b, c)| Step::Toffoli(a, b, c)),
        any::<bool>().prop_map(Step::Qft),
    ]
}

fn apply(st: &mut StateVector, s: &Step) {
    // overlapping qubit choices are rejected by the simulator; skip them
    let _ = match *s {
        Step::H(q) => st.apply_1q(q, gates::H),
        Step::Rx(q, t) => st.apply_1q(q, gates::rx(t)),
        Step::Phase(q, t) => st.apply_1q(q, gates::phase(t)),
        Step::Cnot(c, t) => st.cnot(c, t),
        Step::Swap(a, b) => st.swap(a, b),
        Step::Toffoli(a, b, t) => st.apply_controlled(&[a, b], ControlledOp::X(t)),
        Step::Qft(inv) => st.apply_qft(&[1, 2, 4], inv),
    };
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn norm_survives_ten_thousand_gates(seed in any::<u64>(), steps in prop::collection::vec(step(), 64)) {
        let mut st = StateVector::random(N, Stream::new(seed)).unwrap();
        for k in 0..10_000 {
            apply(&mut st, &steps[k % steps.len()]);
        }
        prop_assert!((st.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_sum_to_trace(n in 1usize..100, seed in any::<u64>()) {
        let m = hermitian(n, seed);
        let vals = eigvalsh(&m).unwrap();
        let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
        prop_assert!((vals.iter().sum::<f64>() - trace).abs() <= 1e-9 * trace.abs().max(1.0));
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn empty_controls_equal_direct_gate(seed in any::<u64>(), q in 0..N, t in -PI..PI) {
        let st = StateVector::random(N, Stream::new(seed)).unwrap();
        let mut a = st.clone();
        let mut b = st;
        a.apply_1q(q, gates::rx(t)).unwrap();
        b.apply_controlled(&[], ControlledOp::Unitary(q, gates::rx(t))).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn reduced_state_is_a_density_matrix(n in 2usize..11, seed in any::<u64>(), mask in any::<u32>()) {
        let st = StateVector::random(n, Stream::new(seed)).unwrap();
        let sub: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        prop_assume!(!sub.is_empty() && sub.len() < n);
        let part = Bipartition::new(n, &sub).unwrap();
        let rho = partial_trace(&st, &part).unwrap();
        let s = spectrum(&rho).unwrap();
        prop_assert!((s.sum() - 1.0).abs() < 1e-9);
        prop_assert!(s.values().iter().all(|&v| v >= 0.0));
        let e = von_neumann(&s);
        let l0 = s.lambda0();
        prop_assert!(f1(l0).unwrap() - 1e-9 <= e);
        prop_assert!(e <= exact_upper(l0, part.alpha() as f64).unwrap() + 1e-9);
    }

    #[test]
    fn schmidt_symmetry(n in 2usize..10, seed in any::<u64>(), mask in any::<u32>()) {
        let st = StateVector::random(n, Stream::new(seed)).unwrap();
        let sub: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        prop_assume!(!sub.is_empty() && sub.len() < n);
        let a = Bipartition::unordered(n, &sub).unwrap();
        let sa = state_spectrum(&st, &a).unwrap();
        let sb = state_spectrum(&st, &a.flipped()).unwrap();
        let k = sa.values().len().min(sb.values().len());
        for i in 0..k {
            prop_assert!((sa.values()[i] - sb.values()[i]).abs() < 1e-10);
        }
        prop_assert!(sa.values()[k..].iter().chain(&sb.values()[k..]).all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn min_entropy_is_high_order_renyi_limit(alpha in 2usize..32, extra in 0usize..32, seed in any::<u64>()) {
        let s = sample_random_rho(alpha, alpha + extra, Stream::new(seed)).unwrap();
        let (r, h) = (renyi(&s, 64.0).unwrap(), min_entropy(&s));
        // H_min <= R_d <= d/(d-1) H_min for every spectrum
        prop_assert!(h - 1e-12 <= r && r <= 64.0 / 63.0 * h + 1e-12);
        if s.lambda0() / s.lambda1() >= 1.1 && h <= 0.63 {
            prop_assert!((r - h).abs() < 0.01);
        }
    }

    #[test]
    fn random_rho_is_normalized(alpha in 1usize..40, extra in 0usize..40, seed in any::<u64>()) {
        let s = sample_random_rho(alpha, alpha + extra, Stream::new(seed)).unwrap();
        prop_assert!((s.sum() - 1.0).abs() < 1e-9);
        prop_assert!(s.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn stored_gap_matches_spectrum(n in 2usize..10, seed in any::<u64>()) {
        let st = StateVector::random(n, Stream::new(seed)).unwrap();
        let p = trajectory_point(&st, &Bipartition::natural(n).unwrap(), "x", &[2.0]).unwrap();
        let s = p.spectrum.as_ref().unwrap();
        let recomputed = (s.lambda0() / s.lambda1()).ln();
        if p.gap.is_finite() {
            prop_assert!((p.gap - recomputed).abs() < 1e-10);
        } else {
            prop_assert!(s.lambda1() < 1e-12);
        }
        prop_assert_eq!(p.gap.to_bits(), ent_gap(s).to_bits());
    }

    #[test]
    fn csv_round_trip(n in 2usize..9, seeds in prop::collection::vec(any::<u64>(), 1..6)) {
        let part = Bipartition::natural(n).unwrap();
        let mut t = Trajectory::new("prop", serde_json::json!({}));
        for (i, s) in seeds.iter().enumerate() {
            let st = StateVector::random(n, Stream::new(*s)).unwrap();
            t.push(trajectory_point(&st, &part, format!("p{i}"), &[2.0, 3.0]).unwrap());
        }
        let rows = parse_trajectory_csv(&trajectory_csv(&t)).unwrap();
        for (r, p) in rows.iter().zip(&t.points) {
            prop_assert_eq!(r.lambda0.to_bits(), p.lambda0.to_bits());
            prop_assert_eq!(r.entropy.to_bits(), p.entropy.to_bits());
            prop_assert_eq!(r.gap.to_bits(), p.gap.to_bits());
        }
    }

    #[test]
    fn closed_forms_match_quadrature(a in 0.0f64..10.0, w in 0.01f64..10.0, d in 2u32..7) {
        let b = (a + w).min(10.0);
        let sq = |x: f64| ((b - x) * (x - a)).max(0.0).sqrt();
        let q = quadrature(sq, a, b, 1e-9).unwrap();
        prop_assert!((q - closed_form_integral(IntegralKind::SqrtWeight, a, b).unwrap()).abs() < 1e-7);
        let q = quadrature(|x| x.ln() * sq(x), a, b, 1e-9).unwrap();
        prop_assert!((q - closed_form_integral(IntegralKind::LogSqrtWeight, a, b).unwrap()).abs() < 1e-7);
        let t = b;
        let mom = |x: f64| x.powi(d as i32 - 1) * ((t - x) * x).max(0.0).sqrt();
        let q = quadrature(mom, 0.0, t, 1e-9).unwrap();
        let exact = closed_form_integral(IntegralKind::Moment(d), 0.0, t).unwrap();
        prop_assert!((q - exact).abs() < 1e-7 * exact.abs().max(1.0), "{} vs {}", q, exact);
    }
}

#[test]
fn tight_curves_are_ordered_on_grid() {
    for alpha in [4.0, 32.0, 256.0] {
        for i in 0..1000 {
            let l0 = 1.0 / alpha + (1.0 - 1.0 / alpha) * i as f64 / 999.0;
            let lo = f1(l0).unwrap();
            let up = exact_upper(l0, alpha).unwrap();
            assert!(lo <= up + 1e-9, "α={alpha} λ0={l0}");
            assert!(up <= f3(l0, alpha).unwrap() + 1e-9, "α={alpha} λ0={l0}");
        }
        // f2 is attained where 1/λ0 is an integer; there it lies in the envelope
        for m in 1..=alpha as usize {
            let l0 = 1.0 / m as f64;
            assert!(f2_attained(l0));
            let v = f2(l0).unwrap();
            assert!(f1(l0).unwrap() <= v + 1e-9 && v <= exact_upper(l0, alpha).unwrap() + 1e-9);
        }
    }
}

#[test]
fn flexible_limits() {
    for (a, b) in [(4.0, 4.0), (128.0, 512.0), (64.0, 64.0)] {
        assert!((flexible_e(1e-9, a, b).unwrap() - page_entropy(a, b)).abs() < 1e-6);
    }
    for l0 in [0.1, 0.4, 0.8] {
        let a = 16.0;
        // the offset is exactly 2 ln(1 + sqrt(α/β)), 6.3e-5 at β = 1e9 α
        let at = |ratio: f64| flexible_gap(l0, a, ratio * a).unwrap() - g3(l0, a).unwrap();
        assert!((at(1e9) + 2.0 * (1.0 + 1e-9f64.sqrt()).ln()).abs() < 1e-12);
        assert!(at(1e14).abs() < 1e-6);
    }
}

#[test]
fn renyi_64_sits_h_min_over_63_above_min_entropy() {
    let s = entrack_core::Spectrum::from_values(vec![0.4, 0.36, 0.24], 3, 3).unwrap();
    let gap = renyi(&s, 64.0).unwrap() - min_entropy(&s);
    assert!(s.lambda0() / s.lambda1() >= 1.1);
    assert!(gap > 0.01 && (gap - min_entropy(&s) / 63.0).abs() < 1e-4);
}

#[test]
fn prime_support_sizes_match_trial_division() {
    let n = 12;
    let sieve = omega_sieve(1 << n);
    let mut total = 0;
    for k in 1..n as u32 {
        let expected = (2u64..1 << n).filter(|&x| omega(x).unwrap() == k).count();
        let p = prime_support(&PrimeStateSpec { n, kind: PrimeKind::P, k }, &sieve).unwrap();
        assert_eq!(p.len(), expected, "k={k}");
        total += p.len();
        let u = prime_support(&PrimeStateSpec { n, kind: PrimeKind::U, k }, &sieve).unwrap();
        assert_eq!(u.len(), total, "U_{k}");
    }
    assert_eq!(total, (1 << n) - 2);
}
