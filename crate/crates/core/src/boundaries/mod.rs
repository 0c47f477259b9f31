//! Tight and random-matrix (flexible) boundary curves in the
//! `(λ0, measure)` plane, plus the Marchenko–Pastur density.
//!
//! All entropies are in nats.

mod curve;

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::numerics::{closed_form_integral, IntegralKind};

pub use curve::{default_grid, sample_curve, BoundaryCurve, CurveName, CurveParams};

fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}

/// −x ln x with the x = 0 limit.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn check_lambda0_closed(l0: f64) -> Result<()> {
    if l0 > 0.0 && l0 <= 1.0 {
        Ok(())
    } else {
        Err(domain("λ0", l0, "(0, 1]"))
    }
}

fn check_lambda0_open(l0: f64) -> Result<()> {
    if l0 > 0.0 && l0 < 1.0 {
        Ok(())
    } else {
        Err(domain("λ0", l0, "(0, 1)"))
    }
}

fn check_dims(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha >= 1.0) {
        return Err(domain("α", alpha, "[1, ∞)"));
    }
    if !(beta >= alpha) {
        return Err(domain("β", beta, "[α, ∞)"));
    }
    Ok(())
}

/// Lower bound: binary entropy of (λ0, 1−λ0).
pub fn f1(l0: f64) -> Result<f64> {
    check_lambda0_closed(l0)?;
    Ok(-xlnx(l0) - xlnx(1.0 - l0))
}

/// −ln λ0, attained when 1/λ0 is an integer.
pub fn f2(l0: f64) -> Result<f64> {
    check_lambda0_closed(l0)?;
    Ok(-l0.ln())
}

/// Whether `f2` is attained at `l0` (1/λ0 within 1e-9 of an integer).
pub fn f2_attained(l0: f64) -> bool {
    let w = 1.0 / l0;
    (w - w.round()).abs() <= 1e-9
}

fn check_upper_domain(l0: f64, alpha: f64) -> Result<()> {
    if !(alpha >= 2.0) {
        return Err(domain("α", alpha, "[2, ∞)"));
    }
    if !(l0 >= 1.0 / alpha - 1e-12 && l0 <= 1.0) {
        return Err(domain("λ0", l0, "[1/α, 1]"));
    }
    Ok(())
}

/// Upper bound with the α−1 ≈ α approximation: (1−λ0) ln α + f1(λ0).
pub fn f3(l0: f64, alpha: f64) -> Result<f64> {
    check_upper_domain(l0, alpha)?;
    Ok((1.0 - l0) * alpha.ln() - xlnx(l0) - xlnx(1.0 - l0))
}

/// Exact upper bound: the remaining α−1 eigenvalues all equal.
pub fn exact_upper(l0: f64, alpha: f64) -> Result<f64> {
    check_upper_domain(l0, alpha)?;
    let rest = 1.0 - l0;
    let tail = if rest <= 0.0 {
        0.0
    } else {
        -rest * (rest / (alpha - 1.0)).ln()
    };
    Ok(-xlnx(l0) + tail)
}

/// f1(λ0) − tol ≤ E ≤ exact_upper(λ0, α) + tol, with λ0 clamped to
/// [1/α, 1] to absorb rounding.
pub fn tight_containment(l0: f64, entropy: f64, alpha: usize, tol: f64) -> bool {
    if !(l0.is_finite() && entropy.is_finite()) {
        return false;
    }
    if alpha < 2 {
        return entropy.abs() <= tol;
    }
    let a = alpha as f64;
    let l = l0.clamp(1.0 / a, 1.0);
    let (Ok(lower), Ok(upper)) = (f1(l), exact_upper(l, a)) else {
        return false;
    };
    entropy >= lower - tol && entropy <= upper + tol
}

/// Marchenko–Pastur support edges σ²(1 ± √λ)².
pub fn mpd_edges(sigma: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain("σ", sigma, "(0, ∞)"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain("λ", lambda, "(0, ∞)"));
    }
    let s2 = sigma * sigma;
    let r = lambda.sqrt();
    Ok((s2 * (1.0 - r).powi(2), s2 * (1.0 + r).powi(2)))
}

/// Continuous part ν of the Marchenko–Pastur law at `x`.
///
/// For λ > 1 the law also has an atom of mass 1 − 1/λ at zero, see
/// [`mpd_atom`]; ν itself then integrates to 1/λ.
pub fn mpd_density(x: f64, sigma: f64, lambda: f64) -> Result<f64> {
    let (lo, hi) = mpd_edges(sigma, lambda)?;
    if x <= lo || x >= hi || x <= 0.0 {
        return Ok(0.0);
    }
    Ok(((hi - x) * (x - lo)).sqrt() / (2.0 * PI * sigma * sigma * lambda * x))
}

/// Mass of the atom at zero.
pub fn mpd_atom(lambda: f64) -> f64 {
    if lambda > 1.0 {
        1.0 - 1.0 / lambda
    } else {
        0.0
    }
}

/// Page's average entanglement entropy ln α − α/(2β).
pub fn page_entropy(alpha: f64, beta: f64) -> f64 {
    alpha.ln() - alpha / (2.0 * beta)
}

/// Exact finite-size mean Σ_{k=β+1}^{αβ} 1/k − (α−1)/(2β), for α ≤ β.
pub fn page_entropy_exact(alpha: usize, beta: usize) -> f64 {
    let harmonic: f64 = (beta + 1..=alpha * beta).map(|k| 1.0 / k as f64).sum();
    harmonic - (alpha as f64 - 1.0) / (2.0 * beta as f64)
}

/// Conditional mean entropy of a random state given its dominant eigenvalue.
pub fn flexible_e(l0: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_lambda0_closed(l0)?;
    check_dims(alpha, beta)?;
    let rest = 1.0 - l0;
    let tail = if rest <= 0.0 {
        0.0
    } else {
        rest * (alpha.ln() - rest.ln() - alpha / (2.0 * beta))
    };
    Ok(tail - xlnx(l0))
}

/// flexible_e at λ0 = ½.
pub fn e_half(alpha: f64, beta: f64) -> Result<f64> {
    check_dims(alpha, beta)?;
    Ok(0.5 * alpha.ln() - alpha / (4.0 * beta) + LN_2)
}

/// Dominant eigenvalue where the flexible curve meets the MPD bulk edge,
/// (1 + √(α/β))²/α.
pub fn flexible_edge(alpha: f64, beta: f64) -> f64 {
    (1.0 + (alpha / beta).sqrt()).powi(2) / alpha
}

fn check_shor(x: f64) -> Result<()> {
    if x > 0.5 && x <= 1.0 {
        Ok(())
    } else {
        Err(domain("x", x, "(1/2, 1]"))
    }
}

/// Pre-cSWAP Shor curve −x ln x − (1−x) ln(x − ½).
pub fn f_shor(x: f64) -> Result<f64> {
    check_shor(x)?;
    let rest = 1.0 - x;
    let tail = if rest <= 0.0 { 0.0 } else { -rest * (x - 0.5).ln() };
    Ok(-xlnx(x) + tail)
}

/// Entropy of {½} ∪ {2^m copies of 2^{−(m+1)}}: (m+2) ln 2 / 2.
pub fn shor_cluster_entropy(m: u32) -> f64 {
    f64::from(m + 2) * LN_2 / 2.0
}

/// Tight lower gap boundary ln λ0 − ln(1−λ0).
pub fn g1(l0: f64) -> Result<f64> {
    check_lambda0_open(l0)?;
    Ok(l0.ln() - (1.0 - l0).ln())
}

/// Tight gap boundary with equal remaining eigenvalues.
pub fn g3(l0: f64, alpha: f64) -> Result<f64> {
    check_lambda0_open(l0)?;
    if !(alpha >= 2.0) {
        return Err(domain("α", alpha, "[2, ∞)"));
    }
    Ok(l0.ln() - ((1.0 - l0) / alpha).ln())
}

/// Gap to the MPD right edge of the remaining spectrum.
pub fn flexible_gap(l0: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_lambda0_open(l0)?;
    check_dims(alpha, beta)?;
    let edge = (1.0 - l0) / alpha * (1.0 + (alpha / beta).sqrt()).powi(2);
    Ok(l0.ln() - edge.ln())
}

/// Shor gap curve ln x + ln 2 − ln(2x − 1).
pub fn g_shor(x: f64) -> Result<f64> {
    check_shor(x)?;
    Ok(x.ln() + LN_2 - (2.0 * x - 1.0).ln())
}

/// d-th moment of the α = β Marchenko–Pastur law with variance σ².
pub fn mpd_moment_square(d: u32, sigma2: f64) -> Result<f64> {
    let t = 4.0 * sigma2;
    Ok(closed_form_integral(IntegralKind::Moment(d), 0.0, t)? / (2.0 * PI * sigma2))
}

/// Flexible Rényi curve at α = β; `d = 1` selects the von Neumann limit.
pub fn renyi_flexible(l0: f64, alpha: f64, d: u32) -> Result<f64> {
    check_lambda0_closed(l0)?;
    if !(alpha >= 2.0) {
        return Err(domain("α", alpha, "[2, ∞)"));
    }
    let rest = 1.0 - l0;
    match d {
        1 => {
            let tail = if rest <= 0.0 {
                0.0
            } else {
                rest * (alpha.ln() - rest.ln() - 0.5)
            };
            Ok(tail - xlnx(l0))
        }
        2 => Ok(-((l0 * l0 * (alpha + 2.0) - 4.0 * l0 + 2.0) / alpha).ln()),
        3..=6 => {
            let m = mpd_moment_square(d, rest / alpha)?;
            let df = f64::from(d);
            Ok((l0.powf(df) + alpha * m).ln() / (1.0 - df))
        }
        other => Err(Error::UnsupportedDegree(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn f1_values() {
        assert_eq!(f1(1.0).unwrap(), 0.0);
        assert!((f1(0.5).unwrap() - LN_2).abs() < EPS);
        assert!((f1(0.4).unwrap() - 0.673012).abs() < 1e-6);
        assert!(f1(0.0).is_err() && f1(1.1).is_err());
    }

    #[test]
    fn f2_values() {
        assert!((f2(0.5).unwrap() - LN_2).abs() < EPS);
        assert!((f2(0.25).unwrap() - 4f64.ln()).abs() < EPS);
        assert_eq!(f2(1.0).unwrap(), 0.0);
        assert!(f2_attained(0.25) && !f2_attained(0.3));
    }

    #[test]
    fn upper_values() {
        assert_eq!(f3(1.0, 16.0).unwrap(), 0.0);
        assert_eq!(exact_upper(1.0, 16.0).unwrap(), 0.0);
        let direct = -0.4 * 0.4f64.ln() - 0.6 * (0.6f64 / 31.0).ln();
        assert!((exact_upper(0.4, 32.0).unwrap() - direct).abs() < EPS);
        assert!((direct - 2.733404).abs() < 1e-6);
        assert!((f3(0.4, 32.0).unwrap() - 2.752454).abs() < 1e-6);
        assert!((exact_upper(1.0 / 32.0, 32.0).unwrap() - 32f64.ln()).abs() < 1e-12);
        assert!(exact_upper(0.01, 32.0).is_err());
    }

    #[test]
    fn containment_examples() {
        let e = -0.8 * 0.4f64.ln() - 0.2 * 0.2f64.ln();
        assert!(tight_containment(0.4, e, 4, 1e-9));
        assert!(!tight_containment(0.4, 0.5, 4, 1e-9));
        assert!(!tight_containment(0.9, 2.0, 4, 1e-9));
        assert!(tight_containment(1.0 + 1e-15, 0.0, 4, 1e-9));
    }

    #[test]
    fn mpd_edge_values() {
        assert_eq!(mpd_edges(1.0, 1.0).unwrap(), (0.0, 4.0));
        let (_, hi) = mpd_edges(1.0, 0.5).unwrap();
        assert!((hi - (1.0 + 0.5f64.sqrt()).powi(2)).abs() < EPS);
        assert!((hi - 2.914).abs() < 1e-3);
        assert!(mpd_edges(0.0, 1.0).is_err() && mpd_edges(1.0, -1.0).is_err());
    }

    #[test]
    fn flexible_e_values() {
        let page = flexible_e(1e-12, 128.0, 512.0).unwrap();
        assert!((page - (128f64.ln() - 0.125)).abs() < 1e-9);
        assert!((page - 4.727030).abs() < 1e-6);
        let h = flexible_e(0.5, 64.0, 512.0).unwrap();
        assert!((h - 2.741339).abs() < 1e-6);
        assert!((h - e_half(64.0, 512.0).unwrap()).abs() < EPS);
        let a = flexible_e(0.999, 128.0, 128.0).unwrap();
        let direct = 0.001 * (128f64.ln() - 0.001f64.ln() - 0.5) - 0.999 * 0.999f64.ln();
        assert!((a - direct).abs() < 1e-9);
        assert!(a < flexible_e(0.9, 128.0, 128.0).unwrap());
        assert!(flexible_e(0.5, 64.0, 32.0).is_err());
    }

    #[test]
    fn exact_page_approaches_asymptotic() {
        assert!((page_entropy_exact(2, 2) - 1.0 / 3.0).abs() < EPS);
        assert_eq!(page_entropy_exact(1, 9), 0.0);
        let d = page_entropy_exact(128, 512) - page_entropy(128.0, 512.0);
        assert!(d.abs() < 1e-4);
    }

    #[test]
    fn e_half_values() {
        let a = 32.0;
        assert!((e_half(a, a).unwrap() - (0.5 * a.ln() + LN_2 - 0.25)).abs() < EPS);
        let n = 6.0;
        let expect = (n + 2.0) / 2.0 * LN_2 - 1.0 / 32.0;
        assert!((e_half(64.0, 512.0).unwrap() - expect).abs() < EPS);
    }

    #[test]
    fn shor_curves() {
        assert_eq!(f_shor(1.0).unwrap(), 0.0);
        let direct = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert!((f_shor(0.75).unwrap() - direct).abs() < EPS);
        assert!((direct - 0.562335).abs() < 1e-6);
        assert!(f_shor(0.5).is_err());
        assert!((shor_cluster_entropy(0) - LN_2).abs() < EPS);
        assert!((shor_cluster_entropy(1) - 1.5 * LN_2).abs() < EPS);
        assert!((g_shor(1.0).unwrap() - LN_2).abs() < EPS);
    }

    #[test]
    fn gap_curves() {
        assert_eq!(g1(0.5).unwrap(), 0.0);
        assert!((flexible_gap(0.5, 128.0, 128.0).unwrap() - 32f64.ln()).abs() < EPS);
        assert!((32f64.ln() - 3.465736).abs() < 1e-6);
        assert!(g1(1.0).is_err());
    }

    #[test]
    fn renyi_flexible_values() {
        assert!(renyi_flexible(1.0, 128.0, 2).unwrap().abs() < EPS);
        let l = 0.37;
        assert!(
            (renyi_flexible(l, 128.0, 1).unwrap() - flexible_e(l, 128.0, 128.0).unwrap()).abs()
                < EPS
        );
        assert!((renyi_flexible(1e-15, 128.0, 2).unwrap() - 64f64.ln()).abs() < 1e-9);
        assert_eq!(renyi_flexible(0.5, 8.0, 7), Err(Error::UnsupportedDegree(7)));
    }

    #[test]
    fn renyi_two_matches_table_moment() {
        // the closed form equals the moment-table assembly at d = 2
        for &l0 in &[0.05, 0.3, 0.6, 0.95] {
            for &alpha in &[4.0, 64.0, 1024.0] {
                let m = mpd_moment_square(2, (1.0 - l0) / alpha).unwrap();
                let via_table = -(l0 * l0 + alpha * m).ln();
                let closed = renyi_flexible(l0, alpha, 2).unwrap();
                assert!((via_table - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn renyi_degrees_decrease() {
        for &l0 in &[0.1, 0.5, 0.9] {
            let mut prev = f64::INFINITY;
            for d in 1..=6 {
                let v = renyi_flexible(l0, 64.0, d).unwrap();
                assert!(v <= prev + 1e-12, "d={d} l0={l0}");
                prev = v;
            }
        }
    }
}
