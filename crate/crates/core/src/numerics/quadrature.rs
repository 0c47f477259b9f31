//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval is mapped through `x = a + (b − a) sin²(θ/2)`, θ ∈ [0, π],
//! whose Jacobian `(b − a)/2 · sin θ` cancels square-root behaviour at both
//! endpoints, so integrands like `√((b−x)(x−a))`, `ln x · √(x(b−x))` or the
//! Marchenko–Pastur density become smooth (or mildly log-singular) panels.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_PANELS: usize = 4000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = g(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = g(center - dx) + g(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive estimate of ∫ₐᵇ f(x) dx within absolute tolerance `tol`.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    quadrature_detailed(f, a, b, tol).map(|q| q.value)
}

pub fn quadrature_detailed<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureEstimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain {
            what: "integration limit",
            value: if a.is_finite() { b } else { a },
            domain: "finite reals",
        });
    }
    if a == b {
        return Ok(QuadratureEstimate {
            value: 0.0,
            error_bound: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let width = hi - lo;
    let g = |theta: f64| {
        let s = (0.5 * theta).sin();
        let x = lo + width * s * s;
        let v = f(x) * 0.5 * width * theta.sin();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let (v, e) = gauss_kronrod(&g, 0.0, PI);
    let mut panels = vec![Panel {
        lo: 0.0,
        hi: PI,
        value: v,
        error: e,
    }];
    let mut evaluations = 15;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= tol {
            return Ok(QuadratureEstimate {
                value: sign * total,
                error_bound: err,
                evaluations,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.lo + p.hi);
        if panels.len() >= MAX_PANELS || mid <= p.lo || mid >= p.hi {
            return Err(Error::QuadratureNoConvergence {
                estimate: sign * total,
                error_bound: err,
            });
        }
        let (lv, le) = gauss_kronrod(&g, p.lo, mid);
        let (rv, re) = gauss_kronrod(&g, mid, p.hi);
        evaluations += 30;
        panels[worst] = Panel {
            lo: p.lo,
            hi: mid,
            value: lv,
            error: le,
        };
        panels.push(Panel {
            lo: mid,
            hi: p.hi,
            value: rv,
            error: re,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_area() {
        let v = quadrature(|x| (x * (1.0 - x)).sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - PI / 8.0).abs() < 1e-9);
    }

    #[test]
    fn log_weighted_semicircle() {
        let v = quadrature(|x| x.ln() * (x * (1.0 - x)).sqrt(), 0.0, 1.0, 1e-11).unwrap();
        let exact = PI / 16.0 * (1.0 - 4.0 * 2f64.ln());
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
        assert!((v + 0.348_047).abs() < 1e-6);
    }

    #[test]
    fn first_moment_matches_table() {
        let v = quadrature(|x| x * (x * (1.0 - x)).sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - PI / 16.0).abs() < 1e-9);
    }

    #[test]
    fn smooth_and_reversed_limits() {
        let v = quadrature(|x| x.exp(), 2.0, 0.0, 1e-12).unwrap();
        assert!((v + (2f64.exp() - 1.0)).abs() < 1e-10);
        assert_eq!(quadrature(|x| x, 1.0, 1.0, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn nonconvergence_reports_best_estimate() {
        let r = quadrature(|x| (100.0 * x).sin() / x.max(1e-300).powf(0.999), 0.0, 1.0, 1e-15);
        match r {
            Err(Error::QuadratureNoConvergence { estimate, error_bound }) => {
                assert!(estimate.is_finite() && error_bound > 1e-15);
            }
            Ok(_) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
