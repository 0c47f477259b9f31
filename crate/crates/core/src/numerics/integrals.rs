//! Closed-form integrals of square-root weights used in the MPD boundary
//! derivations.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralKind {
    /// ∫ₐᵇ √((b−x)(x−a)) dx
    SqrtWeight,
    /// ∫ₐᵇ ln x · √((b−x)(x−a)) dx
    LogSqrtWeight,
    /// ∫₀ᵇ ln x · √(x(b−x)) dx
    LogSqrtWeightFromZero,
    /// ∫₀ᵗ x^(d−1) √((t−x)x) dx for integer d in 2..=6
    Moment(u32),
}

/// Coefficient c_d with ∫₀ᵗ x^(d−1) √((t−x)x) dx = c_d π t^(d+1).
pub fn table_coefficient(d: u32) -> Result<f64> {
    Ok(match d {
        2 => 1.0 / 16.0,
        3 => 5.0 / 128.0,
        4 => 7.0 / 256.0,
        5 => 21.0 / 1024.0,
        6 => 33.0 / 2048.0,
        other => return Err(Error::UnsupportedDegree(other)),
    })
}

pub fn closed_form_integral(kind: IntegralKind, a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= a && b.is_finite()) {
        return Err(Error::Domain {
            what: "integration interval",
            value: if a < 0.0 { a } else { b },
            domain: "0 <= a <= b < inf",
        });
    }
    let from_zero = |kind| {
        if a != 0.0 {
            Err(Error::Domain {
                what: "lower limit",
                value: a,
                domain: "a = 0 for this kind",
            })
        } else {
            Ok(kind)
        }
    };
    match kind {
        IntegralKind::SqrtWeight => Ok(PI / 8.0 * (b - a) * (b - a)),
        IntegralKind::LogSqrtWeight => {
            if a == b {
                return Ok(0.0);
            }
            let r = (a * b).sqrt();
            let d2 = (a - b) * (a - b);
            Ok(PI / 16.0
                * (a * a + 6.0 * a * b + b * b - 4.0 * r * (a + b) - 4.0 * d2 * LN_2
                    + 2.0 * d2 * (a + b + 2.0 * r).ln()))
        }
        IntegralKind::LogSqrtWeightFromZero => {
            from_zero(())?;
            if b == 0.0 {
                return Ok(0.0);
            }
            Ok(PI / 16.0 * (2.0 * b * b * b.ln() - b * b * (4.0 * LN_2 - 1.0)))
        }
        IntegralKind::Moment(d) => {
            let c = table_coefficient(d)?;
            from_zero(())?;
            Ok(c * PI * b.powi(d as i32 + 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature;
    use crate::rng::Stream;
    use rand::Rng;

    #[test]
    #[allow(clippy::approx_constant)]
    fn reference_values() {
        let a1 = closed_form_integral(IntegralKind::SqrtWeight, 0.0, 1.0).unwrap();
        assert!((a1 - 0.392_699).abs() < 1e-6);
        assert_eq!(closed_form_integral(IntegralKind::LogSqrtWeight, 2.5, 2.5).unwrap(), 0.0);
        let t2 = closed_form_integral(IntegralKind::Moment(2), 0.0, 1.0).unwrap();
        assert!((t2 - PI / 16.0).abs() < 1e-15);
        let a4 = closed_form_integral(IntegralKind::LogSqrtWeightFromZero, 0.0, 1.0).unwrap();
        assert!((a4 - PI / 16.0 * (1.0 - 4.0 * LN_2)).abs() < 1e-15);
    }

    #[test]
    fn unsupported_degree_and_domain() {
        assert_eq!(
            closed_form_integral(IntegralKind::Moment(7), 0.0, 1.0),
            Err(Error::UnsupportedDegree(7))
        );
        assert!(closed_form_integral(IntegralKind::Moment(1), 0.0, 1.0).is_err());
        assert!(closed_form_integral(IntegralKind::Moment(3), 0.5, 1.0).is_err());
        assert!(closed_form_integral(IntegralKind::SqrtWeight, 2.0, 1.0).is_err());
    }

    #[test]
    fn log_weight_reduces_to_from_zero_form() {
        for b in [0.3, 1.0, 7.5] {
            let x = closed_form_integral(IntegralKind::LogSqrtWeight, 0.0, b).unwrap();
            let y = closed_form_integral(IntegralKind::LogSqrtWeightFromZero, 0.0, b).unwrap();
            assert!((x - y).abs() < 1e-12 * y.abs().max(1.0));
        }
    }

    #[test]
    fn quadrature_agrees_with_every_closed_form() {
        let root = Stream::new(2024);
        let kinds = [
            IntegralKind::SqrtWeight,
            IntegralKind::LogSqrtWeight,
            IntegralKind::LogSqrtWeightFromZero,
            IntegralKind::Moment(2),
            IntegralKind::Moment(3),
            IntegralKind::Moment(4),
            IntegralKind::Moment(5),
            IntegralKind::Moment(6),
        ];
        for (ki, kind) in kinds.into_iter().enumerate() {
            let mut rng = root.split(ki as u64).rng();
            for _ in 0..50 {
                let mut a: f64 = rng.random_range(0.0..10.0);
                let mut b: f64 = rng.random_range(0.0..10.0);
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                let zero_based = !matches!(kind, IntegralKind::SqrtWeight | IntegralKind::LogSqrtWeight);
                if zero_based {
                    a = 0.0;
                }
                let exact = closed_form_integral(kind, a, b).unwrap();
                let q = match kind {
                    IntegralKind::SqrtWeight => quadrature(|x| ((b - x) * (x - a)).max(0.0).sqrt(), a, b, 1e-9),
                    IntegralKind::LogSqrtWeight | IntegralKind::LogSqrtWeightFromZero => {
                        quadrature(|x| x.ln() * ((b - x) * (x - a)).max(0.0).sqrt(), a, b, 1e-9)
                    }
                    IntegralKind::Moment(d) => {
                        quadrature(|x| x.powi(d as i32 - 1) * ((b - x) * x).max(0.0).sqrt(), 0.0, b, 1e-9)
                    }
                }
                .unwrap();
                assert!((q - exact).abs() < 1e-7, "{kind:?} on [{a},{b}]: {q} vs {exact}");
            }
        }
    }
}
