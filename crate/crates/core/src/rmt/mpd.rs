use crate::boundaries::{mpd_atom, mpd_density, mpd_edges};
use crate::error::{Error, Result};
use crate::numerics::quadrature;
use crate::spectral::Spectrum;

const KNOTS: usize = 2048;

/// Marchenko–Pastur CDF by adaptive quadrature of ν.
///
/// Knots are uniform in θ with x = λ− + (λ+ − λ−) sin²(θ/2) and the panel
/// masses are tabulated; an evaluation adds the partial panel by one more
/// quadrature. Build once per (σ, λ) and reuse.
#[derive(Debug, Clone)]
pub struct MpdCdf {
    sigma: f64,
    lambda: f64,
    lo: f64,
    hi: f64,
    atom: f64,
    cum: Vec<f64>,
}

impl MpdCdf {
    pub fn new(sigma: f64, lambda: f64) -> Result<Self> {
        let (lo, hi) = mpd_edges(sigma, lambda)?;
        let w = hi - lo;
        let x_of = |k: usize| {
            let s = (0.5 * std::f64::consts::PI * k as f64 / KNOTS as f64).sin();
            lo + w * s * s
        };
        let mut cum = Vec::with_capacity(KNOTS + 1);
        cum.push(0.0);
        let mut total = 0.0;
        for k in 0..KNOTS {
            let (a, b) = (x_of(k), x_of(k + 1));
            total += quadrature(
                |x| mpd_density(x, sigma, lambda).unwrap_or(0.0),
                a,
                b,
                1e-14,
            )?;
            cum.push(total);
        }
        Ok(Self {
            sigma,
            lambda,
            lo,
            hi,
            atom: mpd_atom(lambda),
            cum,
        })
    }

    pub fn edges(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Mass of the continuous part (min(1, 1/λ) up to quadrature error).
    pub fn continuous_mass(&self) -> f64 {
        self.cum[KNOTS]
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x <= self.lo {
            return self.atom;
        }
        if x >= self.hi {
            return self.atom + self.cum[KNOTS];
        }
        let u = ((x - self.lo) / (self.hi - self.lo)).sqrt().min(1.0);
        let t = u.asin() * 2.0 / std::f64::consts::PI * KNOTS as f64;
        let k = (t as usize).min(KNOTS - 1);
        let s = (0.5 * std::f64::consts::PI * k as f64 / KNOTS as f64).sin();
        let xk = self.lo + (self.hi - self.lo) * s * s;
        let part = match quadrature(
            |y| mpd_density(y, self.sigma, self.lambda).unwrap_or(0.0),
            xk,
            x,
            1e-14,
        ) {
            Ok(v) => v,
            Err(Error::QuadratureNoConvergence { estimate, .. }) => estimate,
            Err(_) => 0.0,
        };
        self.atom + self.cum[k] + part
    }

    /// Kolmogorov–Smirnov distance between the pooled eigenvalues and this
    /// law.
    pub fn ks(&self, values: &[f64]) -> Result<f64> {
        if values.is_empty() {
            return Err(Error::EmptySupport("no eigenvalues for KS statistic".into()));
        }
        let mut v = values.to_vec();
        v.sort_unstable_by(f64::total_cmp);
        let n = v.len() as f64;
        Ok(v.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
            let f = self.cdf(x);
            d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
        }))
    }
}

/// Pooled empirical spectral distribution evaluated on `grid`.
pub fn esd(spectra: &[Spectrum], grid: &[f64]) -> Result<Vec<f64>> {
    let mut pooled: Vec<f64> = spectra.iter().flat_map(|s| s.values().iter().copied()).collect();
    if pooled.is_empty() {
        return Err(Error::EmptySupport("no spectra for ESD".into()));
    }
    pooled.sort_unstable_by(f64::total_cmp);
    let n = pooled.len() as f64;
    Ok(grid
        .iter()
        .map(|&x| pooled.partition_point(|&v| v <= x) as f64 / n)
        .collect())
}

/// KS distance of pooled spectra against the MPD with parameters (σ, λ).
pub fn mpd_ks(spectra: &[Spectrum], sigma: f64, lambda: f64) -> Result<f64> {
    let pooled: Vec<f64> = spectra.iter().flat_map(|s| s.values().iter().copied()).collect();
    MpdCdf::new(sigma, lambda)?.ks(&pooled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_total_mass() {
        for &(s, l) in &[(1.0, 1.0), (0.3, 0.7), (1.0, 0.1), (1.0, 2.0)] {
            let c = MpdCdf::new(s, l).unwrap();
            assert!((c.continuous_mass() - (1.0f64).min(1.0 / l)).abs() < 1e-8, "{s} {l}");
            assert!((c.cdf(1e9) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn cdf_monotone() {
        let c = MpdCdf::new(1.0, 0.5).unwrap();
        let (lo, hi) = c.edges();
        let mut prev = 0.0;
        for i in 0..=1000 {
            let f = c.cdf(lo + (hi - lo) * i as f64 / 1000.0);
            assert!(f >= prev - 1e-15);
            prev = f;
        }
    }

    #[test]
    fn cdf_matches_direct_quadrature() {
        let c = MpdCdf::new(1.0, 0.5).unwrap();
        for &x in &[0.1, 0.5, 1.0, 2.0, 2.9] {
            let direct =
                quadrature(|t| mpd_density(t, 1.0, 0.5).unwrap(), c.edges().0, x, 1e-12).unwrap();
            assert!((c.cdf(x) - direct).abs() < 1e-8, "{x}: {} vs {direct}", c.cdf(x));
        }
    }

    #[test]
    fn esd_step() {
        let s = Spectrum::from_values(vec![1.0], 1, 1).unwrap();
        assert_eq!(esd(&[s], &[0.5, 1.0, 2.0]).unwrap(), vec![0.0, 1.0, 1.0]);
    }
}
