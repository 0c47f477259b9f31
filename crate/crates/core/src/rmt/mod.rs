//! Wishart-type random matrix sampling and Monte Carlo checks of the
//! Marchenko–Pastur, Page and dominant-eigenvalue laws.
//!
//! Every sample `k` draws from `stream.split(k)`, so results do not depend
//! on the rayon thread count.

mod mpd;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundaries::mpd_edges;
use crate::error::{Error, Result};
use crate::numerics::{eigvalsh, ComplexMatrix, C64};
use crate::rng::Stream;
use crate::spectral::{ent_gap, renyi, von_neumann, Spectrum};

pub use mpd::{esd, mpd_ks, MpdCdf};

/// Parameters of an ensemble of α×β matrices with i.i.d. entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub alpha: usize,
    pub beta: usize,
    /// Entry mean (real).
    pub gamma: f64,
    /// Entry standard deviation; the complex variance is σ².
    pub sigma: f64,
    pub samples: usize,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn centered(alpha: usize, beta: usize, samples: usize, seed: u64) -> Self {
        Self {
            alpha,
            beta,
            gamma: 0.0,
            sigma: 1.0,
            samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dims(self.alpha, self.beta)?;
        if self.samples == 0 {
            return Err(Error::Config("samples must be >= 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!("sigma {} must be positive", self.sigma)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::Config("gamma must be finite".into()));
        }
        Ok(())
    }

    /// Ratio α/β.
    pub fn lambda(&self) -> f64 {
        self.alpha as f64 / self.beta as f64
    }
}

fn check_dims(alpha: usize, beta: usize) -> Result<()> {
    if alpha == 0 || alpha > beta {
        return Err(Error::Config(format!(
            "dimensions must satisfy 1 <= alpha <= beta (got {alpha}, {beta})"
        )));
    }
    Ok(())
}

/// α×β matrix with entries γ + 𝒩_ℂ(0, σ²).
pub fn sample_entries<R: Rng + ?Sized>(
    alpha: usize,
    beta: usize,
    gamma: f64,
    sigma: f64,
    rng: &mut R,
) -> ComplexMatrix {
    let s = sigma * std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(alpha, beta, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(gamma + s * re, s * im)
    })
}

fn wishart_one(cfg: &EnsembleConfig, stream: Stream) -> Result<Spectrum> {
    let x = sample_entries(cfg.alpha, cfg.beta, cfg.gamma, cfg.sigma, &mut stream.rng());
    let mut y = x.gram();
    y.scale(1.0 / cfg.beta as f64);
    Spectrum::from_values(eigvalsh(&y)?, cfg.alpha, cfg.beta)
}

/// Eigenvalues of Y = X X†/β for each sample.
pub fn sample_wishart(cfg: &EnsembleConfig) -> Result<Vec<Spectrum>> {
    cfg.validate()?;
    let root = Stream::new(cfg.seed).named("wishart");
    (0..cfg.samples)
        .into_par_iter()
        .map(|k| wishart_one(cfg, root.split(k as u64)))
        .collect()
}

/// Spectrum of ρ = Z Z†/Tr(Z Z†) for a complex Gaussian α×β matrix Z.
pub fn sample_random_rho(alpha: usize, beta: usize, stream: Stream) -> Result<Spectrum> {
    check_dims(alpha, beta)?;
    let z = sample_entries(alpha, beta, 0.0, 1.0, &mut stream.rng());
    let mut rho = z.gram();
    let tr = rho.trace().re;
    rho.scale(1.0 / tr);
    let mut values = eigvalsh(&rho)?;
    // absorb the eigensolver's rounding so Σλ = 1 to machine precision
    let sum: f64 = values.iter().sum();
    for v in &mut values {
        *v /= sum;
    }
    Spectrum::from_values(values, alpha, beta)
}

/// `samples` independent random-ρ spectra.
pub fn sample_random_rhos(
    alpha: usize,
    beta: usize,
    samples: usize,
    stream: Stream,
) -> Result<Vec<Spectrum>> {
    (0..samples)
        .into_par_iter()
        .map(|k| sample_random_rho(alpha, beta, stream.split(k as u64)))
        .collect()
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            samples: n,
        }
    }
}

/// Monte Carlo mean of the entanglement entropy of random states.
pub fn page_mc(alpha: usize, beta: usize, samples: usize, stream: Stream) -> Result<McEstimate> {
    page_mc_values(alpha, beta, samples, stream).map(|v| McEstimate::from_values(&v))
}

/// Per-sample entropies behind [`page_mc`].
pub fn page_mc_values(alpha: usize, beta: usize, samples: usize, stream: Stream) -> Result<Vec<f64>> {
    check_dims(alpha, beta)?;
    if samples == 0 {
        return Err(Error::Config("samples must be >= 1".into()));
    }
    let spectra = sample_random_rhos(alpha, beta, samples, stream)?;
    Ok(spectra.iter().map(von_neumann).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominantPoint {
    pub gamma: f64,
    pub mean_lambda0: f64,
    pub stderr: f64,
    /// max(αγ², λ+): the leading-order prediction.
    pub predicted: f64,
    pub lambda_plus: f64,
}

/// Mean dominant eigenvalue of decentralized Wishart matrices per γ.
pub fn dominant_sweep(
    alpha: usize,
    beta: usize,
    gammas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<DominantPoint>> {
    let root = Stream::new(seed).named("dominant");
    let (_, lambda_plus) = mpd_edges(1.0, alpha as f64 / beta as f64)?;
    gammas
        .iter()
        .enumerate()
        .map(|(i, &gamma)| {
            let cfg = EnsembleConfig {
                alpha,
                beta,
                gamma,
                sigma: 1.0,
                samples,
                seed: root.split(i as u64).seed(),
            };
            let l0: Vec<f64> = sample_wishart(&cfg)?.iter().map(|s| s.lambda0()).collect();
            let est = McEstimate::from_values(&l0);
            Ok(DominantPoint {
                gamma,
                mean_lambda0: est.mean,
                stderr: est.stderr,
                predicted: (alpha as f64 * gamma * gamma).max(lambda_plus),
                lambda_plus,
            })
        })
        .collect()
}

/// Random-ρ statistics conditioned on λ0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalBin {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
    pub count: usize,
    pub mean_lambda0: f64,
    pub mean_entropy: f64,
    pub mean_renyi2: f64,
    /// Mean of finite gaps in the bin.
    pub mean_gap: f64,
}

/// Bins spectra by λ0 into `bins` equal-width bins spanning the observed
/// range and averages entropy, Rényi-2 and gap per bin.
pub fn conditional_bins(spectra: &[Spectrum], bins: usize) -> Result<Vec<ConditionalBin>> {
    if spectra.is_empty() || bins == 0 {
        return Err(Error::Config("conditional binning needs samples and bins".into()));
    }
    let l0: Vec<f64> = spectra.iter().map(|s| s.lambda0()).collect();
    let lo = l0.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = l0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
    let mut acc = vec![(0usize, 0.0, 0.0, 0.0, 0.0, 0usize); bins];
    for s in spectra {
        let b = (((s.lambda0() - lo) / width) as usize).min(bins - 1);
        let gap = ent_gap(s);
        let a = &mut acc[b];
        a.0 += 1;
        a.1 += s.lambda0();
        a.2 += von_neumann(s);
        a.3 += renyi(s, 2.0)?;
        if gap.is_finite() {
            a.4 += gap;
            a.5 += 1;
        }
    }
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(b, (n, l, e, r, g, ng))| {
            let blo = lo + width * b as f64;
            let nf = n.max(1) as f64;
            ConditionalBin {
                lo: blo,
                hi: blo + width,
                center: blo + 0.5 * width,
                count: n,
                mean_lambda0: l / nf,
                mean_entropy: e / nf,
                mean_renyi2: r / nf,
                mean_gap: if ng > 0 { g / ng as f64 } else { f64::NAN },
            }
        })
        .collect())
}
