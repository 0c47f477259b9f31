//! Restarted Lanczos for the lowest eigenpair of a real symmetric operator.

use crate::error::{Error, Result};

use super::tridiagonal_eigen;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Krylov dimension per restart.
    pub krylov: usize,
    pub max_restarts: usize,
    /// Required ‖Hψ − Eψ‖.
    pub tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov: 80,
            max_restarts: 200,
            tol: 1e-9,
        }
    }
}

/// Lowest eigenvalue and unit eigenvector of the operator `apply` (y = H x)
/// on `start.len()` dimensions, with full reorthogonalization. Each restart
/// begins from the previous Ritz vector.
pub fn lanczos_ground<F>(apply: F, start: Vec<f64>, opts: LanczosOptions) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let dim = start.len();
    let mut v0 = start;
    if dim == 0 || normalize(&mut v0) == 0.0 {
        return Err(Error::Dimension("Lanczos start vector is zero".into()));
    }
    let m = opts.krylov.clamp(1, dim);
    let mut w = vec![0.0; dim];
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![v0.clone()];
        let mut alphas = Vec::with_capacity(m);
        let mut betas = Vec::with_capacity(m);
        for j in 0..m {
            apply(&basis[j], &mut w);
            alphas.push(dot(&w, &basis[j]));
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            if j + 1 == m {
                break;
            }
            let beta = dot(&w, &w).sqrt();
            if beta < 1e-14 {
                break;
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }
        let (vals, vecs) = tridiagonal_eigen(&alphas, &betas)?;
        let e0 = vals[0];
        let mut psi = vec![0.0; dim];
        for (c, b) in vecs[0].iter().zip(&basis) {
            psi.iter_mut().zip(b).for_each(|(p, x)| *p += c * x);
        }
        normalize(&mut psi);
        apply(&psi, &mut w);
        residual = w
            .iter()
            .zip(&psi)
            .map(|(hx, x)| (hx - e0 * x).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= opts.tol {
            return Ok((e0, psi));
        }
        v0 = psi;
    }
    Err(Error::SolverNoConvergence { residual })
}
