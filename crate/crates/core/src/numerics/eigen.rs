//! Hermitian eigenvalues.
//!
//! Small matrices go through cyclic Jacobi with complex rotations; larger ones
//! are reduced to a real symmetric tridiagonal by Householder reflections and
//! finished with implicit QL. Both return eigenvalues in descending order.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Largest dimension handled by Jacobi under [`EigenMethod::Auto`].
pub const JACOBI_MAX_DIM: usize = 64;

const HERMITIAN_TOL: f64 = 1e-10;
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITER: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    #[default]
    Auto,
    Jacobi,
    Tridiagonal,
}

/// All eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eigvalsh_with(m, EigenMethod::Auto)
}

pub fn eigvalsh_with(m: &ComplexMatrix, method: EigenMethod) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let asym = m.max_asymmetry();
    if asym > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    let n = m.rows();
    let mut values = match method {
        EigenMethod::Jacobi => jacobi(m)?,
        EigenMethod::Tridiagonal => tridiagonal_path(m)?,
        EigenMethod::Auto if n <= JACOBI_MAX_DIM => jacobi(m)?,
        EigenMethod::Auto => tridiagonal_path(m)?,
    };
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

fn jacobi(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let fro = m.frobenius_norm();
    if n < 2 || fro == 0.0 {
        return Ok((0..n).map(|i| a[i * n + i].re).collect());
    }
    let threshold = JACOBI_OFF_TOL * fro;

    let max_off = |a: &[C64]| {
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max(a[i * n + j].norm());
            }
        }
        worst
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        if max_off(&a) < threshold {
            return Ok((0..n).map(|i| a[i * n + i].re).collect());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r < threshold * 1e-3 {
                    continue;
                }
                // Phase that makes the (p, q) entry real and positive.
                let w = apq.conj() / r;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // A <- A U with U = D R, D = diag(.., w at q, ..).
                for k in 0..n {
                    let x = a[k * n + p];
                    let y = a[k * n + q] * w;
                    a[k * n + p] = x * c - y * s;
                    a[k * n + q] = x * s + y * c;
                }
                // A <- U† A.
                let wc = w.conj();
                for k in 0..n {
                    let x = a[p * n + k];
                    let y = a[q * n + k] * wc;
                    a[p * n + k] = x * c - y * s;
                    a[q * n + k] = x * s + y * c;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }
    let off = max_off(&a);
    if off < threshold {
        return Ok((0..n).map(|i| a[i * n + i].re).collect());
    }
    Err(Error::EigenNoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
        off,
    })
}

/// Householder reduction to a real symmetric tridiagonal (diag, off-diag).
fn householder_tridiagonal(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut u = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];
    // columns below this norm are dropped; the error is within backward error
    // and it keeps h = O(norm²) out of the subnormal range
    let negligible = f64::EPSILON * m.frobenius_norm();

    for k in 0..n.saturating_sub(2) {
        diag[k] = a[k * n + k].re;
        let lo = k + 1;
        let mut norm2 = 0.0;
        for i in lo..n {
            norm2 += a[i * n + k].norm_sqr();
        }
        let norm = norm2.sqrt();
        let x0 = a[lo * n + k];
        let tail = norm2 - x0.norm_sqr();
        if norm <= negligible {
            off[k] = norm;
            continue;
        }
        if tail <= f64::EPSILON * f64::EPSILON * norm2 {
            // Column already reduced; only the phase of x0 is left.
            off[k] = x0.norm();
            continue;
        }
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        for i in lo..n {
            u[i] = a[i * n + k];
        }
        u[lo] -= alpha;
        let h = norm2 + norm * x0.norm();
        let inv_h = 1.0 / h;

        // p = B u / h using the lower triangle of B only.
        for v in &mut p[lo..n] {
            *v = C64::new(0.0, 0.0);
        }
        for i in lo..n {
            let row = &a[i * n..i * n + i];
            let ui = u[i];
            let mut acc = C64::new(0.0, 0.0);
            for j in lo..i {
                let bij = row[j];
                acc += bij * u[j];
                p[j] += bij.conj() * ui;
            }
            p[i] += acc + a[i * n + i].re * ui;
        }
        let mut upp = C64::new(0.0, 0.0);
        for i in lo..n {
            p[i] *= inv_h;
            upp += u[i].conj() * p[i];
        }
        let beta = 0.5 * upp.re * inv_h;
        // w = p - beta u, stored in p.
        for i in lo..n {
            p[i] -= u[i] * beta;
        }
        for i in lo..n {
            let (ui, wi) = (u[i], p[i]);
            let row = &mut a[i * n..i * n + i + 1];
            for j in lo..=i {
                row[j] -= ui * p[j].conj() + wi * u[j].conj();
            }
        }
        off[k] = norm;
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2].re;
        off[n - 2] = a[(n - 1) * n + n - 2].norm();
    }
    if n >= 1 {
        diag[n - 1] = a[(n - 1) * n + n - 1].re;
        off[n - 1] = 0.0;
    }
    (diag, off)
}

fn tridiagonal_path(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (mut d, mut e) = householder_tridiagonal(m);
    tql(&mut d, &mut e, None)?;
    Ok(d)
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
///
/// `diag` has length n, `off[i]` couples i and i+1 (length n−1). Returns
/// eigenvalues ascending and, column-major, the matching eigenvectors.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    if off.len() + 1 != n && !(n == 0 && off.is_empty()) {
        return Err(Error::Dimension(format!(
            "tridiagonal with {} diagonal and {} off-diagonal entries",
            n,
            off.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|r| z[r * n + k]).collect())
        .collect();
    Ok((values, vectors))
}

/// Implicit QL with Wilkinson-style shifts; `z` (row-major n×n) accumulates
/// the rotations when present.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    // absolute floor so blocks of (near-)zero eigenvalues still deflate
    let anorm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = (d[m].abs() + d[m + 1].abs()).max(anorm);
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::EigenNoConvergence {
                    sweeps: iter,
                    off: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
