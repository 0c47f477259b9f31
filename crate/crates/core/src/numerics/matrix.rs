use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Random Hermitian matrix with complex Gaussian off-diagonal entries.
    pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            let d: f64 = rng.sample(StandardNormal);
            m[(i, i)] = C64::new(d, 0.0);
            for j in 0..i {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let z = C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Largest |M[i][j] − conj(M[j][i])| over all entries.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows.min(self.cols) {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&mut self, factor: f64) {
        for z in &mut self.data {
            *z *= factor;
        }
    }

    /// Gram matrix `M M†` (rows × rows), exactly Hermitian.
    ///
    /// The product runs as three real GEMMs on split real/imaginary planes:
    /// `Re = A Aᵀ + B Bᵀ` and `Im = P − Pᵀ` with `P = B Aᵀ`.
    pub fn gram(&self) -> Self {
        let (m, k) = (self.rows, self.cols);
        let re: Vec<f64> = self.data.iter().map(|z| z.re).collect();
        let im: Vec<f64> = self.data.iter().map(|z| z.im).collect();
        let mut g_re = vec![0.0f64; m * m];
        let mut p = vec![0.0f64; m * m];
        let (mi, ki) = (m as isize, k as isize);
        // SAFETY: all slices are sized for the strides passed (m×k inputs,
        // m×m outputs) and the outputs do not alias the inputs.
        unsafe {
            matrixmultiply::dgemm(
                m, k, m, 1.0, re.as_ptr(), ki, 1, re.as_ptr(), 1, ki, 0.0,
                g_re.as_mut_ptr(), mi, 1,
            );
            matrixmultiply::dgemm(
                m, k, m, 1.0, im.as_ptr(), ki, 1, im.as_ptr(), 1, ki, 1.0,
                g_re.as_mut_ptr(), mi, 1,
            );
            matrixmultiply::dgemm(
                m, k, m, 1.0, im.as_ptr(), ki, 1, re.as_ptr(), 1, ki, 0.0,
                p.as_mut_ptr(), mi, 1,
            );
        }
        let mut out = Self::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let r = 0.5 * (g_re[i * m + j] + g_re[j * m + i]);
                let v = C64::new(r, p[i * m + j] - p[j * m + i]);
                out.data[i * m + j] = v;
                out.data[j * m + i] = v.conj();
            }
            out.data[i * m + i].im = 0.0;
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}
