//! Dense complex matrices for the Fock-space oracle.
//!
//! The imaginary plane is allocated lazily: generator matrices are real, and
//! only the self-adjoint combinations with phase `i` ever populate it, so
//! most products run as single real GEMMs.

use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
}

/// `c += alpha * a * b`, all row-major; rows of `a` with zero entries are
/// skipped, which matters because operator matrices are mostly zeros.
fn gemm_acc(c: &mut [f64], a: &[f64], b: &[f64], m: usize, k_dim: usize, n: usize, alpha: f64) {
    if alpha == 0.0 {
        return;
    }
    for i in 0..m {
        let a_row = &a[i * k_dim..(i + 1) * k_dim];
        let c_row = &mut c[i * n..(i + 1) * n];
        for (k, &a_ik) in a_row.iter().enumerate() {
            if a_ik == 0.0 {
                continue;
            }
            let scaled = alpha * a_ik;
            let b_row = &b[k * n..(k + 1) * n];
            for (cj, bj) in c_row.iter_mut().zip(b_row) {
                *cj += scaled * bj;
            }
        }
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, re: vec![0.0; rows * cols], im: None }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.re[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_real(&self) -> bool {
        self.im.is_none()
    }

    fn im_mut(&mut self) -> &mut Vec<f64> {
        if self.im.is_none() {
            self.im = Some(vec![0.0; self.rows * self.cols]);
        }
        self.im.as_mut().unwrap()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let idx = i * self.cols + j;
        Complex64::new(self.re[idx], self.im.as_ref().map_or(0.0, |im| im[idx]))
    }

    pub fn add_entry(&mut self, i: usize, j: usize, x: Complex64) {
        let idx = i * self.cols + j;
        self.re[idx] += x.re;
        if x.im != 0.0 {
            self.im_mut()[idx] += x.im;
        }
    }

    pub fn re_plane(&self) -> &[f64] {
        &self.re
    }

    pub fn im_plane(&self) -> Option<&[f64]> {
        self.im.as_deref()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = CMatrix::zeros(m, n);
        gemm_acc(&mut out.re, &self.re, &other.re, m, k, n, 1.0);
        match (&self.im, &other.im) {
            (None, None) => {}
            (Some(ai), None) => {
                gemm_acc(out.im_mut(), ai, &other.re, m, k, n, 1.0);
            }
            (None, Some(bi)) => {
                gemm_acc(out.im_mut(), &self.re, bi, m, k, n, 1.0);
            }
            (Some(ai), Some(bi)) => {
                gemm_acc(&mut out.re, ai, bi, m, k, n, -1.0);
                let oi = out.im_mut();
                gemm_acc(oi, &self.re, bi, m, k, n, 1.0);
                gemm_acc(oi, ai, &other.re, m, k, n, 1.0);
            }
        }
        out
    }

    /// `self += z * other`.
    pub fn add_scaled(&mut self, other: &CMatrix, z: Complex64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if z == Complex64::ZERO {
            return;
        }
        if z.re != 0.0 {
            for (a, b) in self.re.iter_mut().zip(&other.re) {
                *a += z.re * b;
            }
            if let Some(bi) = &other.im {
                for (a, b) in self.im_mut().iter_mut().zip(bi) {
                    *a += z.re * b;
                }
            }
        }
        if z.im != 0.0 {
            {
                let re_src = other.re.clone();
                for (a, b) in self.im_mut().iter_mut().zip(&re_src) {
                    *a += z.im * b;
                }
            }
            if let Some(bi) = &other.im {
                for (a, b) in self.re.iter_mut().zip(bi) {
                    *a -= z.im * b;
                }
            }
        }
    }

    pub fn scaled(&self, z: Complex64) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows, self.cols);
        out.add_scaled(self, z);
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let idx = i * self.cols + j;
                out.re[j * self.rows + i] = self.re[idx];
            }
        }
        if let Some(im) = &self.im {
            let oi = out.im_mut();
            for i in 0..self.rows {
                for j in 0..self.cols {
                    oi[j * self.rows + i] = -im[i * self.cols + j];
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let mut worst = 0.0f64;
        match &self.im {
            None => {
                for &x in &self.re {
                    worst = worst.max(x.abs());
                }
            }
            Some(im) => {
                for (&r, &i) in self.re.iter().zip(im) {
                    worst = worst.max(r.hypot(i));
                }
            }
        }
        worst
    }

    /// Max-norm deviation from `other`, scaled by the larger of the two
    /// matrices' max entries (floored at 1).
    pub fn relative_deviation(&self, other: &CMatrix) -> f64 {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        self.sub(other).max_abs() / scale
    }

    /// Max-norm distance from self-adjointness (square matrices).
    pub fn hermiticity_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// `A v` for a complex vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}
