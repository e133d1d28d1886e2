//! Hermitian diagonalization for oracle operators.
//!
//! A complex Hermitian matrix `H = A + iB` is embedded into the real
//! symmetric `[[A, -B], [B, A]]` of doubled dimension, whose spectrum is
//! that of `H` with every eigenvalue doubled; complex eigenvectors are
//! recovered from the paired real ones. Matrices with no imaginary plane
//! skip the embedding.

use num_complex::Complex64;

use crate::eigen::{eig_dense_sym, SymMatrix};
use crate::error::{Error, Result};
use crate::fock::matrix::CMatrix;
use crate::fock::ops::OperatorMatrix;
use crate::half::HalfInt;

pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<Complex64>>>,
}

/// Full spectrum (and optionally orthonormal eigenvectors) of a Hermitian
/// matrix. Hermiticity is checked, then enforced by averaging so the real
/// solver sees an exactly symmetric input.
pub fn eig_hermitian(m: &CMatrix, want_vectors: bool) -> Result<HermEigen> {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return Ok(HermEigen { values: vec![], vectors: want_vectors.then(Vec::new) });
    }
    let scale = m.max_abs().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > 1e-9 * scale {
        return Err(Error::NotSymmetric(defect));
    }

    if m.is_real() {
        let sym = SymMatrix::from_fn(n, |i, j| 0.5 * (m.get(i, j).re + m.get(j, i).re));
        let r = eig_dense_sym(&sym, want_vectors)?;
        let vectors = r.vectors.map(|vs| {
            vs.into_iter()
                .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
                .collect()
        });
        return Ok(HermEigen { values: r.values, vectors });
    }

    // Embed: rows/cols [0..n) carry the real part, [n..2n) the imaginary.
    let embed = SymMatrix::from_fn(2 * n, |i, j| {
        let h = |p: usize, q: usize| {
            let z = m.get(p, q);
            let zt = m.get(q, p);
            Complex64::new(0.5 * (z.re + zt.re), 0.5 * (z.im - zt.im))
        };
        match (i < n, j < n) {
            (true, true) => h(i, j).re,
            (false, false) => h(i - n, j - n).re,
            (true, false) => -h(i, j - n).im,
            (false, true) => h(i - n, j).im,
        }
    });
    let r = eig_dense_sym(&embed, want_vectors)?;

    // Eigenvalues appear in exact duplicate pairs; keep one of each.
    let values: Vec<f64> = (0..n).map(|k| 0.5 * (r.values[2 * k] + r.values[2 * k + 1])).collect();

    let vectors = if want_vectors {
        let vs = r.vectors.unwrap();
        let mut accepted: Vec<(f64, Vec<Complex64>)> = Vec::new();
        let cluster_tol = 1e-7 * scale.max(r.values.iter().fold(0.0f64, |a, &b| a.max(b.abs())));
        for (k, v) in vs.iter().enumerate() {
            if accepted.len() == n {
                break;
            }
            let lam = r.values[k];
            let mut z: Vec<Complex64> =
                (0..n).map(|i| Complex64::new(v[i], v[n + i])).collect();
            // Orthogonalize against accepted vectors of the same eigenvalue
            // cluster; each exact pair contributes one independent complex
            // vector.
            for (lam_a, za) in &accepted {
                if (lam - lam_a).abs() > cluster_tol {
                    continue;
                }
                let overlap: Complex64 = za.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
                for (zi, ai) in z.iter_mut().zip(za) {
                    *zi -= overlap * ai;
                }
            }
            let norm2: f64 = z.iter().map(|x| x.norm_sqr()).sum();
            if norm2 > 0.25 {
                let norm = norm2.sqrt();
                for zi in z.iter_mut() {
                    *zi /= norm;
                }
                fix_complex_phase(&mut z);
                accepted.push((lam, z));
            }
        }
        if accepted.len() != n {
            return Err(Error::NoConvergence { index: accepted.len(), iterations: 0 });
        }
        Some(accepted.into_iter().map(|(_, z)| z).collect())
    } else {
        None
    };

    Ok(HermEigen { values, vectors })
}

/// Rotate a complex vector so its largest-magnitude component is real and
/// positive.
fn fix_complex_phase(z: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_norm = 0.0f64;
    for (k, x) in z.iter().enumerate() {
        if x.norm_sqr() > best_norm {
            best_norm = x.norm_sqr();
            best = k;
        }
    }
    if best_norm > 0.0 {
        let phase = z[best] / z[best].norm();
        let rot = phase.conj();
        for x in z.iter_mut() {
            *x *= rot;
        }
    }
}

/// Resolve `x = J(J+1)` to a half-integer `J`; errors when no half-integer
/// matches within `tol`.
pub fn resolve_j(x: f64, tol: f64) -> Result<HalfInt> {
    let j = 0.5 * ((1.0 + 4.0 * x).max(0.0).sqrt() - 1.0);
    let twice = (2.0 * j).round() as i32;
    let jr = f64::from(twice) / 2.0;
    if (jr * (jr + 1.0) - x).abs() > tol {
        return Err(Error::InvalidLabels(format!(
            "eigenvalue {x} is not J(J+1) for half-integer J within {tol}"
        )));
    }
    Ok(HalfInt::from_twice(twice))
}

/// Angular momentum content of the span of `vectors` (assumed invariant
/// under `jsq`): diagonalizes the restriction of `J²` and resolves each
/// eigenvalue to a half-integer `J` within 1e-6.
pub fn j_labels(jsq: &OperatorMatrix, vectors: &[Vec<Complex64>]) -> Result<Vec<HalfInt>> {
    let m = vectors.len();
    if m == 0 {
        return Ok(vec![]);
    }
    let applied: Vec<Vec<Complex64>> = vectors.iter().map(|v| jsq.mat.apply(v)).collect();
    let mut restricted = CMatrix::zeros(m, m);
    for (r, vr) in vectors.iter().enumerate() {
        for (c, avc) in applied.iter().enumerate() {
            let x: Complex64 = vr.iter().zip(avc).map(|(a, b)| a.conj() * b).sum();
            restricted.add_entry(r, c, x);
        }
    }
    let eig = eig_hermitian(&restricted, false)?;
    eig.values.iter().map(|&x| resolve_j(x, 1e-6)).collect()
}
