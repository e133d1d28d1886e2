//! Real symmetric eigensolvers: implicit-shift QL for tridiagonal matrices
//! and cyclic Jacobi for dense matrices.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag` of length n, `offdiag` of length n-1.
#[derive(Clone, Debug)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(offdiag.len() + 1, diag.len());
        SymTridiag { diag, offdiag }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }
}

/// Dense symmetric matrix, row-major storage.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let mut m = SymMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n);
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Eigenvalues in ascending order; `vectors[k]` is the k-th eigenvector when
/// requested, with a deterministic sign (largest-magnitude component
/// positive, first such component on ties).
#[derive(Clone, Debug)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
}

const QL_MAX_ITER: usize = 50;
const JACOBI_MAX_SWEEPS: usize = 60;

fn hypot2(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// All eigenpairs of a symmetric tridiagonal matrix by the implicit-shift QL
/// algorithm with Wilkinson shifts.
pub fn eig_tridiag(t: &SymTridiag, want_vectors: bool) -> Result<EigenResult> {
    let n = t.n();
    let mut d = t.diag.clone();
    // e[0..n-1] subdiagonal, e[n-1] scratch.
    let mut e = t.offdiag.clone();
    e.push(0.0);

    // z[k*n + i] = component k of eigenvector i.
    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    } else {
        Vec::new()
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
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
                return Err(Error::NoConvergence { index: l, iterations: QL_MAX_ITER });
            }

            // Wilkinson shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot2(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;

            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot2(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    Ok(finish(d, if want_vectors { Some((z, n)) } else { None }))
}

/// Full spectrum of a dense symmetric matrix by cyclic Jacobi rotations.
/// The off-diagonal Frobenius norm is driven below `1e-12 * ||A||_F`.
pub fn eig_dense_sym(a: &SymMatrix, want_vectors: bool) -> Result<EigenResult> {
    let asym = a.max_asymmetry();
    let scale = a.frobenius().max(1.0);
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }

    let n = a.n();
    let mut m = a.data.clone();
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }

    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    } else {
        Vec::new()
    };

    let frob = a.frobenius();
    let target = 1e-12 * frob;

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[i * n + j] * m[i * n + j];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&m) > target {
        sweeps += 1;
        if sweeps > JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { index: 0, iterations: JACOBI_MAX_SWEEPS });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // Rotation angle that annihilates (p, q).
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e12 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = m[r * n + p];
                    let arq = m[r * n + q];
                    let new_p = arp - s * (arq + tau * arp);
                    let new_q = arq + s * (arp - tau * arq);
                    m[r * n + p] = new_p;
                    m[p * n + r] = new_p;
                    m[r * n + q] = new_q;
                    m[q * n + r] = new_q;
                }
                if want_vectors {
                    for r in 0..n {
                        let zrp = z[r * n + p];
                        let zrq = z[r * n + q];
                        z[r * n + p] = zrp - s * (zrq + tau * zrp);
                        z[r * n + q] = zrq + s * (zrp - tau * zrq);
                    }
                }
            }
        }
    }

    let d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    Ok(finish(d, if want_vectors { Some((z, n)) } else { None }))
}

/// Sort ascending and fix eigenvector signs.
fn finish(d: Vec<f64>, z: Option<(Vec<f64>, usize)>) -> EigenResult {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = z.map(|(z, dim)| {
        order
            .iter()
            .map(|&i| {
                let mut v: Vec<f64> = (0..dim).map(|k| z[k * dim + i]).collect();
                fix_sign(&mut v);
                v
            })
            .collect()
    });
    EigenResult { values, vectors }
}

/// Deterministic sign: make the first largest-magnitude component positive.
pub fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    let mut best_abs = 0.0f64;
    for (k, &x) in v.iter().enumerate() {
        if x.abs() > best_abs {
            best_abs = x.abs();
            best = k;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}
