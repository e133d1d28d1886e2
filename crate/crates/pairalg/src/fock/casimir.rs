//! Quadratic Casimir operators of the unitary and orthogonal/symplectic
//! algebras, built from the generator matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::basis::FockSpace;
use crate::fock::ops::{OperatorMatrix, QuasispinSel, Sign};
use crate::half::HalfInt;

impl FockSpace {
    /// `G∘G = Σ_{g odd} G^(g)·G^(g)` for one level: the scalar product over
    /// the odd-rank generators spanning `SO(n_k)` or `Sp(n_k)`.
    pub fn g_circ_g(&self, n: i64, level: usize) -> Result<OperatorMatrix> {
        let basis = self.sector(n)?;
        let mut out = OperatorMatrix::zeros(basis.clone(), basis);
        let tj = self.sys().levels[level].j.twice();
        for g_int in (1..=tj).step_by(2) {
            let g = HalfInt::from_int(g_int);
            let tensor = self.build_g(n, level, level, g)?;
            for gamma in tensor.projections() {
                let prod = tensor.comp(gamma).mul(tensor.comp(-gamma));
                out.add_scaled(&prod, Complex64::new(gamma.phase(), 0.0));
            }
        }
        Ok(out)
    }

    /// `F∘F = Σ_g (-1)^g F^(g)·F^(g)`, the two-level scalar invariant of
    /// `SO(n1)⊗SO(n2)` or `Sp(n1)⊗Sp(n2)`.
    pub fn f_circ_f(&self, n: i64, sigma0: Sign) -> Result<OperatorMatrix> {
        let basis = self.sector(n)?;
        let mut out = OperatorMatrix::zeros(basis.clone(), basis);
        let ja = self.sys().levels[0].j;
        let jb = self.sys().levels[1].j;
        let mut tg = (ja - jb).abs().twice();
        while tg <= (ja + jb).twice() {
            let g = HalfInt::from_twice(tg);
            let f = self.build_f(n, g, sigma0)?;
            for gamma in f.projections() {
                // (-1)^g (-1)^γ from (-1)^g F·F = Σ_γ (-1)^(g+γ) F_γ F_{-γ}
                let w = g.phase_with(gamma);
                let prod = f.comp(gamma).mul(f.comp(-gamma));
                out.add_scaled(&prod, Complex64::new(w, 0.0));
            }
            tg += 2;
        }
        Ok(out)
    }

    /// `C2[SO(n_k)]` or `C2[Sp(n_k)]` for one level: `4 G∘G`.
    pub fn c2_pair_level(&self, n: i64, level: usize) -> Result<OperatorMatrix> {
        Ok(self.g_circ_g(n, level)?.scaled(Complex64::new(4.0, 0.0)))
    }

    /// Two-level `C2[SO(n1+n2)]` or `C2[Sp(n1+n2)]`
    /// `= 2θ F∘F + 4 Gaa∘Gaa + 4 Gbb∘Gbb`.
    pub fn c2_pair_total(&self, n: i64, sigma0: Sign) -> Result<OperatorMatrix> {
        let theta = self.sys().theta();
        let mut out = self.f_circ_f(n, sigma0)?.scaled(Complex64::new(2.0 * theta, 0.0));
        out.add_scaled(&self.g_circ_g(n, 0)?, Complex64::new(4.0, 0.0));
        out.add_scaled(&self.g_circ_g(n, 1)?, Complex64::new(4.0, 0.0));
        Ok(out)
    }

    /// Single-level `C2[U(n_k)] = Σ_g G^(g)·G^(g)` over all ranks.
    pub fn c2_u_level(&self, n: i64, level: usize) -> Result<OperatorMatrix> {
        let basis = self.sector(n)?;
        let mut out = OperatorMatrix::zeros(basis.clone(), basis);
        let tj = self.sys().levels[level].j.twice();
        for g_int in 0..=tj {
            let g = HalfInt::from_int(g_int);
            let tensor = self.build_g(n, level, level, g)?;
            for gamma in tensor.projections() {
                let prod = tensor.comp(gamma).mul(tensor.comp(-gamma));
                out.add_scaled(&prod, Complex64::new(gamma.phase(), 0.0));
            }
        }
        Ok(out)
    }

    /// Two-level `C2[U(n1+n2)] = 2θ N1 N2 + n2 N1 + n1 N2 + C2[U1] + C2[U2]`.
    pub fn c2_u_total(&self, n: i64) -> Result<OperatorMatrix> {
        let sys = self.sys().clone();
        if sys.levels.len() != 2 {
            return Err(Error::InvalidSystem("two-level Casimir requires two levels".into()));
        }
        let theta = sys.theta();
        let (n1, n2) = (f64::from(sys.levels[0].n()), f64::from(sys.levels[1].n()));
        let num1 = self.number_op(n, 0)?;
        let num2 = self.number_op(n, 1)?;
        let mut out = num1.mul(&num2).scaled(Complex64::new(2.0 * theta, 0.0));
        out.add_scaled(&num1, Complex64::new(n2, 0.0));
        out.add_scaled(&num2, Complex64::new(n1, 0.0));
        out.add_scaled(&self.c2_u_level(n, 0)?, Complex64::new(1.0, 0.0));
        out.add_scaled(&self.c2_u_level(n, 1)?, Complex64::new(1.0, 0.0));
        Ok(out)
    }

    /// `4 S+ S-` on sector `n` for the signed sum quasispin (or a single
    /// level), as a square matrix through the `n-2` sector.
    pub fn four_s_plus_s_minus(&self, n: i64, sel: QuasispinSel) -> Result<OperatorMatrix> {
        let s_minus = self.quasispin(n, sel)?.minus;
        let s_plus = self.quasispin(n - 2, sel)?.plus;
        Ok(s_plus.mul(&s_minus).scaled(Complex64::new(4.0, 0.0)))
    }
}

/// Named Casimir matrices for a two-level system on one sector.
pub struct Casimirs {
    pub c2_pair_total: OperatorMatrix,
    pub c2_pair_level: [OperatorMatrix; 2],
    pub c2_u_total: OperatorMatrix,
    pub c2_u_level: [OperatorMatrix; 2],
    pub f_circ_f: OperatorMatrix,
}

impl FockSpace {
    pub fn build_casimirs(&self, n: i64, sigma0: Sign) -> Result<Casimirs> {
        Ok(Casimirs {
            c2_pair_total: self.c2_pair_total(n, sigma0)?,
            c2_pair_level: [self.c2_pair_level(n, 0)?, self.c2_pair_level(n, 1)?],
            c2_u_total: self.c2_u_total(n)?,
            c2_u_level: [self.c2_u_level(n, 0)?, self.c2_u_level(n, 1)?],
            f_circ_f: self.f_circ_f(n, sigma0)?,
        })
    }
}
