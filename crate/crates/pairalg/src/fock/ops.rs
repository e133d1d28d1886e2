//! Second-quantized operators as explicit matrices between Fock sectors.
//!
//! Number-conserving operators are square on one sector; pair and
//! single-mode operators map between sectors. Spherical tensor structure is
//! carried by `TensorOperator` (one matrix per component) and the coupled
//! product/commutator calculus acts on whole tensors.

use std::rc::Rc;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::basis::{apply_annihilation, apply_creation, FockBasis, FockSpace};
use crate::fock::matrix::CMatrix;
use crate::half::HalfInt;
use crate::wigner::{cg, triangle};

/// Overall sign choice (`σ` or `σ0`) appearing in sum quasispins and in the
/// two-level generators `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A matrix between two Fock sectors: `ket` is the input sector (columns),
/// `bra` the output sector (rows).
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub bra: Arc<FockBasis>,
    pub ket: Arc<FockBasis>,
    pub mat: CMatrix,
}

impl OperatorMatrix {
    pub fn zeros(bra: Arc<FockBasis>, ket: Arc<FockBasis>) -> Self {
        let mat = CMatrix::zeros(bra.dim(), ket.dim());
        OperatorMatrix { bra, ket, mat }
    }

    pub fn identity(basis: Arc<FockBasis>) -> Self {
        let mat = CMatrix::identity(basis.dim());
        OperatorMatrix { bra: Arc::clone(&basis), ket: basis, mat }
    }

    pub fn is_square(&self) -> bool {
        self.bra.same_sector(&self.ket)
    }

    /// `self ∘ rhs` (rhs acts first).
    pub fn mul(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert!(
            self.ket.same_sector(&rhs.bra),
            "operator product across mismatched sectors ({} vs {})",
            self.ket.n_particles,
            rhs.bra.n_particles
        );
        OperatorMatrix {
            bra: Arc::clone(&self.bra),
            ket: Arc::clone(&rhs.ket),
            mat: self.mat.matmul(&rhs.mat),
        }
    }

    pub fn add_scaled(&mut self, rhs: &OperatorMatrix, z: Complex64) {
        assert!(self.bra.same_sector(&rhs.bra) && self.ket.same_sector(&rhs.ket));
        self.mat.add_scaled(&rhs.mat, z);
    }

    pub fn plus(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, Complex64::new(1.0, 0.0));
        out
    }

    pub fn sub(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn scaled(&self, z: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            bra: Arc::clone(&self.bra),
            ket: Arc::clone(&self.ket),
            mat: self.mat.scaled(z),
        }
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            bra: Arc::clone(&self.ket),
            ket: Arc::clone(&self.bra),
            mat: self.mat.adjoint(),
        }
    }

    /// `⟨v|A|v⟩` for a real vector on a square operator.
    pub fn expectation(&self, v: &[f64]) -> Complex64 {
        assert!(self.is_square());
        let cv: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let av = self.mat.apply(&cv);
        cv.iter().zip(&av).map(|(x, y)| x.conj() * y).sum()
    }
}

/// A spherical tensor operator: components `γ = -g, …, +g`, each a sector
/// matrix. All components share bra and ket sectors.
#[derive(Clone, Debug)]
pub struct TensorOperator {
    pub rank: HalfInt,
    pub comps: Vec<OperatorMatrix>,
}

impl TensorOperator {
    pub fn zeros(rank: HalfInt, bra: Arc<FockBasis>, ket: Arc<FockBasis>) -> Self {
        let comps = (0..rank.multiplicity())
            .map(|_| OperatorMatrix::zeros(Arc::clone(&bra), Arc::clone(&ket)))
            .collect();
        TensorOperator { rank, comps }
    }

    pub fn comp(&self, gamma: HalfInt) -> &OperatorMatrix {
        let idx = ((gamma + self.rank).twice() / 2) as usize;
        &self.comps[idx]
    }

    pub fn comp_mut(&mut self, gamma: HalfInt) -> &mut OperatorMatrix {
        let idx = ((gamma + self.rank).twice() / 2) as usize;
        &mut self.comps[idx]
    }

    pub fn projections(&self) -> impl Iterator<Item = HalfInt> {
        self.rank.projections()
    }

    pub fn scaled(&self, z: Complex64) -> TensorOperator {
        TensorOperator {
            rank: self.rank,
            comps: self.comps.iter().map(|c| c.scaled(z)).collect(),
        }
    }

    pub fn add_scaled(&mut self, rhs: &TensorOperator, z: Complex64) {
        assert_eq!(self.rank, rhs.rank);
        for (a, b) in self.comps.iter_mut().zip(&rhs.comps) {
            a.add_scaled(b, z);
        }
    }

    pub fn bra(&self) -> &Arc<FockBasis> {
        &self.comps[0].bra
    }

    pub fn ket(&self) -> &Arc<FockBasis> {
        &self.comps[0].ket
    }

    /// Largest deviation from the spherical tensor transformation law
    /// `[L0, T^g_γ] = γ T^g_γ` against the given `L0`.
    pub fn transform_defect(&self, l0: &OperatorMatrix) -> f64 {
        let mut worst = 0.0f64;
        for gamma in self.projections() {
            let t = self.comp(gamma);
            // L0 is diagonal on every sector, so take it on both sides.
            let lhs = l0.mul(t).sub(&t.mul(l0));
            let rhs = t.scaled(Complex64::new(gamma.value(), 0.0));
            worst = worst.max(lhs.mat.sub(&rhs.mat).max_abs());
        }
        worst
    }
}

/// Graded bracket sign: anticommutator only when both tensors carry
/// half-integer rank (i.e. both are built from an odd number of fermion
/// operators).
pub fn graded_sign(a: HalfInt, b: HalfInt) -> f64 {
    if !a.is_integer() && !b.is_integer() {
        -1.0
    } else {
        1.0
    }
}

/// Coupled product `(A × B)^c_γ = Σ ⟨aα bβ|cγ⟩ A_α B_β` (B acts first).
pub fn coupled_product(
    a: &TensorOperator,
    b: &TensorOperator,
    c: HalfInt,
) -> Result<TensorOperator> {
    if !triangle(a.rank, b.rank, c) {
        return Err(Error::InvalidLabels(format!(
            "coupled product rank {c} violates triangle({}, {})",
            a.rank, b.rank
        )));
    }
    assert!(a.ket().same_sector(&b.bra()), "coupled product sector mismatch");
    let mut out = TensorOperator::zeros(c, Arc::clone(a.bra()), Arc::clone(b.ket()));
    for gamma in c.projections() {
        let target = out.comp_mut(gamma);
        for alpha in a.rank.projections() {
            let beta = gamma - alpha;
            if !b.rank.holds_projection(beta) {
                continue;
            }
            let w = cg(a.rank, alpha, b.rank, beta, c, gamma);
            if w == 0.0 {
                continue;
            }
            let prod = a.comp(alpha).mul(b.comp(beta));
            target.add_scaled(&prod, Complex64::new(w, 0.0));
        }
    }
    Ok(out)
}

/// Cached component products for commutators of two number-conserving
/// tensors on one sector: `ab[α][β] = A_α B_β`, `ba[α][β] = B_β A_α`. The
/// cache is reused across every coupled rank `c`.
pub struct ProductCache {
    a_rank: HalfInt,
    b_rank: HalfInt,
    bra: Arc<FockBasis>,
    ket: Arc<FockBasis>,
    ab: Vec<Vec<CMatrix>>,
    ba: Vec<Vec<CMatrix>>,
}

impl ProductCache {
    pub fn build(a: &TensorOperator, b: &TensorOperator) -> Self {
        assert!(a.ket().same_sector(b.bra()) && b.ket().same_sector(a.bra()));
        let ab = a
            .comps
            .iter()
            .map(|am| b.comps.iter().map(|bm| am.mat.matmul(&bm.mat)).collect())
            .collect();
        let ba = a
            .comps
            .iter()
            .map(|am| b.comps.iter().map(|bm| bm.mat.matmul(&am.mat)).collect())
            .collect();
        ProductCache {
            a_rank: a.rank,
            b_rank: b.rank,
            bra: Arc::clone(a.bra()),
            ket: Arc::clone(b.ket()),
            ab,
            ba,
        }
    }

    /// `[A, B]^c` assembled from the cached products.
    pub fn commutator(&self, c: HalfInt) -> Result<TensorOperator> {
        if !triangle(self.a_rank, self.b_rank, c) {
            return Err(Error::InvalidLabels(format!(
                "coupled commutator rank {c} violates triangle({}, {})",
                self.a_rank, self.b_rank
            )));
        }
        let theta_ab = graded_sign(self.a_rank, self.b_rank);
        let mut out = TensorOperator::zeros(c, Arc::clone(&self.bra), Arc::clone(&self.ket));
        for gamma in c.projections() {
            let target = out.comp_mut(gamma);
            for (ai, alpha) in self.a_rank.projections().enumerate() {
                let beta = gamma - alpha;
                if !self.b_rank.holds_projection(beta) {
                    continue;
                }
                let w = cg(self.a_rank, alpha, self.b_rank, beta, c, gamma);
                if w == 0.0 {
                    continue;
                }
                let bi = ((beta + self.b_rank).twice() / 2) as usize;
                target.mat.add_scaled(&self.ab[ai][bi], Complex64::new(w, 0.0));
                target.mat.add_scaled(&self.ba[ai][bi], Complex64::new(-theta_ab * w, 0.0));
            }
        }
        Ok(out)
    }
}

/// Graded coupled commutator `[A, B]^c` for two tensors given on compatible
/// sectors (`A.ket == B.bra` and `B.ket == A.bra`).
pub fn coupled_commutator(
    a: &TensorOperator,
    b: &TensorOperator,
    c: HalfInt,
) -> Result<TensorOperator> {
    ProductCache::build(a, b).commutator(c)
}

impl FockSpace {
    /// Creation and annihilation matrices for a single mode, mapping the
    /// `n`-particle sector to `n±1`.
    pub fn mode_ops(
        &self,
        n: i64,
        level: usize,
        m: HalfInt,
    ) -> Result<(OperatorMatrix, OperatorMatrix)> {
        let ket = self.sector(n)?;
        let mode = ket
            .mode_index(level, m)
            .ok_or_else(|| Error::InvalidLabels(format!("no mode (level {level}, m = {m})")))?;
        let stat = self.sys().stat;

        let bra_up = self.sector(n + 1)?;
        let mut creation = OperatorMatrix::zeros(Arc::clone(&bra_up), Arc::clone(&ket));
        for (col, state) in ket.states.iter().enumerate() {
            let mut s = state.clone();
            if let Some(amp) = apply_creation(stat, &mut s, mode) {
                let row = bra_up.position(&s).expect("creation left the sector");
                creation.mat.add_entry(row, col, Complex64::new(amp, 0.0));
            }
        }

        let bra_dn = self.sector(n - 1)?;
        let mut annihilation = OperatorMatrix::zeros(Arc::clone(&bra_dn), Arc::clone(&ket));
        for (col, state) in ket.states.iter().enumerate() {
            let mut s = state.clone();
            if let Some(amp) = apply_annihilation(stat, &mut s, mode) {
                let row = bra_dn.position(&s).expect("annihilation left the sector");
                annihilation.mat.add_entry(row, col, Complex64::new(amp, 0.0));
            }
        }

        Ok((creation, annihilation))
    }

    /// Number operator of one level on sector `n` (diagonal).
    pub fn number_op(&self, n: i64, level: usize) -> Result<OperatorMatrix> {
        let basis = self.sector(n)?;
        let mut op = OperatorMatrix::zeros(Arc::clone(&basis), Arc::clone(&basis));
        for (i, state) in basis.states.iter().enumerate() {
            let count: f64 = basis
                .modes
                .iter()
                .zip(state)
                .filter(|(md, _)| md.level == level)
                .map(|(_, &o)| f64::from(o))
                .sum();
            op.mat.add_entry(i, i, Complex64::new(count, 0.0));
        }
        Ok(op)
    }

    /// One-body spherical tensor `(a†_k' × ã_k)^(g)` on sector `n`, built by
    /// direct action on the basis states.
    pub fn build_g(&self, n: i64, k_create: usize, k_annih: usize, g: HalfInt) -> Result<TensorOperator> {
        let sys = self.sys().clone();
        let j_cre = sys.levels[k_create].j;
        let j_ann = sys.levels[k_annih].j;
        if !triangle(j_cre, j_ann, g) {
            return Err(Error::InvalidLabels(format!(
                "G rank {g} violates triangle({j_cre}, {j_ann})"
            )));
        }
        let basis = self.sector(n)?;
        let mut tensor = TensorOperator::zeros(g, Arc::clone(&basis), Arc::clone(&basis));
        for gamma in g.projections() {
            let target = tensor.comp_mut(gamma);
            for alpha in j_cre.projections() {
                let beta = gamma - alpha;
                if !j_ann.holds_projection(beta) {
                    continue;
                }
                let w = cg(j_cre, alpha, j_ann, beta, g, gamma);
                if w == 0.0 {
                    continue;
                }
                // ã_β = (-1)^(j-β) a_{-β}
                let tilde_phase = j_ann.phase_with(-beta);
                let ann_mode = basis.mode_index(k_annih, -beta).unwrap();
                let cre_mode = basis.mode_index(k_create, alpha).unwrap();
                for (col, state) in basis.states.iter().enumerate() {
                    let mut s = state.clone();
                    let Some(amp1) = apply_annihilation(sys.stat, &mut s, ann_mode) else {
                        continue;
                    };
                    let Some(amp2) = apply_creation(sys.stat, &mut s, cre_mode) else {
                        continue;
                    };
                    let row = basis.position(&s).expect("bilinear left the sector");
                    let amp = w * tilde_phase * amp1 * amp2;
                    target.mat.add_entry(row, col, Complex64::new(amp, 0.0));
                }
            }
        }
        Ok(tensor)
    }

    /// The real combination `(a† × b̃)^(g) + σ0 (-1)^g (b† × ã)^(g)` without
    /// the self-adjointness phase `η`.
    pub fn build_f_unphased(&self, n: i64, g: HalfInt, sigma0: Sign) -> Result<TensorOperator> {
        if self.sys().levels.len() != 2 {
            return Err(Error::InvalidSystem("F generators require two levels".into()));
        }
        let gab = self.build_g(n, 0, 1, g)?;
        let gba = self.build_g(n, 1, 0, g)?;
        let mut out = gab;
        let coeff = sigma0.value() * g.phase();
        out.add_scaled(&gba, Complex64::new(coeff, 0.0));
        Ok(out)
    }

    /// Self-adjointness phase: `η = 1` for `ja + jb + s` even, `η = i` for
    /// odd, with `σ0 = (-1)^s`.
    pub fn eta(&self, sigma0: Sign) -> Complex64 {
        let sys = self.sys();
        let jsum = (sys.levels[0].j + sys.levels[1].j).as_int();
        let s = match sigma0 {
            Sign::Plus => 0,
            Sign::Minus => 1,
        };
        if (jsum + s) % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        }
    }

    /// Two-level generator `F^(g) = η [ (a†×b̃)^(g) + σ0 (-1)^g (b†×ã)^(g) ]`.
    /// The phase `η` keeps the commutation tables real; the tensor is then
    /// graded self-adjoint, `F^(g)†_γ = θ (-1)^(g-γ) F^(g)_{-γ}`.
    pub fn build_f(&self, n: i64, g: HalfInt, sigma0: Sign) -> Result<TensorOperator> {
        Ok(self.build_f_unphased(n, g, sigma0)?.scaled(self.eta(sigma0)))
    }

    /// Scalar pair quasispin operators for one level or the signed two-level
    /// sum: `S+` maps `n -> n+2`, `S-` maps `n -> n-2`, `S0` is diagonal.
    pub fn quasispin(&self, n: i64, sel: QuasispinSel) -> Result<QuasispinOps> {
        let sys = self.sys().clone();
        let ket = self.sector(n)?;
        let bra_up = self.sector(n + 2)?;
        let bra_dn = self.sector(n - 2)?;
        let mut plus = OperatorMatrix::zeros(Arc::clone(&bra_up), Arc::clone(&ket));
        let mut minus = OperatorMatrix::zeros(Arc::clone(&bra_dn), Arc::clone(&ket));
        let mut zero = OperatorMatrix::zeros(Arc::clone(&ket), Arc::clone(&ket));

        let levels: Vec<(usize, f64)> = match sel {
            QuasispinSel::Level(k) => vec![(k, 1.0)],
            QuasispinSel::Sum(sigma) => {
                (0..sys.levels.len()).map(|k| (k, if k == 0 { 1.0 } else { sigma.value() })).collect()
            }
        };

        for &(k, ladder_weight) in &levels {
            let j = sys.levels[k].j;
            for m in j.projections() {
                let phase = j.phase_with(-m);
                let mode_m = ket.mode_index(k, m).unwrap();
                let mode_mbar = ket.mode_index(k, -m).unwrap();
                // S+ term: (1/2) (-1)^(j-m) a†_m a†_{-m}
                for (col, state) in ket.states.iter().enumerate() {
                    let mut s = state.clone();
                    let Some(amp1) = apply_creation(sys.stat, &mut s, mode_mbar) else {
                        continue;
                    };
                    let Some(amp2) = apply_creation(sys.stat, &mut s, mode_m) else {
                        continue;
                    };
                    let row = bra_up.position(&s).unwrap();
                    let amp = 0.5 * ladder_weight * phase * amp1 * amp2;
                    plus.mat.add_entry(row, col, Complex64::new(amp, 0.0));
                }
                // S- term: (1/2) (-1)^(j-m) a_{-m} a_m
                for (col, state) in ket.states.iter().enumerate() {
                    let mut s = state.clone();
                    let Some(amp1) = apply_annihilation(sys.stat, &mut s, mode_m) else {
                        continue;
                    };
                    let Some(amp2) = apply_annihilation(sys.stat, &mut s, mode_mbar) else {
                        continue;
                    };
                    let row = bra_dn.position(&s).unwrap();
                    let amp = 0.5 * ladder_weight * phase * amp1 * amp2;
                    minus.mat.add_entry(row, col, Complex64::new(amp, 0.0));
                }
            }
            // S0 = (N_k + θ Ω_k)/2, diagonal.
            let theta = sys.theta();
            let omega = f64::from(sys.levels[k].omega2()) / 2.0;
            for (i, state) in ket.states.iter().enumerate() {
                let count: f64 = ket
                    .modes
                    .iter()
                    .zip(state)
                    .filter(|(md, _)| md.level == k)
                    .map(|(_, &o)| f64::from(o))
                    .sum();
                zero.mat.add_entry(i, i, Complex64::new(0.5 * (count + theta * omega), 0.0));
            }
        }

        Ok(QuasispinOps { plus, minus, zero })
    }

    /// Physical angular momentum tensor
    /// `L^(1) = θ Σ_k [j_k(j_k+1)(2j_k+1)/3]^(1/2) G_kk^(1)`.
    pub fn l_tensor(&self, n: i64) -> Result<TensorOperator> {
        let sys = self.sys().clone();
        let basis = self.sector(n)?;
        let one = HalfInt::from_int(1);
        let mut out = TensorOperator::zeros(one, Arc::clone(&basis), Arc::clone(&basis));
        let theta = sys.theta();
        for (k, level) in sys.levels.iter().enumerate() {
            let j = level.j.value();
            if level.j.twice() == 0 {
                continue;
            }
            let coeff = theta * (j * (j + 1.0) * (2.0 * j + 1.0) / 3.0).sqrt();
            let g = self.build_g(n, k, k, one)?;
            out.add_scaled(&g, Complex64::new(coeff, 0.0));
        }
        Ok(out)
    }

    /// `J² = L·L` on sector `n`.
    pub fn jsq(&self, n: i64) -> Result<OperatorMatrix> {
        let l = self.l_tensor(n)?;
        let basis = self.sector(n)?;
        let mut out = OperatorMatrix::zeros(Arc::clone(&basis), basis);
        for lambda in l.projections() {
            let prod = l.comp(lambda).mul(l.comp(-lambda));
            out.add_scaled(&prod, Complex64::new(lambda.phase(), 0.0));
        }
        Ok(out)
    }
}

/// Level selector for quasispin construction.
#[derive(Clone, Copy, Debug)]
pub enum QuasispinSel {
    Level(usize),
    /// Two-level sum `S± = S1± + σ S2±`, `S0 = S10 + S20`.
    Sum(Sign),
}

pub struct QuasispinOps {
    pub plus: OperatorMatrix,
    pub minus: OperatorMatrix,
    pub zero: OperatorMatrix,
}

/// The sign relation `σ0/σ = -θ (-1)^(ja+jb)` linking the quasispin sum sign
/// to the `F`-generator sign. The factor is ±1, so the same function maps in
/// both directions.
pub fn sigma0_from_sigma(sys: &crate::irreps::SystemSpec, sigma: Sign) -> Sign {
    let jsum = sys.levels[0].j + sys.levels[1].j;
    let rule = -sys.theta() * jsum.phase();
    Sign::from_value(rule * sigma.value())
}

/// A sector-indexed family of tensor operators: knows how to materialize its
/// components on any input sector. Families compose under coupled products
/// and graded commutators, mirroring the operator calculus used to derive
/// the generator commutation tables.
#[derive(Clone)]
pub struct TensorFamily {
    pub rank: HalfInt,
    /// Particle-number change of the operator.
    pub dn: i64,
    make: Rc<dyn Fn(&FockSpace, i64) -> Result<TensorOperator>>,
}

impl TensorFamily {
    pub fn at(&self, space: &FockSpace, ket_n: i64) -> Result<TensorOperator> {
        (self.make)(space, ket_n)
    }

    /// `a†^(j)` for one level: rank-j tensor with components `a†_m`.
    pub fn creator(j: HalfInt, level: usize) -> TensorFamily {
        TensorFamily {
            rank: j,
            dn: 1,
            make: Rc::new(move |space, n| {
                let ket = space.sector(n)?;
                let bra = space.sector(n + 1)?;
                let stat = space.sys().stat;
                let mut out = TensorOperator::zeros(j, Arc::clone(&bra), Arc::clone(&ket));
                for m in j.projections() {
                    let mode = ket.mode_index(level, m).ok_or_else(|| {
                        Error::InvalidLabels(format!("no mode (level {level}, m = {m})"))
                    })?;
                    let target = out.comp_mut(m);
                    for (col, state) in ket.states.iter().enumerate() {
                        let mut s = state.clone();
                        if let Some(amp) = apply_creation(stat, &mut s, mode) {
                            let row = bra.position(&s).unwrap();
                            target.mat.add_entry(row, col, Complex64::new(amp, 0.0));
                        }
                    }
                }
                Ok(out)
            }),
        }
    }

    /// `ã^(j)` for one level: rank-j tensor with components
    /// `ã_m = (-1)^(j-m) a_{-m}`.
    pub fn annihilator_tilde(j: HalfInt, level: usize) -> TensorFamily {
        TensorFamily {
            rank: j,
            dn: -1,
            make: Rc::new(move |space, n| {
                let ket = space.sector(n)?;
                let bra = space.sector(n - 1)?;
                let stat = space.sys().stat;
                let mut out = TensorOperator::zeros(j, Arc::clone(&bra), Arc::clone(&ket));
                for m in j.projections() {
                    let mode = ket.mode_index(level, -m).ok_or_else(|| {
                        Error::InvalidLabels(format!("no mode (level {level}, m = {m})"))
                    })?;
                    let phase = j.phase_with(-m);
                    let target = out.comp_mut(m);
                    for (col, state) in ket.states.iter().enumerate() {
                        let mut s = state.clone();
                        if let Some(amp) = apply_annihilation(stat, &mut s, mode) {
                            let row = bra.position(&s).unwrap();
                            target.mat.add_entry(row, col, Complex64::new(phase * amp, 0.0));
                        }
                    }
                }
                Ok(out)
            }),
        }
    }

    pub fn scaled(&self, z: Complex64) -> TensorFamily {
        let inner = self.clone();
        TensorFamily {
            rank: self.rank,
            dn: self.dn,
            make: Rc::new(move |space, n| Ok(inner.at(space, n)?.scaled(z))),
        }
    }

    /// Coupled product family `(A × B)^(c)`.
    pub fn product(a: &TensorFamily, b: &TensorFamily, c: HalfInt) -> Result<TensorFamily> {
        if !triangle(a.rank, b.rank, c) {
            return Err(Error::InvalidLabels(format!(
                "coupled product rank {c} violates triangle({}, {})",
                a.rank, b.rank
            )));
        }
        let (fa, fb) = (a.clone(), b.clone());
        Ok(TensorFamily {
            rank: c,
            dn: a.dn + b.dn,
            make: Rc::new(move |space, n| {
                let b_op = fb.at(space, n)?;
                let a_op = fa.at(space, n + fb.dn)?;
                coupled_product(&a_op, &b_op, c)
            }),
        })
    }

    /// Graded coupled commutator family `[A, B]^(c)`.
    pub fn commutator(a: &TensorFamily, b: &TensorFamily, c: HalfInt) -> Result<TensorFamily> {
        if !triangle(a.rank, b.rank, c) {
            return Err(Error::InvalidLabels(format!(
                "coupled commutator rank {c} violates triangle({}, {})",
                a.rank, b.rank
            )));
        }
        let (fa, fb) = (a.clone(), b.clone());
        let theta_ab = graded_sign(a.rank, b.rank);
        Ok(TensorFamily {
            rank: c,
            dn: a.dn + b.dn,
            make: Rc::new(move |space, n| {
                // Σ ⟨aα bβ|cγ⟩ (A_α B_β - θ_ab B_β A_α) on the fly.
                let b_lo = fb.at(space, n)?;
                let a_hi = fa.at(space, n + fb.dn)?;
                let a_lo = fa.at(space, n)?;
                let b_hi = fb.at(space, n + fa.dn)?;
                let bra = Arc::clone(a_hi.bra());
                let ket = Arc::clone(b_lo.ket());
                let mut out = TensorOperator::zeros(c, bra, ket);
                for gamma in c.projections() {
                    let target = out.comp_mut(gamma);
                    for alpha in fa.rank.projections() {
                        let beta = gamma - alpha;
                        if !fb.rank.holds_projection(beta) {
                            continue;
                        }
                        let w = cg(fa.rank, alpha, fb.rank, beta, c, gamma);
                        if w == 0.0 {
                            continue;
                        }
                        let ab = a_hi.comp(alpha).mul(b_lo.comp(beta));
                        let ba = b_hi.comp(beta).mul(a_lo.comp(alpha));
                        target.add_scaled(&ab, Complex64::new(w, 0.0));
                        target.add_scaled(&ba, Complex64::new(-theta_ab * w, 0.0));
                    }
                }
                Ok(out)
            }),
        })
    }
}
