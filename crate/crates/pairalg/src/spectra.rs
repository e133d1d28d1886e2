//! Hamiltonian families across the quantum phase transition, dynamical
//! symmetry closed forms, ξ scans, filling curves, and gap observables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::ops::Sign;
use crate::half::HalfInt;
use crate::irreps::{
    branch_pair_to_levels, branch_u_to_pair, casimir_pair_eigenvalue, four_ss_eigenvalue,
    Statistics, SystemSpec,
};
use crate::quasispin::{admissible_blocks, build_hamiltonian, enumerate_block, PairingParams};

/// Coefficients of the Casimir-form Hamiltonian
/// `aN + b1 N1 + b2 N2 + b C2[SO/Sp(n1+n2)] + c1 C2[SO/Sp(n1)] + c2 C2[SO/Sp(n2)]`
/// (angular momentum terms excluded).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CasimirHamiltonian {
    pub a: f64,
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
}

/// The Hamiltonian families of the transitional study.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianForm {
    /// `H_pair = (1-ξ)/N N2 + θ 4ξ/N² S+S-`.
    Pair,
    /// `H+ = (1-ξ)/N N2 + ξ/N² [4S+S- - {N(N+2Ω-2) | N(2Ω-N+2)}]`
    /// (repulsive pairing, offset by the `C2[U] - θN` c-number).
    Plus,
    /// `H- = (1-ξ)/N N2 - 4ξ/N² S+S-` (attractive pairing).
    Minus,
    /// `H_FF = (1-ξ)/N N2 - θ ξ/N² F∘F`, the generalized multipole form.
    Multipole,
    /// The IBM `U(5)`-`SO(6)` quadrupole Hamiltonian: the `j1 = 0, j2 = 2`
    /// specialization of the multipole form.
    QuadrupoleQq,
    /// Explicit `ε`, `G` parameters, ξ-independent.
    RawPairing(PairingParams),
    /// Casimir-form coefficients, ξ-independent.
    CasimirForm(CasimirHamiltonian),
}

impl HamiltonianForm {
    pub fn is_transitional(&self) -> bool {
        matches!(
            self,
            HamiltonianForm::Pair
                | HamiltonianForm::Plus
                | HamiltonianForm::Minus
                | HamiltonianForm::Multipole
                | HamiltonianForm::QuadrupoleQq
        )
    }
}

/// A form resolved at one value of the control parameter: engine parameters,
/// a global energy offset, and coefficients multiplying the single-level
/// Casimir eigenvalues `2v_k(θv_k + n_k - 2θ)` (block-constant shifts).
#[derive(Clone, Debug)]
pub struct ResolvedForm {
    pub params: PairingParams,
    pub offset: f64,
    pub level_casimir_coeff: [f64; 2],
}

impl ResolvedForm {
    /// Total shift to add to block eigenvalues for the `(v1, v2)` block.
    pub fn block_shift(&self, sys: &SystemSpec, v1: u32, v2: u32) -> f64 {
        self.offset
            + self.level_casimir_coeff[0]
                * casimir_pair_eigenvalue(v1, sys.levels[0].n(), sys.stat) as f64
            + self.level_casimir_coeff[1]
                * casimir_pair_eigenvalue(v2, sys.levels[1].n(), sys.stat) as f64
    }
}

/// The `C2[U(n)] - θN` eigenvalue: `N(N+2Ω-2)` for bosons,
/// `N(2Ω-N+2)` for fermions.
pub fn strong_coupling_offset(sys: &SystemSpec) -> i64 {
    let np = sys.n_particles as i64;
    let o2 = sys.omega2_total() as i64;
    match sys.stat {
        Statistics::Boson => np * (np + o2 - 2),
        Statistics::Fermion => np * (o2 - np + 2),
    }
}

/// Maps a Hamiltonian form at control parameter `xi` onto engine parameters
/// plus c-number shifts.
pub fn to_pairing_params(
    form: &HamiltonianForm,
    sys: &SystemSpec,
    xi: f64,
) -> Result<ResolvedForm> {
    if !sys.is_two_level() {
        return Err(Error::IncompatibleForm("transitional forms require two levels".into()));
    }
    let np = f64::from(sys.n_particles);
    if form.is_transitional() && sys.n_particles == 0 {
        return Err(Error::IncompatibleForm("transitional forms require N > 0".into()));
    }
    let theta = sys.theta();
    let d_offset = strong_coupling_offset(sys) as f64;

    let uniform = |g: f64| PairingParams::two_level(0.0, (1.0 - xi) / np, g, g, g, Sign::Plus);
    match form {
        HamiltonianForm::Pair => Ok(ResolvedForm {
            params: uniform(theta * 4.0 * xi / (np * np)),
            offset: 0.0,
            level_casimir_coeff: [0.0, 0.0],
        }),
        HamiltonianForm::Plus => Ok(ResolvedForm {
            params: uniform(4.0 * xi / (np * np)),
            offset: -xi / (np * np) * d_offset,
            level_casimir_coeff: [0.0, 0.0],
        }),
        HamiltonianForm::Minus => Ok(ResolvedForm {
            params: uniform(-4.0 * xi / (np * np)),
            offset: 0.0,
            level_casimir_coeff: [0.0, 0.0],
        }),
        HamiltonianForm::Multipole => {
            // -θ F∘F = 4S+S- - (C2[U(n)] - θN) + C2[SO/Sp(n1)]/2 + C2[SO/Sp(n2)]/2
            let c = xi / (2.0 * np * np);
            Ok(ResolvedForm {
                params: uniform(4.0 * xi / (np * np)),
                offset: -xi / (np * np) * d_offset,
                level_casimir_coeff: [c, c],
            })
        }
        HamiltonianForm::QuadrupoleQq => {
            if sys.stat != Statistics::Boson
                || sys.levels[0].n() != 1
                || sys.levels[1].n() != 5
            {
                return Err(Error::IncompatibleForm(
                    "quadrupole form requires the bosonic s-d system (n1 = 1, n2 = 5)".into(),
                ));
            }
            to_pairing_params(&HamiltonianForm::Multipole, sys, xi)
        }
        HamiltonianForm::RawPairing(p) => {
            if p.eps.len() != 2 {
                return Err(Error::IncompatibleForm("raw parameters must be two-level".into()));
            }
            Ok(ResolvedForm { params: p.clone(), offset: 0.0, level_casimir_coeff: [0.0, 0.0] })
        }
        HamiltonianForm::CasimirForm(c) => {
            // b C2[SO/Sp(n1+n2)] = b [2(C2[U]-θN) - 8 S+S-]
            let g = -8.0 * c.b;
            Ok(ResolvedForm {
                params: PairingParams::two_level(c.b1, c.b2, g, g, g, Sign::Plus),
                offset: c.a * np + 2.0 * c.b * d_offset,
                level_casimir_coeff: [c.c1, c.c2],
            })
        }
    }
}

/// ξ grid; points are `start + (stop-start)·i/n` so the endpoints are exact.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct XiGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl XiGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop {
            return Err(Error::IncompatibleForm(format!(
                "xi grid [{start}, {stop}] must lie inside [0, 1]"
            )));
        }
        if step <= 0.0 {
            return Err(Error::IncompatibleForm("xi step must be positive".into()));
        }
        Ok(XiGrid { start, stop, step })
    }

    pub fn single(xi: f64) -> Result<Self> {
        XiGrid::new(xi, xi, 1.0)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.stop == self.start {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step).round().max(1.0) as usize;
        (0..=n)
            .map(|i| self.start + (self.stop - self.start) * (i as f64) / (n as f64))
            .collect()
    }
}

impl Default for XiGrid {
    fn default() -> Self {
        XiGrid { start: 0.0, stop: 1.0, step: 0.01 }
    }
}

/// Which `(v1, v2)` blocks a scan covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubspaceFilter {
    All,
    /// Blocks with `v1 + v2 <= max`.
    MaxTotalSeniority(u32),
    Explicit(Vec<(u32, u32)>),
}

impl SubspaceFilter {
    fn keeps(&self, v1: u32, v2: u32) -> bool {
        match self {
            SubspaceFilter::All => true,
            SubspaceFilter::MaxTotalSeniority(max) => v1 + v2 <= *max,
            SubspaceFilter::Explicit(list) => list.contains(&(v1, v2)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub sys: SystemSpec,
    pub form: HamiltonianForm,
    pub grid: XiGrid,
    pub filter: SubspaceFilter,
    /// Emit the order parameter for every state, not just the block ground
    /// state.
    pub order_param_all: bool,
}

/// One spectrum row: block labels, eigenvalue index within the block
/// (ascending energy), total energy, and the ground-state order parameter
/// `⟨N2 - N1⟩`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub xi: f64,
    pub v1: u32,
    pub v2: u32,
    pub idx: usize,
    pub energy: f64,
    pub order_param: Option<f64>,
}

/// Diagonalizes the requested blocks on the ξ grid.
pub fn scan(config: &ScanConfig) -> Result<Vec<SpectrumRecord>> {
    let sys = &config.sys;
    let blocks: Vec<(u32, u32)> = admissible_blocks(sys)?
        .into_iter()
        .filter(|&(v1, v2)| config.filter.keeps(v1, v2))
        .collect();
    let mut records = Vec::new();
    for xi in config.grid.points() {
        let resolved = to_pairing_params(&config.form, sys, xi)?;
        for &(v1, v2) in &blocks {
            let block = enumerate_block(sys, &[v1, v2], sys.n_particles)?;
            if block.dim() == 0 {
                continue;
            }
            let shift = resolved.block_shift(sys, v1, v2);
            let h = build_hamiltonian(&block, &resolved.params)?;
            let eig = h.eig(true)?;
            let vectors = eig.vectors.as_ref().unwrap();
            for (idx, &energy) in eig.values.iter().enumerate() {
                let order_param = (idx == 0 || config.order_param_all).then(|| {
                    let np = f64::from(sys.n_particles);
                    vectors[idx]
                        .iter()
                        .zip(&block.states)
                        .map(|(c, occ)| c * c * (np - 2.0 * f64::from(occ[0])))
                        .sum()
                });
                records.push(SpectrumRecord { xi, v1, v2, idx, energy: energy + shift, order_param });
            }
        }
    }
    records.sort_by(|a, b| {
        (a.xi, a.v1, a.v2, a.idx)
            .partial_cmp(&(b.xi, b.v1, b.v2, b.idx))
            .unwrap()
    });
    Ok(records)
}

/// Closed-form dynamical symmetry energy coefficients for
/// `aN + b1 N1 + b2 N2 + b C2[SO/Sp(n)] + c1 C2[1] + c2 C2[2] + d1 J1² + d2 J2² + e J²`.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct DynCoeffs {
    pub a: f64,
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    pub e: f64,
}

impl DynCoeffs {
    /// The level-scheme Hamiltonian `H = -θ F∘F`: `b = -1/2`, `c1 = c2 = 1/2`.
    pub fn multipole_scheme() -> Self {
        DynCoeffs { b: -0.5, c1: 0.5, c2: 0.5, ..Default::default() }
    }
}

/// Labels entering the dynamical symmetry energy; only the ones multiplied
/// by nonzero coefficients are required.
#[derive(Clone, Copy, Debug, Default)]
pub struct DynLabels {
    pub n1: Option<u32>,
    pub n2: Option<u32>,
    pub v: Option<u32>,
    pub v1: Option<u32>,
    pub v2: Option<u32>,
    pub j1: Option<HalfInt>,
    pub j2: Option<HalfInt>,
    pub j: Option<HalfInt>,
}

/// Closed-form dynamical symmetry eigenvalue.
pub fn dynamical_symmetry_energy(
    labels: &DynLabels,
    coeffs: &DynCoeffs,
    sys: &SystemSpec,
) -> Result<f64> {
    let need = |name: &str| Error::MissingLabel(name.into());
    let mut energy = coeffs.a * f64::from(sys.n_particles);
    if coeffs.b1 != 0.0 {
        energy += coeffs.b1 * f64::from(labels.n1.ok_or_else(|| need("N1"))?);
    }
    if coeffs.b2 != 0.0 {
        energy += coeffs.b2 * f64::from(labels.n2.ok_or_else(|| need("N2"))?);
    }
    if coeffs.b != 0.0 {
        let v = labels.v.ok_or_else(|| need("v"))?;
        energy += coeffs.b * casimir_pair_eigenvalue(v, sys.n_total(), sys.stat) as f64;
    }
    if coeffs.c1 != 0.0 {
        let v1 = labels.v1.ok_or_else(|| need("v1"))?;
        energy += coeffs.c1 * casimir_pair_eigenvalue(v1, sys.levels[0].n(), sys.stat) as f64;
    }
    if coeffs.c2 != 0.0 {
        let v2 = labels.v2.ok_or_else(|| need("v2"))?;
        energy += coeffs.c2 * casimir_pair_eigenvalue(v2, sys.levels[1].n(), sys.stat) as f64;
    }
    for (coeff, j, name) in [
        (coeffs.d1, labels.j1, "J1"),
        (coeffs.d2, labels.j2, "J2"),
        (coeffs.e, labels.j, "J"),
    ] {
        if coeff != 0.0 {
            let j = j.ok_or_else(|| need(name))?;
            energy += coeff * j.value() * (j.value() + 1.0);
        }
    }
    Ok(energy)
}

/// One level of the pair-algebra dynamical symmetry scheme.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeRecord {
    pub v: u32,
    pub v1: u32,
    pub v2: u32,
    pub energy: f64,
}

/// Level scheme for the `SO/Sp(n1+n2)` dynamical symmetry at the system's
/// particle number: all `(v, v1, v2)` with the closed-form energy.
pub fn dynamical_symmetry_scheme(sys: &SystemSpec, coeffs: &DynCoeffs) -> Result<Vec<SchemeRecord>> {
    let mut out = Vec::new();
    for v in branch_u_to_pair(sys.n_particles, sys.stat, sys.n_total())? {
        for p in branch_pair_to_levels(v, sys)? {
            let labels = DynLabels {
                n1: None,
                n2: None,
                v: Some(v),
                v1: Some(p.v1),
                v2: Some(p.v2),
                ..Default::default()
            };
            let energy = dynamical_symmetry_energy(&labels, coeffs, sys)?;
            out.push(SchemeRecord { v, v1: p.v1, v2: p.v2, energy });
        }
    }
    Ok(out)
}

/// Closed-form range of `⟨4S+S-⟩` at filling `n_particles`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingPoint {
    pub n: u32,
    pub min4ss: i64,
    pub max4ss: i64,
}

/// Eigenvalue range of the pairing operator `4S+S-` as a function of filling
/// (exact integer arithmetic). `omega` is the total pair degeneracy `Ω`; the
/// fermionic minimum switches branch at `n = Ω`.
pub fn filling_curve(stat: Statistics, omega: u32, ns: &[u32]) -> Result<Vec<FillingPoint>> {
    let omega2 = 2 * omega;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        if stat == Statistics::Fermion && n > omega2 {
            return Err(Error::InvalidLabels(format!(
                "fermionic filling {n} exceeds 2Ω = {omega2}"
            )));
        }
        let v_min = n % 2;
        let v_max = match stat {
            Statistics::Boson => n,
            Statistics::Fermion => n.min(omega2 - n),
        };
        out.push(FillingPoint {
            n,
            min4ss: four_ss_eigenvalue(n, v_max, omega2, stat),
            max4ss: four_ss_eigenvalue(n, v_min, omega2, stat),
        });
    }
    Ok(out)
}

/// Gap `Δ(ξ)` between the two lowest states of one `(v1, v2)` block, with
/// the grid location of its minimum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapProfile {
    pub v1: u32,
    pub v2: u32,
    pub points: Vec<(f64, f64)>,
    pub min_xi: f64,
    pub min_gap: f64,
}

/// Extracts the gap profile for a block from scan records; `None` when the
/// block never has two states.
pub fn gap_profile(records: &[SpectrumRecord], v1: u32, v2: u32) -> Option<GapProfile> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut current: Option<(f64, Option<f64>, Option<f64>)> = None;
    let flush = |cur: &mut Option<(f64, Option<f64>, Option<f64>)>, points: &mut Vec<(f64, f64)>| {
        if let Some((xi, Some(e0), Some(e1))) = cur.take() {
            points.push((xi, e1 - e0));
        }
    };
    for r in records.iter().filter(|r| r.v1 == v1 && r.v2 == v2) {
        match &mut current {
            Some((xi, e0, e1)) if *xi == r.xi => {
                if r.idx == 0 {
                    *e0 = Some(r.energy);
                } else if r.idx == 1 {
                    *e1 = Some(r.energy);
                }
            }
            _ => {
                flush(&mut current, &mut points);
                current = Some((
                    r.xi,
                    (r.idx == 0).then_some(r.energy),
                    (r.idx == 1).then_some(r.energy),
                ));
            }
        }
    }
    flush(&mut current, &mut points);
    if points.is_empty() {
        return None;
    }
    let (mut min_xi, mut min_gap) = points[0];
    for &(xi, gap) in &points[1..] {
        if gap < min_gap {
            min_gap = gap;
            min_xi = xi;
        }
    }
    Some(GapProfile { v1, v2, points, min_xi, min_gap })
}

/// Adjacent level spacings within a block at each grid point, for level
/// density profiles.
pub fn spacing_profile(records: &[SpectrumRecord], v1: u32, v2: u32) -> Vec<(f64, Vec<f64>)> {
    let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut energies: Vec<f64> = Vec::new();
    let mut current_xi: Option<f64> = None;
    let flush = |xi: Option<f64>, energies: &mut Vec<f64>, out: &mut Vec<(f64, Vec<f64>)>| {
        if let Some(xi) = xi {
            if energies.len() >= 2 {
                let spacings = energies.windows(2).map(|w| w[1] - w[0]).collect();
                out.push((xi, spacings));
            }
            energies.clear();
        }
    };
    for r in records.iter().filter(|r| r.v1 == v1 && r.v2 == v2) {
        if current_xi != Some(r.xi) {
            flush(current_xi, &mut energies, &mut out);
            current_xi = Some(r.xi);
        }
        energies.push(r.energy);
    }
    flush(current_xi, &mut energies, &mut out);
    out
}
