//! The production engine: seniority-blocked weak-coupling bases and exact
//! pairing Hamiltonian matrices from the closed-form quasispin matrix
//! elements. Two-level blocks are symmetric tridiagonal; the multi-level
//! generalization is a symmetric banded matrix stored dense.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::eigen::{eig_dense_sym, eig_tridiag, EigenResult, SymMatrix, SymTridiag};
use crate::error::{Error, Result};
use crate::fock::ops::Sign;
use crate::irreps::{four_ss_eigenvalue, level_v_allowed, Statistics, SystemSpec};

/// Weak-coupling basis label: occupation and seniority per level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeniorityBlockState {
    pub n_occ: Vec<u32>,
    pub v: Vec<u32>,
}

impl SeniorityBlockState {
    pub fn n_total(&self) -> u32 {
        self.n_occ.iter().sum()
    }

    pub fn is_valid(&self, sys: &SystemSpec) -> bool {
        if self.n_occ.len() != sys.levels.len() || self.v.len() != sys.levels.len() {
            return false;
        }
        for (k, level) in sys.levels.iter().enumerate() {
            let (nk, vk) = (self.n_occ[k], self.v[k]);
            if nk < vk || (nk - vk) % 2 != 0 || !level_v_allowed(sys.stat, *level, vk) {
                return false;
            }
            if sys.stat == Statistics::Fermion && nk + vk > 2 * u32::from(level.omega2() as u16) {
                return false;
            }
        }
        true
    }
}

/// All weak-coupling states with fixed per-level seniorities and fixed total
/// particle number, ordered lexicographically on `(N_1, …, N_{k-1})` (for two
/// levels: ascending `N_1` in steps of 2).
#[derive(Clone, Debug)]
pub struct BlockBasis {
    pub sys: SystemSpec,
    pub v: Vec<u32>,
    pub n_particles: u32,
    pub states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl BlockBasis {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> SeniorityBlockState {
        SeniorityBlockState { n_occ: self.states[i].clone(), v: self.v.clone() }
    }

    pub fn position(&self, n_occ: &[u32]) -> Option<usize> {
        self.index.get(n_occ).copied()
    }
}

fn level_occ_range(sys: &SystemSpec, k: usize, vk: u32) -> (u32, u32) {
    let lo = vk;
    let hi = match sys.stat {
        Statistics::Boson => u32::MAX / 2,
        Statistics::Fermion => sys.levels[k].n() - vk,
    };
    (lo, hi)
}

/// Enumerates the `(v_1, …, v_k)` block at particle number `n_particles`.
/// Inadmissible labels are rejected; an empty block is a valid result.
pub fn enumerate_block(sys: &SystemSpec, v: &[u32], n_particles: u32) -> Result<BlockBasis> {
    if v.len() != sys.levels.len() {
        return Err(Error::InvalidLabels(format!(
            "{} seniority labels for {} levels",
            v.len(),
            sys.levels.len()
        )));
    }
    for (k, (&vk, level)) in v.iter().zip(&sys.levels).enumerate() {
        if !level_v_allowed(sys.stat, *level, vk) {
            return Err(Error::InvalidLabels(format!("v_{} = {vk} not allowed", k + 1)));
        }
    }

    let mut states = Vec::new();
    let mut current = vec![0u32; v.len()];
    fill(sys, v, n_particles, 0, &mut current, &mut states);
    let index = states.iter().cloned().zip(0..).collect();
    Ok(BlockBasis { sys: sys.clone(), v: v.to_vec(), n_particles, states, index })
}

fn fill(
    sys: &SystemSpec,
    v: &[u32],
    remaining: u32,
    k: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if k == v.len() - 1 {
        let (lo, hi) = level_occ_range(sys, k, v[k]);
        if remaining >= lo && remaining <= hi && (remaining - v[k]) % 2 == 0 {
            current[k] = remaining;
            out.push(current.clone());
        }
        return;
    }
    let (lo, hi) = level_occ_range(sys, k, v[k]);
    let mut nk = lo;
    while nk <= hi.min(remaining) {
        current[k] = nk;
        fill(sys, v, remaining - nk, k + 1, current, out);
        nk += 2;
    }
}

/// Single-particle energies, symmetric pairing strengths, and the sign of the
/// second level's ladder operators in the sum quasispin.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingParams {
    pub eps: Vec<f64>,
    pub g: Vec<Vec<f64>>,
    pub sigma: Sign,
}

impl PairingParams {
    pub fn new(eps: Vec<f64>, g: Vec<Vec<f64>>, sigma: Sign) -> Result<Self> {
        let k = eps.len();
        if g.len() != k || g.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidLabels("pairing matrix shape mismatch".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if (g[i][j] - g[j][i]).abs() > 1e-14 {
                    return Err(Error::InvalidLabels("pairing strengths must be symmetric".into()));
                }
            }
        }
        Ok(PairingParams { eps, g, sigma })
    }

    /// Uniform two-level pairing `G_11 = G_22 = G`, `G_12 = σ G`, zero
    /// single-particle energies: the strong-coupling form `G S+ S-`.
    pub fn uniform(g: f64, sigma: Sign) -> Self {
        PairingParams {
            eps: vec![0.0, 0.0],
            g: vec![vec![g, sigma.value() * g], vec![sigma.value() * g, g]],
            sigma,
        }
    }

    /// Two-level parameters with explicit entries.
    pub fn two_level(eps1: f64, eps2: f64, g11: f64, g22: f64, g12: f64, sigma: Sign) -> Self {
        PairingParams {
            eps: vec![eps1, eps2],
            g: vec![vec![g11, g12], vec![g12, g22]],
            sigma,
        }
    }
}

/// Diagonal pairing matrix element `⟨S_k+ S_k-⟩` for one level:
/// `θ[N_k(N_k + 2θΩ_k - 2) - v_k(v_k + 2θΩ_k - 2)]/4`.
pub fn diag_pairing_me(state: &SeniorityBlockState, k: usize, sys: &SystemSpec) -> f64 {
    let omega2 = sys.levels[k].omega2();
    four_ss_eigenvalue(state.n_occ[k], state.v[k], omega2, sys.stat) as f64 / 4.0
}

/// Off-diagonal pair-transfer element
/// `⟨…(N_k'+2)…(N_k-2)…|S_k'+ S_k-|…N_k'…N_k…⟩`, evaluated on the ket state.
/// Zero at block edges; a negative product under the root indicates an
/// invalid state and panics.
pub fn offdiag_pairing_me(
    state: &SeniorityBlockState,
    k_to: usize,
    k_from: usize,
    sys: &SystemSpec,
) -> f64 {
    let theta = sys.stat.theta_i() as i64;
    let (np, vp) = (state.n_occ[k_to] as i64, state.v[k_to] as i64);
    let (nm, vm) = (state.n_occ[k_from] as i64, state.v[k_from] as i64);
    let o2p = sys.levels[k_to].omega2() as i64;
    let o2m = sys.levels[k_from].omega2() as i64;
    let product =
        (np - vp + 2) * (np + vp + theta * o2p) * (nm - vm) * (nm + vm + theta * o2m - 2);
    assert!(
        product >= 0,
        "negative radicand {product} for pair transfer {k_from}->{k_to} from state {:?}",
        state
    );
    0.25 * (product as f64).sqrt()
}

/// Block Hamiltonian: tridiagonal for two levels, dense symmetric banded for
/// the multi-level generalization.
#[derive(Clone, Debug)]
pub enum BlockHamiltonian {
    Tridiagonal(SymTridiag),
    Dense(SymMatrix),
}

impl BlockHamiltonian {
    pub fn eig(&self, want_vectors: bool) -> Result<EigenResult> {
        match self {
            BlockHamiltonian::Tridiagonal(t) => eig_tridiag(t, want_vectors),
            BlockHamiltonian::Dense(m) => eig_dense_sym(m, want_vectors),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BlockHamiltonian::Tridiagonal(t) => t.n(),
            BlockHamiltonian::Dense(m) => m.n(),
        }
    }
}

/// Exact matrix of `H = Σ ε_k N_k + Σ G_k'k S_k'+ S_k-` on a seniority
/// block. The diagonal collects the one-body energies and the same-level
/// pairing; off-diagonal entries are single pair transfers.
pub fn build_hamiltonian(block: &BlockBasis, params: &PairingParams) -> Result<BlockHamiltonian> {
    let k_levels = block.sys.levels.len();
    if params.eps.len() != k_levels {
        return Err(Error::InvalidLabels(format!(
            "{} single-particle energies for {} levels",
            params.eps.len(),
            k_levels
        )));
    }
    let dim = block.dim();
    let diag_entry = |i: usize| -> f64 {
        let state = block.state(i);
        let mut e = 0.0;
        for k in 0..k_levels {
            e += params.eps[k] * f64::from(state.n_occ[k]);
            e += params.g[k][k] * diag_pairing_me(&state, k, &block.sys);
        }
        e
    };

    if k_levels == 2 {
        let diag: Vec<f64> = (0..dim).map(diag_entry).collect();
        let mut offdiag = Vec::with_capacity(dim.saturating_sub(1));
        for i in 0..dim.saturating_sub(1) {
            // Neighbor in the block order transfers one pair from level 2 to
            // level 1.
            let state = block.state(i);
            debug_assert_eq!(block.states[i + 1][0], state.n_occ[0] + 2);
            offdiag.push(params.g[0][1] * offdiag_pairing_me(&state, 0, 1, &block.sys));
        }
        if dim == 0 {
            return Ok(BlockHamiltonian::Dense(SymMatrix::zeros(0)));
        }
        return Ok(BlockHamiltonian::Tridiagonal(SymTridiag::new(diag, offdiag)));
    }

    let mut m = SymMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, diag_entry(i));
        let state = block.state(i);
        for k_to in 0..k_levels {
            for k_from in 0..k_levels {
                if k_to == k_from {
                    continue;
                }
                let me = params.g[k_to][k_from] * offdiag_pairing_me(&state, k_to, k_from, &block.sys);
                if me == 0.0 {
                    continue;
                }
                let mut target = block.states[i].clone();
                target[k_to] += 2;
                target[k_from] -= 2;
                if let Some(j) = block.position(&target) {
                    m.set(j, i, me);
                }
            }
        }
    }
    Ok(BlockHamiltonian::Dense(m))
}

/// All two-level `(v1, v2)` blocks that are nonempty for the system's
/// particle number, in ascending `(v1 + v2, v1)` order.
pub fn admissible_blocks(sys: &SystemSpec) -> Result<Vec<(u32, u32)>> {
    if !sys.is_two_level() {
        return Err(Error::InvalidSystem("block listing requires two levels".into()));
    }
    let n = sys.n_particles;
    let mut out = Vec::new();
    for vsum in 0..=n {
        for v1 in 0..=vsum {
            let v2 = vsum - v1;
            if (n - vsum) % 2 != 0 {
                continue;
            }
            if !level_v_allowed(sys.stat, sys.levels[0], v1)
                || !level_v_allowed(sys.stat, sys.levels[1], v2)
            {
                continue;
            }
            if enumerate_block(sys, &[v1, v2], n)?.dim() > 0 {
                out.push((v1, v2));
            }
        }
    }
    Ok(out)
}

/// Coefficients of the pairing Hamiltonian rewritten in Casimir form:
/// `H = Σ_k [n_level_k N_k + u_level_k C2[U(n_k)] + pair_level_k C2[SO/Sp(n_k)]]
///      + u_total C2[U(n1+n2)] + pair_total C2[SO/Sp(n1+n2)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CasimirFormCoeffs {
    pub n_level: [f64; 2],
    pub u_level: [f64; 2],
    pub pair_level: [f64; 2],
    pub u_total: f64,
    pub pair_total: f64,
}

/// Exact coefficient map from pairing parameters to the Casimir form; valid
/// when the `F`-generator sign `σ0` is tied to `params.sigma` by the sign
/// rule.
pub fn casimir_form_params(params: &PairingParams, sys: &SystemSpec) -> Result<CasimirFormCoeffs> {
    if params.eps.len() != 2 {
        return Err(Error::InvalidSystem("Casimir form requires two levels".into()));
    }
    let theta = sys.theta();
    let sigma = params.sigma.value();
    let (g11, g22, g12) = (params.g[0][0], params.g[1][1], params.g[0][1]);
    Ok(CasimirFormCoeffs {
        n_level: [
            params.eps[0] - 0.25 * theta * g11,
            params.eps[1] - 0.25 * theta * g22,
        ],
        u_level: [0.25 * (g11 - sigma * g12), 0.25 * (g22 - sigma * g12)],
        pair_level: [-0.125 * (g11 - sigma * g12), -0.125 * (g22 - sigma * g12)],
        u_total: 0.25 * sigma * g12,
        pair_total: -0.125 * sigma * g12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boson_sys(n1: u32, n2: u32, n: u32) -> SystemSpec {
        SystemSpec::two_level(Statistics::Boson, n1, n2, n).unwrap()
    }

    fn fermion_sys(n1: u32, n2: u32, n: u32) -> SystemSpec {
        SystemSpec::two_level(Statistics::Fermion, n1, n2, n).unwrap()
    }

    #[test]
    fn block_sizes() {
        // Boson n1 = n2 = 5, N = 50, (0,0): N1 ∈ {0, 2, …, 50}.
        let sys = boson_sys(5, 5, 50);
        assert_eq!(enumerate_block(&sys, &[0, 0], 50).unwrap().dim(), 26);
        // Fermion Ω1 = Ω2 = 25, N = 50, (0,0): same count.
        let sys = fermion_sys(50, 50, 50);
        assert_eq!(enumerate_block(&sys, &[0, 0], 50).unwrap().dim(), 26);
        // Fermion Ω1 = 1, v1 = 1: N1 is pinned at 1.
        let sys = fermion_sys(2, 6, 3);
        let block = enumerate_block(&sys, &[1, 0], 3).unwrap();
        assert!(block.states.iter().all(|s| s[0] == 1));
        // Parity-mismatched block is empty, not an error.
        let sys = boson_sys(3, 3, 4);
        assert_eq!(enumerate_block(&sys, &[1, 0], 4).unwrap().dim(), 0);
        // Inadmissible labels are rejected.
        let sys = fermion_sys(4, 4, 4);
        assert!(enumerate_block(&sys, &[3, 0], 4).is_err());
    }

    #[test]
    fn diagonal_elements() {
        // Fermion Ω = 4, N = 2, v = 0 -> 4; boson Ω = 5/2, N = 2, v = 0 -> 5/2.
        let sys = fermion_sys(8, 8, 2);
        let state = SeniorityBlockState { n_occ: vec![2, 0], v: vec![0, 0] };
        assert_eq!(diag_pairing_me(&state, 0, &sys), 4.0);

        let sys = boson_sys(5, 5, 2);
        let state = SeniorityBlockState { n_occ: vec![2, 0], v: vec![0, 0] };
        assert_eq!(diag_pairing_me(&state, 0, &sys), 2.5);

        // N_k = v_k: lowest weight is annihilated.
        let sys = boson_sys(5, 5, 3);
        let state = SeniorityBlockState { n_occ: vec![3, 0], v: vec![3, 0] };
        assert_eq!(diag_pairing_me(&state, 0, &sys), 0.0);
    }

    #[test]
    fn offdiagonal_elements() {
        // Fermion Ω1 = Ω2 = 2, (2,0,2,0), transfer 2 -> 1 gives 2.
        let sys = fermion_sys(4, 4, 4);
        let state = SeniorityBlockState { n_occ: vec![2, 2], v: vec![0, 0] };
        assert_eq!(offdiag_pairing_me(&state, 0, 1, &sys), 2.0);

        // Boson Ω1 = Ω2 = 1/2, (0,0,2,0): value 1/2.
        let sys = boson_sys(1, 1, 2);
        let state = SeniorityBlockState { n_occ: vec![0, 2], v: vec![0, 0] };
        assert_eq!(offdiag_pairing_me(&state, 0, 1, &sys), 0.5);

        // No pair to move.
        let sys = boson_sys(3, 3, 2);
        let state = SeniorityBlockState { n_occ: vec![1, 1], v: vec![1, 1] };
        assert_eq!(offdiag_pairing_me(&state, 0, 1, &sys), 0.0);

        // Pauli-blocked target level vanishes through the closed form.
        let sys = fermion_sys(2, 4, 4);
        let state = SeniorityBlockState { n_occ: vec![2, 2], v: vec![0, 0] };
        assert_eq!(offdiag_pairing_me(&state, 0, 1, &sys), 0.0);
    }

    #[test]
    fn hermitian_transfer_symmetry() {
        let sys = fermion_sys(6, 8, 6);
        let ket = SeniorityBlockState { n_occ: vec![2, 4], v: vec![0, 2] };
        let mut bra_occ = ket.n_occ.clone();
        bra_occ[0] += 2;
        bra_occ[1] -= 2;
        let bra = SeniorityBlockState { n_occ: bra_occ, v: ket.v.clone() };
        let forward = offdiag_pairing_me(&ket, 0, 1, &sys);
        let reverse = offdiag_pairing_me(&bra, 1, 0, &sys);
        assert!((forward - reverse).abs() < 1e-13);
        assert!(forward > 0.0);
    }

    #[test]
    fn weak_coupling_limit_is_diagonal() {
        let sys = boson_sys(3, 5, 6);
        let block = enumerate_block(&sys, &[0, 0], 6).unwrap();
        let params = PairingParams::two_level(0.3, 1.7, 0.0, 0.0, 0.0, Sign::Plus);
        let h = build_hamiltonian(&block, &params).unwrap();
        let BlockHamiltonian::Tridiagonal(t) = h else { panic!("expected tridiagonal") };
        for (i, &d) in t.diag.iter().enumerate() {
            let state = block.state(i);
            let expect = 0.3 * f64::from(state.n_occ[0]) + 1.7 * f64::from(state.n_occ[1]);
            assert!((d - expect).abs() < 1e-14);
        }
        assert!(t.offdiag.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn strong_coupling_eigenvalues_depend_only_on_total_seniority() {
        // ε = 0, uniform G: every block eigenvalue is G⟨S+S-⟩(N, v).
        for sys in [boson_sys(3, 5, 8), fermion_sys(4, 6, 6)] {
            let g = 0.83;
            let params = PairingParams::uniform(g, Sign::Plus);
            let omega2 = sys.omega2_total();
            for (v1, v2) in admissible_blocks(&sys).unwrap() {
                let block = enumerate_block(&sys, &[v1, v2], sys.n_particles).unwrap();
                let eig = build_hamiltonian(&block, &params).unwrap().eig(false).unwrap();
                // Candidate total seniorities for this block, each appearing
                // once: v = v1 + v2 + 2 n_v, descending eigenvalue in v.
                let mut expected: Vec<f64> = Vec::new();
                let mut v = v1 + v2;
                loop {
                    let e = g * four_ss_eigenvalue(sys.n_particles, v, omega2, sys.stat) as f64
                        / 4.0;
                    expected.push(e);
                    v += 2;
                    if expected.len() == eig.values.len() {
                        break;
                    }
                }
                expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (a, b) in eig.values.iter().zip(&expected) {
                    assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "{a} vs {b} in ({v1},{v2})");
                }
            }
        }
    }

    #[test]
    fn fermion_particle_hole_spectra() {
        // ε = 0, cross pairing only: spectra at N and 2Ω - N coincide.
        let omega2_total = 4 + 8;
        let n = 4;
        let holes = omega2_total - n;
        let params = PairingParams::two_level(0.0, 0.0, 0.0, 0.0, 0.9, Sign::Plus);
        for (v1, v2) in [(0, 0), (0, 2), (1, 1)] {
            let sys_n = fermion_sys(4, 8, n);
            let sys_h = fermion_sys(4, 8, holes);
            let block_n = enumerate_block(&sys_n, &[v1, v2], n).unwrap();
            let block_h = enumerate_block(&sys_h, &[v1, v2], holes).unwrap();
            assert_eq!(block_n.dim(), block_h.dim());
            let e_n = build_hamiltonian(&block_n, &params).unwrap().eig(false).unwrap();
            let e_h = build_hamiltonian(&block_h, &params).unwrap().eig(false).unwrap();
            for (a, b) in e_n.values.iter().zip(&e_h.values) {
                assert!((a - b).abs() < 1e-10, "({v1},{v2}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn multi_level_matches_two_level() {
        // A three-level system with the third level decoupled and empty
        // reproduces the two-level block spectrum.
        let sys3 = SystemSpec::from_degeneracies(Statistics::Fermion, &[4, 6, 2], 6).unwrap();
        let sys2 = fermion_sys(4, 6, 6);
        let params3 = PairingParams::new(
            vec![0.1, 0.9, 50.0],
            vec![
                vec![0.3, 0.45, 0.0],
                vec![0.45, 0.2, 0.0],
                vec![0.0, 0.0, 0.0],
            ],
            Sign::Plus,
        )
        .unwrap();
        let params2 = PairingParams::two_level(0.1, 0.9, 0.3, 0.2, 0.45, Sign::Plus);
        let block3 = enumerate_block(&sys3, &[1, 1, 0], 6).unwrap();
        let block2 = enumerate_block(&sys2, &[1, 1], 6).unwrap();
        // Restrict the 3-level block to states with the third level empty.
        let e3 = build_hamiltonian(&block3, &params3).unwrap().eig(false).unwrap();
        let e2 = build_hamiltonian(&block2, &params2).unwrap().eig(false).unwrap();
        let empties: Vec<f64> = e3
            .values
            .iter()
            .copied()
            .filter(|&x| x < 25.0) // occupied third level costs ≥ 50
            .collect();
        assert_eq!(empties.len(), e2.values.len());
        for (a, b) in empties.iter().zip(&e2.values) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn casimir_coefficients() {
        let sys = boson_sys(3, 3, 4);
        let params = PairingParams::two_level(0.5, 1.5, 0.8, 0.6, 0.4, Sign::Plus);
        let c = casimir_form_params(&params, &sys).unwrap();
        assert!((c.n_level[0] - (0.5 - 0.25 * 0.8)).abs() < 1e-15);
        assert!((c.u_level[1] - 0.25 * (0.6 - 0.4)).abs() < 1e-15);
        assert!((c.pair_level[1] + 0.125 * (0.6 - 0.4)).abs() < 1e-15);
        assert!((c.u_total - 0.1).abs() < 1e-15);
        assert!((c.pair_total + 0.05).abs() < 1e-15);

        // Uniform pairing collapses the single-level Casimir terms.
        let params = PairingParams::uniform(1.0, Sign::Plus);
        let c = casimir_form_params(&params, &sys).unwrap();
        assert_eq!(c.u_level, [0.0, 0.0]);
        assert_eq!(c.pair_level, [0.0, 0.0]);
    }
}
