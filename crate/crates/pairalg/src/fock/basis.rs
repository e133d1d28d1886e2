//! Fock-space basis enumeration for fixed particle number.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::irreps::{Statistics, SystemSpec};

/// Desk-scale guard on sector sizes.
pub const BASIS_SIZE_CAP: u64 = 200_000;

/// A single-particle mode `(level k, projection m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mode {
    pub level: usize,
    pub m: HalfInt,
}

/// All occupation vectors with a fixed total particle number, enumerated in
/// lexicographic order over the level-major, m-ascending mode list.
///
/// Sectors with negative `n_particles` (or fermionic `n_particles` above the
/// total degeneracy) are valid but empty, which lets number-changing
/// operators near the edges of Fock space be represented as zero matrices of
/// the right shape.
#[derive(Debug)]
pub struct FockBasis {
    pub sys: SystemSpec,
    pub n_particles: i64,
    pub modes: Vec<Mode>,
    pub states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

fn mode_list(sys: &SystemSpec) -> Vec<Mode> {
    let mut modes = Vec::new();
    for (k, level) in sys.levels.iter().enumerate() {
        for m in level.j.projections() {
            modes.push(Mode { level: k, m });
        }
    }
    modes
}

fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(u128::from(n - i))?;
        acc /= u128::from(i + 1);
    }
    Some(acc)
}

fn expected_size(sys: &SystemSpec, n_particles: i64, n_modes: u64) -> Result<u64> {
    if n_particles < 0 {
        return Ok(0);
    }
    let n = n_particles as u64;
    let count = match sys.stat {
        Statistics::Boson => binomial_u128(n + n_modes - 1, n_modes - 1),
        Statistics::Fermion => binomial_u128(n_modes, n),
    }
    .unwrap_or(u128::MAX);
    if count > u128::from(BASIS_SIZE_CAP) {
        return Err(Error::BasisTooLarge { size: count.min(u128::from(u64::MAX)) as u64, cap: BASIS_SIZE_CAP });
    }
    Ok(count as u64)
}

impl FockBasis {
    pub fn build(sys: &SystemSpec, n_particles: i64) -> Result<Arc<FockBasis>> {
        let modes = mode_list(sys);
        expected_size(sys, n_particles, modes.len() as u64)?;

        let mut states = Vec::new();
        if n_particles >= 0 {
            let cap_per_mode = match sys.stat {
                Statistics::Boson => n_particles as u32,
                Statistics::Fermion => 1,
            };
            let mut current = vec![0u8; modes.len()];
            enumerate(&mut states, &mut current, 0, n_particles as u32, cap_per_mode);
        }
        let index = states.iter().cloned().zip(0..).collect();
        Ok(Arc::new(FockBasis {
            sys: sys.clone(),
            n_particles,
            modes,
            states,
            index,
        }))
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn position(&self, state: &[u8]) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn mode_index(&self, level: usize, m: HalfInt) -> Option<usize> {
        self.modes.iter().position(|md| md.level == level && md.m == m)
    }

    pub fn same_sector(&self, other: &FockBasis) -> bool {
        std::ptr::eq(self, other)
            || (self.sys == other.sys && self.n_particles == other.n_particles)
    }
}

fn enumerate(
    out: &mut Vec<Vec<u8>>,
    current: &mut Vec<u8>,
    mode: usize,
    remaining: u32,
    cap: u32,
) {
    if mode == current.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    let max_here = remaining.min(cap);
    for occ in 0..=max_here {
        current[mode] = occ as u8;
        enumerate(out, current, mode + 1, remaining - occ, cap);
    }
    current[mode] = 0;
}

/// Annihilate `mode` in `state`: returns the amplitude and the new state, or
/// `None` if the mode is empty. Fermionic amplitudes carry the sign string
/// over the modes preceding `mode` in the fixed global order.
pub fn apply_annihilation(
    stat: Statistics,
    state: &mut Vec<u8>,
    mode: usize,
) -> Option<f64> {
    let occ = state[mode];
    if occ == 0 {
        return None;
    }
    match stat {
        Statistics::Boson => {
            state[mode] = occ - 1;
            Some(f64::from(occ).sqrt())
        }
        Statistics::Fermion => {
            let parity: u32 = state[..mode].iter().map(|&o| u32::from(o)).sum();
            state[mode] = 0;
            Some(if parity % 2 == 0 { 1.0 } else { -1.0 })
        }
    }
}

/// Create a particle in `mode`; `None` for a Pauli-blocked fermionic mode.
pub fn apply_creation(stat: Statistics, state: &mut Vec<u8>, mode: usize) -> Option<f64> {
    let occ = state[mode];
    match stat {
        Statistics::Boson => {
            state[mode] = occ + 1;
            Some(f64::from(occ + 1).sqrt())
        }
        Statistics::Fermion => {
            if occ != 0 {
                return None;
            }
            let parity: u32 = state[..mode].iter().map(|&o| u32::from(o)).sum();
            state[mode] = 1;
            Some(if parity % 2 == 0 { 1.0 } else { -1.0 })
        }
    }
}

/// Sector cache: one `FockBasis` per particle number.
pub struct FockSpace {
    sys: SystemSpec,
    sectors: Mutex<HashMap<i64, Arc<FockBasis>>>,
}

impl FockSpace {
    pub fn new(sys: SystemSpec) -> Self {
        FockSpace { sys, sectors: Mutex::new(HashMap::new()) }
    }

    pub fn sys(&self) -> &SystemSpec {
        &self.sys
    }

    pub fn sector(&self, n_particles: i64) -> Result<Arc<FockBasis>> {
        let mut sectors = self.sectors.lock().unwrap();
        if let Some(basis) = sectors.get(&n_particles) {
            return Ok(Arc::clone(basis));
        }
        let basis = FockBasis::build(&self.sys, n_particles)?;
        sectors.insert(n_particles, Arc::clone(&basis));
        Ok(basis)
    }
}
