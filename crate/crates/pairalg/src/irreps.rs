//! Irrep labels, branching rules, dimension formulas, and the
//! seniority-quasispin duality maps for the two-level pairing model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;

/// Particle statistics; `theta` is the sign that enters every
/// statistics-dependent formula (`+` bosons, `-` fermions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    pub fn theta(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }

    pub fn theta_i(self) -> i64 {
        match self {
            Statistics::Boson => 1,
            Statistics::Fermion => -1,
        }
    }
}

/// A single `j`-shell. Degeneracy `n = 2j + 1`, pair degeneracy `Ω = n/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub j: HalfInt,
}

impl LevelSpec {
    pub fn new(j: HalfInt) -> Self {
        LevelSpec { j }
    }

    /// Degeneracy `n = 2j + 1`.
    pub fn n(self) -> u32 {
        (self.j.twice() + 1) as u32
    }

    /// Twice the pair degeneracy, `2Ω = n` (Ω itself may be half-integer).
    pub fn omega2(self) -> u32 {
        self.n()
    }

    /// A singlet bosonic level (`j = 0`) has no orthogonal algebra dual to
    /// its quasispin; the seniority label survives only through the
    /// quasispin, capped at `v ≤ 1`.
    pub fn has_orthogonal_algebra(self, stat: Statistics) -> bool {
        !(stat == Statistics::Boson && self.n() == 1)
    }
}

/// Statistics, level list, and total particle number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub stat: Statistics,
    pub levels: Vec<LevelSpec>,
    pub n_particles: u32,
}

impl SystemSpec {
    pub fn new(stat: Statistics, js: &[HalfInt], n_particles: u32) -> Result<Self> {
        if js.is_empty() {
            return Err(Error::InvalidSystem("at least one level required".into()));
        }
        for &j in js {
            if j.is_negative() {
                return Err(Error::InvalidSystem(format!("negative level momentum {j}")));
            }
            match stat {
                Statistics::Boson if !j.is_integer() => {
                    return Err(Error::InvalidSystem(format!("bosonic level with j = {j}")));
                }
                Statistics::Fermion if j.is_integer() => {
                    return Err(Error::InvalidSystem(format!("fermionic level with j = {j}")));
                }
                _ => {}
            }
        }
        let sys = SystemSpec {
            stat,
            levels: js.iter().map(|&j| LevelSpec::new(j)).collect(),
            n_particles,
        };
        if stat == Statistics::Fermion && n_particles > sys.n_total() {
            return Err(Error::InvalidSystem(format!(
                "fermionic N = {} exceeds total degeneracy {}",
                n_particles,
                sys.n_total()
            )));
        }
        Ok(sys)
    }

    /// Build from level degeneracies `n_k = 2j_k + 1`, the parameterization
    /// used throughout the figure captions.
    pub fn from_degeneracies(stat: Statistics, ns: &[u32], n_particles: u32) -> Result<Self> {
        let js = ns
            .iter()
            .map(|&n| {
                if n == 0 {
                    return Err(Error::InvalidSystem("level degeneracy 0".into()));
                }
                match (stat, n % 2) {
                    (Statistics::Boson, 0) => Err(Error::InvalidSystem(format!(
                        "bosonic level degeneracy {n} must be odd"
                    ))),
                    (Statistics::Fermion, 1) => Err(Error::InvalidSystem(format!(
                        "fermionic level degeneracy {n} must be even"
                    ))),
                    _ => Ok(HalfInt::from_twice(n as i32 - 1)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SystemSpec::new(stat, &js, n_particles)
    }

    pub fn two_level(stat: Statistics, n1: u32, n2: u32, n_particles: u32) -> Result<Self> {
        SystemSpec::from_degeneracies(stat, &[n1, n2], n_particles)
    }

    pub fn theta(&self) -> f64 {
        self.stat.theta()
    }

    /// Total degeneracy `n = Σ n_k`.
    pub fn n_total(&self) -> u32 {
        self.levels.iter().map(|l| l.n()).sum()
    }

    /// Twice the total pair degeneracy, `2Ω = n`.
    pub fn omega2_total(&self) -> u32 {
        self.n_total()
    }

    pub fn is_two_level(&self) -> bool {
        self.levels.len() == 2
    }
}

/// Seniority partition labels `(v; v1, v2, n_v)` with `v = v1 + v2 + 2 n_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeniorityLabels {
    pub v: u32,
    pub v1: u32,
    pub v2: u32,
    pub nv: u32,
}

/// Quasispin labels stored in quarter-integer units, since the bosonic
/// projective irreps take S = 1/4, 3/4, 5/4, ….
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasispinLabels {
    /// `4S`
    pub s4: i32,
    /// `4M`
    pub m4: i32,
}

impl QuasispinLabels {
    pub fn s(&self) -> f64 {
        f64::from(self.s4) / 4.0
    }

    pub fn m(&self) -> f64 {
        f64::from(self.m4) / 4.0
    }
}

/// Branching `U(n) -> SO(n)` (bosons) or `U(n) -> Sp(n)` (fermions):
/// seniorities `v = (N' mod 2), …, N'-2, N'` with `N' = N` for bosons and
/// `N' = min(N, n-N)` for fermions.
pub fn branch_u_to_pair(n_particles: u32, stat: Statistics, n: u32) -> Result<Vec<u32>> {
    let n_eff = match stat {
        Statistics::Boson => n_particles,
        Statistics::Fermion => {
            if n_particles > n {
                return Err(Error::InvalidLabels(format!(
                    "fermionic N = {n_particles} exceeds degeneracy n = {n}"
                )));
            }
            n_particles.min(n - n_particles)
        }
    };
    Ok((n_eff % 2..=n_eff).step_by(2).collect())
}

/// Whether seniority `v` labels an irrep of the two-level pair algebra of
/// `sys` (`SO(n1+n2)` bosons, `Sp(n1+n2)` fermions).
pub fn v_admissible(v: u32, sys: &SystemSpec) -> bool {
    match sys.stat {
        Statistics::Boson => true,
        Statistics::Fermion => 2 * v <= sys.n_total(),
    }
}

/// Branching of the two-level pair algebra onto the single-level algebras:
/// all partitions `v = v1 + v2 + 2 n_v`, subject for fermions to
/// `|(v1-v2) - (n1-n2)/2| <= (n1+n2)/2 - v`, and for a singlet bosonic level
/// to the quasispin cap `v_k <= 1`.
///
/// Rows are ordered by ascending `n_v`, then descending `v1`, matching the
/// printed tables.
pub fn branch_pair_to_levels(v: u32, sys: &SystemSpec) -> Result<Vec<SeniorityLabels>> {
    if !sys.is_two_level() {
        return Err(Error::InvalidSystem("two-level branching requires two levels".into()));
    }
    if !v_admissible(v, sys) {
        return Err(Error::InvalidLabels(format!(
            "seniority v = {v} not admissible for n = {}",
            sys.n_total()
        )));
    }
    let n1 = sys.levels[0].n() as i64;
    let n2 = sys.levels[1].n() as i64;
    let mut out = Vec::new();
    for nv in 0..=(v / 2) {
        let rest = v - 2 * nv;
        for v1 in (0..=rest).rev() {
            let v2 = rest - v1;
            if !level_v_allowed(sys.stat, sys.levels[0], v1)
                || !level_v_allowed(sys.stat, sys.levels[1], v2)
            {
                continue;
            }
            if sys.stat == Statistics::Fermion {
                // |2(v1-v2) - (n1-n2)| <= (n1+n2) - 2v, in doubled units.
                let lhs = (2 * (v1 as i64 - v2 as i64) - (n1 - n2)).abs();
                let rhs = (n1 + n2) - 2 * v as i64;
                if lhs > rhs {
                    continue;
                }
            }
            out.push(SeniorityLabels { v, v1, v2, nv });
        }
    }
    Ok(out)
}

/// Per-level seniority cap: fermions respect `v_k <= Ω_k`; a singlet bosonic
/// level carries only the quasispin labels `v_k ∈ {0, 1}`.
pub fn level_v_allowed(stat: Statistics, level: LevelSpec, v: u32) -> bool {
    match stat {
        Statistics::Fermion => 2 * v <= level.n(),
        Statistics::Boson => level.has_orthogonal_algebra(stat) || v <= 1,
    }
}

/// Algebra family for `irrep_dimension`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairAlgebra {
    /// `SO(n)`, symmetric irrep `[v]`.
    Orthogonal,
    /// `Sp(n)`, antisymmetric irrep `{v}`.
    Symplectic,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Dimension of the symmetric `SO(n)` irrep `[v]` (traceless symmetric
/// tensors) or the antisymmetric `Sp(n)` irrep `{v}` (traceless antisymmetric
/// tensors).
pub fn irrep_dimension(algebra: PairAlgebra, n: u32, v: u32) -> Result<u64> {
    let (n, v) = (u64::from(n), u64::from(v));
    match algebra {
        PairAlgebra::Orthogonal => {
            if n < 1 {
                return Err(Error::InvalidLabels(format!("SO({n}) undefined")));
            }
            let d = binomial(v + n - 1, v);
            let traces = if v >= 2 { binomial(v + n - 3, v - 2) } else { 0 };
            Ok(d - traces)
        }
        PairAlgebra::Symplectic => {
            if n < 2 || n % 2 != 0 {
                return Err(Error::InvalidLabels(format!("Sp({n}) requires even n >= 2")));
            }
            if 2 * v > n {
                return Err(Error::InvalidLabels(format!("Sp({n}) seniority {v} exceeds n/2")));
            }
            let d = binomial(n, v);
            let traces = if v >= 2 { binomial(n, v - 2) } else { 0 };
            Ok(d - traces)
        }
    }
}

fn pair_algebra(stat: Statistics) -> PairAlgebra {
    match stat {
        Statistics::Boson => PairAlgebra::Orthogonal,
        Statistics::Fermion => PairAlgebra::Symplectic,
    }
}

/// Checks `dim[v] = Σ dim[v1] dim[v2]` over the branching output.
pub fn dimension_consistency(v: u32, sys: &SystemSpec) -> Result<bool> {
    let alg = pair_algebra(sys.stat);
    let total = irrep_dimension(alg, sys.n_total(), v)?;
    let mut sum = 0u64;
    for labels in branch_pair_to_levels(v, sys)? {
        sum += irrep_dimension(alg, sys.levels[0].n(), labels.v1)?
            * irrep_dimension(alg, sys.levels[1].n(), labels.v2)?;
    }
    Ok(total == sum)
}

/// Seniority/occupation to quasispin: `S = (Ω + θv)/2`, `M = (N + θΩ)/2`.
/// `omega2` is `2Ω` for the level (or level sum) in question.
pub fn duality_map(v: u32, n_particles: u32, omega2: u32, stat: Statistics) -> QuasispinLabels {
    let theta = stat.theta_i() as i32;
    QuasispinLabels {
        s4: omega2 as i32 + theta * 2 * v as i32,
        m4: 2 * n_particles as i32 + theta * omega2 as i32,
    }
}

/// Inverse of `duality_map`; exact round trip.
pub fn duality_inverse(q: QuasispinLabels, omega2: u32, stat: Statistics) -> Result<(u32, u32)> {
    let theta = stat.theta_i() as i32;
    let v2 = theta * (q.s4 - omega2 as i32);
    let n2 = q.m4 - theta * omega2 as i32;
    if v2 < 0 || v2 % 2 != 0 || n2 < 0 || n2 % 2 != 0 {
        return Err(Error::InvalidLabels(format!(
            "quasispin labels (4S = {}, 4M = {}) do not invert for 2Ω = {omega2}",
            q.s4, q.m4
        )));
    }
    Ok(((v2 / 2) as u32, (n2 / 2) as u32))
}

/// Eigenvalue of the quadratic Casimir of `SO(n)` (symmetric irrep `[v]`) or
/// `Sp(n)` (antisymmetric irrep `{v}`): the unified form `2v(θv + n - 2θ)`.
pub fn casimir_pair_eigenvalue(v: u32, n: u32, stat: Statistics) -> i64 {
    let theta = stat.theta_i();
    let (v, n) = (v as i64, n as i64);
    2 * v * (theta * v + n - 2 * theta)
}

/// Eigenvalue of `C2[U(n)]` on the symmetric `[N]` or antisymmetric `{N}`
/// irrep: `N(θN + n - θ)`.
pub fn casimir_u_eigenvalue(n_particles: u32, n: u32, stat: Statistics) -> i64 {
    let theta = stat.theta_i();
    let (np, n) = (n_particles as i64, n as i64);
    np * (theta * np + n - theta)
}

/// Eigenvalue of `4 S+ S-` in occupation-seniority labels:
/// `θ[N(N + 2θΩ - 2) - v(v + 2θΩ - 2)]` with `2Ω = omega2`.
pub fn four_ss_eigenvalue(n_particles: u32, v: u32, omega2: u32, stat: Statistics) -> i64 {
    let theta = stat.theta_i();
    let (np, v, o2) = (n_particles as i64, v as i64, omega2 as i64);
    theta * (np * (np + theta * o2 - 2) - v * (v + theta * o2 - 2))
}

/// Couple two quasispins. For fermions (SU(2)) the triangle rule applies; for
/// bosons (SU(1,1)) the ladder `S1+S2, S1+S2+1, …` is unbounded above, so the
/// caller must supply the cutoff `4M` determined by the particle number.
/// All values are in quarter-integer units.
pub fn quasispin_couple(
    s1_4: i32,
    s2_4: i32,
    stat: Statistics,
    m4_cutoff: Option<i32>,
) -> Result<Vec<i32>> {
    match stat {
        Statistics::Fermion => {
            Ok(((s1_4 - s2_4).abs()..=s1_4 + s2_4).step_by(4).collect())
        }
        Statistics::Boson => {
            let m4 = m4_cutoff.ok_or_else(|| {
                Error::InvalidLabels("bosonic quasispin coupling requires an M cutoff".into())
            })?;
            Ok((s1_4 + s2_4..=m4).step_by(4).collect())
        }
    }
}
