//! The default verification suite: commutator tables, Casimir spectra and
//! labels, duality (with the sign-rule contrapositive), generator
//! self-adjointness, appendix product rules, and engine-vs-oracle spectrum
//! equivalence on three reference systems.

use pairalg::error::Result;
use pairalg::fock::{
    verify_appendix, verify_casimirs, verify_commutator_tables, verify_duality,
    verify_engine_vs_oracle, verify_f_self_adjoint, FockSpace, IdentityReport, Sign,
};
use pairalg::half::half;
use pairalg::irreps::{Statistics, SystemSpec};
use pairalg::quasispin::PairingParams;

pub struct SuiteOutcome {
    pub reports: Vec<IdentityReport>,
    pub passed: bool,
}

/// Runs the suite on the reference systems: boson (3,3) and fermion (4,4) up
/// to N = 4, the s-d boson system up to N = 3. `quick` restricts the
/// commutator tables to N = 2 and trims the randomized appendix trials.
pub fn run_default_suite(quick: bool) -> Result<SuiteOutcome> {
    let mut reports = Vec::new();
    let systems = [
        (Statistics::Boson, 3u32, 3u32, 4u32),
        (Statistics::Fermion, 4, 4, 4),
        (Statistics::Boson, 1, 5, 3),
    ];
    for (stat, n1, n2, n_max) in systems {
        let sys = SystemSpec::two_level(stat, n1, n2, n_max)?;
        let space = FockSpace::new(sys);
        let table_ns: &[i64] = if quick { &[2] } else { &[2, 3] };
        for &n in table_ns {
            reports.extend(verify_commutator_tables(&space, n)?);
        }
        for n in 1..=i64::from(n_max) {
            for sigma0 in [Sign::Plus, Sign::Minus] {
                reports.extend(verify_f_self_adjoint(&space, n, sigma0)?);
            }
            for sigma in [Sign::Plus, Sign::Minus] {
                reports.extend(verify_duality(&space, n, sigma)?);
            }
            if !quick || n == 2 {
                for sigma0 in [Sign::Plus, Sign::Minus] {
                    reports.extend(verify_casimirs(&space, n, sigma0)?);
                }
            }
        }
        // Engine equivalence at the largest sector, for a few parameter sets.
        for (k, params) in [
            PairingParams::uniform(0.7, Sign::Plus),
            PairingParams::two_level(0.2, 1.1, 0.4, 0.3, -0.5, Sign::Plus),
            PairingParams::two_level(0.0, 1.0, -0.6, 0.8, 0.25, Sign::Minus),
        ]
        .iter()
        .enumerate()
        {
            reports.push(verify_engine_vs_oracle(
                &space,
                params,
                &format!("{stat:?} ({n1},{n2}) N={n_max} set {k}"),
            )?);
        }
    }

    // Appendix coupled-commutator rules on single-level systems.
    let trials = if quick { 10 } else { 25 };
    for (stat, tj) in [(Statistics::Boson, 2), (Statistics::Fermion, 3)] {
        let sys = SystemSpec::new(stat, &[half(tj)], 2)?;
        let space = FockSpace::new(sys);
        reports.extend(verify_appendix(&space, 2, trials, 0x5eed)?);
    }

    let passed = reports.iter().all(|r| r.pass);
    Ok(SuiteOutcome { reports, passed })
}

/// One-line-per-identity aggregation for terminal output.
pub fn summarize(reports: &[IdentityReport]) -> Vec<(String, usize, usize, f64)> {
    let mut names: Vec<String> = Vec::new();
    for r in reports {
        if !names.contains(&r.identity_name) {
            names.push(r.identity_name.clone());
        }
    }
    names
        .into_iter()
        .map(|name| {
            let group: Vec<&IdentityReport> =
                reports.iter().filter(|r| r.identity_name == name).collect();
            let passed = group.iter().filter(|r| r.pass).count();
            let worst = group.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
            (name, passed, group.len(), worst)
        })
        .collect()
}
