//! Operator-level checks of the Fock oracle: canonical (anti)commutators,
//! tensor transformation laws, quasispin algebra, generator phases, Casimir
//! spectra, and the duality identities.

use num_complex::Complex64;
use pairalg::fock::*;
use pairalg::half::{half, HalfInt};
use pairalg::irreps::{Statistics, SystemSpec};
use pairalg::quasispin::PairingParams;

fn boson(n1: u32, n2: u32, n: u32) -> FockSpace {
    FockSpace::new(SystemSpec::two_level(Statistics::Boson, n1, n2, n).unwrap())
}

fn fermion(n1: u32, n2: u32, n: u32) -> FockSpace {
    FockSpace::new(SystemSpec::two_level(Statistics::Fermion, n1, n2, n).unwrap())
}

fn assert_small(label: &str, dev: f64, tol: f64) {
    assert!(dev < tol, "{label}: deviation {dev:.3e} exceeds {tol:.0e}");
}

#[test]
fn canonical_commutation_relations() {
    // Bosons: [a_m, a†_m'] = δ_mm'; fermions: {a_m, a†_m'} = δ_mm' and
    // (a†)² = 0, with distinct-mode anticommutators vanishing through the
    // sign strings.
    for (space, n) in [(boson(3, 5, 2), 2i64), (fermion(4, 4, 2), 2)] {
        let sys = space.sys().clone();
        let fermi = sys.stat == Statistics::Fermion;
        for (level, m) in [(0usize, sys.levels[0].j), (1, sys.levels[1].j)] {
            for mp in [m, -m] {
                let (cre_up, _) = space.mode_ops(n, level, m).unwrap();
                let (_, ann_same) = space.mode_ops(n, level, mp).unwrap();
                let (cre_dn, _) = space.mode_ops(n - 1, level, m).unwrap();
                let (_, ann_up) = space.mode_ops(n + 1, level, mp).unwrap();
                // a_mp a†_m ∓ a†_m a_mp on sector n
                let first = ann_up.mul(&cre_up);
                let second = cre_dn.mul(&ann_same);
                let bracket = if fermi { first.plus(&second) } else { first.sub(&second) };
                let expect = if m == mp { 1.0 } else { 0.0 };
                let ident = OperatorMatrix::identity(space.sector(n).unwrap())
                    .scaled(Complex64::new(expect, 0.0));
                assert_small(
                    "canonical bracket",
                    bracket.mat.sub(&ident.mat).max_abs(),
                    1e-12,
                );
            }
        }
        if fermi {
            let (cre, _) = space.mode_ops(n, 0, sys.levels[0].j).unwrap();
            let (cre2, _) = space.mode_ops(n + 1, 0, sys.levels[0].j).unwrap();
            assert_small("Pauli exclusion", cre2.mul(&cre).mat.max_abs(), 1e-15);
        }
    }
}

#[test]
fn boson_number_operator_on_single_mode() {
    // a†a counts the occupation of its mode.
    let space = boson(3, 3, 3);
    let basis = space.sector(3).unwrap();
    let (_, ann) = space.mode_ops(3, 0, half(0)).unwrap();
    let (cre, _) = space.mode_ops(2, 0, half(0)).unwrap();
    let num = cre.mul(&ann);
    let mode = basis.mode_index(0, half(0)).unwrap();
    for (i, state) in basis.states.iter().enumerate() {
        let expect = f64::from(state[mode]);
        assert!((num.mat.get(i, i).re - expect).abs() < 1e-13);
    }
}

#[test]
fn generators_transform_as_tensors() {
    // [L0, T^g_γ] = γ T^g_γ for the G and F tensors.
    for (space, n) in [(boson(3, 5, 2), 2i64), (fermion(4, 6, 3), 3)] {
        let l0 = space.l_tensor(n).unwrap().comp(half(0)).clone();
        for (kc, ka) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let jc = space.sys().levels[kc].j;
            let ja = space.sys().levels[ka].j;
            let mut tg = (jc - ja).abs().twice();
            while tg <= (jc + ja).twice() {
                let tensor = space.build_g(n, kc, ka, half(tg)).unwrap();
                assert_small("G transform", tensor.transform_defect(&l0), 1e-10);
                tg += 2;
            }
        }
        for sigma0 in [Sign::Plus, Sign::Minus] {
            let ja = space.sys().levels[0].j;
            let jb = space.sys().levels[1].j;
            let mut tg = (ja - jb).abs().twice();
            while tg <= (ja + jb).twice() {
                let f = space.build_f(n, half(tg), sigma0).unwrap();
                assert_small("F transform", f.transform_defect(&l0), 1e-10);
                tg += 2;
            }
        }
    }
}

#[test]
fn number_operator_from_scalar_generator() {
    // N_k = θ ĵ G_kk^(0)_0.
    for (space, n) in [(boson(3, 5, 3), 3i64), (fermion(2, 4, 3), 3)] {
        let theta = space.sys().theta();
        for k in 0..2 {
            let jhat = space.sys().levels[k].j.hat();
            let g0 = space.build_g(n, k, k, half(0)).unwrap();
            let lhs = g0.comp(half(0)).scaled(Complex64::new(theta * jhat, 0.0));
            let num = space.number_op(n, k).unwrap();
            assert_small("N = θ ĵ G0", lhs.mat.sub(&num.mat).max_abs(), 1e-12);
        }
    }
}

#[test]
fn single_level_angular_momentum_normalization() {
    // L^(1) = θ [j(j+1)(2j+1)/3]^(1/2) (a†×ã)^(1) on one level, and J² on a
    // one-particle state gives j(j+1).
    let sys = SystemSpec::new(Statistics::Boson, &[half(2)], 1).unwrap();
    let space = FockSpace::new(sys);
    let jsq = space.jsq(1).unwrap();
    let basis = space.sector(1).unwrap();
    for i in 0..basis.dim() {
        assert!((jsq.mat.get(i, i).re - 2.0).abs() < 1e-12, "j(j+1) = 2 for j = 1");
    }

    let sys = SystemSpec::new(Statistics::Fermion, &[half(3)], 1).unwrap();
    let space = FockSpace::new(sys);
    let jsq = space.jsq(1).unwrap();
    for i in 0..4 {
        assert!((jsq.mat.get(i, i).re - 3.75).abs() < 1e-12, "j(j+1) = 15/4 for j = 3/2");
    }
}

#[test]
fn canonical_coupled_commutator() {
    // [ã, b†]^(c) = ĵ δ_AB δ_c0 as a matrix identity, for same and distinct
    // levels, both statistics.
    for (space, n) in [(boson(3, 5, 2), 2i64), (fermion(4, 4, 2), 2)] {
        let sys = space.sys().clone();
        for (ka, kb) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
            let ja = sys.levels[ka].j;
            let jb = sys.levels[kb].j;
            let ann = TensorFamily::annihilator_tilde(ja, ka);
            let cre = TensorFamily::creator(jb, kb);
            let mut tc = (ja - jb).abs().twice();
            while tc <= (ja + jb).twice() {
                let c = half(tc);
                let bracket = TensorFamily::commutator(&ann, &cre, c).unwrap();
                let op = bracket.at(&space, n).unwrap();
                for gamma in op.projections() {
                    let expect = if ka == kb && tc == 0 { ja.hat() } else { 0.0 };
                    let ident = OperatorMatrix::identity(space.sector(n).unwrap())
                        .scaled(Complex64::new(expect, 0.0));
                    assert_small(
                        "[ã, b†]^(c)",
                        op.comp(gamma).mat.sub(&ident.mat).max_abs(),
                        1e-12,
                    );
                }
                tc += 2;
            }
            // [ã, b̃]^(c) = [a†, b†]^(c) = 0.
            let cre_a = TensorFamily::creator(ja, ka);
            let zero = TensorFamily::commutator(&cre_a, &cre, ja + jb).unwrap();
            assert_small(
                "[a†, b†]",
                zero.at(&space, n).unwrap().comp(ja + jb).mat.max_abs(),
                1e-14,
            );
        }
    }
}

#[test]
fn coupled_commutator_symmetry_relation() {
    // [B, A]^(c) = -θ_ab (-1)^(c-a-b) [A, B]^(c).
    let space = fermion(4, 6, 3);
    let ja = half(3);
    let jb = half(5);
    let a = TensorFamily::creator(ja, 0);
    let b = TensorFamily::annihilator_tilde(jb, 1);
    let mut tc = (ja - jb).abs().twice();
    while tc <= (ja + jb).twice() {
        let c = half(tc);
        let ab = TensorFamily::commutator(&a, &b, c).unwrap().at(&space, 3).unwrap();
        let ba = TensorFamily::commutator(&b, &a, c).unwrap().at(&space, 3).unwrap();
        let sign = -graded_sign(ja, jb) * (c - ja - jb).phase();
        for gamma in ab.projections() {
            let rhs = ab.comp(gamma).scaled(Complex64::new(sign, 0.0));
            assert_small("bracket symmetry", ba.comp(gamma).mat.sub(&rhs.mat).max_abs(), 1e-12);
        }
        tc += 2;
    }
}

#[test]
fn single_level_commutator_parity_selection() {
    // [G^(e), G^(f)]^(g) vanishes when e + f + g is even (single level).
    let sys = SystemSpec::new(Statistics::Boson, &[half(2)], 2).unwrap();
    let space = FockSpace::new(sys);
    for te in 0..=2 {
        for tf in 0..=2 {
            let ge = space.build_g(2, 0, 0, half(2 * te)).unwrap();
            let gf = space.build_g(2, 0, 0, half(2 * tf)).unwrap();
            for tg in (te - tf).abs()..=(te + tf) {
                if (te + tf + tg) % 2 != 0 {
                    continue;
                }
                let comm = coupled_commutator(&ge, &gf, half(2 * tg)).unwrap();
                for gamma in comm.projections() {
                    assert_small("even-parity selection", comm.comp(gamma).mat.max_abs(), 1e-12);
                }
            }
        }
    }
}

#[test]
fn quasispin_algebra_closes() {
    // [S0, S±] = ±S±, [S+, S-] = -2θ S0, on levels and signed sums.
    for (space, n) in [(boson(3, 5, 4), 4i64), (fermion(4, 4, 4), 4)] {
        let theta = space.sys().theta();
        let sels = [
            QuasispinSel::Level(0),
            QuasispinSel::Level(1),
            QuasispinSel::Sum(Sign::Plus),
            QuasispinSel::Sum(Sign::Minus),
        ];
        for sel in sels {
            let here = space.quasispin(n, sel).unwrap();
            let above = space.quasispin(n + 2, sel).unwrap();
            let below = space.quasispin(n - 2, sel).unwrap();
            // [S0, S+] = S+ : S0(n+2) S+(n) - S+(n) S0(n)
            let lhs = above.zero.mul(&here.plus).sub(&here.plus.mul(&here.zero));
            assert_small("[S0,S+]", lhs.mat.sub(&here.plus.mat).max_abs(), 1e-10);
            // [S0, S-] = -S-
            let lhs = below.zero.mul(&here.minus).sub(&here.minus.mul(&here.zero));
            assert_small(
                "[S0,S-]",
                lhs.mat.sub(&here.minus.scaled(Complex64::new(-1.0, 0.0)).mat).max_abs(),
                1e-10,
            );
            // [S+, S-] = -2θ S0
            let lhs = below.plus.mul(&here.minus).sub(&above.minus.mul(&here.plus));
            let rhs = here.zero.scaled(Complex64::new(-2.0 * theta, 0.0));
            assert_small("[S+,S-]", lhs.mat.sub(&rhs.mat).max_abs(), 1e-10);
        }
    }
}

#[test]
fn quasispin_tensor_realizations() {
    // S+ = (ĵ/2)(a†×a†)^0, S- = (θĵ/2)(ã×ã)^0,
    // S0 = (θĵ/4)[(a†×ã)^0 + (ã×a†)^0].
    for (space, n) in [(boson(5, 3, 2), 2i64), (fermion(4, 6, 2), 2)] {
        let theta = space.sys().theta();
        for k in 0..2usize {
            let j = space.sys().levels[k].j;
            let cre = TensorFamily::creator(j, k);
            let ann = TensorFamily::annihilator_tilde(j, k);
            let ops = space.quasispin(n, QuasispinSel::Level(k)).unwrap();

            let pair_cre = TensorFamily::product(&cre, &cre, half(0)).unwrap();
            let lhs = pair_cre.at(&space, n).unwrap().comp(half(0)).scaled(Complex64::new(0.5 * j.hat(), 0.0));
            assert_small("S+ tensor form", lhs.mat.sub(&ops.plus.mat).max_abs(), 1e-12);

            let pair_ann = TensorFamily::product(&ann, &ann, half(0)).unwrap();
            let lhs = pair_ann
                .at(&space, n)
                .unwrap()
                .comp(half(0))
                .scaled(Complex64::new(0.5 * theta * j.hat(), 0.0));
            assert_small("S- tensor form", lhs.mat.sub(&ops.minus.mat).max_abs(), 1e-12);

            let t1 = TensorFamily::product(&cre, &ann, half(0)).unwrap();
            let t2 = TensorFamily::product(&ann, &cre, half(0)).unwrap();
            let mut lhs = t1.at(&space, n).unwrap().comp(half(0)).clone();
            lhs.add_scaled(t2.at(&space, n).unwrap().comp(half(0)), Complex64::new(1.0, 0.0));
            let lhs = lhs.scaled(Complex64::new(0.25 * theta * j.hat(), 0.0));
            assert_small("S0 tensor form", lhs.mat.sub(&ops.zero.mat).max_abs(), 1e-12);
        }
    }
}

#[test]
fn quasispin_vacuum_and_pair_expectations() {
    // S-|0⟩ = 0; S0|0⟩ = θΩ/2 |0⟩; ⟨S+S-⟩ on the first pair state.
    for (space, omega2, theta) in [(boson(5, 1, 0), 5u32, 1.0), (fermion(8, 2, 0), 8u32, -1.0)] {
        let ops = space.quasispin(0, QuasispinSel::Level(0)).unwrap();
        assert_eq!(ops.minus.mat.rows(), 0);
        let s0 = ops.zero.mat.get(0, 0).re;
        assert!((s0 - theta * f64::from(omega2) / 4.0).abs() < 1e-14);
    }

    // Boson j = 2: N = 2, v = 0 state has ⟨S+S-⟩ = 5/2.
    let space = boson(5, 1, 2);
    let four_ss = space.four_s_plus_s_minus(2, QuasispinSel::Level(0)).unwrap();
    let eig = eig_hermitian(&four_ss.mat, false).unwrap();
    let top = eig.values.last().unwrap() / 4.0;
    assert!((top - 2.5).abs() < 1e-10, "boson pair expectation {top}");

    // Fermion Ω = 4: N = 2, v = 0 state has ⟨S+S-⟩ = 4 = (N/2)(Ω - N/2 + 1).
    let space = fermion(8, 2, 2);
    let four_ss = space.four_s_plus_s_minus(2, QuasispinSel::Level(0)).unwrap();
    let eig = eig_hermitian(&four_ss.mat, false).unwrap();
    let top = eig.values.last().unwrap() / 4.0;
    assert!((top - 4.0).abs() < 1e-10, "fermion pair expectation {top}");
}

#[test]
fn singlet_boson_level_squared_quasispin() {
    // For a j = 0 bosonic level the squared quasispin is identically -3/16.
    let sys = SystemSpec::new(Statistics::Boson, &[half(0)], 3).unwrap();
    let space = FockSpace::new(sys);
    for n in 0..4i64 {
        let here = space.quasispin(n, QuasispinSel::Level(0)).unwrap();
        let above = space.quasispin(n - 2, QuasispinSel::Level(0)).unwrap();
        // S² = S0(S0-1) - θ S+S-
        let s0 = &here.zero;
        let mut ssq = s0.mul(s0);
        ssq.add_scaled(s0, Complex64::new(-1.0, 0.0));
        ssq.add_scaled(&above.plus.mul(&here.minus), Complex64::new(-1.0, 0.0));
        let ident = OperatorMatrix::identity(space.sector(n).unwrap());
        assert_small(
            "s-boson S² = -3/16",
            ssq.mat.sub(&ident.scaled(Complex64::new(-3.0 / 16.0, 0.0)).mat).max_abs(),
            1e-13,
        );
    }
}

#[test]
fn f_generator_phases_and_sd_forms() {
    // s-d system: σ0 = + gives F^(2) = (s†×d̃)^(2) + (d†×s̃)^(2) with η = 1;
    // σ0 = - gives F^(2) = i[(s†×d̃)^(2) - (d†×s̃)^(2)].
    let space = boson(1, 5, 2);
    let n = 2i64;
    assert_eq!(space.eta(Sign::Plus), Complex64::new(1.0, 0.0));
    assert_eq!(space.eta(Sign::Minus), Complex64::new(0.0, 1.0));

    let gab = space.build_g(n, 0, 1, half(4)).unwrap();
    let gba = space.build_g(n, 1, 0, half(4)).unwrap();
    for (sigma0, eta) in [
        (Sign::Plus, Complex64::new(1.0, 0.0)),
        (Sign::Minus, Complex64::new(0.0, 1.0)),
    ] {
        let f = space.build_f(n, half(4), sigma0).unwrap();
        for gamma in f.projections() {
            let mut expect = gab.comp(gamma).scaled(eta);
            expect.add_scaled(gba.comp(gamma), eta * sigma0.value());
            assert_small("s-d F form", f.comp(gamma).mat.sub(&expect.mat).max_abs(), 1e-13);
        }
    }

    // Self-adjointness F† = F̃ for several systems and both signs.
    for (space, n) in [(boson(1, 5, 2), 2i64), (boson(3, 5, 2), 2), (fermion(4, 6, 2), 2)] {
        for sigma0 in [Sign::Plus, Sign::Minus] {
            let reports = verify_f_self_adjoint(&space, n, sigma0).unwrap();
            for r in &reports {
                assert!(r.pass, "{} {}: {:.3e}", r.identity_name, r.parameters, r.max_deviation);
            }
        }
    }
}

#[test]
fn casimir_spectra_small_systems() {
    // SO(6) on the boson (3,3) N = 2 sector: eigenvalues 0 (v=0, dim 1) and
    // 24 (v=2, dim 20); full Casimir suite passes.
    let space = boson(3, 3, 2);
    let cas = space.build_casimirs(2, Sign::Plus).unwrap();
    let eig = eig_hermitian(&cas.c2_pair_total.mat, false).unwrap();
    assert_eq!(eig.values.len(), 21);
    assert!((eig.values[0] - 0.0).abs() < 1e-9);
    for v in &eig.values[1..] {
        assert!((v - 24.0).abs() < 1e-8, "expected 2v(v+n-2) = 24, got {v}");
    }

    for (space, n) in [(boson(3, 3, 3), 3i64), (fermion(4, 4, 3), 3), (boson(1, 5, 3), 3)] {
        for sigma0 in [Sign::Plus, Sign::Minus] {
            let reports = verify_casimirs(&space, n, sigma0).unwrap();
            for r in &reports {
                assert!(r.pass, "{} {}: {:.3e}", r.identity_name, r.parameters, r.max_deviation);
            }
        }
    }
}

#[test]
fn duality_identity_and_sign_rule() {
    // 4S+S- = -θN + C2[U] - C2[SO/Sp]/2 under the sign rule, failing when
    // the rule is violated; the s-d system has σ0 = -σ.
    let sd = boson(1, 5, 3);
    assert_eq!(sigma0_from_sigma(sd.sys(), Sign::Plus), Sign::Minus);
    assert_eq!(sigma0_from_sigma(sd.sys(), Sign::Minus), Sign::Plus);

    for (space, n) in [
        (boson(3, 3, 4), 4i64),
        (boson(1, 5, 3), 3),
        (boson(3, 5, 3), 3),
        (fermion(4, 4, 4), 4),
        (fermion(2, 4, 3), 3),
    ] {
        for sigma in [Sign::Plus, Sign::Minus] {
            let reports = verify_duality(&space, n, sigma).unwrap();
            for r in &reports {
                assert!(
                    r.pass,
                    "{} {} (N={n}): {:.3e}",
                    r.identity_name, r.parameters, r.max_deviation
                );
            }
        }
    }

    // Trivial pass at N = 0: both sides vanish.
    let space = boson(3, 3, 0);
    let reports = verify_duality(&space, 0, Sign::Plus).unwrap();
    for r in reports.iter().filter(|r| r.identity_name != "duality:sign_violation") {
        assert!(r.pass);
    }
}

#[test]
fn j_content_of_seniority_multiplets() {
    // Boson (3,3) N = 2, v = 2 (dimension 20) decomposes as two J = 0, one
    // J = 1, three J = 2 multiplets; the vacuum and a single j = 1 boson
    // carry J = 0 and J = 1.
    let space = boson(3, 3, 2);
    let cas = space.build_casimirs(2, Sign::Plus).unwrap();
    let eig = eig_hermitian(&cas.c2_pair_total.mat, true).unwrap();
    let vectors = eig.vectors.unwrap();
    let members: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .zip(&vectors)
        .filter(|(lam, _)| (**lam - 24.0).abs() < 1e-6)
        .map(|(_, v)| v.clone())
        .collect();
    assert_eq!(members.len(), 20);
    let jsq = space.jsq(2).unwrap();
    let labels = j_labels(&jsq, &members).unwrap();
    let count = |tj: i32| labels.iter().filter(|j| j.twice() == tj).count();
    // Each J multiplet contributes 2J+1 copies of its label.
    assert_eq!(count(0), 2);
    assert_eq!(count(2), 3);
    assert_eq!(count(4), 15);

    let vacuum = boson(3, 3, 0);
    let jsq0 = vacuum.jsq(0).unwrap();
    let labels = j_labels(&jsq0, &[vec![Complex64::new(1.0, 0.0)]]).unwrap();
    assert_eq!(labels[0].twice(), 0);

    let one = SystemSpec::new(Statistics::Boson, &[half(2)], 1).unwrap();
    let space = FockSpace::new(one);
    let jsq1 = space.jsq(1).unwrap();
    let eig = eig_hermitian(&jsq1.mat, false).unwrap();
    for v in &eig.values {
        assert!((v - 2.0).abs() < 1e-10, "single j = 1 boson has J = 1");
    }
}

#[test]
fn symplectic_irrep_dimension_from_seniority_count() {
    // Sp(10) {v = 3}: the number of seniority-3 states at N = 3 on a single
    // j = 9/2 shell equals C(10,3) - C(10,1) = 110, counted in the oracle as
    // the kernel dimension of S+S-.
    let sys = SystemSpec::new(Statistics::Fermion, &[half(9)], 3).unwrap();
    let space = FockSpace::new(sys);
    let four_ss = space.four_s_plus_s_minus(3, QuasispinSel::Level(0)).unwrap();
    let eig = eig_hermitian(&four_ss.mat, false).unwrap();
    assert_eq!(eig.values.len(), 120);
    let kernel = eig.values.iter().filter(|&&x| x.abs() < 1e-8).count();
    assert_eq!(kernel, 110);
    // The complement carries v = 1 with ⟨4S+S-⟩ = 16.
    let excited = eig.values.iter().filter(|&&x| (x - 16.0).abs() < 1e-8).count();
    assert_eq!(excited, 10);
}

#[test]
fn casimir_form_roundtrip_against_oracle() {
    // The pairing Hamiltonian assembled from its Casimir-form coefficients
    // reproduces the oracle matrix.
    for (space, n) in [(boson(3, 3, 3), 3i64), (fermion(4, 6, 4), 4)] {
        let sys = space.sys().clone();
        for sigma in [Sign::Plus, Sign::Minus] {
            let params = PairingParams::two_level(0.37, 1.21, 0.53, 0.29, 0.41, sigma);
            let coeffs = pairalg::quasispin::casimir_form_params(&params, &sys).unwrap();
            let sigma0 = sigma0_from_sigma(&sys, sigma);

            let h = pairing_hamiltonian(&space, n, &params).unwrap();
            let cas = space.build_casimirs(n, sigma0).unwrap();
            let basis = space.sector(n).unwrap();
            let mut rhs = OperatorMatrix::zeros(basis.clone(), basis);
            for k in 0..2 {
                rhs.add_scaled(
                    &space.number_op(n, k).unwrap(),
                    Complex64::new(coeffs.n_level[k], 0.0),
                );
                rhs.add_scaled(&cas.c2_u_level[k], Complex64::new(coeffs.u_level[k], 0.0));
                rhs.add_scaled(&cas.c2_pair_level[k], Complex64::new(coeffs.pair_level[k], 0.0));
            }
            rhs.add_scaled(&cas.c2_u_total, Complex64::new(coeffs.u_total, 0.0));
            rhs.add_scaled(&cas.c2_pair_total, Complex64::new(coeffs.pair_total, 0.0));
            assert_small("Casimir-form roundtrip", h.mat.relative_deviation(&rhs.mat), 1e-9);
        }
    }
}

#[test]
fn appendix_rules_smoke() {
    // A handful of randomized product-rule draws on each single-level
    // system; the full 50-trial battery runs in the acceptance suite.
    for (stat, tj, n) in [(Statistics::Boson, 2, 2i64), (Statistics::Fermion, 3, 2)] {
        let sys = SystemSpec::new(stat, &[half(tj)], n as u32).unwrap();
        let space = FockSpace::new(sys);
        let reports = verify_appendix(&space, n, 5, 20260809).unwrap();
        for r in &reports {
            assert!(r.pass, "{} {}: {:.3e}", r.identity_name, r.parameters, r.max_deviation);
        }
    }
}

#[test]
fn bilinear_commutator_via_families() {
    // The generic one-body commutator of (A†×B̃) with (C†×D̃) computed from
    // raw mode tensors agrees with the direct product-cache route used by
    // the table verification.
    let space = fermion(2, 4, 3);
    let sys = space.sys().clone();
    let (ja, jb) = (sys.levels[0].j, sys.levels[1].j);
    let cre_a = TensorFamily::creator(ja, 0);
    let ann_b = TensorFamily::annihilator_tilde(jb, 1);
    let cre_b = TensorFamily::creator(jb, 1);
    let ann_a = TensorFamily::annihilator_tilde(ja, 0);

    let e = half(2);
    let f = half(2);
    let gab_fam = TensorFamily::product(&cre_a, &ann_b, e).unwrap();
    let gba_fam = TensorFamily::product(&cre_b, &ann_a, f).unwrap();

    let gab = space.build_g(3, 0, 1, e).unwrap();
    let gba = space.build_g(3, 1, 0, f).unwrap();
    let mut tg = 0;
    while tg <= (e + f).twice() {
        let g = half(tg);
        let via_family = TensorFamily::commutator(&gab_fam, &gba_fam, g)
            .unwrap()
            .at(&space, 3)
            .unwrap();
        let direct = coupled_commutator(&gab, &gba, g).unwrap();
        for gamma in direct.projections() {
            assert_small(
                "bilinear commutator routes agree",
                via_family.comp(gamma).mat.sub(&direct.comp(gamma).mat).max_abs(),
                1e-12,
            );
        }
        tg += 2;
    }
}
