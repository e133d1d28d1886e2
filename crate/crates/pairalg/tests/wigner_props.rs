//! Property checks for the coupling coefficients: orthogonality, symmetry,
//! and the Biedenharn-Elliott identity.

use pairalg::half::{half, HalfInt};
use pairalg::wigner::{cg, sixj, triangle};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[test]
fn cg_orthogonality() {
    // Σ_{m1 m2} ⟨j1 m1 j2 m2|J M⟩⟨j1 m1 j2 m2|J' M'⟩ = δ_JJ' δ_MM'
    for tj1 in 0..=6 {
        for tj2 in 0..=6 {
            let (j1, j2) = (half(tj1), half(tj2));
            let mut tjj = (tj1 - tj2).abs();
            while tjj <= tj1 + tj2 {
                let jj = half(tjj);
                let mut tjp = (tj1 - tj2).abs();
                while tjp <= tj1 + tj2 {
                    let jp = half(tjp);
                    for m in jj.projections() {
                        for mp in jp.projections() {
                            let mut sum = 0.0;
                            for m1 in j1.projections() {
                                for m2 in j2.projections() {
                                    sum += cg(j1, m1, j2, m2, jj, m)
                                        * cg(j1, m1, j2, m2, jp, mp);
                                }
                            }
                            let expect = if jj == jp && m == mp { 1.0 } else { 0.0 };
                            assert!(
                                (sum - expect).abs() < 1e-12,
                                "orthogonality failed at j1={j1} j2={j2} J={jj} J'={jp} M={m} M'={mp}: {sum}"
                            );
                        }
                    }
                    tjp += 2;
                }
                tjj += 2;
            }
        }
    }
}

#[test]
fn cg_exchange_symmetry() {
    // cg(j1 m1 j2 m2|J M) = (-1)^(j1+j2-J) cg(j2 m2 j1 m1|J M)
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let j1 = half(rng.random_range(0..=8));
        let j2 = half(rng.random_range(0..=8));
        let tjj = rng.random_range((j1 - j2).abs().twice()..=(j1 + j2).twice());
        if (tjj + j1.twice() + j2.twice()) % 2 != 0 {
            continue;
        }
        let jj = half(tjj);
        let m1 = *j1.projections().collect::<Vec<_>>().choose(&mut rng).unwrap();
        let m2 = *j2.projections().collect::<Vec<_>>().choose(&mut rng).unwrap();
        let m = m1 + m2;
        let lhs = cg(j1, m1, j2, m2, jj, m);
        let rhs = (j1 + j2).phase_with(-jj) * cg(j2, m2, j1, m1, jj, m);
        assert!((lhs - rhs).abs() < 1e-12, "exchange symmetry at {j1} {m1} {j2} {m2} {jj}");
    }
}

#[test]
fn sixj_column_permutations() {
    // The 6j symbol is invariant under any permutation of its columns.
    for ta in 0..=6 {
        for tb in 0..=6 {
            for tc in 0..=6 {
                let (a, b, c) = (half(ta), half(tb), half(tc));
                if !triangle(a, b, c) {
                    continue;
                }
                // A valid companion triad set.
                let (d, e, f) = (b, a, c);
                let base = sixj(a, b, c, d, e, f);
                let swaps = [
                    sixj(b, a, c, e, d, f),
                    sixj(a, c, b, d, f, e),
                    sixj(c, b, a, f, e, d),
                ];
                for s in swaps {
                    assert!(
                        (base - s).abs() < 1e-13,
                        "column permutation violated at ({a},{b},{c};{d},{e},{f})"
                    );
                }
            }
        }
    }
}

#[test]
fn biedenharn_elliott_identity() {
    // Σ_x (-1)^(R+x) (2x+1) {a b x; c d p} {c d x; e f q} {e f x; b a r}
    //   = {p q r; e a d} {p q r; f b c}
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    while checked < 60 {
        let draw = |rng: &mut ChaCha8Rng| half(rng.random_range(0..=8));
        let (a, b, c, d) = (draw(&mut rng), draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let (e, f) = (draw(&mut rng), draw(&mut rng));
        let (p, q, r) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let rhs = sixj(p, q, r, e, a, d) * sixj(p, q, r, f, b, c);
        // Only exercise cases where the right side is nonzero, so the sum is
        // a nontrivial statement.
        if rhs.abs() < 1e-3 {
            continue;
        }
        let big = a + b + c + d + e + f + p + q + r;
        let mut lhs = 0.0;
        for tx in 0..=big.twice() {
            let x = half(tx);
            let term = sixj(a, b, x, c, d, p) * sixj(c, d, x, e, f, q) * sixj(e, f, x, b, a, r);
            if term == 0.0 {
                continue;
            }
            let phase = (big + x).phase();
            lhs += phase * f64::from(tx + 1) * term;
        }
        assert!(
            (lhs - rhs).abs() < 1e-10,
            "pentagon identity failed for ({a},{b},{c},{d},{e},{f};{p},{q},{r}): {lhs} vs {rhs}"
        );
        checked += 1;
    }
}

#[test]
fn sixj_triad_selection() {
    // Any broken triad zeroes the symbol.
    assert_eq!(sixj(half(4), half(2), half(1), half(2), half(2), half(2)), 0.0);
    let v: f64 = sixj(half(2), half(2), half(4), half(2), half(2), half(4));
    assert!(v != 0.0);
}

#[test]
fn cg_projection_parity_guard() {
    // j paired with m of wrong parity is rejected by contract, not panic.
    assert_eq!(cg(half(3), half(0), half(1), half(1), half(4), half(1)), 0.0);
}

#[allow(dead_code)]
fn unused(_: HalfInt) {}
