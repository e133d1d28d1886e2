//! Clebsch-Gordan and Wigner 6j coefficients from the Racah sum formulas.
//!
//! Condon-Shortley phase convention throughout. Invalid couplings return 0
//! rather than erroring, so the functions can be used directly inside tensor
//! sums where the selection rules do the bookkeeping.

use std::sync::LazyLock;

use crate::half::HalfInt;

/// Factorials up to 1023 as natural logs, enough for any desk-scale coupling
/// (arguments stay below ~160 even for j of several dozen).
static LN_FACT: LazyLock<Vec<f64>> = LazyLock::new(|| {
    let mut table = vec![0.0; 1024];
    for n in 1..table.len() {
        table[n] = table[n - 1] + (n as f64).ln();
    }
    table
});

fn ln_fact(n: i32) -> f64 {
    LN_FACT[usize::try_from(n).expect("negative factorial argument")]
}

/// Triangle rule: `|a-b| <= c <= a+b` with integer perimeter.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (ta, tb, tc) = (a.twice(), b.twice(), c.twice());
    ta >= 0
        && tb >= 0
        && tc >= 0
        && (ta + tb + tc) % 2 == 0
        && tc >= (ta - tb).abs()
        && tc <= ta + tb
}

/// Log of the triangle coefficient Δ(a,b,c); arguments in twice-units and
/// assumed to satisfy `triangle`.
fn ln_delta(ta: i32, tb: i32, tc: i32) -> f64 {
    ln_fact((ta + tb - tc) / 2) + ln_fact((ta - tb + tc) / 2) + ln_fact((-ta + tb + tc) / 2)
        - ln_fact((ta + tb + tc) / 2 + 1)
}

/// Clebsch-Gordan coefficient `⟨j1 m1 j2 m2 | j3 m3⟩` via the Racah sum.
///
/// Returns 0 whenever a selection rule fails (projection mismatch, broken
/// triangle, or invalid (j, m) pairing).
pub fn cg(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j3: HalfInt, m3: HalfInt) -> f64 {
    if !j1.holds_projection(m1) || !j2.holds_projection(m2) || !j3.holds_projection(m3) {
        return 0.0;
    }
    if m1.twice() + m2.twice() != m3.twice() || !triangle(j1, j2, j3) {
        return 0.0;
    }

    let (tj1, tj2, tj3) = (j1.twice(), j2.twice(), j3.twice());
    let (tm1, tm2, tm3) = (m1.twice(), m2.twice(), m3.twice());

    // Integer-valued combinations entering the factorials.
    let a = (tj1 + tj2 - tj3) / 2;
    let j1mm1 = (tj1 - tm1) / 2;
    let j1pm1 = (tj1 + tm1) / 2;
    let j2mm2 = (tj2 - tm2) / 2;
    let j2pm2 = (tj2 + tm2) / 2;
    let j3mm3 = (tj3 - tm3) / 2;
    let j3pm3 = (tj3 + tm3) / 2;
    let jmj2pm1 = (tj3 - tj2 + tm1) / 2;
    let jmj1mm2 = (tj3 - tj1 - tm2) / 2;

    let ln_pref = 0.5
        * (f64::from(tj3 + 1).ln()
            + ln_delta(tj1, tj2, tj3)
            + ln_fact(j1pm1)
            + ln_fact(j1mm1)
            + ln_fact(j2pm2)
            + ln_fact(j2mm2)
            + ln_fact(j3pm3)
            + ln_fact(j3mm3));

    let k_min = 0.max(-jmj2pm1).max(-jmj1mm2);
    let k_max = a.min(j1mm1).min(j2pm2);

    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_term = ln_fact(k)
            + ln_fact(a - k)
            + ln_fact(j1mm1 - k)
            + ln_fact(j2pm2 - k)
            + ln_fact(jmj2pm1 + k)
            + ln_fact(jmj1mm2 + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (ln_pref - ln_term).exp();
    }
    sum
}

/// Wigner 6j symbol `{a b c; d e f}` via the Racah single-sum formula.
///
/// Returns 0 when any of the four triads `(a,b,c)`, `(a,e,f)`, `(d,b,f)`,
/// `(d,e,c)` fails the triangle rule.
pub fn sixj(a: HalfInt, b: HalfInt, c: HalfInt, d: HalfInt, e: HalfInt, f: HalfInt) -> f64 {
    if !triangle(a, b, c) || !triangle(a, e, f) || !triangle(d, b, f) || !triangle(d, e, c) {
        return 0.0;
    }

    let (ta, tb, tc) = (a.twice(), b.twice(), c.twice());
    let (td, te, tf) = (d.twice(), e.twice(), f.twice());

    let abc = (ta + tb + tc) / 2;
    let aef = (ta + te + tf) / 2;
    let dbf = (td + tb + tf) / 2;
    let dec = (td + te + tc) / 2;
    let abde = (ta + tb + td + te) / 2;
    let bcef = (tb + tc + te + tf) / 2;
    let acdf = (ta + tc + td + tf) / 2;

    let ln_pref = 0.5
        * (ln_delta(ta, tb, tc) + ln_delta(ta, te, tf) + ln_delta(td, tb, tf)
            + ln_delta(td, te, tc));

    let z_min = abc.max(aef).max(dbf).max(dec);
    let z_max = abde.min(bcef).min(acdf);

    let mut sum = 0.0;
    for z in z_min..=z_max {
        let ln_term = ln_fact(z + 1)
            - ln_fact(z - abc)
            - ln_fact(z - aef)
            - ln_fact(z - dbf)
            - ln_fact(z - dec)
            - ln_fact(abde - z)
            - ln_fact(bcef - z)
            - ln_fact(acdf - z);
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (ln_pref + ln_term).exp();
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::half::half;

    fn assert_close(label: &str, expected: f64, actual: f64, tol: f64) {
        assert!(
            (expected - actual).abs() <= tol,
            "{label}: expected {expected:.15e}, got {actual:.15e}"
        );
    }

    #[test]
    fn triangle_rules() {
        assert!(triangle(half(1), half(1), half(2)));
        assert!(!triangle(half(1), half(1), half(1)));
        assert!(!triangle(half(10), half(2), half(6)));
    }

    #[test]
    fn cg_reference_values() {
        // (1 0 1 0 | 0 0) = -1/sqrt(3), from the Racah closed form.
        assert_close(
            "cg(1,0,1,0;0,0)",
            -1.0 / 3.0_f64.sqrt(),
            cg(half(2), half(0), half(2), half(0), half(0), half(0)),
            1e-14,
        );
        // Two-state singlet (1/2 1/2 1/2 -1/2 | 0 0) = 1/sqrt(2).
        assert_close(
            "singlet",
            std::f64::consts::FRAC_1_SQRT_2,
            cg(half(1), half(1), half(1), half(-1), half(0), half(0)),
            1e-14,
        );
    }

    #[test]
    fn cg_scalar_coupling_is_identity() {
        for tj in 0..=7 {
            let j = half(tj);
            for m in j.projections() {
                assert_close(
                    "coupling with scalar",
                    1.0,
                    cg(j, m, half(0), half(0), j, m),
                    1e-14,
                );
            }
        }
    }

    #[test]
    fn cg_selection_rules_give_zero() {
        // M != m1 + m2
        assert_eq!(cg(half(2), half(2), half(2), half(0), half(4), half(0)), 0.0);
        // broken triangle
        assert_eq!(cg(half(2), half(0), half(2), half(0), half(8), half(0)), 0.0);
        // m not a projection of j
        assert_eq!(cg(half(2), half(1), half(1), half(-1), half(3), half(0)), 0.0);
    }

    #[test]
    fn sixj_reference_values() {
        assert_close(
            "{1 1 1;1 1 1}",
            1.0 / 6.0,
            sixj(half(2), half(2), half(2), half(2), half(2), half(2)),
            1e-14,
        );
        // Broken triad.
        assert_eq!(sixj(half(2), half(2), half(8), half(2), half(2), half(2)), 0.0);
    }

    #[test]
    fn sixj_special_case_with_zero() {
        // {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1)).
        let cases = [(2, 2, 2), (2, 4, 4), (3, 3, 4), (1, 3, 2), (4, 6, 8)];
        for (ta, tb, tc) in cases {
            let (a, b, c) = (half(ta), half(tb), half(tc));
            let expect = a.phase_with(b + c) / (b.hat() * c.hat());
            assert_close(
                "{a b c;0 c b}",
                expect,
                sixj(a, b, c, half(0), c, b),
                1e-13,
            );
        }
    }
}
