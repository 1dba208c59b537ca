//! Regression battery over every externally sourced constant the engine
//! reproduces, plus the product-formula sweep. Run by the CLI `selfcheck`
//! command and by the acceptance suite.

use num_traits::Zero;

use crate::arith::{self, Place};
use crate::classify::{self, Answer, CaseMatch};
use crate::hilbert;
use crate::quadform::{self, QuadraticForm};
use crate::zariski::{self, Divisor, SurfaceLattice};
use crate::{rat_int, Int, Rat, Result};

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn line(out: &mut Vec<CheckLine>, name: &str, pass: bool, detail: String) {
    out.push(CheckLine { name: name.to_string(), pass, detail });
}

fn p(n: i64) -> Place {
    Place::Prime(Int::from(n))
}

fn gram(rows: &[&[i64]]) -> Vec<Vec<Int>> {
    rows.iter().map(|r| r.iter().map(|&e| Int::from(e)).collect()).collect()
}

/// Runs the whole battery; all lines passing is the self-check contract.
pub fn run() -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();

    // pinned Hilbert symbol values
    for (a, b, pl, want) in [
        (7i64, -1i64, p(7), -1),
        (-84, -1, p(7), -1),
        (57, 3, p(19), -1),
        (-1, -1, p(2), -1),
        (3, 27, p(3), -1),
        (3, 27, p(7), 1),
        (1, 5, Place::Infinity, 1),
    ] {
        let got = hilbert::hilbert_symbol(&rat_int(a), &rat_int(b), &pl)?;
        line(
            &mut out,
            &format!("hilbert ({a},{b})_{pl}"),
            got == want,
            format!("got {got:+}, want {want:+}"),
        );
    }

    let got = arith::legendre(&Int::from(-13), &Int::from(7))?;
    line(&mut out, "legendre(-13, 7)", got == 1, format!("got {got:+}, want +1"));

    let f = arith::factorize(&Int::from(-637))?;
    let ok = f.negative
        && f.factors == [(Int::from(7), 2u32), (Int::from(13), 1)].into_iter().collect();
    line(&mut out, "factorize(-637)", ok, format!("{:?}", f.factors));

    let ok = arith::three_squares_excluded(&Int::from(23))?
        && !arith::three_squares_excluded(&Int::from(11))?;
    line(&mut out, "three-squares exclusion 23 vs 11", ok, "23 = 8*3-1; 11 = 9+1+1".into());

    // the rank-3 reduction: diagonal square classes {7, -1, -1} for m=n=2
    let q = QuadraticForm::from_int_gram(&gram(&[&[-1, 0, 2], &[0, -1, 2], &[2, 2, -1]]))?;
    let d = quadform::diagonalize(&q);
    let classes: Vec<i32> = d
        .coeffs
        .iter()
        .map(|c| if c.is_zero() { 0 } else if c.numer().sign() == num_bigint::Sign::Minus { -1 } else { 1 })
        .collect();
    let sq7 = arith::is_square_rational(&(d.coeffs.iter().cloned().product::<Rat>() / rat_int(7)));
    line(
        &mut out,
        "rank-3 reduction to 7x^2-y^2-z^2",
        classes.iter().filter(|&&s| s > 0).count() == 1 && sq7,
        format!("diagonal {:?}", d.coeffs),
    );

    // worked rank-4 example quantities: A=84, B=35, C=7, B^2-AC=637
    let (m1, m2, m3, m4, m5) = (6i64, 2, 7, 2, 9);
    let (a, b, c) = (m1 * m1 + m3 * m3 - 1, m1 * m2 + m3 * m4 + m5, m2 * m2 + m4 * m4 - 1);
    line(
        &mut out,
        "rank-4 one-zero-pair quantities",
        a == 84 && b == 35 && c == 7 && b * b - a * c == 637,
        format!("A={a} B={b} C={c} B^2-AC={}", b * b - a * c),
    );

    // its local data at 7: discriminant a square, epsilon -1
    let g5 = gram(&[&[-2, 0, 12, 4], &[0, -2, 14, 4], &[12, 14, -2, 18], &[4, 4, 18, -2]]);
    let q5 = QuadraticForm::from_int_gram(&g5)?;
    let inv = quadform::local_invariants(&q5, &p(7))?;
    line(
        &mut out,
        "rank-4 example invariants at 7",
        inv.d_square && inv.epsilon == -1,
        format!("d_square={} epsilon={:+}", inv.d_square, inv.epsilon),
    );

    // dense rank-4 example quantities: A=-57, B=-39, D=-40, E=3, AD-B^2=759
    let (s12, s13, s14, s23, s24, s34) = (2i64, 3, 3, 3, 2, 2);
    let e = s12 * s12 - 1;
    let aa = e * (s13 * s13 - 1) - (s12 * s13 + s23) * (s12 * s13 + s23);
    let bb = e * (s13 * s14 + s34) - (s12 * s13 + s23) * (s12 * s14 + s24);
    let dd = e * (s14 * s14 - 1) - (s12 * s14 + s24) * (s12 * s14 + s24);
    line(
        &mut out,
        "dense rank-4 quantities",
        aa == -57 && bb == -39 && dd == -40 && e == 3 && aa * dd - bb * bb == 759,
        format!("A={aa} B={bb} D={dd} E={e} AD-B^2={}", aa * dd - bb * bb),
    );

    // classifier fixtures
    for (name, g, want_d1, want_certs) in [
        ("classifier rank 2 b=2", gram(&[&[-2, 4], &[4, -2]]), true, vec![]),
        (
            "classifier rank 3 one zero pair (2,2)",
            gram(&[&[-2, 0, 4], &[0, -2, 4], &[4, 4, -2]]),
            true,
            vec![7i64],
        ),
        (
            "classifier rank 3 dense (2,2,2)",
            gram(&[&[-2, 4, 4], &[4, -2, 4], &[4, 4, -2]]),
            true,
            vec![3],
        ),
        (
            "classifier rank 4 (2,2,4)",
            gram(&[&[-2, 0, 0, 4], &[0, -2, 0, 4], &[0, 0, -2, 8], &[4, 4, 8, -2]]),
            true,
            vec![],
        ),
        ("classifier rank 4 one-zero-pair example", g5.clone(), true, vec![7]),
    ] {
        let v = classify::decide_d1(&g)?;
        let certs: Vec<Int> = want_certs.into_iter().map(Int::from).collect();
        let got_certs =
            v.condition.as_ref().map(|c| c.certificate_primes.clone()).unwrap_or_default();
        let ok = (v.answer == Answer::D1) == want_d1 && (certs.is_empty() || got_certs == certs);
        line(&mut out, name, ok, format!("answer {:?}, certificates {got_certs:?}", v.answer));
    }

    // the dense rank-4 worked example is isotropic and its condition
    // fails; the three methods must agree on that
    let g6 = gram(&[&[-2, 4, 6, 6], &[4, -2, 6, 4], &[6, 6, -2, 4], &[6, 4, 4, -2]]);
    let v = classify::decide_d1(&g6)?;
    let ok = matches!(v.answer, Answer::NotD1(_))
        && matches!(v.case_match, CaseMatch::Matched(ref m) if m.case_id == 6)
        && v.crosscheck.as_ref().map(|c| c.consistent) == Some(true);
    line(
        &mut out,
        "dense rank-4 example adjudication",
        ok,
        format!("answer {:?}, consistent {:?}", v.answer, v.crosscheck.map(|c| c.consistent)),
    );

    // Zariski fixtures
    let l = SurfaceLattice::from_gram(gram(&[&[2, 1], &[1, -2]]))?;
    let z = zariski::zariski_decompose(&l, &Divisor::from_i64(&[1, 1]))?;
    line(
        &mut out,
        "zariski mixed lattice denominator 2",
        z.denominator == Int::from(2) && z.n == vec![rat_int(0), crate::rat(1, 2)],
        format!("N = {:?}, denominator {}", z.n, z.denominator),
    );
    let bounded = zariski::max_denominator_bounded(&l, 2)?;
    line(&mut out, "bounded denominator sweep", bounded == Int::from(2), format!("max {bounded}"));

    // product formula sweep
    let (pairs, failures) = product_formula_sweep(10_000, 500, 20260823)?;
    line(
        &mut out,
        "product formula sweep",
        failures == 0,
        format!("{failures} failures in {pairs} pairs"),
    );

    Ok(out)
}

/// Fixed-seed sweep asserting the product of local symbols is +1;
/// returns (pairs checked, failures).
pub fn product_formula_sweep(pairs: usize, max_abs: i64, seed: u64) -> Result<(usize, usize)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nonzero = |r: &mut rand_chacha::ChaCha8Rng| loop {
        let v = r.gen_range(-max_abs..=max_abs);
        if v != 0 {
            break v;
        }
    };
    let mut failures = 0;
    for _ in 0..pairs {
        let a = Rat::new(Int::from(nonzero(&mut rng)), Int::from(nonzero(&mut rng)));
        let b = Rat::new(Int::from(nonzero(&mut rng)), Int::from(nonzero(&mut rng)));
        if !hilbert::product_formula_check(&a, &b)?.pass {
            failures += 1;
        }
    }
    Ok((pairs, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_green() {
        let lines = run().unwrap();
        for l in &lines {
            assert!(l.pass, "{}: {}", l.name, l.detail);
        }
        assert!(lines.len() >= 15);
    }
}
