//! Exact Zariski decomposition D = P + N on a surface lattice spanned by
//! negative curves, plus the denominator bound check over a coefficient box.
//!
//! Gram entries are full intersection numbers here (the classifier's JSON
//! input uses the same convention; off-diagonal entries are twice the
//! half-entry parameters).
//!
//! Run with: cargo run --example zariski_decomposition

use k3zd::zariski::{self, Divisor, SurfaceLattice};
use k3zd::{Error, Int};

fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Int>> {
    rows.iter().map(|r| r.iter().map(|&e| Int::from(e)).collect()).collect()
}

fn show(lattice: &SurfaceLattice, d: &Divisor) -> Result<(), Error> {
    let dec = zariski::zariski_decompose(lattice, d)?;
    let fmt = |v: &[k3zd::Rat]| {
        v.iter()
            .zip(lattice.labels())
            .map(|(c, l)| format!("{c} {l}"))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    println!("  D = {:?}", d.coeffs.iter().map(Int::to_string).collect::<Vec<_>>());
    println!("    P = [{}]", fmt(&dec.p));
    println!("    N = [{}]", fmt(&dec.n));
    let support: Vec<&String> = dec.support.iter().map(|&i| &lattice.labels()[i]).collect();
    println!("    support {support:?}, denominator {}", dec.denominator);
    Ok(())
}

fn main() -> Result<(), Error> {
    // Two (-2)-curves meeting in 4 points: every decomposition integral.
    let l = SurfaceLattice::new(
        vec!["C1".into(), "C2".into()],
        int_rows(&[&[-2, 4], &[4, -2]]),
    )?;
    println!("lattice [[-2,4],[4,-2]]:");
    show(&l, &Divisor::from_i64(&[3, 1]))?;
    show(&l, &Divisor::from_i64(&[1, 5]))?;

    // A mixed lattice (one positive class, one (-2)-curve) where the
    // decomposition genuinely needs denominator 2.
    let lm = SurfaceLattice::new(
        vec!["H".into(), "C".into()],
        int_rows(&[&[2, 1], &[1, -2]]),
    )?;
    println!("\nlattice [[2,1],[1,-2]]:");
    show(&lm, &Divisor::from_i64(&[1, 1]))?;

    // Sweep all divisors with small coefficients and report the largest
    // denominator any decomposition needs.
    for (name, l, h) in [("curve lattice", &l, 6u64), ("mixed lattice", &lm, 2)] {
        let max = zariski::max_denominator_bounded(l, h)?;
        println!("\n{name}: max denominator over coefficients 0..={h} is {max}");
    }

    // Structural conditions behind integrality (unimodular-complement and
    // odd-pairing checks on negative definite subsets).
    for (name, lat) in [("curve lattice", &l), ("mixed lattice", &lm)] {
        let report = zariski::check_numthm(lat);
        println!(
            "{name} structural check: condition (a) {}, condition (b) {}",
            report.cond_a, report.cond_b
        );
    }
    Ok(())
}
