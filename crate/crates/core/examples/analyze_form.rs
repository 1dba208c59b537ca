//! Full analysis of a rational quadratic form: exact diagonalization,
//! signature, discriminant, local invariants at every critical place, and
//! the local-global isotropy verdict with a certificate.
//!
//! Run with: cargo run --example analyze_form

use k3zd::quadform::{self, IsotropyVerdict, QuadraticForm};
use k3zd::{rat_int, Int};

fn analyze(name: &str, q: &QuadraticForm) -> Result<(), k3zd::Error> {
    println!("== {name} (dim {}) ==", q.dim());

    let d = quadform::diagonalize(q);
    let coeffs: Vec<String> = d.coeffs.iter().map(|c| c.to_string()).collect();
    println!("  diagonalized coefficients: [{}]", coeffs.join(", "));

    let (plus, minus, zero) = quadform::signature(q);
    println!("  signature: ({plus}, {minus}), radical dim {zero}");
    println!("  discriminant (square class rep): {}", quadform::discriminant(q)?);

    for place in quadform::critical_places(q)? {
        let inv = quadform::local_invariants(q, &place)?;
        println!(
            "  at {place}: eps = {:+}, disc {} a local square, isotropic: {}",
            inv.epsilon,
            if inv.d_square { "is" } else { "is not" },
            quadform::is_isotropic_local(q, &place)?,
        );
    }

    match quadform::is_isotropic_global(q)? {
        IsotropyVerdict::Isotropic { witness } => match witness {
            Some(w) => {
                let w: Vec<String> = w.iter().map(Int::to_string).collect();
                println!("  verdict: isotropic, witness ({})", w.join(", "));
            }
            None => println!("  verdict: isotropic (no witness within default height)"),
        },
        IsotropyVerdict::Anisotropic { place, .. } => {
            println!("  verdict: anisotropic, certificate place {place}");
        }
    }
    println!();
    Ok(())
}

fn main() -> Result<(), k3zd::Error> {
    // x^2 + y^2 - 3z^2: fails at 3, hence anisotropic over Q.
    analyze(
        "diag(1, 1, -3)",
        &QuadraticForm::diagonal(&[rat_int(1), rat_int(1), rat_int(-3)])?,
    )?;

    // 7x^2 - y^2 - z^2: indefinite but fails 2-adically (-7 is a 2-adic
    // square, so over Q_2 this is a sum of three nonsquares).
    analyze(
        "diag(7, -1, -1)",
        &QuadraticForm::diagonal(&[rat_int(7), rat_int(-1), rat_int(-1)])?,
    )?;

    // The hyperbolic plane: isotropic, with an obvious witness.
    let gram: Vec<Vec<Int>> = [[0i64, 1], [1, 0]]
        .iter()
        .map(|r| r.iter().map(|&e| Int::from(e)).collect())
        .collect();
    analyze("hyperbolic plane", &QuadraticForm::from_int_gram(&gram)?)?;
    Ok(())
}
