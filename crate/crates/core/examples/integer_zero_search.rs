//! The two brute-force oracles: exhaustive search for primitive integer
//! zeros up to a height bound, and p-adic solubility by exact digit-by-digit
//! lifting. Both are independent of the invariant-based engine and are used
//! to cross-check it.
//!
//! Run with: cargo run --example integer_zero_search

use k3zd::arith::Place;
use k3zd::quadform::{self, QuadraticForm};
use k3zd::{oracle, rat_int, Error, Int};

fn main() -> Result<(), Error> {
    // 5x^2 - 2y^2 - 3z^2 = 0 has the obvious zero (1, 1, 1).
    let q = QuadraticForm::diagonal(&[rat_int(5), rat_int(-2), rat_int(-3)])?;
    match oracle::find_integer_zero(&q, 100) {
        Some(w) => {
            let w: Vec<String> = w.iter().map(Int::to_string).collect();
            println!("diag(5, -2, -3): first primitive zero ({})", w.join(", "));
        }
        None => println!("diag(5, -2, -3): no zero up to height 100"),
    }

    // 7x^2 - y^2 - z^2 has none: the search is exhaustive, so a miss up to
    // a height is a proof for that box.
    let q7 = QuadraticForm::diagonal(&[rat_int(7), rat_int(-1), rat_int(-1)])?;
    println!(
        "diag(7, -1, -1): zero up to height 2000? {}",
        oracle::find_integer_zero(&q7, 2000).is_some()
    );

    // The reason is 2-adic: no primitive solution exists mod powers of 2.
    for p in [2i64, 3, 5, 7] {
        let p = Int::from(p);
        let k = oracle::default_precision(&q7, &p)?;
        match oracle::local_solubility_search(&q7, &p, k) {
            Ok(sol) => println!("  primitive zero in Z_{p} (precision {k}): {sol}"),
            Err(Error::BudgetExceeded(why)) => println!("  Z_{p}: skipped ({why})"),
            Err(e) => return Err(e),
        }
    }

    // The invariant engine agrees and names the failing place.
    if let quadform::IsotropyVerdict::Anisotropic { place, .. } = quadform::is_isotropic_global(&q7)? {
        println!("  engine certificate place: {place}");
        assert!(!quadform::is_isotropic_local(&q7, &place)?);
        assert!(!quadform::is_isotropic_local(&q7, &Place::prime(7)?)?);
    }
    Ok(())
}
