//! Hilbert symbols (a, b)_v at the real place and at p-adic places, the
//! algebraic identities they satisfy, and the product formula.
//!
//! Run with: cargo run --example hilbert_symbols

use k3zd::arith::Place;
use k3zd::{hilbert, rat, rat_int};

fn main() -> Result<(), k3zd::Error> {
    // A few symbols at various places.
    let cases: [(i64, i64, Place); 6] = [
        (-1, -1, Place::Infinity),
        (-1, -1, Place::prime(2)?),
        (2, 5, Place::prime(5)?),
        (3, 7, Place::prime(7)?),
        (7, -1, Place::prime(7)?),
        (6, 15, Place::prime(3)?),
    ];
    println!("symbols:");
    for (a, b, v) in cases {
        let s = hilbert::hilbert_symbol(&rat_int(a), &rat_int(b), &v)?;
        println!("  ({a}, {b})_{v} = {s:+}");
    }

    // Rational arguments are reduced to square classes internally.
    let a = rat(3, 4);
    let b = rat(-7, 9);
    let v = Place::prime(3)?;
    println!("\nrational arguments: ({a}, {b})_{v} = {:+}", hilbert::hilbert_symbol(&a, &b, &v)?);

    // Symmetry, bilinearity, (a, -a) = 1, square-class invariance.
    let check = hilbert::symbol_identities_check(&rat_int(10), &rat(-3, 7), &rat(5, 2), &v)?;
    println!("identities at {v}: {}", if check.pass { "all hold" } else { "VIOLATED" });

    // Product formula: prod_v (a, b)_v = +1, with only finitely many
    // places contributing -1.
    let a = rat_int(-30);
    let b = rat(77, 2);
    let pf = hilbert::product_formula_check(&a, &b)?;
    println!("\nproduct formula for a = {a}, b = {b}:");
    for (place, s) in &pf.table {
        println!("  ({a}, {b})_{place} = {s:+}");
    }
    println!("  product over all places = {:+} ({})", pf.product, if pf.pass { "ok" } else { "FAIL" });
    Ok(())
}
