//! The exact arithmetic primitives underneath everything else: valuations,
//! Legendre symbols, deterministic factorization, local square classes, and
//! the sum-of-three-squares exclusion test.
//!
//! Run with: cargo run --example arithmetic_toolkit

use k3zd::arith::{self, Place};
use k3zd::{rat, Error, Int};

fn main() -> Result<(), Error> {
    // p-adic valuations of integers and rationals.
    println!("v_3(162) = {}", arith::vp(&Int::from(162), &Int::from(3))?);
    println!("v_2(7/40) = {}", arith::vp_rat(&rat(7, 40), &Int::from(2))?);

    // Legendre symbols modulo an odd prime.
    for a in [2i64, 3, 5] {
        println!("(({a}/7)) = {:+}", arith::legendre(&Int::from(a), &Int::from(7))?);
    }

    // Deterministic factorization (trial division plus Pollard-Brent).
    let n = Int::from(-637i64 * 1_000_003);
    let f = arith::factorize(&n)?;
    let parts: Vec<String> = f.factors.iter().map(|(p, e)| format!("{p}^{e}")).collect();
    println!("{n} = {}{}", if f.negative { "-" } else { "" }, parts.join(" * "));
    assert_eq!(f.reconstruct(), n);

    // Square classes in completions: -7 is a square in Q_2 but not in R.
    let m7 = rat(-7, 1);
    println!(
        "-7 square in Q_2: {}, in R: {}",
        arith::is_square_in(&m7, &Place::prime(2)?)?,
        arith::is_square_in(&m7, &Place::Infinity)?,
    );

    // n is a sum of three squares unless n = 4^a (8k + 7).
    for n in [11i64, 15, 28, 112, 2 * 2 * 2 - 1] {
        println!(
            "{n} excluded from three squares: {}",
            arith::three_squares_excluded(&Int::from(n))?
        );
    }
    Ok(())
}
