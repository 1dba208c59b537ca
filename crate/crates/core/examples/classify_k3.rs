//! The full decision pipeline on candidate K3 intersection matrices:
//! validation, case dispatch, the case's arithmetic condition with prime
//! certificates, and the three-way cross-check behind the final answer.
//!
//! Run with: cargo run --example classify_k3

use k3zd::classify::{self, Answer, CaseMatch};
use k3zd::{Error, Int};

fn gram(rows: &[&[i64]]) -> Vec<Vec<Int>> {
    rows.iter().map(|r| r.iter().map(|&e| Int::from(e)).collect()).collect()
}

fn run(name: &str, g: &[Vec<Int>]) -> Result<(), Error> {
    let v = classify::decide_d1(g)?;
    println!("== {name} ==");
    match &v.case_match {
        CaseMatch::NoMatch => println!("  case: none"),
        CaseMatch::Matched(m) => {
            let params: Vec<String> = m.params.iter().map(Int::to_string).collect();
            println!("  case {} with parameters [{}]", m.case_id, params.join(", "));
        }
    }
    if let Some(cond) = &v.condition {
        let certs: Vec<String> = cond.certificate_primes.iter().map(Int::to_string).collect();
        println!(
            "  condition holds: {}{}",
            cond.holds,
            if certs.is_empty() { String::new() } else { format!(", certificate primes [{}]", certs.join(", ")) },
        );
    }
    if let Some(cc) = &v.crosscheck {
        println!(
            "  cross-check: lemma {}, engine {}, zero search {} -> {}",
            match cc.lemma_predicts_anisotropic {
                Some(true) => "anisotropic",
                Some(false) => "isotropic",
                None => "no prediction",
            },
            if cc.engine_anisotropic { "anisotropic" } else { "isotropic" },
            match &cc.zero_witness {
                Some(w) => format!("witness {:?}", w.iter().map(Int::to_string).collect::<Vec<_>>()),
                None => format!("no zero up to height {}", cc.zero_height),
            },
            if cc.consistent { "consistent" } else { "INCONSISTENT" },
        );
    }
    if let Some(d) = &v.bounded_denominator {
        println!("  max Zariski denominator over small divisors: {d}");
    }
    match &v.answer {
        Answer::D1 => println!("  answer: every decomposition integral (d = 1)"),
        Answer::NotD1(why) => println!("  answer: not d = 1 ({why})"),
        Answer::Inconsistent => println!("  answer: INTERNAL INCONSISTENCY"),
    }
    println!();
    Ok(())
}

fn main() -> Result<(), Error> {
    // Rank 2, two curves meeting in 4 points: d = 1.
    run("rank 2, b = 2", &gram(&[&[-2, 4], &[4, -2]]))?;

    // Rank 3 with one orthogonal pair, (m, n) = (2, 2): d = 1 with
    // certificate prime 7.
    run("rank 3, (m, n) = (2, 2)", &gram(&[&[-2, 0, 4], &[0, -2, 4], &[4, 4, -2]]))?;

    // Rank 3, all curves meeting, (l, m, n) = (2, 2, 2): d = 1.
    run(
        "rank 3, (l, m, n) = (2, 2, 2)",
        &gram(&[&[-2, 4, 4], &[4, -2, 4], &[4, 4, -2]]),
    )?;

    // Rank 4 with three mutual zeros: decided by the three-squares test.
    run(
        "rank 4, (l1, l2, l3) = (2, 2, 2)",
        &gram(&[&[-2, 0, 0, 4], &[0, -2, 0, 4], &[0, 0, -2, 4], &[4, 4, 4, -2]]),
    )?;

    // Rank 4, dense: the condition fails, so some divisor needs a
    // fractional decomposition.
    run(
        "rank 4, dense",
        &gram(&[
            &[-2, 4, 6, 6],
            &[4, -2, 6, 4],
            &[6, 6, -2, 4],
            &[6, 4, 4, -2],
        ]),
    )?;
    Ok(())
}
