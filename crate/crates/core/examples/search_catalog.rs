//! Enumerates admissible intersection matrices of a given rank with bounded
//! entries, classifies each, and prints the catalog — the library analogue
//! of the CLI `search` subcommand.
//!
//! Run with: cargo run --example search_catalog

use k3zd::classify::{self, Answer};
use k3zd::Int;

fn main() -> Result<(), k3zd::Error> {
    for (rho, max_half, case) in [(2usize, 3i64, None), (3, 2, None), (4, 2, Some(4u8))] {
        let rows = classify::search_lattices(rho, max_half, case)?;
        let filter = case.map(|c| format!(", case {c} only")).unwrap_or_default();
        println!("rank {rho}, half-entries up to {max_half}{filter}: {} lattices", rows.len());
        for row in &rows {
            let gram: Vec<String> = row
                .canonical_gram
                .iter()
                .map(|r| {
                    let cells: Vec<String> = r.iter().map(Int::to_string).collect();
                    format!("[{}]", cells.join(","))
                })
                .collect();
            let answer = match &row.answer {
                Answer::D1 => "d=1".to_string(),
                Answer::NotD1(_) => "not d=1".to_string(),
                Answer::Inconsistent => "INCONSISTENT".to_string(),
            };
            let certs: Vec<String> = row.certificate_primes.iter().map(Int::to_string).collect();
            println!(
                "  case {:?} {} certs [{}] strongly_primitive {}  {}",
                row.case_id,
                answer,
                certs.join(","),
                row.strongly_primitive,
                gram.join(""),
            );
        }
        println!();
    }
    Ok(())
}
