//! Brings a grammar into term normal form and compares the languages.
//!
//!     cargo run --example normalize

use fockgram::grammar::{check_form, crf_to_cnf, enumerate_language, parse_grammar, to_tnf};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_grammar(include_str!("../data/mixed.cfg"))?;
    print!("input:\n{}{}", g.to_text(), check_form(&g));

    let tnf = to_tnf(&g)?;
    print!("\nterm normal form:\n{}{}", tnf.to_text(), check_form(&tnf));

    for len in 1..=5 {
        let before = enumerate_language(&g, len)?;
        let after = enumerate_language(&tnf, len)?;
        println!(
            "length {len}: {} strings, equal: {}",
            before.len(),
            before == after
        );
    }

    // a start symbol that recurs on a right-hand side gets a fresh copy
    let crf = parse_grammar("S -> S A | a\nA -> a")?;
    print!("\nChomsky normal form:\n{}", crf_to_cnf(&crf)?.to_text());
    Ok(())
}
