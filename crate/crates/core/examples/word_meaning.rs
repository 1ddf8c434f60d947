//! The meaning of a word as an operator on Fock space: the parser's
//! successor state, and the same vector composed from cat, ex and cons.
//!
//!     cargo run --example word_meaning

use fockgram::fock::{embed, word_operator, word_template, FockVector};
use fockgram::grammar::{parse_grammar, Symbol};
use fockgram::term::{signature_of, Term};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_grammar(include_str!("../data/example.cfg"))?;
    let sig = signature_of(&g)?;

    let mut state: FockVector = embed(&Term::Empty, &sig)?;
    for word in ["the", "mouse", "ate", "cheese"] {
        let w = Symbol::new(word)?;
        let composed = word_template(&g, &w, &state)?;
        state = word_operator(&g, &w, &state)?;
        let check = match composed {
            Some(v) if v == state => "matches the operator composition",
            Some(_) => "differs from the operator composition",
            None => "no closed operator composition",
        };
        println!("[{word}] -> {} keys; {check}", state.len());
        print!("{}", state.to_text());
    }

    let t1 = embed(
        &fockgram::term::parse_term("NP(D(the),[N])", Some(&sig))?,
        &sig,
    )?;
    match word_operator(&g, &Symbol::new("the")?, &t1) {
        Ok(_) => println!("\n[the] on NP(D(the),[N]) unexpectedly succeeded"),
        Err(e) => println!("\n[the] on NP(D(the),[N]) is undefined: {e}"),
    }
    Ok(())
}
