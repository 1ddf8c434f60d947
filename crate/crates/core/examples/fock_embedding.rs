//! Embeds parser states into Fock space and applies the linear term
//! operations to the vectors.
//!
//!     cargo run --example fock_embedding

use fockgram::fock::{cat_op, cons_op, decode, embed, ex_op, fock_dim, Filler, FockVector};
use fockgram::grammar::parse_grammar;
use fockgram::term::{parse_term, signature_of};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_grammar(include_str!("../data/example.cfg"))?;
    let sig = signature_of(&g)?;
    let n = sig.filler_count() as u64;
    let m = sig.max_arity() as u64 + 1;
    println!("{n} fillers, {m} roles");

    for text in ["@empty", "NP(D(the),[N])", "S(NP(D(the),N(mouse)),[VP])"] {
        let t = parse_term(text, Some(&sig))?;
        let v = embed(&t, &sig)?;
        println!(
            "\n{t}  (depth {}, dim {})",
            t.depth(),
            fock_dim(n, m, t.depth() as u32)?
        );
        print!("{}", v.to_text());
        assert_eq!(decode(&v, &sig)?, t);
    }

    let t1 = embed(&parse_term("NP(D(the),[N])", Some(&sig))?, &sig)?;
    println!("\ncat |t1>  = {:?}", cat_op(&t1));
    println!("ex0 |t1>  = {:?}", ex_op(&t1, 0)?);
    println!("ex1 |t1>  = {:?}", ex_op(&t1, 1)?);

    let pure = |s: &str| FockVector::pure_filler(3, Filler::parse(s).expect("filler"));
    let n_mouse = cons_op(&pure("N"), &[pure("mouse")])?;
    println!("cons(|N>, |mouse>) = {n_mouse:?}");
    Ok(())
}
