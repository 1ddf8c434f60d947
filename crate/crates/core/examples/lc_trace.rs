//! Prints the left-corner parser trace of "the mouse ate cheese".
//!
//!     cargo run --example lc_trace

use fockgram::grammar::{parse_grammar, Symbol};
use fockgram::lcparser::lc_parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_grammar(include_str!("../data/example.cfg"))?;
    for (i, rule) in g.rules().iter().enumerate() {
        println!("({}) {rule}", i + 1);
    }
    println!();

    let sentence: Vec<Symbol> = "the mouse ate cheese"
        .split(' ')
        .map(Symbol::new)
        .collect::<Result<_, _>>()?;
    let trace = lc_parse(&g, &sentence).map_err(|(e, _)| e)?;
    println!("{:>2}  {:<22}{:<24}operation", "#", "stack", "input");
    for [step, stack, input, op] in trace.rows() {
        println!("{step:>2}  {stack:<22}{input:<24}{op}");
    }

    let bad: Vec<Symbol> = vec![Symbol::new("mouse")?, Symbol::new("the")?];
    if let Err((e, _)) = lc_parse(&g, &bad) {
        println!("\n\"mouse the\": {e}");
    }
    Ok(())
}
