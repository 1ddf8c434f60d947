//! Word-by-word phrase structure trees of the interactive parser.
//!
//!     cargo run --example interactive -- the mouse ate cheese

use fockgram::grammar::{parse_grammar, Symbol};
use fockgram::lcparser::interactive_parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_grammar(include_str!("../data/example.cfg"))?;
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = ["the", "mouse", "ate", "cheese"].map(String::from).to_vec();
    }
    let sentence = args
        .iter()
        .map(|w| Symbol::new(w))
        .collect::<Result<Vec<_>, _>>()?;

    match interactive_parse(&g, &sentence) {
        Ok(trees) => {
            for (i, t) in trees.iter().enumerate() {
                println!("{i}: {t}");
            }
        }
        Err(failure) => {
            for (i, t) in failure.trees.iter().enumerate() {
                println!("{i}: {t}");
            }
            println!("stopped: {}", failure.error);
        }
    }
    Ok(())
}
