//! Fock space trajectory of a parse and its principal component projection.
//!
//!     cargo run --example trajectory_pca

use fockgram::analysis::{pca_project, to_csv, trajectory};
use fockgram::grammar::{parse_grammar, Symbol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_grammar(include_str!("../data/example.cfg"))?;
    let sentence = ["the", "mouse", "ate", "cheese"]
        .iter()
        .map(|w| Symbol::new(w))
        .collect::<Result<Vec<_>, _>>()?;

    let tr = trajectory(&g, &sentence)?;
    for ((label, v), dim) in tr.labels.iter().zip(&tr.vectors).zip(&tr.dims) {
        println!("{:>3} keys  dim {dim:>4}  {label}", v.len());
    }

    let pca = pca_project(&tr.vectors, 3)?;
    println!("\nunion basis: {} keys", pca.basis_index.len());
    println!("explained variance: {:?}", pca.explained_variance);
    print!("\n{}", to_csv(&tr.labels, &pca.projected));
    Ok(())
}
