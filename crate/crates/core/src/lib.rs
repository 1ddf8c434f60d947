//! Context-free grammars in term normal form, a deterministic left-corner
//! parser, and the tensor product embedding of its phrase structure trees
//! into a sparse Fock space.
//!
//! The pipeline runs grammar text → [`grammar::Grammar`] →
//! [`grammar::to_tnf`] → [`term::signature_of`] → [`lcparser::interactive_parse`]
//! → [`fock::embed`] → [`analysis::pca_project`].

pub mod analysis;
pub mod cli;
pub mod fock;
pub mod grammar;
pub mod lcparser;
pub mod term;
pub mod theorem;
