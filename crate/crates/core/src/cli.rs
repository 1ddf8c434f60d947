//! Command-line front end. Exit status 0 means success, 1 a failure of the
//! grammar or sentence at hand (rejection, empty language, ...), 2 unusable
//! input (unreadable or malformed files and arguments).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::analysis::{pca_project, to_csv, trajectory, AnalysisError};
use crate::fock::{embed, FockVector};
use crate::grammar::{check_form, parse_grammar, to_tnf, Grammar, Symbol};
use crate::lcparser::{interactive_parse, lc_parse};
use crate::term::{parse_term, signature_of};
use crate::theorem::theorem_check;

#[derive(Debug, Parser)]
#[command(
    name = "fockgram",
    version,
    about = "Term normal form grammars, left-corner parsing and Fock space embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report which normal forms a grammar satisfies.
    Check { grammar: PathBuf },
    /// Print a weakly equivalent grammar in term normal form.
    ToTnf { grammar: PathBuf },
    /// Print the left-corner parser trace of a sentence.
    Parse {
        grammar: PathBuf,
        #[arg(required = true)]
        sentence: Vec<String>,
    },
    /// Print the tree after each word of a sentence.
    Iparse {
        grammar: PathBuf,
        #[arg(required = true)]
        sentence: Vec<String>,
    },
    /// Print the Fock vector of a term such as `NP(D(the),[N])`.
    Embed { grammar: PathBuf, term: String },
    /// Write the Fock vector of every parser state to `<out>/step<j>.fock`.
    Trajectory {
        grammar: PathBuf,
        #[arg(required = true)]
        sentence: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Project vector files onto their first `k` principal components (CSV).
    Pca {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Check the embedding laws on seeded random terms.
    TheoremCheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failure(String),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Input(_) | CliError::Output(_) => 2,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn failure(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_grammar(path: &Path) -> Result<Grammar, CliError> {
    parse_grammar(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn words(args: &[String]) -> Result<Vec<Symbol>, CliError> {
    args.iter()
        .flat_map(|a| a.split_whitespace())
        .map(|w| Symbol::new(w).map_err(input))
        .collect()
}

/// Runs one command, writing its payload to `out`.
pub fn execute(command: &Command, out: &mut impl Write) -> Result<(), CliError> {
    match command {
        Command::Check { grammar } => {
            write!(out, "{}", check_form(&load_grammar(grammar)?))?;
        }
        Command::ToTnf { grammar } => {
            let g = to_tnf(&load_grammar(grammar)?).map_err(failure)?;
            write!(out, "{}", g.to_text())?;
        }
        Command::Parse { grammar, sentence } => {
            let g = load_grammar(grammar)?;
            match lc_parse(&g, &words(sentence)?) {
                Ok(trace) => write!(out, "{}", trace.render())?,
                Err((e, trace)) => {
                    write!(out, "{}", trace.render())?;
                    return Err(failure(e));
                }
            }
        }
        Command::Iparse { grammar, sentence } => {
            let g = load_grammar(grammar)?;
            match interactive_parse(&g, &words(sentence)?) {
                Ok(trees) => trees.iter().try_for_each(|t| writeln!(out, "{t}"))?,
                Err(e) => {
                    e.trees.iter().try_for_each(|t| writeln!(out, "{t}"))?;
                    return Err(failure(e.error));
                }
            }
        }
        Command::Embed { grammar, term } => {
            let sig = signature_of(&load_grammar(grammar)?).map_err(failure)?;
            let t = parse_term(term, Some(&sig)).map_err(input)?;
            write!(out, "{}", embed(&t, &sig).map_err(input)?.to_text())?;
        }
        Command::Trajectory {
            grammar,
            sentence,
            out: dir,
        } => {
            let g = load_grammar(grammar)?;
            let tr = trajectory(&g, &words(sentence)?).map_err(|e| match e {
                AnalysisError::Grammar(_) | AnalysisError::Parse(_) => failure(e),
                e => input(e),
            })?;
            fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
            writeln!(out, "step\tdim\toperation\tfile")?;
            for (j, v) in tr.vectors.iter().enumerate() {
                let path = dir.join(format!("step{j}.fock"));
                fs::write(&path, v.to_text())?;
                writeln!(
                    out,
                    "{j}\t{}\t{}\t{}",
                    tr.dims[j],
                    tr.labels[j],
                    path.display()
                )?;
            }
        }
        Command::Pca { files, k } => {
            let texts = files
                .iter()
                .map(|p| read(p))
                .collect::<Result<Vec<_>, _>>()?;
            let role_dim = texts
                .iter()
                .map(|t| FockVector::infer_role_dim(t))
                .max()
                .unwrap_or(1);
            let vectors = files
                .iter()
                .zip(&texts)
                .map(|(p, t)| {
                    FockVector::from_text(t, role_dim)
                        .map_err(|e| input(format!("{}: {e}", p.display())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let labels: Vec<String> = files
                .iter()
                .map(|p| {
                    p.file_stem().map_or_else(
                        || p.display().to_string(),
                        |s| s.to_string_lossy().into_owned(),
                    )
                })
                .collect();
            let r = pca_project(&vectors, *k).map_err(input)?;
            write!(out, "{}", to_csv(&labels, &r.projected))?;
        }
        Command::TheoremCheck { seed, cases } => {
            let report = theorem_check(*seed, *cases);
            write!(out, "{report}")?;
            if !report.ok() {
                return Err(failure(format!(
                    "{} of {} cases failed",
                    report.failures.len(),
                    report.cases
                )));
            }
        }
    }
    Ok(())
}
