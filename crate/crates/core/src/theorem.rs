//! Randomized check that the Fock embedding is a faithful homomorphism of
//! the term algebra: `cat`, `ex` and `cons` commute with their linear
//! counterparts, and `decode` inverts `embed`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{cat_op, cons_op, decode, embed, ex_op, Filler, FockVector};
use crate::grammar::{Grammar, Rule, Symbol};
use crate::term::{cat, cons, ex, signature_of, Signature, Term};

const MAX_DEPTH: usize = 4;

/// A random grammar in term normal form over terminals `t0, t1, ...` and
/// nonterminals `N0, N1, ...` (start `N0`), with ranks up to 3.
pub fn random_tnf_grammar<R: Rng>(rng: &mut R) -> Grammar {
    let terminals: Vec<Symbol> = (0..rng.gen_range(1..=4))
        .map(|i| Symbol::new(&format!("t{i}")).expect("valid name"))
        .collect();
    let nonterminals: Vec<Symbol> = (0..rng.gen_range(1..=5))
        .map(|i| Symbol::new(&format!("N{i}")).expect("valid name"))
        .collect();
    let mut rules = Vec::new();
    let mut seen = BTreeSet::new();
    for a in &nonterminals {
        let rank = rng.gen_range(1..=3);
        for _ in 0..rng.gen_range(1..=3) {
            let rhs: Vec<Symbol> = (0..rank)
                .map(|_| {
                    if rank == 1 || rng.gen_bool(0.3) {
                        terminals.choose(rng).expect("terminals").clone()
                    } else {
                        nonterminals.choose(rng).expect("nonterminals").clone()
                    }
                })
                .collect();
            if seen.insert((a.clone(), rhs.clone())) {
                rules.push(Rule::new(a.clone(), rhs));
            }
        }
    }
    Grammar::from_rules(nonterminals[0].clone(), rules).expect("generated grammar is well formed")
}

/// A random term over `sig` of depth at most `max_depth`; the empty tree
/// only appears at the root.
pub fn random_term<R: Rng>(rng: &mut R, sig: &Signature, max_depth: usize) -> Term {
    if rng.gen_ratio(1, 20) {
        return Term::Empty;
    }
    subterm(rng, sig, max_depth)
}

fn subterm<R: Rng>(rng: &mut R, sig: &Signature, depth: usize) -> Term {
    let functions: Vec<(&Symbol, usize)> = sig.functions().collect();
    if depth > 0 && !functions.is_empty() && rng.gen_bool(0.6) {
        let (a, rank) = *functions.choose(rng).expect("functions");
        let children = (0..rank).map(|_| subterm(rng, sig, depth - 1)).collect();
        return Term::Node(a.clone(), children);
    }
    let constants: Vec<&Symbol> = sig.constants().collect();
    let predicted: Vec<&Symbol> = sig.predicted().iter().collect();
    if predicted.is_empty() || (!constants.is_empty() && rng.gen_bool(0.5)) {
        Term::Leaf((*constants.choose(rng).expect("constants")).clone())
    } else {
        Term::Predicted((*predicted.choose(rng).expect("predicted")).clone())
    }
}

fn pure(sig: &Signature, s: &Symbol) -> FockVector {
    FockVector::pure_filler(sig.max_arity() + 1, Filler::Symbol(s.clone()))
}

/// Checks every law on `t` and returns the first violation.
pub fn check_laws(sig: &Signature, t: &Term) -> Result<(), String> {
    let v = embed(t, sig).map_err(|e| format!("embed: {e}"))?;
    if v.entries().values().any(|&c| c != 1.0) {
        return Err("coefficient other than 1".into());
    }
    if v.len() != t.size().max(1) {
        return Err(format!("{} keys for {} nodes", v.len(), t.size()));
    }
    match decode(&v, sig) {
        Ok(back) if back == *t => {}
        Ok(back) => return Err(format!("decode gives {back}")),
        Err(e) => return Err(format!("decode: {e}")),
    }

    let Term::Node(a, children) = t else {
        return Ok(());
    };
    let c = cat(t).map_err(|e| e.to_string())?;
    if cat_op(&v) != pure(sig, c) {
        return Err("cat".into());
    }
    for i in 0..sig.max_arity() {
        let expected = match ex(t, i) {
            Ok(child) => embed(child, sig).map_err(|e| e.to_string())?,
            Err(_) => FockVector::zero(v.role_dim()),
        };
        if ex_op(&v, i).map_err(|e| e.to_string())? != expected {
            return Err(format!("ex_{i}"));
        }
    }
    let embedded = children
        .iter()
        .map(|c| embed(c, sig))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let rebuilt = cons(sig, a, children.clone()).map_err(|e| e.to_string())?;
    let composed = cons_op(&pure(sig, a), &embedded).map_err(|e| e.to_string())?;
    if composed != embed(&rebuilt, sig).map_err(|e| e.to_string())? {
        return Err("cons".into());
    }
    Ok(())
}

/// Smaller variants of `t`: each child on its own, and each subtree
/// replaced by an atom.
fn shrink_candidates(sig: &Signature, t: &Term) -> Vec<Term> {
    let Term::Node(a, children) = t else {
        return Vec::new();
    };
    let mut out: Vec<Term> = children.clone();
    let atom = sig
        .constants()
        .next()
        .map(|s| Term::Leaf(s.clone()))
        .or_else(|| {
            sig.predicted()
                .iter()
                .next()
                .map(|s| Term::Predicted(s.clone()))
        });
    for (i, child) in children.iter().enumerate() {
        let mut replacements = shrink_candidates(sig, child);
        if let Some(atom) = &atom {
            if child != atom {
                replacements.push(atom.clone());
            }
        }
        for r in replacements {
            let mut cs = children.clone();
            cs[i] = r;
            out.push(Term::Node(a.clone(), cs));
        }
    }
    out
}

/// Greedily shrinks a term while `fails` keeps holding.
pub fn shrink(sig: &Signature, t: &Term, fails: impl Fn(&Term) -> bool) -> Term {
    let mut current = t.clone();
    'outer: loop {
        for candidate in shrink_candidates(sig, &current) {
            if candidate.size() < current.size() && fails(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        return current;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub case: usize,
    pub signature: usize,
    pub law: String,
    /// The shrunk failing term.
    pub term: Term,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub seed: u64,
    pub cases: usize,
    pub signatures: usize,
    pub passed: usize,
    pub failures: Vec<Counterexample>,
}

impl TheoremReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} ({} signatures)", self.seed, self.signatures)?;
        for c in &self.failures {
            writeln!(
                f,
                "case {} (signature {}): {} fails on {}",
                c.case, c.signature, c.law, c.term
            )?;
        }
        let status = if self.ok() { "ok" } else { "FAILED" };
        writeln!(f, "{}/{} {status}", self.passed, self.cases)
    }
}

/// Number of signatures used for `cases` terms: at least 20, and about one
/// per 50 terms beyond that.
pub fn signature_count(cases: usize) -> usize {
    (cases / 50).max(20).min(cases.max(1))
}

/// Runs `cases` random terms spread over [`signature_count`] random
/// signatures, all derived from `seed`.
pub fn theorem_check(seed: u64, cases: usize) -> TheoremReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigs: Vec<Signature> = (0..signature_count(cases))
        .map(|_| signature_of(&random_tnf_grammar(&mut rng)).expect("generated grammar is TNF"))
        .collect();
    let mut passed = 0;
    let mut failures = Vec::new();
    for case in 0..cases {
        let signature = case % sigs.len();
        let sig = &sigs[signature];
        let t = random_term(&mut rng, sig, MAX_DEPTH);
        match check_laws(sig, &t) {
            Ok(()) => passed += 1,
            Err(law) => failures.push(Counterexample {
                case,
                signature,
                law,
                term: shrink(sig, &t, |s| check_laws(sig, s).is_err()),
            }),
        }
    }
    TheoremReport {
        seed,
        cases,
        signatures: sigs.len(),
        passed,
        failures,
    }
}
