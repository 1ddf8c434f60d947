#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use fockgram::grammar::{parse_grammar, Grammar, Rule, Symbol};
use fockgram::term::Term;
use rand::seq::SliceRandom;
use rand::Rng;

pub const EXAMPLE: &str = include_str!("../../data/example.cfg");

pub fn example() -> Grammar {
    parse_grammar(EXAMPLE).unwrap()
}

pub fn words(s: &str) -> Vec<Symbol> {
    s.split_whitespace()
        .map(|w| Symbol::new(w).unwrap())
        .collect()
}

fn symbols(prefix: &str, n: usize) -> Vec<Symbol> {
    (0..n)
        .map(|i| Symbol::new(&format!("{prefix}{i}")).unwrap())
        .collect()
}

fn build(start: &Symbol, rules: Vec<(Symbol, Vec<Symbol>)>) -> Option<Grammar> {
    let mut seen = BTreeSet::new();
    let rules: Vec<Rule> = rules
        .into_iter()
        .filter(|r| seen.insert(r.clone()))
        .map(|(lhs, rhs)| Rule::new(lhs, rhs))
        .collect();
    Grammar::from_rules(start.clone(), rules).ok()
}

/// An epsilon-free grammar with at most `max_nt` nonterminals `A0..` (start
/// `A0`), at most `max_rules` rules of length 1 to 3, over terminals `a`, `b`.
pub fn random_cfg<R: Rng>(rng: &mut R, max_nt: usize, max_rules: usize) -> Grammar {
    let terminals = [Symbol::new("a").unwrap(), Symbol::new("b").unwrap()];
    loop {
        let nts = symbols("A", rng.gen_range(1..=max_nt));
        let n_rules = rng.gen_range(nts.len()..=max_rules.max(nts.len()));
        let mut rules = Vec::new();
        for i in 0..n_rules {
            // every nonterminal gets at least one rule
            let lhs = if i < nts.len() {
                nts[i].clone()
            } else {
                nts.choose(rng).unwrap().clone()
            };
            let len = rng.gen_range(1..=3);
            let rhs = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        terminals.choose(rng).unwrap().clone()
                    } else {
                        nts.choose(rng).unwrap().clone()
                    }
                })
                .collect();
            rules.push((lhs, rhs));
        }
        if let Some(g) = build(&nts[0], rules) {
            return g;
        }
    }
}

/// A grammar whose every rule has a right-hand side of length one, so that
/// it only derives single terminals.
pub fn random_length_one_cfg<R: Rng>(rng: &mut R) -> Grammar {
    let terminals = symbols("t", 3);
    let nts = symbols("A", rng.gen_range(1..=4));
    let mut rules = Vec::new();
    for a in &nts {
        rules.push((a.clone(), vec![terminals.choose(rng).unwrap().clone()]));
        for _ in 0..rng.gen_range(0..=2) {
            let rhs = if rng.gen_bool(0.5) {
                nts.choose(rng).unwrap().clone()
            } else {
                terminals.choose(rng).unwrap().clone()
            };
            if rhs != *a {
                rules.push((a.clone(), vec![rhs]));
            }
        }
    }
    build(&nts[0], rules).unwrap()
}

/// A grammar whose start rules all have at least two symbols on the right,
/// so that it only derives strings of length two or more.
pub fn random_length_two_plus_cfg<R: Rng>(rng: &mut R) -> Grammar {
    let terminals = symbols("t", 2);
    let nts = symbols("A", rng.gen_range(1..=4));
    let any = |rng: &mut R| -> Symbol {
        if rng.gen_bool(0.5) {
            terminals.choose(rng).unwrap().clone()
        } else {
            nts.choose(rng).unwrap().clone()
        }
    };
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(2..=3);
        let rhs = (0..len).map(|_| any(rng)).collect();
        rules.push((nts[0].clone(), rhs));
    }
    for a in &nts[1..] {
        rules.push((a.clone(), vec![terminals.choose(rng).unwrap().clone()]));
        for _ in 0..rng.gen_range(0..=2) {
            let len = rng.gen_range(1..=3);
            let rhs = (0..len).map(|_| any(rng)).collect();
            rules.push((a.clone(), rhs));
        }
    }
    build(&nts[0], rules).unwrap()
}

/// Eigenvalues (descending) and unit eigenvectors (columns) of a symmetric
/// matrix by cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (values, vectors)
}

/// Keys of the tensor product embedding written out as ket strings
/// `filler r0 r1 ...`, computed from tree addresses.
pub fn ket_strings(t: &Term, mother: usize) -> BTreeSet<String> {
    fn walk(t: &Term, mother: usize, address: &mut Vec<usize>, out: &mut BTreeSet<String>) {
        let roles = |inner: Option<usize>, address: &[usize]| -> String {
            inner
                .into_iter()
                .chain(address.iter().rev().copied())
                .map(|r| format!(" {r}"))
                .collect()
        };
        match t {
            Term::Empty => {
                out.insert(format!("@role {mother}"));
            }
            Term::Leaf(a) => {
                out.insert(format!("{a}{}", roles(None, address)));
            }
            Term::Predicted(a) => {
                out.insert(format!("[{a}]{}", roles(None, address)));
            }
            Term::Node(a, children) => {
                out.insert(format!("{a}{}", roles(Some(mother), address)));
                for (i, c) in children.iter().enumerate() {
                    address.push(i);
                    walk(c, mother, address, out);
                    address.pop();
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(t, mother, &mut Vec::new(), &mut out);
    out
}
