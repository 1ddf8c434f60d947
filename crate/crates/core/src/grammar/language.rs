use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{Grammar, GrammarError, Symbol};

pub const MAX_ENUMERATION_LENGTH: usize = 12;

pub type Sentence = Vec<Symbol>;

// Strings bucketed by length.
type Buckets = Vec<HashSet<Vec<u32>>>;

/// All terminal strings of length at most `max_len` derivable from the start
/// symbol.
///
/// Computed as the least fixed point of the per-nonterminal languages
/// truncated to `max_len`, which is exact for every grammar (epsilon rules,
/// unit cycles and left recursion included).
pub fn enumerate_language(g: &Grammar, max_len: usize) -> Result<BTreeSet<Sentence>, GrammarError> {
    if max_len > MAX_ENUMERATION_LENGTH {
        return Err(GrammarError::LengthOutOfRange(max_len));
    }
    let terminals: Vec<&Symbol> = g.terminals().iter().collect();
    let term_id: BTreeMap<&Symbol, u32> = terminals
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i as u32))
        .collect();
    let nonterminals: Vec<&Symbol> = g.nonterminals().iter().collect();
    let nt_id: BTreeMap<&Symbol, usize> = nonterminals
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();

    let mut langs: Vec<Buckets> = vec![vec![HashSet::new(); max_len + 1]; nonterminals.len()];
    loop {
        let mut changed = false;
        for rule in g.rules() {
            let mut acc: Buckets = vec![HashSet::new(); max_len + 1];
            acc[0].insert(Vec::new());
            for s in &rule.rhs {
                acc = match term_id.get(s) {
                    Some(&t) => {
                        let mut single: Buckets = vec![HashSet::new(); max_len + 1];
                        if max_len >= 1 {
                            single[1].insert(vec![t]);
                        }
                        concat(&acc, &single, max_len)
                    }
                    None => concat(&acc, &langs[nt_id[s]], max_len),
                };
                if acc.iter().all(HashSet::is_empty) {
                    break;
                }
            }
            let target = &mut langs[nt_id[&rule.lhs]];
            for (len, strings) in acc.into_iter().enumerate() {
                for w in strings {
                    changed |= target[len].insert(w);
                }
            }
        }
        if !changed {
            break;
        }
    }

    Ok(langs[nt_id[g.start()]]
        .iter()
        .flatten()
        .map(|w| w.iter().map(|&t| terminals[t as usize].clone()).collect())
        .collect())
}

fn concat(left: &Buckets, right: &Buckets, max_len: usize) -> Buckets {
    let mut out: Buckets = vec![HashSet::new(); max_len + 1];
    for (l1, us) in left.iter().enumerate() {
        for (l2, vs) in right.iter().enumerate().take(max_len + 1 - l1) {
            for u in us {
                for v in vs {
                    let mut w = Vec::with_capacity(l1 + l2);
                    w.extend_from_slice(u);
                    w.extend_from_slice(v);
                    out[l1 + l2].insert(w);
                }
            }
        }
    }
    out
}
