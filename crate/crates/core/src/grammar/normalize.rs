//! Conversion to Chomsky reduced form and the term normal form construction.
//!
//! Every pass keeps the relative order of the input rules; rules derived from
//! a source rule are emitted at the position the source rule held.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{check_form, Grammar, GrammarError, Rule, Symbol};

fn nullable(g: &Grammar) -> BTreeSet<Symbol> {
    let mut set = BTreeSet::new();
    loop {
        let before = set.len();
        for rule in g.rules() {
            if rule.rhs.iter().all(|s| set.contains(s)) {
                set.insert(rule.lhs.clone());
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn productive(g: &Grammar) -> BTreeSet<Symbol> {
    let mut set: BTreeSet<Symbol> = g.terminals().clone();
    loop {
        let before = set.len();
        for rule in g.rules() {
            if rule.rhs.iter().all(|s| set.contains(s)) {
                set.insert(rule.lhs.clone());
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Drops rules mentioning unproductive symbols, then rules of unreachable
/// nonterminals.
fn prune_useless(g: &Grammar) -> Result<Grammar, GrammarError> {
    let productive = productive(g);
    if !productive.contains(g.start()) {
        return Err(GrammarError::EmptyLanguage);
    }
    let rules: Vec<Rule> = g
        .rules()
        .iter()
        .filter(|r| productive.contains(&r.lhs) && r.rhs.iter().all(|s| productive.contains(s)))
        .cloned()
        .collect();

    let mut reachable = BTreeSet::from([g.start().clone()]);
    let mut queue = VecDeque::from([g.start().clone()]);
    while let Some(a) = queue.pop_front() {
        for rule in rules.iter().filter(|r| r.lhs == a) {
            for s in &rule.rhs {
                if reachable.insert(s.clone()) {
                    queue.push_back(s.clone());
                }
            }
        }
    }
    let rules = rules
        .into_iter()
        .filter(|r| reachable.contains(&r.lhs))
        .collect();
    Grammar::from_rules(g.start().clone(), rules)
}

fn eliminate_epsilon(g: &Grammar) -> Result<Grammar, GrammarError> {
    let nullable = nullable(g);
    if nullable.contains(g.start()) {
        return Err(GrammarError::DerivesEmpty);
    }
    let mut rules = Vec::new();
    for rule in g.rules() {
        let positions: Vec<usize> = (0..rule.rhs.len())
            .filter(|&i| nullable.contains(&rule.rhs[i]))
            .collect();
        // mask bit set = occurrence dropped; mask 0 reproduces the rule
        for mask in 0u64..(1u64 << positions.len()) {
            let rhs: Vec<Symbol> = rule
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    positions
                        .iter()
                        .position(|p| p == i)
                        .is_none_or(|bit| mask & (1 << bit) == 0)
                })
                .map(|(_, s)| s.clone())
                .collect();
            if !rhs.is_empty() {
                rules.push(Rule::new(rule.lhs.clone(), rhs));
            }
        }
    }
    if rules.is_empty() {
        return Err(GrammarError::EmptyLanguage);
    }
    Grammar::rebuild(g.start().clone(), rules, g.terminals())
}

fn is_unit(g: &Grammar, rule: &Rule) -> bool {
    rule.rhs.len() == 1 && g.is_nonterminal(&rule.rhs[0])
}

fn eliminate_units(g: &Grammar) -> Result<Grammar, GrammarError> {
    let mut rules = Vec::new();
    for rule in g.rules() {
        if !is_unit(g, rule) {
            rules.push(rule.clone());
            continue;
        }
        // breadth-first over the unit closure of the target
        let mut seen = BTreeSet::from([rule.rhs[0].clone()]);
        let mut queue = VecDeque::from([rule.rhs[0].clone()]);
        while let Some(b) = queue.pop_front() {
            for r in g.rules_for(&b) {
                if is_unit(g, r) {
                    if seen.insert(r.rhs[0].clone()) {
                        queue.push_back(r.rhs[0].clone());
                    }
                } else {
                    rules.push(Rule::new(rule.lhs.clone(), r.rhs.clone()));
                }
            }
        }
    }
    if !rules.iter().any(|r| &r.lhs == g.start()) {
        return Err(GrammarError::EmptyLanguage);
    }
    Grammar::rebuild(g.start().clone(), rules, g.terminals())
}

fn lift_terminals(g: &Grammar) -> Result<Grammar, GrammarError> {
    let mut lifted: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    let mut taken = BTreeSet::new();
    let mut rules = Vec::new();
    for rule in g.rules() {
        if rule.rhs.len() < 2 {
            rules.push(rule.clone());
            continue;
        }
        let mut fresh_rules = Vec::new();
        let rhs = rule
            .rhs
            .iter()
            .map(|s| {
                if !g.is_terminal(s) {
                    return s.clone();
                }
                lifted
                    .entry(s.clone())
                    .or_insert_with(|| {
                        let name = g.fresh_name(&format!("T__{s}"), &taken);
                        taken.insert(name.clone());
                        fresh_rules.push(Rule::new(name.clone(), vec![s.clone()]));
                        name
                    })
                    .clone()
            })
            .collect();
        rules.push(Rule::new(rule.lhs.clone(), rhs));
        rules.extend(fresh_rules);
    }
    Grammar::rebuild(g.start().clone(), rules, g.terminals())
}

fn binarize(g: &Grammar) -> Result<Grammar, GrammarError> {
    let mut taken = BTreeSet::new();
    let mut counter = 0;
    let mut rules = Vec::new();
    for rule in g.rules() {
        if rule.rhs.len() <= 2 {
            rules.push(rule.clone());
            continue;
        }
        let mut lhs = rule.lhs.clone();
        let k = rule.rhs.len();
        for s in &rule.rhs[..k - 2] {
            counter += 1;
            let fresh = g.fresh_name(&format!("X__bin{counter}"), &taken);
            taken.insert(fresh.clone());
            rules.push(Rule::new(lhs, vec![s.clone(), fresh.clone()]));
            lhs = fresh;
        }
        rules.push(Rule::new(lhs, rule.rhs[k - 2..].to_vec()));
    }
    Grammar::rebuild(g.start().clone(), rules, g.terminals())
}

/// Textbook conversion of an epsilon-free language into Chomsky reduced form:
/// epsilon elimination, unit-rule elimination, useless-symbol removal,
/// terminal lifting (`T__a -> a`) and left-to-right binarization (`X__bin<k>`).
pub fn to_crf(g: &Grammar) -> Result<Grammar, GrammarError> {
    let g = eliminate_epsilon(g)?;
    let g = eliminate_units(&g)?;
    let g = prune_useless(&g)?;
    let g = lift_terminals(&g)?;
    binarize(&g)
}

/// Converts an epsilon-free grammar into a weakly equivalent grammar in term
/// normal form.
///
/// Grammars already in term normal form are returned unchanged. Otherwise the
/// grammar is brought into Chomsky reduced form and every nonterminal `A`
/// with both binary and lexical rules is split into `A__2` (binary rules)
/// and `A__1` (lexical rules); each right-hand side occurrence of `A` is
/// expanded into both variants, and a split start symbol gets a fresh start
/// `S__0 -> S__1 | S__2`. Unreachable symbols are pruned at the end.
pub fn to_tnf(g: &Grammar) -> Result<Grammar, GrammarError> {
    if check_form(g).is_tnf {
        if !productive(g).contains(g.start()) {
            return Err(GrammarError::EmptyLanguage);
        }
        return Ok(g.clone());
    }
    let crf = to_crf(g)?;

    let conflict: BTreeSet<Symbol> = crf
        .nonterminals()
        .iter()
        .filter(|a| {
            let lens: BTreeSet<usize> = crf.rules_for(a).map(|r| r.rhs.len()).collect();
            lens.contains(&1) && lens.contains(&2)
        })
        .cloned()
        .collect();
    if conflict.is_empty() {
        return Ok(crf);
    }

    let mut taken = BTreeSet::new();
    let mut split: BTreeMap<Symbol, (Symbol, Symbol)> = BTreeMap::new();
    for a in &conflict {
        let binary = crf.fresh_name(&format!("{a}__2"), &taken);
        taken.insert(binary.clone());
        let lexical = crf.fresh_name(&format!("{a}__1"), &taken);
        taken.insert(lexical.clone());
        split.insert(a.clone(), (binary, lexical));
    }
    let variants = |s: &Symbol| -> Vec<Symbol> {
        match split.get(s) {
            Some((binary, lexical)) => vec![binary.clone(), lexical.clone()],
            None => vec![s.clone()],
        }
    };

    let mut rules = Vec::new();
    let start = crf.start();
    let new_start = if let Some((binary, lexical)) = split.get(start) {
        let s0 = crf.fresh_name(&format!("{start}__0"), &taken);
        rules.push(Rule::new(s0.clone(), vec![lexical.clone()]));
        rules.push(Rule::new(s0.clone(), vec![binary.clone()]));
        s0
    } else {
        start.clone()
    };

    for rule in crf.rules() {
        let lhs = match split.get(&rule.lhs) {
            Some((binary, _)) if rule.rhs.len() == 2 => binary.clone(),
            Some((_, lexical)) => lexical.clone(),
            None => rule.lhs.clone(),
        };
        if rule.rhs.len() == 1 {
            rules.push(Rule::new(lhs, rule.rhs.clone()));
            continue;
        }
        for first in variants(&rule.rhs[0]) {
            for second in variants(&rule.rhs[1]) {
                rules.push(Rule::new(lhs.clone(), vec![first.clone(), second]));
            }
        }
    }
    prune_useless(&Grammar::rebuild(new_start, rules, crf.terminals())?)
}
