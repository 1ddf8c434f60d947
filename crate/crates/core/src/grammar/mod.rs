//! Context-free grammars: symbols, rules, the grammar file format, normal-form
//! predicates and the conversions into Chomsky and term normal form.

mod form;
mod language;
mod normalize;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use form::{check_form, crf_to_cnf, FormReport, NormalForm, Violation};
pub use language::{enumerate_language, Sentence, MAX_ENUMERATION_LENGTH};
pub use normalize::{to_crf, to_tnf};

const RESERVED: [&str; 7] = ["->", "|", "[", "]", "(", ")", ","];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("grammar has no rules")]
    NoRules,
    #[error("start symbol `{0}` is never defined")]
    UndefinedStart(Symbol),
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
    #[error("symbol `{0}` is both a terminal and a nonterminal")]
    OverlappingSymbol(Symbol),
    #[error("symbol `{0}` in rule `{1}` is not declared")]
    UndeclaredSymbol(Symbol, Rule),
    #[error("duplicate rule `{0}`")]
    DuplicateRule(Rule),
    #[error("grammar is not in {form}: {detail}")]
    Precondition { form: NormalForm, detail: String },
    #[error("grammar derives the empty string")]
    DerivesEmpty,
    #[error("grammar derives no terminal string")]
    EmptyLanguage,
    #[error("enumeration length {0} out of range (at most {MAX_ENUMERATION_LENGTH})")]
    LengthOutOfRange(usize),
}

/// A terminal or nonterminal name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, GrammarError> {
        let valid = !name.is_empty()
            && !name.chars().any(char::is_whitespace)
            && !RESERVED.iter().any(|r| name.contains(r));
        if valid {
            Ok(Symbol(Arc::from(name)))
        } else {
            Err(GrammarError::InvalidSymbol(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Panicking shorthand for symbol literals that are known to be valid.
pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap_or_else(|e| panic!("{e}"))
}

/// A production `lhs -> rhs`. An empty `rhs` is an epsilon rule.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rule {
    pub lhs: Symbol,
    pub rhs: Vec<Symbol>,
}

impl Rule {
    pub fn new(lhs: Symbol, rhs: Vec<Symbol>) -> Self {
        Rule { lhs, rhs }
    }

    /// Builds a rule from whitespace separated names, e.g. `Rule::parse("S", "NP VP")`.
    pub fn parse(lhs: &str, rhs: &str) -> Result<Self, GrammarError> {
        let rhs = rhs
            .split_whitespace()
            .map(Symbol::new)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Rule::new(Symbol::new(lhs)?, rhs))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// A context-free grammar `(T, N, S, R)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grammar {
    terminals: BTreeSet<Symbol>,
    nonterminals: BTreeSet<Symbol>,
    start: Symbol,
    rules: Vec<Rule>,
}

impl Grammar {
    /// Builds a grammar from explicit symbol sets, checking every invariant.
    pub fn new(
        terminals: BTreeSet<Symbol>,
        nonterminals: BTreeSet<Symbol>,
        start: Symbol,
        rules: Vec<Rule>,
    ) -> Result<Self, GrammarError> {
        if let Some(s) = terminals.intersection(&nonterminals).next() {
            return Err(GrammarError::OverlappingSymbol(s.clone()));
        }
        if !nonterminals.contains(&start) {
            return Err(GrammarError::UndefinedStart(start));
        }
        let mut seen = BTreeSet::new();
        for rule in &rules {
            if !nonterminals.contains(&rule.lhs) {
                return Err(GrammarError::UndeclaredSymbol(
                    rule.lhs.clone(),
                    rule.clone(),
                ));
            }
            if let Some(s) = rule
                .rhs
                .iter()
                .find(|s| !terminals.contains(*s) && !nonterminals.contains(*s))
            {
                return Err(GrammarError::UndeclaredSymbol(s.clone(), rule.clone()));
            }
            if !seen.insert(rule) {
                return Err(GrammarError::DuplicateRule(rule.clone()));
            }
        }
        Ok(Grammar {
            terminals,
            nonterminals,
            start,
            rules,
        })
    }

    /// Builds a grammar whose nonterminals are exactly the left-hand sides and
    /// whose terminals are every other mentioned symbol.
    pub fn from_rules(start: Symbol, rules: Vec<Rule>) -> Result<Self, GrammarError> {
        if rules.is_empty() {
            return Err(GrammarError::NoRules);
        }
        let nonterminals: BTreeSet<Symbol> = rules.iter().map(|r| r.lhs.clone()).collect();
        let terminals = rules
            .iter()
            .flat_map(|r| r.rhs.iter())
            .filter(|s| !nonterminals.contains(*s))
            .cloned()
            .collect();
        Grammar::new(terminals, nonterminals, start, rules)
    }

    /// Rebuilds a grammar after a rewriting pass: repeated rules are dropped
    /// (keeping the first), symbols in `terminals` stay terminals and every
    /// other mentioned symbol is a nonterminal, with or without rules.
    pub(crate) fn rebuild(
        start: Symbol,
        rules: Vec<Rule>,
        terminals: &BTreeSet<Symbol>,
    ) -> Result<Self, GrammarError> {
        let mut seen = BTreeSet::new();
        let rules: Vec<Rule> = rules
            .into_iter()
            .filter(|r| seen.insert(r.clone()))
            .collect();
        let mentioned: BTreeSet<Symbol> = rules
            .iter()
            .flat_map(|r| std::iter::once(&r.lhs).chain(r.rhs.iter()))
            .cloned()
            .collect();
        let (terminals, mut nonterminals): (BTreeSet<Symbol>, BTreeSet<Symbol>) =
            mentioned.into_iter().partition(|s| terminals.contains(s));
        nonterminals.insert(start.clone());
        Grammar::new(terminals, nonterminals, start, rules)
    }

    pub fn terminals(&self) -> &BTreeSet<Symbol> {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &BTreeSet<Symbol> {
        &self.nonterminals
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_terminal(&self, s: &Symbol) -> bool {
        self.terminals.contains(s)
    }

    pub fn is_nonterminal(&self, s: &Symbol) -> bool {
        self.nonterminals.contains(s)
    }

    pub fn rules_for<'a>(&'a self, lhs: &'a Symbol) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| &r.lhs == lhs)
    }

    /// 1-based position of `rule` in the rule sequence.
    pub fn rule_number(&self, rule: &Rule) -> Option<usize> {
        self.rules.iter().position(|r| r == rule).map(|i| i + 1)
    }

    /// A symbol name based on `base` that is not used anywhere in the grammar
    /// nor in `taken`.
    pub(crate) fn fresh_name(&self, base: &str, taken: &BTreeSet<Symbol>) -> Symbol {
        let mut name = base.to_string();
        loop {
            let s = sym(&name);
            if !self.terminals.contains(&s)
                && !self.nonterminals.contains(&s)
                && !taken.contains(&s)
            {
                return s;
            }
            name.push('_');
        }
    }

    /// Serializes to the grammar file format, one rule per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("start: {}\n", self.start);
        for rule in &self.rules {
            out.push_str(&rule.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Grammar {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grammar(s)
    }
}

/// Parses the grammar file format:
///
/// ```text
/// start: S          # optional, must come first
/// S -> NP VP
/// N -> mouse | cheese
/// ```
///
/// An empty alternative denotes an epsilon rule.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut start = None;
    let mut rules: Vec<Rule> = Vec::new();
    let mut seen_rule_line = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let syntax = |message: String| GrammarError::Syntax {
            line: line_no,
            message,
        };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("start:") {
            if seen_rule_line || start.is_some() {
                return Err(syntax("`start:` must precede all rules".into()));
            }
            let name = rest.trim();
            start = Some(
                Symbol::new(name).map_err(|_| syntax(format!("invalid start symbol `{name}`")))?,
            );
            continue;
        }
        seen_rule_line = true;
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| syntax("expected `<LHS> -> <RHS>`".into()))?;
        let lhs = lhs.trim();
        if lhs.split_whitespace().count() != 1 {
            return Err(syntax(format!(
                "left-hand side must be a single symbol, got `{lhs}`"
            )));
        }
        let lhs = Symbol::new(lhs).map_err(|_| syntax(format!("invalid symbol `{lhs}`")))?;
        for alt in rhs.split('|') {
            let rhs = alt
                .split_whitespace()
                .map(|tok| Symbol::new(tok).map_err(|_| syntax(format!("invalid symbol `{tok}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let rule = Rule::new(lhs.clone(), rhs);
            if rules.contains(&rule) {
                return Err(syntax(format!("duplicate rule `{rule}`")));
            }
            rules.push(rule);
        }
    }
    if rules.is_empty() {
        return Err(GrammarError::NoRules);
    }
    let start = start.unwrap_or_else(|| rules[0].lhs.clone());
    if !rules.iter().any(|r| r.lhs == start) {
        return Err(GrammarError::UndefinedStart(start));
    }
    Grammar::from_rules(start, rules)
}
