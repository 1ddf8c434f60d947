//! Ground terms over a grammar signature, extended by predicted categories
//! `[A]` and the empty tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::{check_form, Grammar, GrammarError, NormalForm, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("{op} is undefined on `{term}`")]
    Partial { op: &'static str, term: String },
    #[error("index {index} out of range for `{term}` with {arity} children")]
    IndexOutOfRange {
        index: usize,
        arity: usize,
        term: String,
    },
    #[error("`{symbol}` takes {expected} arguments, got {found}")]
    Arity {
        symbol: Symbol,
        expected: usize,
        found: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("the empty tree cannot be a subterm")]
    EmptyChild,
    #[error("term syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

/// Arity assignment for terminals, nonterminals and predicted categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    ranks: BTreeMap<Symbol, usize>,
    predicted: BTreeSet<Symbol>,
    max_arity: usize,
}

impl Signature {
    /// Builds a signature from explicit ranks. `predicted` names the
    /// nonterminals whose predictions `[A]` are constants.
    pub fn new(ranks: BTreeMap<Symbol, usize>, predicted: BTreeSet<Symbol>) -> Self {
        let max_arity = ranks.values().copied().max().unwrap_or(0).max(1);
        Signature {
            ranks,
            predicted,
            max_arity,
        }
    }

    /// Arity of a terminal or nonterminal.
    pub fn rank(&self, s: &Symbol) -> Option<usize> {
        self.ranks.get(s).copied()
    }

    /// Arity of the predicted category `[s]`, which is always 0 when defined.
    pub fn predicted_rank(&self, s: &Symbol) -> Option<usize> {
        self.predicted.contains(s).then_some(0)
    }

    pub fn ranks(&self) -> &BTreeMap<Symbol, usize> {
        &self.ranks
    }

    pub fn predicted(&self) -> &BTreeSet<Symbol> {
        &self.predicted
    }

    /// Largest rank, the number of daughter roles `m`.
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// Number of atomic filler symbols: terminals, nonterminals and
    /// predicted categories.
    pub fn filler_count(&self) -> usize {
        self.ranks.len() + self.predicted.len()
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        self.ranks.iter().filter(|(_, &r)| r == 0).map(|(s, _)| s)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Symbol, usize)> {
        self.ranks
            .iter()
            .filter(|(_, &r)| r > 0)
            .map(|(s, &r)| (s, r))
    }

    /// Checks the arity invariant at every node.
    pub fn validate(&self, t: &Term) -> Result<(), TermError> {
        match t {
            Term::Empty => Ok(()),
            Term::Leaf(a) => self.check_arity(a, 0),
            Term::Predicted(a) => self
                .predicted_rank(a)
                .map(|_| ())
                .ok_or_else(|| TermError::UnknownSymbol(format!("[{a}]"))),
            Term::Node(a, children) => {
                self.check_arity(a, children.len())?;
                children.iter().try_for_each(|c| match c {
                    Term::Empty => Err(TermError::EmptyChild),
                    c => self.validate(c),
                })
            }
        }
    }

    fn check_arity(&self, s: &Symbol, found: usize) -> Result<(), TermError> {
        match self.rank(s) {
            None => Err(TermError::UnknownSymbol(s.to_string())),
            Some(expected) if expected != found => Err(TermError::Arity {
                symbol: s.clone(),
                expected,
                found,
            }),
            Some(_) => Ok(()),
        }
    }
}

/// Derives the signature of a grammar in term normal form.
///
/// Terminals get rank 0 and each nonterminal the common length of its
/// right-hand sides. Predictions exist for the start symbol and for every
/// nonterminal occurring after the first position of some right-hand side.
pub fn signature_of(g: &Grammar) -> Result<Signature, GrammarError> {
    let report = check_form(g);
    if !report.is_tnf {
        let detail = report
            .violations
            .iter()
            .find(|v| v.form == NormalForm::Term)
            .map(ToString::to_string)
            .unwrap_or_default();
        return Err(GrammarError::Precondition {
            form: NormalForm::Term,
            detail,
        });
    }
    let mut ranks: BTreeMap<Symbol, usize> = g.terminals().iter().map(|a| (a.clone(), 0)).collect();
    for rule in g.rules() {
        ranks.insert(rule.lhs.clone(), rule.rhs.len());
    }
    let mut predicted = BTreeSet::from([g.start().clone()]);
    for rule in g.rules() {
        predicted.extend(
            rule.rhs
                .iter()
                .skip(1)
                .filter(|s| g.is_nonterminal(s))
                .cloned(),
        );
    }
    Ok(Signature::new(ranks, predicted))
}

/// A term of the left-corner term algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// The empty tree.
    Empty,
    /// A terminal, a nullary symbol.
    Leaf(Symbol),
    /// A predicted category `[A]`.
    Predicted(Symbol),
    /// `A(t_0, ..., t_k)`; children in right-hand side order.
    Node(Symbol, Vec<Term>),
}

impl Term {
    pub fn leaf(name: &str) -> Term {
        Term::Leaf(crate::grammar::sym(name))
    }

    pub fn predicted(name: &str) -> Term {
        Term::Predicted(crate::grammar::sym(name))
    }

    pub fn node(name: &str, children: Vec<Term>) -> Term {
        Term::Node(crate::grammar::sym(name), children)
    }

    /// `0` for atoms and the empty tree, otherwise one more than the deepest child.
    pub fn depth(&self) -> usize {
        match self {
            Term::Node(_, children) => 1 + children.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Number of nodes and leaves; 0 for the empty tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Empty => 0,
            Term::Leaf(_) | Term::Predicted(_) => 1,
            Term::Node(_, children) => 1 + children.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Terminal leaves from left to right.
    pub fn terminal_yield(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_yield(&mut out);
        out
    }

    fn collect_yield(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Leaf(a) => out.push(a.clone()),
            Term::Node(_, children) => children.iter().for_each(|c| c.collect_yield(out)),
            _ => {}
        }
    }

    pub fn has_predictions(&self) -> bool {
        match self {
            Term::Predicted(_) => true,
            Term::Node(_, children) => children.iter().any(Term::has_predictions),
            _ => false,
        }
    }

    /// The symbol that heads this term: node category, terminal or predicted category.
    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Term::Empty => None,
            Term::Leaf(s) | Term::Predicted(s) | Term::Node(s, _) => Some(s),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Empty => f.write_str("@empty"),
            Term::Leaf(a) => write!(f, "{a}"),
            Term::Predicted(a) => write!(f, "[{a}]"),
            Term::Node(a, children) => {
                write!(f, "{a}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The category of a node.
pub fn cat(t: &Term) -> Result<&Symbol, TermError> {
    match t {
        Term::Node(a, _) => Ok(a),
        _ => Err(TermError::Partial {
            op: "cat",
            term: t.to_string(),
        }),
    }
}

/// The `i`-th daughter of a node, counting from 0.
pub fn ex(t: &Term, i: usize) -> Result<&Term, TermError> {
    match t {
        Term::Node(_, children) => children.get(i).ok_or_else(|| TermError::IndexOutOfRange {
            index: i,
            arity: children.len(),
            term: t.to_string(),
        }),
        _ => Err(TermError::Partial {
            op: "ex",
            term: t.to_string(),
        }),
    }
}

/// Builds `A(children...)`, checking the arity of `A` under `sig`.
pub fn cons(sig: &Signature, a: &Symbol, children: Vec<Term>) -> Result<Term, TermError> {
    sig.check_arity(a, children.len())?;
    if children.iter().any(|c| matches!(c, Term::Empty)) {
        return Err(TermError::EmptyChild);
    }
    Ok(Term::Node(a.clone(), children))
}

/// Parses `A(child,...)`, `[A]`, a bare terminal or `@empty`, validating
/// against `sig` when given.
pub fn parse_term(text: &str, sig: Option<&Signature>) -> Result<Term, TermError> {
    let mut parser = TermParser { text, pos: 0 };
    let term = parser.term()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(parser.error("trailing input"));
    }
    if let Some(sig) = sig {
        sig.validate(&term)?;
    }
    Ok(term)
}

struct TermParser<'a> {
    text: &'a str,
    pos: usize,
}

impl TermParser<'_> {
    fn error(&self, message: &str) -> TermError {
        TermError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<Symbol, TermError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || "()[],".contains(c))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a symbol"));
        }
        let symbol = Symbol::new(&rest[..len]).map_err(|_| self.error("invalid symbol"))?;
        self.pos += len;
        Ok(symbol)
    }

    fn term(&mut self) -> Result<Term, TermError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with("@empty") {
            self.pos += "@empty".len();
            return Ok(Term::Empty);
        }
        if self.eat('[') {
            let a = self.name()?;
            if !self.eat(']') {
                return Err(self.error("expected `]`"));
            }
            return Ok(Term::Predicted(a));
        }
        let a = self.name()?;
        if !self.eat('(') {
            return Ok(Term::Leaf(a));
        }
        let mut children = vec![self.term()?];
        while self.eat(',') {
            children.push(self.term()?);
        }
        if !self.eat(')') {
            return Err(self.error("expected `,` or `)`"));
        }
        Ok(Term::Node(a, children))
    }
}
