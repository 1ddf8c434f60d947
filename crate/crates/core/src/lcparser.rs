//! Deterministic left-corner push-down parser.
//!
//! The stack grows to the left: index 0 is the top. A step applies exactly
//! one mode with priority complete > project > shift > accept.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::grammar::{Grammar, Rule, Symbol};
use crate::term::{cat, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("nondeterministic grammar: {} share the left corner `{corner}`", .rules.iter().map(|r| format!("`{r}`")).collect::<Vec<_>>().join(" and "))]
    Nondeterministic { corner: Symbol, rules: Vec<Rule> },
    #[error("parse failed at step {step}: {reason} (stack: {stack}; input: {input})")]
    Rejected {
        step: usize,
        reason: String,
        stack: String,
        input: String,
    },
    #[error("configuration cannot be folded into a tree: {0}")]
    Structure(String),
    #[error("term `{0}` is not a quiescent parser state")]
    NotAState(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StackItem {
    Completed(Term),
    /// A rule `category -> filled pending` whose left part has been recognized.
    Partial {
        category: Symbol,
        filled: Vec<Term>,
        pending: Vec<Symbol>,
    },
}

impl StackItem {
    fn render(&self) -> String {
        match self {
            StackItem::Completed(t) => t.head().map(ToString::to_string).unwrap_or_default(),
            StackItem::Partial {
                category, pending, ..
            } => {
                let mut out: Vec<String> = pending.iter().map(|p| format!("[{p}]")).collect();
                out.push(category.to_string());
                out.join(" ")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Init,
    Shift,
    /// Projection by the rule with the given 1-based number.
    Project(usize),
    Complete,
    Accept,
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Init => f.write_str("init"),
            Operation::Shift => f.write_str("shift"),
            Operation::Project(n) => write!(f, "project ({n})"),
            Operation::Complete => f.write_str("complete"),
            Operation::Accept => f.write_str("accept"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParserConfig {
    /// Top of the stack first.
    pub stack: Vec<StackItem>,
    pub input: Vec<Symbol>,
    pub step: usize,
    pub last_op: Operation,
}

impl ParserConfig {
    pub fn initial(sentence: &[Symbol]) -> Self {
        ParserConfig {
            stack: Vec::new(),
            input: sentence.to_vec(),
            step: 0,
            last_op: Operation::Init,
        }
    }

    pub fn is_accepting(&self) -> bool {
        self.last_op == Operation::Accept
    }

    pub fn render_stack(&self) -> String {
        if self.stack.is_empty() {
            return "ε".into();
        }
        self.stack
            .iter()
            .map(StackItem::render)
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn render_input(&self) -> String {
        if self.input.is_empty() {
            return "ε".into();
        }
        self.input
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// True when only a new word can move the parser on.
    fn awaits_input(&self) -> bool {
        matches!(self.stack.first(), None | Some(StackItem::Partial { .. }))
    }

    fn rejected(&self, reason: impl Into<String>) -> ParseError {
        ParseError::Rejected {
            step: self.step,
            reason: reason.into(),
            stack: self.render_stack(),
            input: self.render_input(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Mode {
    Complete,
    Project(Rule),
    Shift,
    Accept,
}

/// `goal` together with every nonterminal that can start a derivation of
/// `goal` through a chain of leftmost daughters.
fn left_corner_closure(g: &Grammar, goal: &Symbol) -> BTreeSet<Symbol> {
    let mut closure = BTreeSet::from([goal.clone()]);
    let mut queue = vec![goal.clone()];
    while let Some(a) = queue.pop() {
        for rule in g.rules_for(&a) {
            if let Some(first) = rule.rhs.first() {
                if g.is_nonterminal(first) && closure.insert(first.clone()) {
                    queue.push(first.clone());
                }
            }
        }
    }
    closure
}

/// The unique rule with left corner `corner` whose left-hand side can still
/// lead to `goal`.
fn projection<'g>(
    g: &'g Grammar,
    corner: &Symbol,
    goal: &Symbol,
) -> Result<Option<&'g Rule>, ParseError> {
    let viable = left_corner_closure(g, goal);
    let mut candidates = g
        .rules()
        .iter()
        .filter(|r| r.rhs.first() == Some(corner) && viable.contains(&r.lhs));
    let first = candidates.next();
    let rest: Vec<&Rule> = candidates.collect();
    if let Some(first) = first {
        if !rest.is_empty() {
            return Err(ParseError::Nondeterministic {
                corner: corner.clone(),
                rules: std::iter::once(first).chain(rest).cloned().collect(),
            });
        }
    }
    Ok(first)
}

/// The category the item below the top is waiting for, or the start symbol.
fn goal_below<'a>(g: &'a Grammar, c: &'a ParserConfig) -> &'a Symbol {
    match c.stack.get(1) {
        Some(StackItem::Partial { pending, .. }) => &pending[0],
        _ => g.start(),
    }
}

fn next_mode(g: &Grammar, c: &ParserConfig) -> Result<Mode, ParseError> {
    if let Some(StackItem::Completed(u)) = c.stack.first() {
        if let (Term::Node(category, _), Some(StackItem::Partial { pending, .. })) =
            (u, c.stack.get(1))
        {
            if pending.first() == Some(category) {
                return Ok(Mode::Complete);
            }
        }
        let corner = u
            .head()
            .ok_or_else(|| c.rejected("empty tree on the stack"))?;
        if let Some(rule) = projection(g, corner, goal_below(g, c))? {
            return Ok(Mode::Project(rule.clone()));
        }
        if c.stack.len() == 1 && c.input.is_empty() && cat(u).ok() == Some(g.start()) {
            return Ok(Mode::Accept);
        }
        return Err(c.rejected(format!("`{}` can neither complete nor project", u)));
    }
    if !c.input.is_empty() {
        return Ok(Mode::Shift);
    }
    if c.stack.is_empty() {
        Err(c.rejected("empty input"))
    } else {
        Err(c.rejected("input exhausted while categories are still predicted"))
    }
}

/// Applies one parser mode.
pub fn lc_step(g: &Grammar, c: &ParserConfig) -> Result<ParserConfig, ParseError> {
    if c.is_accepting() {
        return Err(c.rejected("configuration already accepted"));
    }
    let mode = next_mode(g, c)?;
    let mut stack = c.stack.clone();
    let mut input = c.input.clone();
    let last_op = match mode {
        Mode::Complete => {
            let Some(StackItem::Completed(u)) = (!stack.is_empty()).then(|| stack.remove(0)) else {
                unreachable!("complete requires a completed top")
            };
            let filled_up = match &mut stack[0] {
                StackItem::Partial {
                    filled, pending, ..
                } => {
                    pending.remove(0);
                    filled.push(u);
                    pending.is_empty()
                }
                StackItem::Completed(_) => unreachable!("complete requires a partial below"),
            };
            if filled_up {
                if let StackItem::Partial {
                    category, filled, ..
                } = stack.remove(0)
                {
                    stack.insert(0, StackItem::Completed(Term::Node(category, filled)));
                }
            }
            Operation::Complete
        }
        Mode::Project(rule) => {
            let StackItem::Completed(u) = stack.remove(0) else {
                unreachable!("project requires a completed top")
            };
            let item = if rule.rhs.len() == 1 {
                StackItem::Completed(Term::Node(rule.lhs.clone(), vec![u]))
            } else {
                StackItem::Partial {
                    category: rule.lhs.clone(),
                    filled: vec![u],
                    pending: rule.rhs[1..].to_vec(),
                }
            };
            stack.insert(0, item);
            Operation::Project(g.rule_number(&rule).expect("rule taken from grammar"))
        }
        Mode::Shift => {
            let word = input.remove(0);
            stack.insert(0, StackItem::Completed(Term::Leaf(word)));
            Operation::Shift
        }
        Mode::Accept => Operation::Accept,
    };
    Ok(ParserConfig {
        stack,
        input,
        step: c.step + 1,
        last_op,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub configs: Vec<ParserConfig>,
    pub accepted: bool,
}

impl Trace {
    /// One row per configuration: step, stack (top first), remaining input
    /// and the operation applied next, tab separated. The accept pseudo-step
    /// only contributes the operation of the last row.
    pub fn rows(&self) -> Vec<[String; 4]> {
        let shown = if self.accepted {
            self.configs.len() - 1
        } else {
            self.configs.len()
        };
        (0..shown)
            .map(|i| {
                let c = &self.configs[i];
                let op = self
                    .configs
                    .get(i + 1)
                    .map(|n| n.last_op.to_string())
                    .unwrap_or_else(|| "fail".into());
                [i.to_string(), c.render_stack(), c.render_input(), op]
            })
            .collect()
    }

    pub fn render(&self) -> String {
        self.rows().iter().map(|r| r.join("\t") + "\n").collect()
    }

    pub fn last(&self) -> &ParserConfig {
        self.configs
            .last()
            .expect("trace starts with the initial configuration")
    }
}

fn check_words(g: &Grammar, sentence: &[Symbol]) -> Result<(), ParseError> {
    match sentence.iter().find(|w| !g.is_terminal(w)) {
        Some(w) => Err(ParseError::UnknownWord(w.to_string())),
        None => Ok(()),
    }
}

fn step_budget(g: &Grammar, sentence: &[Symbol]) -> usize {
    10 * g.rules().len() * (sentence.len() + 1)
}

/// Runs the parser from the empty configuration to acceptance.
///
/// On rejection the partial trace is returned alongside the error.
pub fn lc_parse(g: &Grammar, sentence: &[Symbol]) -> Result<Trace, (ParseError, Trace)> {
    let mut trace = Trace {
        configs: vec![ParserConfig::initial(sentence)],
        accepted: false,
    };
    if let Err(e) = check_words(g, sentence) {
        return Err((e, trace));
    }
    let budget = step_budget(g, sentence);
    let mut since_shift = 0;
    loop {
        let current = trace.last();
        match lc_step(g, current) {
            Ok(next) => {
                since_shift = if next.last_op == Operation::Shift {
                    0
                } else {
                    since_shift + 1
                };
                let accepted = next.is_accepting();
                trace.configs.push(next);
                if accepted {
                    trace.accepted = true;
                    return Ok(trace);
                }
                if since_shift > budget {
                    let e = trace.last().rejected(format!(
                        "no shift within {budget} steps (unary projection cycle)"
                    ));
                    return Err((e, trace));
                }
            }
            Err(e) => return Err((e, trace)),
        }
    }
}

/// Folds the stack into one phrase structure tree: partial items show their
/// pending daughters as predicted leaves, and each item above the bottom
/// replaces the leftmost predicted leaf of the tree built so far.
pub fn snapshot(c: &ParserConfig) -> Result<Term, ParseError> {
    let mut items = c.stack.iter().rev();
    let Some(bottom) = items.next() else {
        return Ok(Term::Empty);
    };
    let mut tree = item_term(bottom);
    for item in items {
        if !substitute_leftmost_prediction(&mut tree, item_term(item)) {
            return Err(ParseError::Structure(c.render_stack()));
        }
    }
    Ok(tree)
}

fn item_term(item: &StackItem) -> Term {
    match item {
        StackItem::Completed(t) => t.clone(),
        StackItem::Partial {
            category,
            filled,
            pending,
        } => Term::Node(
            category.clone(),
            filled
                .iter()
                .cloned()
                .chain(pending.iter().cloned().map(Term::Predicted))
                .collect(),
        ),
    }
}

fn substitute_leftmost_prediction(tree: &mut Term, replacement: Term) -> bool {
    fn find(t: &mut Term) -> Option<&mut Term> {
        match t {
            Term::Predicted(_) => Some(t),
            Term::Node(_, children) => children.iter_mut().find_map(find),
            _ => None,
        }
    }
    match find(tree) {
        Some(slot) => {
            *slot = replacement;
            true
        }
        None => false,
    }
}

/// Runs project/complete until the next mode would be shift or accept, or
/// until the input is exhausted with predictions still open.
fn run_to_quiescence(
    g: &Grammar,
    mut c: ParserConfig,
    budget: usize,
) -> Result<ParserConfig, ParseError> {
    let mut steps = 0;
    loop {
        if c.awaits_input() {
            return Ok(c);
        }
        match next_mode(g, &c)? {
            Mode::Shift | Mode::Accept => return Ok(c),
            _ => {}
        }
        c = lc_step(g, &c)?;
        steps += 1;
        if steps > budget {
            return Err(c.rejected(format!(
                "no shift within {budget} steps (unary projection cycle)"
            )));
        }
    }
}

/// Result of an interactive parse that stopped early.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{error}")]
pub struct InteractiveFailure {
    /// Trees up to and including the last successfully integrated word.
    pub trees: Vec<Term>,
    pub error: ParseError,
}

/// The word-by-word sequence of phrase structure trees: the empty tree, then
/// one tree per word after shifting it and running to quiescence.
pub fn interactive_parse(
    g: &Grammar,
    sentence: &[Symbol],
) -> Result<Vec<Term>, InteractiveFailure> {
    let mut trees = vec![Term::Empty];
    let fail = |trees: Vec<Term>, error| InteractiveFailure { trees, error };
    if let Err(e) = check_words(g, sentence) {
        return Err(fail(trees, e));
    }
    let budget = step_budget(g, sentence);
    let mut c = ParserConfig::initial(sentence);
    for _ in sentence {
        c = match shift_word(g, c, budget) {
            Ok(c) => c,
            Err(e) => return Err(fail(trees, e)),
        };
        match snapshot(&c) {
            Ok(t) => trees.push(t),
            Err(e) => return Err(fail(trees, e)),
        }
    }
    if let Err(e) = lc_step(g, &c).and_then(|n| {
        if n.is_accepting() {
            Ok(())
        } else {
            Err(c.rejected("sentence incomplete"))
        }
    }) {
        return Err(fail(trees, e));
    }
    Ok(trees)
}

fn shift_word(g: &Grammar, c: ParserConfig, budget: usize) -> Result<ParserConfig, ParseError> {
    match next_mode(g, &c)? {
        Mode::Shift => {}
        _ => return Err(c.rejected("parser cannot take another word")),
    }
    let c = lc_step(g, &c)?;
    run_to_quiescence(g, c, budget)
}

/// Reconstructs the quiescent configuration whose snapshot is `t`, with
/// empty remaining input.
///
/// Every open node on the path to the leftmost prediction is a partial item;
/// its pending categories are read off the unique rule with the node's left
/// corner, so the reconstruction is exact for deterministic grammars.
pub fn config_from_snapshot(g: &Grammar, t: &Term) -> Result<ParserConfig, ParseError> {
    let not_state = || ParseError::NotAState(t.to_string());
    let mut stack = Vec::new();
    match t {
        Term::Empty => {}
        t if !t.has_predictions() => stack.push(StackItem::Completed(t.clone())),
        _ => {
            let mut node = t;
            let mut goal = g.start().clone();
            loop {
                let Term::Node(category, children) = node else {
                    return Err(not_state());
                };
                let corner = children[0].head().ok_or_else(not_state)?;
                let rule = projection(g, corner, &goal)?.ok_or_else(not_state)?;
                if &rule.lhs != category || rule.rhs.len() != children.len() {
                    return Err(not_state());
                }
                let open = children
                    .iter()
                    .position(Term::has_predictions)
                    .ok_or_else(not_state)?;
                if open == 0
                    || children[open + 1..]
                        .iter()
                        .zip(&rule.rhs[open + 1..])
                        .any(|(c, expected)| c != &Term::Predicted(expected.clone()))
                {
                    return Err(not_state());
                }
                stack.push(StackItem::Partial {
                    category: category.clone(),
                    filled: children[..open].to_vec(),
                    pending: rule.rhs[open..].to_vec(),
                });
                goal = rule.rhs[open].clone();
                match &children[open] {
                    Term::Predicted(p) if p == &goal => break,
                    Term::Predicted(_) => return Err(not_state()),
                    next => node = next,
                }
            }
            stack.reverse();
        }
    }
    Ok(ParserConfig {
        stack,
        input: Vec::new(),
        step: 0,
        last_op: Operation::Init,
    })
}

/// Successor of a quiescent state tree after integrating one more word.
pub fn advance(g: &Grammar, state: &Term, word: &Symbol) -> Result<Term, ParseError> {
    check_words(g, std::slice::from_ref(word))?;
    let mut c = config_from_snapshot(g, state)?;
    c.input = vec![word.clone()];
    let c = shift_word(g, c, step_budget(g, std::slice::from_ref(word)))?;
    snapshot(&c)
}
