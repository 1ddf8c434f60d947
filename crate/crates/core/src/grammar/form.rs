use std::collections::BTreeMap;
use std::fmt;

use super::{Grammar, GrammarError, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalForm {
    Chomsky,
    ChomskyReduced,
    Term,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalForm::Chomsky => "cnf",
            NormalForm::ChomskyReduced => "crf",
            NormalForm::Term => "tnf",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub form: NormalForm,
    pub rule: Rule,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: `{}`: {}", self.form, self.rule, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormReport {
    pub is_cnf: bool,
    pub is_crf: bool,
    pub is_tnf: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for FormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "cnf={} crf={} tnf={}",
            self.is_cnf, self.is_crf, self.is_tnf
        )?;
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn binary_of_nonterminals(g: &Grammar, rule: &Rule) -> bool {
    rule.rhs.len() == 2 && rule.rhs.iter().all(|s| g.is_nonterminal(s))
}

fn lexical(g: &Grammar, rule: &Rule) -> bool {
    rule.rhs.len() == 1 && g.is_terminal(&rule.rhs[0])
}

/// Evaluates the Chomsky normal form, Chomsky reduced form and term normal
/// form predicates, collecting every offending rule.
pub fn check_form(g: &Grammar) -> FormReport {
    let mut violations = Vec::new();
    let mut push = |form, rule: &Rule, reason: String| {
        violations.push(Violation {
            form,
            rule: rule.clone(),
            reason,
        })
    };

    for rule in g.rules() {
        let crf_ok = binary_of_nonterminals(g, rule) || lexical(g, rule);
        if !crf_ok {
            push(
                NormalForm::ChomskyReduced,
                rule,
                "not of shape A -> B C or A -> a".into(),
            );
        }
        let epsilon_start = rule.rhs.is_empty() && &rule.lhs == g.start();
        if !crf_ok && !epsilon_start {
            push(
                NormalForm::Chomsky,
                rule,
                "not of shape A -> B C, A -> a or S -> ε".into(),
            );
        } else if binary_of_nonterminals(g, rule) && rule.rhs.contains(g.start()) {
            push(
                NormalForm::Chomsky,
                rule,
                format!("start symbol {} on right-hand side", g.start()),
            );
        }
        if rule.rhs.is_empty() {
            push(NormalForm::Term, rule, "empty right-hand side".into());
        }
    }

    let mut lengths: BTreeMap<_, Vec<&Rule>> = BTreeMap::new();
    for rule in g.rules().iter().filter(|r| !r.rhs.is_empty()) {
        lengths.entry(&rule.lhs).or_default().push(rule);
    }
    for (lhs, rules) in lengths {
        let first = rules[0].rhs.len();
        for rule in rules.iter().filter(|r| r.rhs.len() != first) {
            push(
                NormalForm::Term,
                rule,
                format!(
                    "{lhs} expands with right-hand sides of length {first} and {}",
                    rule.rhs.len()
                ),
            );
        }
    }

    let holds = |form| !violations.iter().any(|v| v.form == form);
    FormReport {
        is_cnf: holds(NormalForm::Chomsky),
        is_crf: holds(NormalForm::ChomskyReduced),
        is_tnf: holds(NormalForm::Term),
        violations,
    }
}

/// Turns a grammar in Chomsky reduced form into Chomsky normal form by
/// introducing a fresh start symbol `S__0` when `S` occurs on a right-hand
/// side. The copies `S__0 -> γ` are placed directly after their source rules.
pub fn crf_to_cnf(g: &Grammar) -> Result<Grammar, GrammarError> {
    let report = check_form(g);
    if !report.is_crf {
        return Err(GrammarError::Precondition {
            form: NormalForm::ChomskyReduced,
            detail: report
                .violations
                .iter()
                .find(|v| v.form == NormalForm::ChomskyReduced)
                .map(ToString::to_string)
                .unwrap_or_default(),
        });
    }
    let start = g.start();
    if !g.rules().iter().any(|r| r.rhs.contains(start)) {
        return Ok(g.clone());
    }
    let new_start = g.fresh_name(&format!("{start}__0"), &Default::default());
    let mut rules = Vec::with_capacity(g.rules().len() + 2);
    for rule in g.rules() {
        rules.push(rule.clone());
        if &rule.lhs == start {
            rules.push(Rule::new(new_start.clone(), rule.rhs.clone()));
        }
    }
    Grammar::from_rules(new_start, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::tests::example;
    use crate::grammar::{enumerate_language, parse_grammar, sym};

    #[test]
    fn example_is_crf_tnf_and_cnf() {
        let r = check_form(&example());
        assert!(r.is_tnf && r.is_crf && r.is_cnf, "{r}");
        assert!(r.violations.is_empty());
    }

    #[test]
    fn mixed_lengths_violate_tnf() {
        let g = parse_grammar("S -> A B\nA -> A B\nA -> a\nB -> b").unwrap();
        let r = check_form(&g);
        assert!(!r.is_tnf);
        assert!(r.is_crf);
        let v = r
            .violations
            .iter()
            .find(|v| v.form == NormalForm::Term)
            .unwrap();
        assert_eq!(v.rule.lhs, sym("A"));
    }

    #[test]
    fn epsilon_start_is_cnf_only() {
        let g = parse_grammar("S ->").unwrap();
        let r = check_form(&g);
        assert!(r.is_cnf);
        assert!(!r.is_crf);
        assert!(!r.is_tnf);
    }

    #[test]
    fn start_on_rhs_breaks_cnf() {
        let g = parse_grammar("S -> S A\nS -> a\nA -> a").unwrap();
        let r = check_form(&g);
        assert!(r.is_crf && !r.is_cnf);
    }

    #[test]
    fn crf_to_cnf_adds_fresh_start() {
        let g = parse_grammar("S -> S A\nS -> a\nA -> a").unwrap();
        let cnf = crf_to_cnf(&g).unwrap();
        assert_eq!(cnf.start(), &sym("S__0"));
        assert_eq!(
            cnf.to_text(),
            "start: S__0\nS -> S A\nS__0 -> S A\nS -> a\nS__0 -> a\nA -> a\n"
        );
        assert!(check_form(&cnf).is_cnf);
        for len in 0..=6 {
            assert_eq!(
                enumerate_language(&g, len).unwrap(),
                enumerate_language(&cnf, len).unwrap()
            );
        }
    }

    #[test]
    fn crf_to_cnf_identity_cases() {
        let g = parse_grammar("S -> A B\nA -> a\nB -> b").unwrap();
        assert_eq!(crf_to_cnf(&g).unwrap(), g);
        assert_eq!(crf_to_cnf(&example()).unwrap(), example());
    }

    #[test]
    fn crf_to_cnf_precondition() {
        let g = parse_grammar("S -> a b").unwrap();
        assert!(matches!(
            crf_to_cnf(&g),
            Err(GrammarError::Precondition { .. })
        ));
    }
}
