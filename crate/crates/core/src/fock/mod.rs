//! Sparse vectors over the Fock space spanned by filler ⊗ role-path basis
//! vectors, the tensor product embedding of terms, and the linear maps that
//! mirror `cat`, `ex` and `cons`.

mod embed;
mod ops;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::grammar::{GrammarError, Symbol};
use crate::lcparser::ParseError;
use crate::term::TermError;

pub use embed::{decode, embed};
pub use ops::{cat_op, cons_op, ex_op, fock_dim, word_operator, word_template};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("role index {index} out of range for role dimension {role_dim}")]
    RoleOutOfRange { index: usize, role_dim: usize },
    #[error("role dimensions differ: {0} vs {1}")]
    RoleDimMismatch(usize, usize),
    #[error("{found} daughters exceed the {max} daughter roles")]
    TooManyDaughters { found: usize, max: usize },
    #[error("vector is not a term embedding: {0}")]
    NotAnEmbedding(String),
    #[error("fock_dim needs m >= 2 and n >= 1, got n = {n}, m = {m}")]
    DimensionDomain { n: u64, m: u64 },
    #[error("dimension overflows")]
    DimensionOverflow,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("composed word operator disagrees with the parser: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// A filler basis symbol: a terminal or nonterminal, or a predicted category `[A]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Filler {
    Symbol(Symbol),
    Predicted(Symbol),
}

impl Filler {
    pub fn parse(token: &str) -> Option<Filler> {
        match token.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            Some(inner) => Symbol::new(inner).ok().map(Filler::Predicted),
            None => Symbol::new(token).ok().map(Filler::Symbol),
        }
    }

    fn token(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Filler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filler::Symbol(s) => write!(f, "{s}"),
            Filler::Predicted(s) => write!(f, "[{s}]"),
        }
    }
}

impl fmt::Debug for Filler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Ordered by printed token so that sorted output is byte-stable.
impl Ord for Filler {
    fn cmp(&self, other: &Self) -> Ordering {
        self.token().cmp(&other.token())
    }
}

impl PartialOrd for Filler {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Role indices, innermost (bound directly to the filler) first.
pub type RolePath = Vec<usize>;

/// A basis vector `|filler r_0 r_1 ...⟩`. Without a filler the key lives in
/// the pure role sector (the vacuum `|m⟩`, or the scalar sector when the
/// path is empty).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKey {
    pub filler: Option<Filler>,
    pub path: RolePath,
}

impl BasisKey {
    pub fn new(filler: Option<Filler>, path: RolePath) -> Self {
        BasisKey { filler, path }
    }

    pub fn filler(filler: Filler) -> Self {
        BasisKey::new(Some(filler), Vec::new())
    }

    fn with_role(&self, role: usize) -> Self {
        let mut path = self.path.clone();
        path.push(role);
        BasisKey::new(self.filler.clone(), path)
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.filler {
            Some(filler) => write!(f, "{filler}")?,
            None => f.write_str("@role")?,
        }
        for r in &self.path {
            write!(f, " {r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

/// A finitely supported vector of the Fock space with `role_dim` roles
/// `0..role_dim`, the last of which is the mother role.
#[derive(Clone, PartialEq)]
pub struct FockVector {
    entries: BTreeMap<BasisKey, f64>,
    role_dim: usize,
}

impl FockVector {
    pub fn zero(role_dim: usize) -> Self {
        FockVector {
            entries: BTreeMap::new(),
            role_dim,
        }
    }

    /// Builds a vector, summing repeated keys and dropping zero coefficients.
    pub fn from_entries(
        role_dim: usize,
        entries: impl IntoIterator<Item = (BasisKey, f64)>,
    ) -> Result<Self, FockError> {
        let mut v = FockVector::zero(role_dim);
        for (key, c) in entries {
            if let Some(&index) = key.path.iter().find(|&&r| r >= role_dim) {
                return Err(FockError::RoleOutOfRange { index, role_dim });
            }
            v.add(key, c);
        }
        Ok(v)
    }

    /// The unit vector `|s⟩` of a single filler.
    pub fn pure_filler(role_dim: usize, filler: Filler) -> Self {
        let mut v = FockVector::zero(role_dim);
        v.add(BasisKey::filler(filler), 1.0);
        v
    }

    fn add(&mut self, key: BasisKey, c: f64) {
        let slot = self.entries.entry(key).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.entries.retain(|_, c| *c != 0.0);
        }
    }

    pub fn role_dim(&self) -> usize {
        self.role_dim
    }

    /// Index of the mother role.
    pub fn mother(&self) -> usize {
        self.role_dim - 1
    }

    pub fn entries(&self) -> &BTreeMap<BasisKey, f64> {
        &self.entries
    }

    pub fn get(&self, key: &BasisKey) -> f64 {
        self.entries.get(key).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fillers occurring in the support.
    pub fn filler_inventory(&self) -> std::collections::BTreeSet<Filler> {
        self.entries
            .keys()
            .filter_map(|k| k.filler.clone())
            .collect()
    }

    /// Direct sum (superposition) with another vector over the same roles.
    pub fn bundle(&self, other: &FockVector) -> Result<FockVector, FockError> {
        if self.role_dim != other.role_dim {
            return Err(FockError::RoleDimMismatch(self.role_dim, other.role_dim));
        }
        let mut out = self.clone();
        for (k, &c) in &other.entries {
            out.add(k.clone(), c);
        }
        Ok(out)
    }

    /// Binds every basis vector to `role` as the new outermost role.
    pub fn bind(&self, role: usize) -> Result<FockVector, FockError> {
        if role >= self.role_dim {
            return Err(FockError::RoleOutOfRange {
                index: role,
                role_dim: self.role_dim,
            });
        }
        Ok(FockVector {
            entries: self
                .entries
                .iter()
                .map(|(k, &c)| (k.with_role(role), c))
                .collect(),
            role_dim: self.role_dim,
        })
    }

    /// Applies `1 ⊗ ⟨role|`: keeps keys whose outermost role is `role` and
    /// strips it. Keys with an empty path are annihilated.
    pub fn unbind(&self, role: usize) -> FockVector {
        FockVector {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| k.path.last() == Some(&role))
                .map(|(k, &c)| {
                    let mut k = k.clone();
                    k.path.pop();
                    (k, c)
                })
                .collect(),
            role_dim: self.role_dim,
        }
    }

    /// One `<coefficient>\t<key>` line per entry, sorted by key.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(k, c)| format!("{c}\t{k}\n"))
            .collect()
    }

    /// Parses the line format written by [`FockVector::to_text`].
    pub fn from_text(text: &str, role_dim: usize) -> Result<FockVector, FockError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let syntax = |message: &str| FockError::Syntax {
                line: i + 1,
                message: message.to_string(),
            };
            if line.trim().is_empty() {
                continue;
            }
            let (coef, key) = line
                .split_once('\t')
                .ok_or_else(|| syntax("expected `<coefficient>\\t<key>`"))?;
            let coef: f64 = coef
                .trim()
                .parse()
                .map_err(|_| syntax("invalid coefficient"))?;
            let mut tokens = key.split(' ');
            let head = tokens.next().unwrap_or_default();
            let filler = match head {
                "@role" => None,
                token => Some(Filler::parse(token).ok_or_else(|| syntax("invalid filler"))?),
            };
            let path = tokens
                .map(|t| t.parse::<usize>().map_err(|_| syntax("invalid role index")))
                .collect::<Result<RolePath, _>>()?;
            entries.push((BasisKey::new(filler, path), coef));
        }
        FockVector::from_entries(role_dim, entries)
    }

    /// Smallest role dimension that accommodates every index in `text`.
    pub fn infer_role_dim(text: &str) -> usize {
        text.lines()
            .filter_map(|l| l.split_once('\t'))
            .flat_map(|(_, key)| key.split(' ').skip(1))
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .map_or(1, |m| m + 1)
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(k, c)| {
                if *c == 1.0 {
                    format!("{k:?}")
                } else {
                    format!("{c}{k:?}")
                }
            })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}
