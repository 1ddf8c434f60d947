use std::collections::BTreeMap;

use super::{BasisKey, Filler, FockError, FockVector, RolePath};
use crate::term::{Signature, Term};

/// Tensor product embedding of a term over `sig`.
///
/// A node `A(t_0, ..., t_k)` maps to `|A m⟩ ⊕ ⊕_i embed(t_i) ⊗ |i⟩`, where
/// `m = sig.max_arity()` is the mother role. Constants and predicted
/// categories map to their pure filler vectors; the empty tree maps to the
/// vacuum `|m⟩`.
pub fn embed(t: &Term, sig: &Signature) -> Result<FockVector, FockError> {
    sig.validate(t)?;
    let m = sig.max_arity();
    let mut keys = Vec::new();
    collect(t, m, &mut Vec::new(), &mut keys);
    FockVector::from_entries(m + 1, keys.into_iter().map(|k| (k, 1.0)))
}

// `outer` holds the daughter roles from the root down to `t`.
fn collect(t: &Term, m: usize, outer: &mut Vec<usize>, out: &mut Vec<BasisKey>) {
    let key = |filler: Option<Filler>, inner: Option<usize>| {
        let path: RolePath = inner
            .into_iter()
            .chain(outer.iter().rev().copied())
            .collect();
        BasisKey::new(filler, path)
    };
    match t {
        Term::Empty => out.push(key(None, Some(m))),
        Term::Leaf(a) => out.push(key(Some(Filler::Symbol(a.clone())), None)),
        Term::Predicted(a) => out.push(key(Some(Filler::Predicted(a.clone())), None)),
        Term::Node(a, children) => {
            out.push(key(Some(Filler::Symbol(a.clone())), Some(m)));
            for (i, child) in children.iter().enumerate() {
                outer.push(i);
                collect(child, m, outer, out);
                outer.pop();
            }
        }
    }
}

enum Slot {
    Node(Filler),
    Atom(Filler),
}

/// Inverse of [`embed`] on its image. Anything else, including scaled or
/// superposed embeddings, is rejected.
pub fn decode(v: &FockVector, sig: &Signature) -> Result<Term, FockError> {
    let m = sig.max_arity();
    let bad = |msg: String| FockError::NotAnEmbedding(msg);
    if v.role_dim() != m + 1 {
        return Err(FockError::RoleDimMismatch(v.role_dim(), m + 1));
    }
    if v.len() == 1 && v.get(&BasisKey::new(None, vec![m])) == 1.0 {
        return Ok(Term::Empty);
    }

    // tree address (root first) -> slot
    let mut slots: BTreeMap<Vec<usize>, Slot> = BTreeMap::new();
    for (key, &c) in v.entries() {
        if c != 1.0 {
            return Err(bad(format!("coefficient {c} on |{key}⟩")));
        }
        let filler = key
            .filler
            .clone()
            .ok_or_else(|| bad(format!("role-only component |{key}⟩")))?;
        let (slot, inner) = match key.path.first() {
            Some(&r) if r == m => (Slot::Node(filler), &key.path[1..]),
            _ => (Slot::Atom(filler), &key.path[..]),
        };
        let address: Vec<usize> = inner.iter().rev().copied().collect();
        if slots.insert(address, slot).is_some() {
            return Err(bad(format!("two fillers at the position of |{key}⟩")));
        }
    }
    let mut used = 0;
    let t = build(&slots, &mut Vec::new(), sig, &mut used)?;
    if used != slots.len() {
        return Err(bad("components outside the tree".into()));
    }
    Ok(t)
}

fn build(
    slots: &BTreeMap<Vec<usize>, Slot>,
    address: &mut Vec<usize>,
    sig: &Signature,
    used: &mut usize,
) -> Result<Term, FockError> {
    let bad = |msg: String| FockError::NotAnEmbedding(msg);
    let slot = slots
        .get(address)
        .ok_or_else(|| bad(format!("no filler at position {address:?}")))?;
    *used += 1;
    match slot {
        Slot::Atom(Filler::Predicted(a)) => match sig.predicted_rank(a) {
            Some(_) => Ok(Term::Predicted(a.clone())),
            None => Err(bad(format!("[{a}] is not a predicted category"))),
        },
        Slot::Atom(Filler::Symbol(a)) => match sig.rank(a) {
            Some(0) => Ok(Term::Leaf(a.clone())),
            _ => Err(bad(format!("{a} is not a constant"))),
        },
        Slot::Node(Filler::Symbol(a)) => {
            let rank = match sig.rank(a) {
                Some(r) if r > 0 => r,
                _ => return Err(bad(format!("{a} is not a function symbol"))),
            };
            let mut children = Vec::with_capacity(rank);
            for i in 0..rank {
                address.push(i);
                let child = build(slots, address, sig, used);
                address.pop();
                children.push(child?);
            }
            Ok(Term::Node(a.clone(), children))
        }
        Slot::Node(f) => Err(bad(format!("{f} bound to the mother role"))),
    }
}
