use super::{decode, embed, Filler, FockError, FockVector};
use crate::grammar::{Grammar, Symbol};
use crate::lcparser;
use crate::term::signature_of;

/// `(1 ⊗ ⟨m|) v` for the mother role `m`.
pub fn cat_op(v: &FockVector) -> FockVector {
    v.unbind(v.mother())
}

/// `(1 ⊗ ⟨i|) v` for a daughter role `i < m`.
pub fn ex_op(v: &FockVector, i: usize) -> Result<FockVector, FockError> {
    if i >= v.mother() {
        return Err(FockError::RoleOutOfRange {
            index: i,
            role_dim: v.role_dim(),
        });
    }
    Ok(v.unbind(i))
}

/// `a ⊗ |m⟩ ⊕ u_0 ⊗ |0⟩ ⊕ ... ⊕ u_k ⊗ |k⟩`.
pub fn cons_op(a: &FockVector, children: &[FockVector]) -> Result<FockVector, FockError> {
    let m = a.mother();
    if children.len() > m {
        return Err(FockError::TooManyDaughters {
            found: children.len(),
            max: m,
        });
    }
    let mut out = a.bind(m)?;
    for (i, child) in children.iter().enumerate() {
        if child.role_dim() != a.role_dim() {
            return Err(FockError::RoleDimMismatch(a.role_dim(), child.role_dim()));
        }
        out = out.bundle(&child.bind(i)?)?;
    }
    Ok(out)
}

/// Action of the meaning of word `a` on a parser state vector: decode the
/// state, let the left-corner parser integrate `a`, and re-embed.
///
/// When [`word_template`] applies, its value is computed as well and any
/// disagreement is reported as [`FockError::CrossCheck`].
pub fn word_operator(g: &Grammar, a: &Symbol, v: &FockVector) -> Result<FockVector, FockError> {
    let sig = signature_of(g)?;
    let state = decode(v, &sig)?;
    let next = lcparser::advance(g, &state, a)?;
    let out = embed(&next, &sig)?;
    if let Some(expected) = word_template(g, a, v)? {
        if expected != out {
            return Err(FockError::CrossCheck(format!(
                "parser gives {out:?}, operators give {expected:?}"
            )));
        }
    }
    Ok(out)
}

fn is_pure_filler(v: &FockVector) -> Option<&Filler> {
    match v.entries().iter().next() {
        Some((k, &c)) if v.len() == 1 && c == 1.0 && k.path.is_empty() => k.filler.as_ref(),
        _ => None,
    }
}

/// Word meaning composed from `cat_op`, `ex_op` and `cons_op` alone, for
/// states whose next transition has the shape
///
/// `cons(|Y⟩, cons(cat v, ex_0 v, ..., ex_{r-2} v, cons(|B⟩, |a⟩)), |[γ_1]⟩, ...)`:
///
/// the root `A` of the state has its last daughter predicted as `[B]`, all
/// earlier daughters are complete, `B -> a` is the only rule starting with
/// `a`, and `Y -> A γ` with nonempty `γ` is the only rule starting with `A`.
/// Returns `None` for states outside that shape.
pub fn word_template(
    g: &Grammar,
    a: &Symbol,
    v: &FockVector,
) -> Result<Option<FockVector>, FockError> {
    let dim = v.role_dim();
    let root = cat_op(v);
    let Some(Filler::Symbol(cat)) = is_pure_filler(&root) else {
        return Ok(None);
    };
    let r = g.rules_for(cat).next().map_or(0, |rule| rule.rhs.len());
    if r == 0 || r > v.mother() {
        return Ok(None);
    }
    let last = ex_op(v, r - 1)?;
    let Some(Filler::Predicted(b)) = is_pure_filler(&last) else {
        return Ok(None);
    };
    let mut daughters = Vec::with_capacity(r);
    for i in 0..r - 1 {
        let d = ex_op(v, i)?;
        if d.is_empty()
            || d.filler_inventory()
                .iter()
                .any(|f| matches!(f, Filler::Predicted(_)))
        {
            return Ok(None);
        }
        daughters.push(d);
    }

    let lexical: Vec<_> = g
        .rules()
        .iter()
        .filter(|rule| rule.rhs.first() == Some(a))
        .collect();
    if lexical.len() != 1 || lexical[0].lhs != *b || lexical[0].rhs.len() != 1 {
        return Ok(None);
    }
    let projecting: Vec<_> = g
        .rules()
        .iter()
        .filter(|rule| rule.rhs.first() == Some(cat))
        .collect();
    if projecting.len() != 1 || projecting[0].rhs.len() < 2 {
        return Ok(None);
    }
    let rule = projecting[0];

    let pure = |s: &Symbol| FockVector::pure_filler(dim, Filler::Symbol(s.clone()));
    daughters.push(cons_op(&pure(b), &[pure(a)])?);
    let filled = cons_op(&root, &daughters)?;
    let mut slots = vec![filled];
    slots.extend(
        rule.rhs[1..]
            .iter()
            .map(|s| FockVector::pure_filler(dim, Filler::Predicted(s.clone()))),
    );
    Ok(Some(cons_op(&pure(&rule.lhs), &slots)?))
}

/// Nominal dimension `n (m^(p+1) - 1) / (m - 1) + m` of the Fock space
/// truncated at embedding depth `p`, for `n` fillers and `m` roles.
pub fn fock_dim(n: u64, m: u64, p: u32) -> Result<u128, FockError> {
    if m < 2 || n < 1 {
        return Err(FockError::DimensionDomain { n, m });
    }
    let (n, m) = (u128::from(n), u128::from(m));
    let power = p
        .checked_add(1)
        .and_then(|e| m.checked_pow(e))
        .ok_or(FockError::DimensionOverflow)?;
    ((power - 1) / (m - 1))
        .checked_mul(n)
        .and_then(|q| q.checked_add(m))
        .ok_or(FockError::DimensionOverflow)
}
