//! Fock space trajectories of interactive parses and their projection onto
//! principal components.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::fock::{embed, fock_dim, BasisKey, FockError, FockVector};
use crate::grammar::{Grammar, GrammarError, Symbol};
use crate::lcparser::{interactive_parse, InteractiveFailure};
use crate::term::{signature_of, Term};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("parse failed: {0}")]
    Parse(#[from] InteractiveFailure),
    #[error("k = {k} outside 1..={max}")]
    ComponentCount { k: usize, max: usize },
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// State vectors of an interactive parse, one per step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// The operation leaving each state: `shift <word>` or `accept`.
    pub labels: Vec<String>,
    pub trees: Vec<Term>,
    pub vectors: Vec<FockVector>,
    /// Nominal dimension of the Fock subspace at each tree's depth.
    pub dims: Vec<u128>,
}

pub fn trajectory(g: &Grammar, sentence: &[Symbol]) -> Result<Trajectory, AnalysisError> {
    let sig = signature_of(g)?;
    let trees = interactive_parse(g, sentence)?;
    let n = sig.filler_count() as u64;
    let m = sig.max_arity() as u64 + 1;
    let mut vectors = Vec::with_capacity(trees.len());
    let mut dims = Vec::with_capacity(trees.len());
    for t in &trees {
        vectors.push(embed(t, &sig)?);
        dims.push(fock_dim(n, m, t.depth() as u32)?);
    }
    let labels = sentence
        .iter()
        .map(|w| format!("shift {w}"))
        .chain(std::iter::once("accept".to_string()))
        .collect();
    Ok(Trajectory {
        labels,
        trees,
        vectors,
        dims,
    })
}

/// Dense rows over the sorted union of all keys occurring in `vs`.
pub fn densify(vs: &[FockVector]) -> Result<(DMatrix<f64>, Vec<BasisKey>), AnalysisError> {
    if let Some(first) = vs.first() {
        if let Some(v) = vs.iter().find(|v| v.role_dim() != first.role_dim()) {
            return Err(FockError::RoleDimMismatch(first.role_dim(), v.role_dim()).into());
        }
    }
    let mut columns: BTreeMap<&BasisKey, usize> = vs
        .iter()
        .flat_map(|v| v.entries().keys())
        .map(|k| (k, 0))
        .collect();
    for (i, col) in columns.values_mut().enumerate() {
        *col = i;
    }
    let mut x = DMatrix::zeros(vs.len(), columns.len());
    for (row, v) in vs.iter().enumerate() {
        for (k, &c) in v.entries() {
            x[(row, columns[k])] = c;
        }
    }
    Ok((x, columns.into_keys().cloned().collect()))
}

#[derive(Debug, Clone)]
pub struct PcaResult {
    /// One row per input vector, one column per component.
    pub projected: DMatrix<f64>,
    /// Orthonormal components as rows over `basis_index`.
    pub components: DMatrix<f64>,
    /// Variance along each component, with denominator `#vectors - 1`.
    pub explained_variance: Vec<f64>,
    pub basis_index: Vec<BasisKey>,
}

/// Projects the mean-centered, densified vectors onto their top `k`
/// principal components.
///
/// Each component is signed so that its entry of largest magnitude is
/// positive. Directions without variance are completed to an orthonormal
/// set and report zero variance.
pub fn pca_project(vs: &[FockVector], k: usize) -> Result<PcaResult, AnalysisError> {
    let (x, basis_index) = densify(vs)?;
    let (rows, cols) = x.shape();
    let max = rows.min(cols);
    if k == 0 || k > max {
        return Err(AnalysisError::ComponentCount { k, max });
    }
    let mean = x.row_mean();
    let mut centered = x;
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }

    let svd = centered.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let denom = rows.saturating_sub(1).max(1) as f64;
    let mut components: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut explained_variance = Vec::with_capacity(k);
    let candidates = order
        .iter()
        .map(|&i| (v_t.row(i).transpose(), svd.singular_values[i]))
        .chain((0..cols).map(|j| (DVector::from_fn(cols, |r, _| f64::from(r == j)), 0.0)));
    for (direction, sigma) in candidates {
        if components.len() == k {
            break;
        }
        let Some(c) = orthonormalize(direction, &components) else {
            continue;
        };
        components.push(c);
        explained_variance.push(if rows > 1 { sigma * sigma / denom } else { 0.0 });
    }
    for c in &mut components {
        let pivot = c.iamax();
        if c[pivot] < 0.0 {
            c.neg_mut();
        }
    }

    let components = DMatrix::from_fn(k, cols, |i, j| components[i][j]);
    let projected = &centered * components.transpose();
    Ok(PcaResult {
        projected,
        components,
        explained_variance,
        basis_index,
    })
}

fn orthonormalize(mut v: DVector<f64>, basis: &[DVector<f64>]) -> Option<DVector<f64>> {
    for b in basis {
        let overlap = b.dot(&v);
        v.axpy(-overlap, b, 1.0);
    }
    let norm = v.norm();
    (norm > 1e-6).then(|| v / norm)
}

/// Formats `x` in positional notation with 17 significant digits, enough to
/// read back the identical double.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.16}");
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    } else if (exp as usize) < digits.len() - 1 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{sign}{int}.{frac}")
    } else {
        let zeros = "0".repeat(exp as usize + 1 - digits.len());
        format!("{sign}{digits}{zeros}")
    }
}

/// CSV with header `label,pc1,...,pck` and one row per label.
pub fn to_csv(labels: &[String], projected: &DMatrix<f64>) -> String {
    let mut out = String::from("label");
    for j in 1..=projected.ncols() {
        out.push_str(&format!(",pc{j}"));
    }
    out.push('\n');
    for (label, row) in labels.iter().zip(projected.row_iter()) {
        out.push_str(label);
        for x in row.iter() {
            out.push(',');
            out.push_str(&format_sig17(*x));
        }
        out.push('\n');
    }
    out
}

/// Reads back the output of [`to_csv`].
pub fn parse_csv(text: &str) -> Result<(Vec<String>, DMatrix<f64>), AnalysisError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| AnalysisError::Csv {
        line: 1,
        message: "missing header".into(),
    })?;
    let k = header.split(',').count() - 1;
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let err = |message: &str| AnalysisError::Csv {
            line: i + 2,
            message: message.into(),
        };
        let mut fields = line.split(',');
        labels.push(fields.next().unwrap_or_default().to_string());
        let row = fields
            .map(|f| f.parse::<f64>().map_err(|_| err("invalid number")))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != k {
            return Err(err("wrong number of fields"));
        }
        values.extend(row);
    }
    Ok((
        labels.clone(),
        DMatrix::from_row_slice(labels.len(), k, &values),
    ))
}
