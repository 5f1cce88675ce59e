//! The two descending/ascending chains attached to a graded CR algebra.
//!
//! The Freeman chain starts from the isotropy subalgebra `q` and repeatedly
//! keeps the elements whose brackets with `q̄` stay inside the previous term
//! plus `q̄`.  It always contains `q ∩ q̄`, so it either stabilizes there —
//! the finitely nondegenerate case, with the stabilization index giving the
//! nondegeneracy order — or strictly above it.  The Tanaka chain grows the
//! real span of `q + q̄` by brackets until it fills the real form.

use std::collections::BTreeMap;

use crate::linalg::{LinalgError, Matrix, SubspacePresentation};
use crate::scalar::GaussianRational;

use super::graded::{combine_rows, realify, residual, GradedComplexSubspace, GradedRealSubspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreemanStatus {
    /// The chain reached `q ∩ q̄`; `order` is the first index `k` with
    /// `q_{k-1} = q ∩ q̄`.
    FinitelyNondegenerate { order: i64 },
    /// The chain stabilized strictly above `q ∩ q̄`.
    HolomorphicallyDegenerate,
    /// The chain kept moving past the step budget.
    InconclusiveAtBudget,
}

#[derive(Debug, Clone)]
pub struct FreemanChain {
    /// `terms[i]` is the chain term of index `i - 1`, so `terms[0] = q`.
    /// Consecutive entries are distinct; the last one is stable unless the
    /// status is inconclusive.
    pub terms: Vec<GradedComplexSubspace>,
    pub status: FreemanStatus,
}

impl FreemanChain {
    /// The chain term of index `p ≥ -1`, extended by stability past the
    /// computed prefix.
    pub fn term(&self, p: i64) -> &GradedComplexSubspace {
        assert!(p >= -1);
        let idx = ((p + 1) as usize).min(self.terms.len() - 1);
        &self.terms[idx]
    }

    pub fn total_dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.total_dim()).collect()
    }
}

/// One Freeman refinement: the subspace of `prev` whose brackets with
/// `qbar` land in `prev + qbar`, computed degree by degree.
fn freeman_step(
    prev: &GradedComplexSubspace,
    qbar: &GradedComplexSubspace,
) -> Result<GradedComplexSubspace, LinalgError> {
    let alg = prev.algebra().clone();
    let max = prev.max_degree();
    let mut out = GradedComplexSubspace::zero(&alg, max);
    for d in -2..=max {
        let piece = prev.piece(d);
        if piece.dim() == 0 {
            continue;
        }
        let basis = prev.elements(d);
        let mut constraints: Vec<Vec<GaussianRational>> = Vec::new();
        for e in -2..=max {
            let f = d + e;
            if !(-2..=max).contains(&f) {
                continue;
            }
            let ys = qbar.elements(e);
            if ys.is_empty() {
                continue;
            }
            let target = prev.piece(f).sum(qbar.piece(f))?;
            if target.dim() == alg.dim(f) {
                continue;
            }
            for y in &ys {
                let residuals: Vec<Vec<GaussianRational>> = basis
                    .iter()
                    .map(|b| residual(&target, &alg.coordinates(&alg.bracket(b, y))))
                    .collect();
                for l in 0..alg.dim(f) {
                    if residuals.iter().any(|r| !r[l].is_zero()) {
                        constraints.push(residuals.iter().map(|r| r[l].clone()).collect());
                    }
                }
            }
        }
        if constraints.is_empty() {
            out.set_piece(d, piece.clone());
            continue;
        }
        let kernel = Matrix::from_rows(constraints).kernel_basis();
        let rows = combine_rows(piece.basis_rows(), &kernel);
        out.set_piece(d, SubspacePresentation::from_spanning(alg.component(d), &rows)?);
    }
    Ok(out)
}

pub(crate) fn freeman_chain(
    q: &GradedComplexSubspace,
    budget: usize,
) -> Result<FreemanChain, LinalgError> {
    let qbar = q.conjugate()?;
    let stable_floor = q.intersect(&qbar)?;
    let mut terms = vec![q.clone()];
    let status = loop {
        let prev = terms.last().unwrap();
        let next = freeman_step(prev, &qbar)?;
        if next.equals(prev)? {
            if prev.equals(&stable_floor)? {
                break FreemanStatus::FinitelyNondegenerate { order: terms.len() as i64 - 1 };
            }
            break FreemanStatus::HolomorphicallyDegenerate;
        }
        if terms.len() > budget {
            break FreemanStatus::InconclusiveAtBudget;
        }
        terms.push(next);
    };
    Ok(FreemanChain { terms, status })
}

/// The closed form the Freeman chain takes for the graded pairs in this
/// crate: the term of index `idx ≥ 0` keeps `q` in degrees at least `idx`,
/// drops it in negative degrees, and is cut to `q ∩ q̄` in between.
pub fn freeman_profile(
    q: &GradedComplexSubspace,
    idx: i64,
) -> Result<GradedComplexSubspace, LinalgError> {
    assert!(idx >= -1);
    if idx == -1 {
        return Ok(q.clone());
    }
    let qbar = q.conjugate()?;
    let alg = q.algebra().clone();
    let mut out = GradedComplexSubspace::zero(&alg, q.max_degree());
    for d in 0..=q.max_degree() {
        if d >= idx {
            out.set_piece(d, q.piece(d).clone());
        } else {
            out.set_piece(d, q.piece(d).intersect(qbar.piece(d))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct TanakaChain {
    /// `terms[0]` is the real span of `q + q̄`; each further term adds the
    /// brackets with `terms[0]`.  The last two computed terms agree.
    pub terms: Vec<GradedRealSubspace>,
    /// Whether the stable term is the full real form of the pair.
    pub reaches_full_algebra: bool,
}

impl TanakaChain {
    /// Number of distinct terms; the index `μ` with `g_{-μ}` stable.
    pub fn depth(&self) -> usize {
        self.terms.len()
    }
}

pub(crate) fn tanaka_chain(
    g_hat: &GradedComplexSubspace,
    q: &GradedComplexSubspace,
    budget: usize,
) -> Result<TanakaChain, LinalgError> {
    let alg = q.algebra().clone();
    let max = q.max_degree();
    let first = q.sum(&q.conjugate()?)?.real_points()?;
    let full = g_hat.real_points()?;
    let mut terms = vec![first.clone()];
    loop {
        let prev = terms.last().unwrap();
        let mut new_rows: BTreeMap<i64, Vec<Vec<crate::scalar::Rational>>> = BTreeMap::new();
        for d1 in -2..=max {
            let xs = first.elements(d1);
            if xs.is_empty() {
                continue;
            }
            for d2 in -2..=max {
                let f = d1 + d2;
                if !(-2..=max).contains(&f) {
                    continue;
                }
                for x in &xs {
                    for y in prev.elements(d2) {
                        let b = alg.bracket(x, &y);
                        if !b.is_zero() {
                            new_rows.entry(f).or_default().push(realify(&alg.coordinates(&b)));
                        }
                    }
                }
            }
        }
        let mut pieces = BTreeMap::new();
        for (d, rows) in new_rows {
            pieces.insert(
                d,
                SubspacePresentation::from_spanning(super::graded::real_ambient(&alg, d), &rows)?,
            );
        }
        let next = prev.sum(&GradedRealSubspace::from_pieces(&alg, max, pieces))?;
        if next.equals(prev)? {
            let reaches = next.equals(&full)?;
            return Ok(TanakaChain { terms, reaches_full_algebra: reaches });
        }
        terms.push(next);
        if terms.len() > budget {
            let reaches = terms.last().unwrap().equals(&full)?;
            return Ok(TanakaChain { terms, reaches_full_algebra: reaches });
        }
    }
}
