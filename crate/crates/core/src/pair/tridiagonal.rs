use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use super::report::AnalysisOptions;
use super::search::{eigen_pair, find_with_eigen, OrderingPair};
use super::{check_ordering_source, OrderedEigenData, PairError, Side};
use crate::linalg::{apply, subspace_contains, sum_all, Matrix};
use crate::modstruct::{decide_irreducible, IrreducibilityStatus, IrreducibilityVerdict};
use crate::spectral::EigenStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TridiagonalStatus {
    Tridiagonal,
    NotTridiagonal,
    /// Three-term orderings exist but irreducibility could not be decided.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TridiagonalVerdict {
    pub status: TridiagonalStatus,
    /// Ordering pairs `(σ, τ)` such that the pair is Hessenberg with respect
    /// to both `(σ, τ)` and `(rev σ, rev τ)`.
    pub orderings: Vec<OrderingPair>,
    pub irreducibility: IrreducibilityStatus,
}

impl TridiagonalVerdict {
    pub fn is_tridiagonal(&self) -> bool {
        self.status == TridiagonalStatus::Tridiagonal
    }
}

/// `m V_i ⊆ V_{i-1} + V_i + V_{i+1}` for every `i` of the ordering.
fn one_sided_three_term(m: &Matrix, ord: &OrderedEigenData<'_>) -> Result<bool, PairError> {
    let (spec, n) = (m.spec(), m.rows());
    let d = ord.d();
    for i in 0..=d {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(d);
        let band = sum_all(spec, n, (lo..=hi).map(|k| ord.space(k)))?;
        if !subspace_contains(&band, &apply(m, ord.space(i))?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Direct three-term test: `A* V_i ⊆ V_{i-1} + V_i + V_{i+1}` and
/// `A V*_i ⊆ V*_{i-1} + V*_i + V*_{i+1}`.
pub fn is_three_term_wrt(
    a: &Matrix,
    astar: &Matrix,
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
) -> Result<bool, PairError> {
    check_ordering_source(a, ord_a)?;
    check_ordering_source(astar, ord_astar)?;
    ord_a.require_diagonalizable(Side::A)?;
    ord_astar.require_diagonalizable(Side::AStar)?;
    Ok(one_sided_three_term(astar, ord_a)? && one_sided_three_term(a, ord_astar)?)
}

fn three_term_side(eigen: &EigenStructure, other: &Matrix) -> Result<Vec<Vec<usize>>, PairError> {
    let k = eigen.eigenvalues.len();
    let mut out = Vec::new();
    for perm in (0..k).permutations(k) {
        let ord = OrderedEigenData::new(eigen, perm)?;
        if one_sided_three_term(other, &ord)? {
            out.push(ord.order().to_vec());
        }
    }
    Ok(out)
}

/// Ordering pairs from the Hessenberg search whose reversal is also in the
/// set, cross-checked against the direct three-term test on every ordering.
pub(crate) fn three_term_orderings(
    ea: &EigenStructure,
    eb: &EigenStructure,
    hessenberg: &[OrderingPair],
) -> Result<Vec<OrderingPair>, PairError> {
    let set: BTreeSet<&OrderingPair> = hessenberg.iter().collect();
    let via_hessenberg: Vec<OrderingPair> = hessenberg
        .iter()
        .filter(|p| set.contains(&p.reversed()))
        .cloned()
        .collect();
    let direct: Vec<OrderingPair> = three_term_side(ea, &eb.transform)?
        .into_iter()
        .cartesian_product(three_term_side(eb, &ea.transform)?)
        .map(|(order_a, order_astar)| OrderingPair { order_a, order_astar })
        .collect();
    if via_hessenberg != direct {
        return Err(PairError::OracleDisagreement(format!(
            "{} ordering pairs Hessenberg in both directions, {} satisfy the three-term test",
            via_hessenberg.len(),
            direct.len()
        )));
    }
    Ok(via_hessenberg)
}

pub(crate) fn tridiagonal_verdict(orderings: Vec<OrderingPair>, irr: &IrreducibilityVerdict) -> TridiagonalVerdict {
    let status = if orderings.is_empty() {
        TridiagonalStatus::NotTridiagonal
    } else {
        match irr.status {
            IrreducibilityStatus::Irreducible => TridiagonalStatus::Tridiagonal,
            IrreducibilityStatus::Reducible => TridiagonalStatus::NotTridiagonal,
            IrreducibilityStatus::Undetermined => TridiagonalStatus::Undetermined,
        }
    };
    TridiagonalVerdict { status, orderings, irreducibility: irr.status }
}

/// Decides whether `(A, A*)` is a tridiagonal pair: irreducible and
/// Hessenberg with respect to some `(σ, τ)` and also `(rev σ, rev τ)`.
///
/// Non-diagonalizable input is not tridiagonal. Eigenvalues outside the
/// field are an error, as is a disagreement between the Hessenberg route and
/// the direct three-term check.
pub fn is_tridiagonal_pair(
    a: &Matrix,
    astar: &Matrix,
    opts: &AnalysisOptions,
) -> Result<TridiagonalVerdict, PairError> {
    let irr = decide_irreducible(a, astar, &opts.irreducibility)?;
    let (ea, eb) = match eigen_pair(a, astar) {
        Ok(pair) => pair,
        Err(PairError::NotDiagonalizable(_)) => {
            return Ok(TridiagonalVerdict {
                status: TridiagonalStatus::NotTridiagonal,
                orderings: Vec::new(),
                irreducibility: irr.status,
            })
        }
        Err(e) => return Err(e),
    };
    let hess = find_with_eigen(&ea, &eb, opts.max_orderings)?;
    let orderings = three_term_orderings(&ea, &eb, &hess)?;
    Ok(tridiagonal_verdict(orderings, &irr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::pair::tests::canonical_pair;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn canonical_pair_is_tridiagonal() {
        // With d = 2 the three-term conditions only constrain V_0 and V_2,
        // and the bidiagonal shapes satisfy them in both directions.
        let (a, b) = canonical_pair();
        let v = is_tridiagonal_pair(&a, &b, &AnalysisOptions::default()).unwrap();
        assert_eq!(v.status, TridiagonalStatus::Tridiagonal);
        assert_eq!(v.irreducibility, IrreducibilityStatus::Irreducible);
        assert!(v.orderings.contains(&OrderingPair { order_a: vec![0, 1, 2], order_astar: vec![0, 1, 2] }));
    }

    #[test]
    fn leonard_pair_on_three_dimensions() {
        // Self-dual Krawtchouk pair: A* acts on the eigenbasis of A as A
        // acts on that of A*.
        let a = Matrix::from_i64(q(), &[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]).unwrap();
        let b = Matrix::from_i64(q(), &[&[0, 1, 0], &[2, 0, 2], &[0, 1, 0]]).unwrap();
        let v = is_tridiagonal_pair(&a, &b, &AnalysisOptions::default()).unwrap();
        assert_eq!(v.status, TridiagonalStatus::Tridiagonal);
        assert_eq!(v.orderings.len(), 4);
        assert!(v.orderings.iter().all(|p| v.orderings.contains(&p.reversed())));
    }

    #[test]
    fn two_dimensional_irreducible_pairs_are_tridiagonal() {
        let a = Matrix::from_i64(q(), &[&[1, 0], &[0, 3]]).unwrap();
        let b = Matrix::from_i64(q(), &[&[1, 2], &[2, 1]]).unwrap();
        let v = is_tridiagonal_pair(&a, &b, &AnalysisOptions::default()).unwrap();
        assert!(v.is_tridiagonal());
        assert_eq!(v.orderings.len(), 4);
    }

    #[test]
    fn commuting_pair_is_reducible() {
        let a = Matrix::from_i64(q(), &[&[1, 0], &[0, 3]]).unwrap();
        let v = is_tridiagonal_pair(&a, &a, &AnalysisOptions::default()).unwrap();
        assert_eq!(v.status, TridiagonalStatus::NotTridiagonal);
        assert_eq!(v.irreducibility, IrreducibilityStatus::Reducible);
    }

    #[test]
    fn non_diagonalizable_is_not_tridiagonal() {
        let nil = Matrix::from_i64(q(), &[&[0, 1], &[0, 0]]).unwrap();
        let b = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]).unwrap();
        let v = is_tridiagonal_pair(&nil, &b, &AnalysisOptions::default()).unwrap();
        assert_eq!(v.status, TridiagonalStatus::NotTridiagonal);
    }

    #[test]
    fn three_term_direct_check() {
        let a = Matrix::from_i64(q(), &[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]).unwrap();
        let b = Matrix::from_i64(q(), &[&[0, 1, 0], &[2, 0, 2], &[0, 1, 0]]).unwrap();
        let ea = crate::spectral::eigen_structure(&a).unwrap();
        let eb = crate::spectral::eigen_structure(&b).unwrap();
        let oa = OrderedEigenData::canonical(&ea);
        let ob = OrderedEigenData::canonical(&eb);
        assert!(is_three_term_wrt(&a, &b, &oa, &ob).unwrap());
        let scrambled = OrderedEigenData::new(&ea, vec![1, 0, 2]).unwrap();
        assert!(!is_three_term_wrt(&a, &b, &scrambled, &ob).unwrap());
    }
}
