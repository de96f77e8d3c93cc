//! Hessenberg pairs, split decompositions and tridiagonal pairs.
//!
//! A pair `(A, A*)` of diagonalizable transformations is Hessenberg with
//! respect to orderings `V_0, ..., V_d` of the eigenspaces of `A` and
//! `V*_0, ..., V*_δ` of those of `A*` when
//!
//! ```text
//! A* V_i  ⊆ V_0  + ... + V_{i+1}      (0 <= i <= d)
//! A  V*_i ⊆ V*_0 + ... + V*_{i+1}     (0 <= i <= δ)
//! ```
//!
//! The name comes from upper Hessenberg matrices (zero below the
//! subdiagonal): in a basis adapted to the ordering, `A*` takes that shape
//! block-wise.
//!
//! Orderings are permutations of the canonical eigenvalue order produced by
//! [`eigen_structure`](crate::spectral::eigen_structure); see
//! [`OrderedEigenData`].

mod lattice;
mod report;
mod search;
mod split;
mod tridiagonal;

use serde::Serialize;
use thiserror::Error;

use crate::field::FieldElement;
use crate::linalg::{apply, subspace_contains, sum_all, LinalgError, Matrix, SubspaceBasis};
use crate::modstruct::ModstructError;
use crate::spectral::{EigenStructure, SpectralError};

pub use lattice::{build_vij_lattice, lattice_action_violations, wr_witness, LatticeViolation, VijLattice};
pub use report::{analyze_pair, AnalysisOptions, PairAnalysisReport, SplitRoute, SplitEntry};
pub use search::{find_hessenberg_orderings, find_hessenberg_orderings_unpruned, OrderingPair, DEFAULT_MAX_ORDERINGS};
pub use split::{
    construct_split_from_hessenberg, dimension_profile, flag_equalities, recover_hessenberg_from_split,
    split_from_formula, split_violations, verify_split, DimensionProfile, FlagEquality, SplitDecomposition,
    SplitViolation,
};
pub use tridiagonal::{is_three_term_wrt, is_tridiagonal_pair, TridiagonalStatus, TridiagonalVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    AStar,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::AStar => "A*",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("{0} is not diagonalizable over the field")]
    NotDiagonalizable(Side),
    #[error("ordering search needs {required} orderings of {side}'s eigenspaces, above the cap of {cap}")]
    SearchBudgetExceeded { side: Side, required: u128, cap: u64 },
    #[error("the pair is not Hessenberg with respect to the given orderings")]
    NotHessenberg,
    #[error("the pair is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("irreducibility could not be decided over this field")]
    IrreducibilityUndetermined,
    #[error("d = {d} differs from delta = {delta}")]
    DDeltaMismatch { d: usize, delta: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("candidate is not a split decomposition: {0}")]
    SplitInvalid(String),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("ordering is not a permutation of 0..{0}")]
    BadOrdering(usize),
    #[error("fast path disagrees with oracle: {0}")]
    OracleDisagreement(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Modstruct(#[from] ModstructError),
}

/// An eigen structure together with an ordering of its eigenspaces.
///
/// `order[i]` is the canonical index of the `i`-th eigenspace, so
/// `theta(i) = eigen.eigenvalues[order[i]]`. The flag sums
/// `V_0 + ... + V_i` are computed once on construction.
#[derive(Debug, Clone)]
pub struct OrderedEigenData<'a> {
    eigen: &'a EigenStructure,
    order: Vec<usize>,
    flags: Vec<SubspaceBasis>,
}

impl<'a> OrderedEigenData<'a> {
    pub fn new(eigen: &'a EigenStructure, order: Vec<usize>) -> Result<Self, PairError> {
        let k = eigen.eigenvalues.len();
        let mut seen = vec![false; k];
        if order.len() != k {
            return Err(PairError::BadOrdering(k));
        }
        for &i in &order {
            if i >= k || seen[i] {
                return Err(PairError::BadOrdering(k));
            }
            seen[i] = true;
        }
        let spec = eigen.transform.spec();
        let n = eigen.n();
        let mut flags = Vec::with_capacity(k);
        let mut acc = SubspaceBasis::zero(spec, n);
        for &i in &order {
            acc = sum_all(spec, n, [&acc, &eigen.eigenspaces[i]])?;
            flags.push(acc.clone());
        }
        Ok(OrderedEigenData { eigen, order, flags })
    }

    /// Ascending eigenvalue order.
    pub fn canonical(eigen: &'a EigenStructure) -> Self {
        Self::new(eigen, (0..eigen.eigenvalues.len()).collect()).expect("identity permutation")
    }

    /// Ordering that lists the eigenvalues in the given sequence.
    pub fn from_thetas(eigen: &'a EigenStructure, thetas: &[FieldElement]) -> Result<Self, PairError> {
        let order = thetas
            .iter()
            .map(|t| eigen.index_of(t).ok_or(PairError::BadOrdering(eigen.eigenvalues.len())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(eigen, order)
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self::new(self.eigen, order).expect("reversal of a permutation")
    }

    pub fn eigen(&self) -> &'a EigenStructure {
        self.eigen
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Index of the last eigenspace (`d` for `A`, `δ` for `A*`).
    pub fn d(&self) -> usize {
        self.order.len() - 1
    }

    pub fn theta(&self, i: usize) -> &FieldElement {
        &self.eigen.eigenvalues[self.order[i]]
    }

    pub fn thetas(&self) -> Vec<FieldElement> {
        self.order.iter().map(|&i| self.eigen.eigenvalues[i].clone()).collect()
    }

    pub fn space(&self, i: usize) -> &SubspaceBasis {
        &self.eigen.eigenspaces[self.order[i]]
    }

    /// `V_0 + ... + V_i`, read as `0` for `i < 0` and `V` for `i > d`.
    pub fn flag(&self, i: isize) -> SubspaceBasis {
        let spec = self.eigen.transform.spec();
        let n = self.eigen.n();
        if i < 0 {
            SubspaceBasis::zero(spec, n)
        } else if i as usize >= self.flags.len() {
            SubspaceBasis::full(spec, n)
        } else {
            self.flags[i as usize].clone()
        }
    }

    fn require_diagonalizable(&self, side: Side) -> Result<(), PairError> {
        if self.eigen.diagonalizable {
            Ok(())
        } else {
            Err(PairError::NotDiagonalizable(side))
        }
    }
}

/// Checks that `m` maps each ordered eigenspace `V_i` of `other` into
/// `V_0 + ... + V_{i+1}`.
fn one_sided_hessenberg(m: &Matrix, ord: &OrderedEigenData<'_>) -> Result<bool, PairError> {
    for i in 0..ord.d() {
        let img = apply(m, ord.space(i))?;
        if !subspace_contains(&ord.flag(i as isize + 1), &img)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_ordering_source(m: &Matrix, ord: &OrderedEigenData<'_>) -> Result<(), PairError> {
    if ord.eigen.transform != *m {
        return Err(PairError::ShapeMismatch(
            "ordering was not derived from the given transformation".into(),
        ));
    }
    Ok(())
}

/// Whether `(A, A*)` is Hessenberg with respect to the given orderings.
pub fn is_hessenberg_wrt(
    a: &Matrix,
    astar: &Matrix,
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
) -> Result<bool, PairError> {
    check_ordering_source(a, ord_a)?;
    check_ordering_source(astar, ord_astar)?;
    ord_a.require_diagonalizable(Side::A)?;
    ord_astar.require_diagonalizable(Side::AStar)?;
    Ok(one_sided_hessenberg(astar, ord_a)? && one_sided_hessenberg(a, ord_astar)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::spectral::eigen_structure;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    pub(super) fn canonical_pair() -> (Matrix, Matrix) {
        (
            Matrix::from_i64(q(), &[&[2, 0, 0], &[1, 1, 0], &[0, 1, 0]]).unwrap(),
            Matrix::from_i64(q(), &[&[0, 1, 0], &[0, 1, 1], &[0, 0, 2]]).unwrap(),
        )
    }

    fn ints(xs: &[i64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn canonical_pair_is_hessenberg() {
        let (a, b) = canonical_pair();
        let (ea, eb) = (eigen_structure(&a).unwrap(), eigen_structure(&b).unwrap());
        let oa = OrderedEigenData::from_thetas(&ea, &ints(&[2, 1, 0])).unwrap();
        let ob = OrderedEigenData::from_thetas(&eb, &ints(&[0, 1, 2])).unwrap();
        assert!(is_hessenberg_wrt(&a, &b, &oa, &ob).unwrap());
        // The generating order works as well.
        assert!(is_hessenberg_wrt(&a, &b, &oa.reversed(), &ob).unwrap());
        // V_0 = ker(A - I) is spanned by (0,1,1) and A* moves it off V_0 + V_1.
        let bad = OrderedEigenData::from_thetas(&ea, &ints(&[1, 0, 2])).unwrap();
        assert!(!is_hessenberg_wrt(&a, &b, &bad, &ob).unwrap());
    }

    #[test]
    fn d_one_is_always_hessenberg() {
        let a = Matrix::from_i64(q(), &[&[1, 0], &[0, 3]]).unwrap();
        let b = Matrix::from_i64(q(), &[&[1, 2], &[2, 1]]).unwrap();
        let (ea, eb) = (eigen_structure(&a).unwrap(), eigen_structure(&b).unwrap());
        for oa in [OrderedEigenData::canonical(&ea), OrderedEigenData::canonical(&ea).reversed()] {
            for ob in [OrderedEigenData::canonical(&eb), OrderedEigenData::canonical(&eb).reversed()] {
                assert!(is_hessenberg_wrt(&a, &b, &oa, &ob).unwrap());
            }
        }
    }

    #[test]
    fn swap_permutation_is_not_hessenberg_in_natural_order() {
        let a = Matrix::from_i64(q(), &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]).unwrap();
        let b = Matrix::from_i64(q(), &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).unwrap();
        let (ea, eb) = (eigen_structure(&a).unwrap(), eigen_structure(&b).unwrap());
        let oa = OrderedEigenData::canonical(&ea);
        for ob in [OrderedEigenData::canonical(&eb), OrderedEigenData::canonical(&eb).reversed()] {
            assert!(!is_hessenberg_wrt(&a, &b, &oa, &ob).unwrap());
        }
    }

    #[test]
    fn not_diagonalizable_is_an_error() {
        let nil = Matrix::from_i64(q(), &[&[0, 1], &[0, 0]]).unwrap();
        let id = Matrix::identity(q(), 2);
        let (en, ei) = (eigen_structure(&nil).unwrap(), eigen_structure(&id).unwrap());
        let r = is_hessenberg_wrt(&nil, &id, &OrderedEigenData::canonical(&en), &OrderedEigenData::canonical(&ei));
        assert_eq!(r, Err(PairError::NotDiagonalizable(Side::A)));
    }

    #[test]
    fn bad_orderings_rejected() {
        let (a, _) = canonical_pair();
        let ea = eigen_structure(&a).unwrap();
        assert!(OrderedEigenData::new(&ea, vec![0, 0, 1]).is_err());
        assert!(OrderedEigenData::new(&ea, vec![0, 1]).is_err());
        assert!(OrderedEigenData::from_thetas(&ea, &ints(&[0, 1, 5])).is_err());
    }
}
