use serde::Serialize;

use super::search::{find_with_eigen, OrderingPair, DEFAULT_MAX_ORDERINGS};
use super::split::{
    construct_split_from_hessenberg, dimension_profile, split_from_formula, split_violations, DimensionProfile,
    SplitDecomposition, SplitViolation,
};
use super::tridiagonal::{three_term_orderings, tridiagonal_verdict, TridiagonalVerdict};
use super::{OrderedEigenData, PairError};
use crate::linalg::Matrix;
use crate::modstruct::{decide_irreducible, IrreducibilityOptions, IrreducibilityStatus, IrreducibilityVerdict};
use crate::spectral::{eigen_structure, EigenStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Cap on the number of orderings of one side's eigenspaces.
    pub max_orderings: u64,
    pub irreducibility: IrreducibilityOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            max_orderings: DEFAULT_MAX_ORDERINGS,
            irreducibility: IrreducibilityOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRoute {
    /// `U_i = V_{d-i,i}`, for pairs known to be irreducible.
    Lattice,
    /// `U_i = (V*_0 + ... + V*_i) ∩ (V_0 + ... + V_{d-i})`, then verified.
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitEntry {
    pub ordering: OrderingPair,
    pub route: SplitRoute,
    pub split: SplitDecomposition,
    /// Empty when `split` is a split decomposition.
    pub violations: Vec<SplitViolation>,
    pub profile: Option<DimensionProfile>,
}

impl SplitEntry {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAnalysisReport {
    pub eigen_a: EigenStructure,
    pub eigen_astar: EigenStructure,
    pub hessenberg_orderings: Vec<OrderingPair>,
    pub irreducibility: IrreducibilityVerdict,
    pub splits: Vec<SplitEntry>,
    pub tridiagonal: TridiagonalVerdict,
}

impl PairAnalysisReport {
    pub fn diagonalizable(&self) -> bool {
        self.eigen_a.diagonalizable && self.eigen_astar.diagonalizable
    }

    pub fn d(&self) -> usize {
        self.eigen_a.d()
    }

    pub fn delta(&self) -> usize {
        self.eigen_astar.d()
    }

    pub fn is_hessenberg_pair(&self) -> bool {
        !self.hessenberg_orderings.is_empty()
    }
}

/// Full analysis of a pair: eigen data, every Hessenberg ordering, the
/// irreducibility verdict, a split candidate per ordering and the
/// tridiagonal status.
///
/// For an irreducible pair each split is built from the `V_ij` lattice and
/// compared with the intersection formula; the two must agree. Otherwise the
/// formula candidate is reported together with its violations.
pub fn analyze_pair(a: &Matrix, astar: &Matrix, opts: &AnalysisOptions) -> Result<PairAnalysisReport, PairError> {
    if a.spec() != astar.spec() || !a.is_square() || !astar.is_square() || a.rows() != astar.rows() {
        return Err(PairError::ShapeMismatch("A and A* must be square of one size over one field".into()));
    }
    let ea = eigen_structure(a)?;
    let eb = eigen_structure(astar)?;
    let irreducibility = decide_irreducible(a, astar, &opts.irreducibility)?;
    if !(ea.diagonalizable && eb.diagonalizable) {
        let tridiagonal = tridiagonal_verdict(Vec::new(), &irreducibility);
        return Ok(PairAnalysisReport {
            eigen_a: ea,
            eigen_astar: eb,
            hessenberg_orderings: Vec::new(),
            irreducibility,
            splits: Vec::new(),
            tridiagonal,
        });
    }
    let hessenberg_orderings = find_with_eigen(&ea, &eb, opts.max_orderings)?;
    let mut splits = Vec::new();
    if ea.d() == eb.d() {
        for ordering in &hessenberg_orderings {
            splits.push(split_entry(a, astar, &ea, &eb, ordering, &irreducibility)?);
        }
    }
    let tridiagonal = tridiagonal_verdict(three_term_orderings(&ea, &eb, &hessenberg_orderings)?, &irreducibility);
    Ok(PairAnalysisReport {
        eigen_a: ea,
        eigen_astar: eb,
        hessenberg_orderings,
        irreducibility,
        splits,
        tridiagonal,
    })
}

fn split_entry(
    a: &Matrix,
    astar: &Matrix,
    ea: &EigenStructure,
    eb: &EigenStructure,
    ordering: &OrderingPair,
    irr: &IrreducibilityVerdict,
) -> Result<SplitEntry, PairError> {
    let oa = OrderedEigenData::new(ea, ordering.order_a.clone())?;
    let ob = OrderedEigenData::new(eb, ordering.order_astar.clone())?;
    let formula = split_from_formula(&oa, &ob)?;
    let (route, split) = if irr.status == IrreducibilityStatus::Irreducible {
        let built = construct_split_from_hessenberg(a, astar, &oa, &ob, irr)?;
        if built != formula {
            return Err(PairError::OracleDisagreement(
                "lattice split differs from the intersection formula".into(),
            ));
        }
        (SplitRoute::Lattice, built)
    } else {
        (SplitRoute::Formula, formula)
    };
    let violations = split_violations(a, astar, &split)?;
    let profile = if violations.is_empty() {
        Some(dimension_profile(&split, &oa, &ob)?)
    } else {
        None
    };
    Ok(SplitEntry { ordering: ordering.clone(), route, split, violations, profile })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::pair::tests::canonical_pair;
    use crate::pair::TridiagonalStatus;

    #[test]
    fn canonical_report() {
        let (a, b) = canonical_pair();
        let r = analyze_pair(&a, &b, &AnalysisOptions::default()).unwrap();
        assert!(r.diagonalizable() && r.is_hessenberg_pair());
        assert_eq!((r.d(), r.delta()), (2, 2));
        assert_eq!(r.splits.len(), r.hessenberg_orderings.len());
        for s in &r.splits {
            assert_eq!(s.route, SplitRoute::Lattice);
            assert!(s.is_valid());
            assert_eq!(s.profile.as_ref().unwrap().split, vec![1, 1, 1]);
        }
        assert_eq!(r.tridiagonal.status, TridiagonalStatus::Tridiagonal);
    }

    #[test]
    fn reducible_pair_uses_formula_route() {
        let q = FieldSpec::rationals();
        let a = Matrix::from_i64(q, &[&[0, 0], &[0, 1]]).unwrap();
        let r = analyze_pair(&a, &a, &AnalysisOptions::default()).unwrap();
        assert_eq!(r.hessenberg_orderings.len(), 4);
        assert!(r.splits.iter().all(|s| s.route == SplitRoute::Formula));
        // U_0 = V*_0 ∩ (V_0 + V_1) = V*_0, U_1 = (V*_0 + V*_1) ∩ V_0 = V_0;
        // valid exactly when the two orderings are mutually reversed.
        let valid: Vec<_> = r.splits.iter().filter(|s| s.is_valid()).map(|s| s.ordering.clone()).collect();
        assert_eq!(
            valid,
            vec![
                OrderingPair { order_a: vec![0, 1], order_astar: vec![1, 0] },
                OrderingPair { order_a: vec![1, 0], order_astar: vec![0, 1] },
            ]
        );
    }

    #[test]
    fn non_diagonalizable_report_is_empty() {
        let q = FieldSpec::rationals();
        let nil = Matrix::from_i64(q, &[&[0, 1], &[0, 0]]).unwrap();
        let r = analyze_pair(&nil, &Matrix::identity(q, 2), &AnalysisOptions::default()).unwrap();
        assert!(!r.diagonalizable());
        assert!(r.hessenberg_orderings.is_empty() && r.splits.is_empty());
    }
}
