//! Slow reference implementations, kept independent of the fast paths they
//! check.

use itertools::Itertools;
use serde::Serialize;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::modstruct::{decide_irreducible, verify_invariant, IrreducibilityStatus, ModstructError};
use crate::pair::{
    find_hessenberg_orderings, find_hessenberg_orderings_unpruned, AnalysisOptions, PairError,
};

/// Default cap on the number of subspaces examined by [`enumerate_subspaces`].
pub const DEFAULT_SUBSPACE_BUDGET: u64 = 1 << 20;

/// Number of subspaces of `GF(q)^n` of every dimension `1..n` (proper,
/// nonzero), or `None` over `Q` or on overflow.
pub fn proper_subspace_count(spec: FieldSpec, n: usize) -> Option<u64> {
    let q = spec.order()? as u128;
    let mut total: u128 = 0;
    for k in 1..n {
        // Gaussian binomial [n choose k]_q.
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..k {
            num = num.checked_mul(q.checked_pow((n - i) as u32)? - 1)?;
            den = den.checked_mul(q.checked_pow((i + 1) as u32)? - 1)?;
        }
        total = total.checked_add(num / den)?;
    }
    u64::try_from(total).ok()
}

/// Every proper nonzero subspace of `GF(q)^n`, each produced once as its
/// reduced row echelon basis: for each pivot set, every filling of the
/// entries right of a pivot that are not themselves pivot columns.
pub fn enumerate_subspaces(spec: FieldSpec, n: usize) -> impl Iterator<Item = SubspaceBasis> {
    let elems: Vec<FieldElement> = spec.elements().map(|e| e.collect()).unwrap_or_default();
    (1..n).flat_map(move |k| {
        let elems = elems.clone();
        (0..n).combinations(k).flat_map(move |pivots| {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &p)| ((p + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let elems = elems.clone();
            let pivots = pivots.clone();
            std::iter::repeat_n(elems.clone(), free.len())
                .multi_cartesian_product()
                .map(move |fill| {
                    let mut rows = vec![vec![spec.zero(); n]; k];
                    for (r, &p) in pivots.iter().enumerate() {
                        rows[r][p] = spec.one();
                    }
                    for (&(r, c), x) in free.iter().zip(fill) {
                        rows[r][c] = x;
                    }
                    SubspaceBasis::from_rows_unchecked(spec, n, rows)
                })
        })
    })
}

/// Exhaustive irreducibility: the first proper nonzero subspace invariant
/// under both matrices, or `None` when there is none. Only for finite
/// fields with at most `budget` proper subspaces.
pub fn brute_force_invariant_subspace(
    a: &Matrix,
    astar: &Matrix,
    budget: u64,
) -> Result<Option<Option<SubspaceBasis>>, ModstructError> {
    let (spec, n) = (a.spec(), a.rows());
    match proper_subspace_count(spec, n) {
        Some(c) if c <= budget => {}
        _ => return Ok(None),
    }
    for w in enumerate_subspaces(spec, n) {
        if verify_invariant(&w, a, astar)? {
            return Ok(Some(Some(w)));
        }
    }
    Ok(Some(None))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    /// Pruned ordering search equals the unpruned brute force.
    pub orderings_agree: bool,
    pub orderings_found: usize,
    /// `None` when the all-subspace enumeration is out of reach (over `Q`
    /// or above the budget).
    pub irreducibility_agrees: Option<bool>,
    pub fast_irreducibility: IrreducibilityStatus,
    pub oracle_irreducible: Option<bool>,
}

impl OracleReport {
    pub fn all_agree(&self) -> bool {
        self.orderings_agree && self.irreducibility_agrees != Some(false)
    }
}

/// Runs the fast paths and their oracles side by side. A non-diagonalizable
/// pair skips the ordering comparison (both sides reject it).
pub fn compare_with_oracles(
    a: &Matrix,
    astar: &Matrix,
    opts: &AnalysisOptions,
    subspace_budget: u64,
) -> Result<OracleReport, PairError> {
    let (orderings_agree, orderings_found) = match find_hessenberg_orderings(a, astar, opts.max_orderings) {
        Ok(fast) => {
            let slow = find_hessenberg_orderings_unpruned(a, astar, opts.max_orderings)?;
            (fast == slow, fast.len())
        }
        Err(PairError::NotDiagonalizable(_)) => (true, 0),
        Err(e) => return Err(e),
    };
    let fast = decide_irreducible(a, astar, &opts.irreducibility)?;
    let oracle = brute_force_invariant_subspace(a, astar, subspace_budget)?;
    let oracle_irreducible = oracle.as_ref().map(Option::is_none);
    let irreducibility_agrees = oracle_irreducible.map(|irr| match fast.status {
        IrreducibilityStatus::Irreducible => irr,
        IrreducibilityStatus::Reducible => !irr,
        IrreducibilityStatus::Undetermined => false,
    });
    Ok(OracleReport {
        orderings_agree,
        orderings_found,
        irreducibility_agrees,
        fast_irreducibility: fast.status,
        oracle_irreducible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        // GF(2)^3: 7 lines + 7 planes; GF(2)^4: 15 + 35 + 15; GF(3)^4: 40 + 130 + 40.
        assert_eq!(proper_subspace_count(f2, 3), Some(14));
        assert_eq!(proper_subspace_count(f2, 4), Some(65));
        assert_eq!(proper_subspace_count(f3, 4), Some(210));
        assert_eq!(proper_subspace_count(FieldSpec::rationals(), 2), None);
        for (spec, n) in [(f2, 3), (f2, 4), (f3, 3), (f3, 4)] {
            let all: Vec<SubspaceBasis> = enumerate_subspaces(spec, n).collect();
            assert_eq!(all.len() as u64, proper_subspace_count(spec, n).unwrap());
            let distinct: BTreeSet<String> = all.iter().map(|s| format!("{:?}", s)).collect();
            assert_eq!(distinct.len(), all.len());
            // Each is already canonical: re-spanning gives the same basis.
            for s in &all {
                assert_eq!(&SubspaceBasis::span(spec, n, s.basis().to_vec()).unwrap(), s);
            }
        }
    }

    #[test]
    fn brute_force_on_small_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        // Companion matrix of x^2 + x + 1, irreducible over GF(2).
        let c = Matrix::from_i64(f2, &[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(brute_force_invariant_subspace(&c, &c, 100).unwrap(), Some(None));
        let id = Matrix::identity(f2, 2);
        let w = brute_force_invariant_subspace(&id, &id, 100).unwrap().unwrap().unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!(brute_force_invariant_subspace(&id, &id, 1).unwrap(), None);
    }

    #[test]
    fn oracle_report_agrees_on_companion() {
        let f2 = FieldSpec::prime(2).unwrap();
        let c = Matrix::from_i64(f2, &[&[0, 1], &[1, 1]]).unwrap();
        let d = Matrix::from_i64(f2, &[&[1, 0], &[0, 0]]).unwrap();
        let r = compare_with_oracles(&d, &d, &AnalysisOptions::default(), DEFAULT_SUBSPACE_BUDGET).unwrap();
        assert!(r.all_agree());
        assert_eq!(r.oracle_irreducible, Some(false));
        // c has no eigenvalues in GF(2), so the ordering search errors.
        assert!(compare_with_oracles(&c, &c, &AnalysisOptions::default(), DEFAULT_SUBSPACE_BUDGET).is_err());
    }
}
