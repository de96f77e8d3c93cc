use itertools::Itertools;
use serde::Serialize;

use super::{OrderedEigenData, PairError, Side};
use crate::linalg::{apply, subspace_contains, subspace_sum, Matrix, SubspaceBasis};
use crate::spectral::{eigen_structure, EigenStructure};

/// Default cap on `(d+1)!`, the size of one side's ordering space.
pub const DEFAULT_MAX_ORDERINGS: u64 = 40320;

/// Orderings of both eigenspace families, as permutations of the canonical
/// (ascending) eigenvalue indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrderingPair {
    pub order_a: Vec<usize>,
    pub order_astar: Vec<usize>,
}

impl OrderingPair {
    pub fn reversed(&self) -> Self {
        OrderingPair {
            order_a: self.order_a.iter().rev().copied().collect(),
            order_astar: self.order_astar.iter().rev().copied().collect(),
        }
    }
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

pub(crate) fn eigen_pair(a: &Matrix, astar: &Matrix) -> Result<(EigenStructure, EigenStructure), PairError> {
    if a.spec() != astar.spec() || a.rows() != astar.rows() || a.cols() != astar.cols() {
        return Err(PairError::ShapeMismatch("A and A* must be square of one size over one field".into()));
    }
    let ea = eigen_structure(a)?;
    let eb = eigen_structure(astar)?;
    if !ea.diagonalizable {
        return Err(PairError::NotDiagonalizable(Side::A));
    }
    if !eb.diagonalizable {
        return Err(PairError::NotDiagonalizable(Side::AStar));
    }
    Ok((ea, eb))
}

fn check_budget(eigen: &EigenStructure, side: Side, cap: u64) -> Result<(), PairError> {
    let required = factorial(eigen.eigenvalues.len());
    if required > cap as u128 {
        return Err(PairError::SearchBudgetExceeded { side, required, cap });
    }
    Ok(())
}

/// One side of the Hessenberg condition: orderings `σ` of `eigen`'s
/// eigenspaces with `other · V_{σ(i)} ⊆ V_{σ(0)} + ... + V_{σ(i+1)}`.
///
/// Depth-first over prefixes; the condition for position `i` only involves
/// the first `i + 2` entries, so a failing prefix prunes its whole subtree.
fn side_orderings(eigen: &EigenStructure, other: &Matrix) -> Result<Vec<Vec<usize>>, PairError> {
    let k = eigen.eigenvalues.len();
    let images = eigen
        .eigenspaces
        .iter()
        .map(|s| apply(other, s))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = other.spec();
    let n = other.rows();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    let mut used = vec![false; k];
    let flag0 = SubspaceBasis::zero(spec, n);
    dfs(eigen, &images, &mut prefix, &mut used, &flag0, &mut out)?;
    Ok(out)
}

fn dfs(
    eigen: &EigenStructure,
    images: &[SubspaceBasis],
    prefix: &mut Vec<usize>,
    used: &mut [bool],
    flag: &SubspaceBasis,
    out: &mut Vec<Vec<usize>>,
) -> Result<(), PairError> {
    let k = used.len();
    if prefix.len() == k {
        out.push(prefix.clone());
        return Ok(());
    }
    for next in 0..k {
        if used[next] {
            continue;
        }
        let grown = subspace_sum(flag, &eigen.eigenspaces[next])?;
        if let Some(&last) = prefix.last() {
            if !subspace_contains(&grown, &images[last])? {
                continue;
            }
        }
        used[next] = true;
        prefix.push(next);
        dfs(eigen, images, prefix, used, &grown, out)?;
        prefix.pop();
        used[next] = false;
    }
    Ok(())
}

/// All ordering pairs for which `(A, A*)` is a Hessenberg pair, sorted
/// lexicographically by the eigenvalue sequences.
///
/// The two defining conditions are independent (one constrains the order of
/// `A`'s eigenspaces, the other the order of `A*`'s), so each side is
/// searched separately and the result is their product. Fails with
/// `SearchBudgetExceeded` when a side has more than `max_orderings`
/// orderings.
pub fn find_hessenberg_orderings(
    a: &Matrix,
    astar: &Matrix,
    max_orderings: u64,
) -> Result<Vec<OrderingPair>, PairError> {
    let (ea, eb) = eigen_pair(a, astar)?;
    find_with_eigen(&ea, &eb, max_orderings)
}

pub(crate) fn find_with_eigen(
    ea: &EigenStructure,
    eb: &EigenStructure,
    max_orderings: u64,
) -> Result<Vec<OrderingPair>, PairError> {
    check_budget(ea, Side::A, max_orderings)?;
    check_budget(eb, Side::AStar, max_orderings)?;
    // Canonical indices are in ascending eigenvalue order, so index order
    // and eigenvalue order coincide; the DFS emits each side sorted.
    let sa = side_orderings(ea, &eb.transform)?;
    let sb = side_orderings(eb, &ea.transform)?;
    Ok(sa
        .iter()
        .cartesian_product(sb.iter())
        .map(|(x, y)| OrderingPair { order_a: x.clone(), order_astar: y.clone() })
        .collect())
}

/// Reference search: every pair of permutations checked with
/// [`is_hessenberg_wrt`](super::is_hessenberg_wrt), no pruning and no
/// separation of the two conditions.
pub fn find_hessenberg_orderings_unpruned(
    a: &Matrix,
    astar: &Matrix,
    max_orderings: u64,
) -> Result<Vec<OrderingPair>, PairError> {
    let (ea, eb) = eigen_pair(a, astar)?;
    check_budget(&ea, Side::A, max_orderings)?;
    check_budget(&eb, Side::AStar, max_orderings)?;
    let ka = ea.eigenvalues.len();
    let kb = eb.eigenvalues.len();
    let pa: Vec<Vec<usize>> = (0..ka).permutations(ka).collect();
    let pb: Vec<Vec<usize>> = (0..kb).permutations(kb).collect();
    let ords_a = pa
        .into_iter()
        .map(|o| OrderedEigenData::new(&ea, o))
        .collect::<Result<Vec<_>, _>>()?;
    let ords_b = pb
        .into_iter()
        .map(|o| OrderedEigenData::new(&eb, o))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for oa in &ords_a {
        for ob in &ords_b {
            if super::is_hessenberg_wrt(a, astar, oa, ob)? {
                out.push(OrderingPair { order_a: oa.order().to_vec(), order_astar: ob.order().to_vec() });
            }
        }
    }
    out.sort();
    Ok(out)
}
