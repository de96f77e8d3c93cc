use serde::Serialize;

use super::{OrderedEigenData, PairError, Side};
use crate::linalg::{apply, subspace_contains, subspace_intersect, sum_all, Matrix, SubspaceBasis};

/// The subspaces `V_ij = (V_0 + ... + V_i) ∩ (V*_0 + ... + V*_j)`.
///
/// Stored for `-1 <= i <= d + 1` and `-1 <= j <= δ + 1`; any index beyond
/// that range gives the same subspace as the nearest stored one, since the
/// flag sums are `0` below `0` and `V` above `d` (resp. `δ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VijLattice {
    d: usize,
    delta: usize,
    cells: Vec<SubspaceBasis>,
}

impl VijLattice {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    fn width(&self) -> usize {
        self.delta + 3
    }

    pub fn cell(&self, i: isize, j: isize) -> &SubspaceBasis {
        let ci = (i.clamp(-1, self.d as isize + 1) + 1) as usize;
        let cj = (j.clamp(-1, self.delta as isize + 1) + 1) as usize;
        &self.cells[ci * self.width() + cj]
    }
}

pub fn build_vij_lattice(
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
) -> Result<VijLattice, PairError> {
    ord_a.require_diagonalizable(Side::A)?;
    ord_astar.require_diagonalizable(Side::AStar)?;
    let (d, delta) = (ord_a.d(), ord_astar.d());
    let mut cells = Vec::with_capacity((d + 3) * (delta + 3));
    for i in -1..=(d as isize + 1) {
        let left = ord_a.flag(i);
        for j in -1..=(delta as isize + 1) {
            cells.push(subspace_intersect(&left, &ord_astar.flag(j))?);
        }
    }
    Ok(VijLattice { d, delta, cells })
}

/// `W_r = V_{0,r} + V_{1,r-1} + ... + V_{r,0}` for `0 <= r <= min(d, δ)`.
pub fn wr_witness(lattice: &VijLattice, r: usize) -> Result<SubspaceBasis, PairError> {
    let max = lattice.d.min(lattice.delta);
    if r > max {
        return Err(PairError::IndexOutOfRange { index: r, max });
    }
    let any = lattice.cell(0, 0);
    let (spec, n) = (any.spec(), any.ambient_dim());
    let r = r as isize;
    Ok(sum_all(spec, n, (0..=r).map(|k| lattice.cell(k, r - k)))?)
}

/// A failure of `(A - θ_i) V_ij ⊆ V_{i-1,j+1}` (side `A`) or of
/// `(A* - θ*_j) V_ij ⊆ V_{i+1,j-1}` (side `A*`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeViolation {
    pub side: Side,
    pub i: usize,
    pub j: usize,
}

/// Cells of the lattice where the shifted transformations fail to move
/// `V_ij` to the neighbouring cell. Empty for every Hessenberg pair.
pub fn lattice_action_violations(
    a: &Matrix,
    astar: &Matrix,
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
    lattice: &VijLattice,
) -> Result<Vec<LatticeViolation>, PairError> {
    let mut out = Vec::new();
    for i in 0..=lattice.d {
        let shifted_a = a.shift(ord_a.theta(i));
        for j in 0..=lattice.delta {
            let (si, sj) = (i as isize, j as isize);
            let cell = lattice.cell(si, sj);
            if cell.is_zero() {
                continue;
            }
            if !subspace_contains(lattice.cell(si - 1, sj + 1), &apply(&shifted_a, cell)?)? {
                out.push(LatticeViolation { side: Side::A, i, j });
            }
            let shifted_b = astar.shift(ord_astar.theta(j));
            if !subspace_contains(lattice.cell(si + 1, sj - 1), &apply(&shifted_b, cell)?)? {
                out.push(LatticeViolation { side: Side::AStar, i, j });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;
    use crate::pair::tests::canonical_pair;
    use crate::spectral::eigen_structure;

    fn ints(xs: &[i64]) -> Vec<FieldElement> {
        let q = crate::field::FieldSpec::rationals();
        xs.iter().map(|&x| q.from_i64(x)).collect()
    }

    #[test]
    fn canonical_lattice_shape() {
        let (a, b) = canonical_pair();
        let (ea, eb) = (eigen_structure(&a).unwrap(), eigen_structure(&b).unwrap());
        let oa = OrderedEigenData::from_thetas(&ea, &ints(&[2, 1, 0])).unwrap();
        let ob = OrderedEigenData::from_thetas(&eb, &ints(&[0, 1, 2])).unwrap();
        let lat = build_vij_lattice(&oa, &ob).unwrap();
        for i in 0..=2isize {
            for j in 0..=2isize {
                let expect = (i + j - 1).max(0) as usize;
                assert_eq!(lat.cell(i, j).dim(), expect, "V_{i}{j}");
            }
        }
        assert!(lat.cell(-5, 1).is_zero());
        assert!(lat.cell(9, 9).is_full());
        assert_eq!(lat.cell(9, 0), &ob.flag(0));
        assert!(wr_witness(&lat, 0).unwrap().is_zero());
        assert!(wr_witness(&lat, 1).unwrap().is_zero());
        assert!(wr_witness(&lat, 2).unwrap().is_full());
        assert_eq!(wr_witness(&lat, 3), Err(PairError::IndexOutOfRange { index: 3, max: 2 }));
        assert!(lattice_action_violations(&a, &b, &oa, &ob, &lat).unwrap().is_empty());
    }
}
