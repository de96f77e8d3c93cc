//! Characteristic polynomials, in-field eigenvalues, eigenspaces and the
//! diagonalizability decision.

mod poly;

use thiserror::Error;

use crate::field::FieldElement;
use crate::linalg::{apply, is_decomposition, kernel, subspace_contains, LinalgError, Matrix, SubspaceBasis};

pub use poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is empty")]
    Empty,
    #[error("eigenvalues lie outside the field: a factor of degree {unfactored_degree} of the characteristic polynomial has no roots in the field")]
    EigenvaluesOutsideField { unfactored_degree: usize },
    #[error("length mismatch: {0} subspaces but {1} scalars")]
    LengthMismatch(usize, usize),
    #[error("subspaces do not form a decomposition of the space")]
    NotADecomposition,
    #[error("scalars are not pairwise distinct")]
    DuplicateEigenvalue,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Characteristic polynomial `det(xI - m)` by Berkowitz's division-free
/// recurrence, valid in every characteristic.
///
/// With `A_k` the leading `k x k` block written as `[[A_{k-1}, c], [r, a]]`,
/// the coefficient vector of `A_k` (high to low) is a lower-triangular
/// Toeplitz matrix with first column `(1, -a, -rc, -rA_{k-1}c, ...)` times
/// that of `A_{k-1}`.
pub fn char_poly(m: &Matrix) -> Result<Polynomial, SpectralError> {
    if !m.is_square() {
        return Err(SpectralError::NotSquare(m.rows(), m.cols()));
    }
    let spec = m.spec();
    let n = m.rows();
    let mut high_to_low = vec![spec.one()];
    for k in 1..=n {
        let last = k - 1;
        let mut col = Vec::with_capacity(k + 1);
        col.push(spec.one());
        col.push(-&m[(last, last)]);
        let mut v: Vec<FieldElement> = (0..last).map(|i| m[(i, last)].clone()).collect();
        for t in 0..last {
            let rv = (0..last).fold(spec.zero(), |acc, j| acc + &m[(last, j)] * &v[j]);
            col.push(-rv);
            if t + 1 < last {
                v = (0..last)
                    .map(|i| (0..last).fold(spec.zero(), |acc, j| acc + &m[(i, j)] * &v[j]))
                    .collect();
            }
        }
        let next: Vec<FieldElement> = (0..=k)
            .map(|i| {
                (0..k.min(i + 1))
                    .filter(|&j| i - j < col.len())
                    .fold(spec.zero(), |acc, j| acc + &col[i - j] * &high_to_low[j])
            })
            .collect();
        high_to_low = next;
    }
    high_to_low.reverse();
    Ok(Polynomial::new(spec, high_to_low))
}

/// Eigenvalues of a square matrix in the ground field with their eigenspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenStructure {
    pub transform: Matrix,
    /// Pairwise distinct, ascending (numeric order over `Q`, residue order
    /// over `GF(p)`).
    pub eigenvalues: Vec<FieldElement>,
    pub algebraic_multiplicities: Vec<usize>,
    /// `eigenspaces[i] = ker(transform - eigenvalues[i] I)`, never zero.
    pub eigenspaces: Vec<SubspaceBasis>,
    pub diagonalizable: bool,
}

impl EigenStructure {
    pub fn n(&self) -> usize {
        self.transform.rows()
    }

    /// Number of distinct eigenvalues minus one.
    pub fn d(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    pub fn index_of(&self, theta: &FieldElement) -> Option<usize> {
        self.eigenvalues.iter().position(|t| t == theta)
    }

    pub fn geometric_multiplicities(&self) -> Vec<usize> {
        self.eigenspaces.iter().map(SubspaceBasis::dim).collect()
    }
}

pub fn eigen_structure(m: &Matrix) -> Result<EigenStructure, SpectralError> {
    if !m.is_square() {
        return Err(SpectralError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let cp = char_poly(m)?;
    let eigenvalues = cp.roots();
    let algebraic_multiplicities: Vec<usize> =
        eigenvalues.iter().map(|t| cp.root_multiplicity(t)).collect();
    let split_degree: usize = algebraic_multiplicities.iter().sum();
    if split_degree < n {
        return Err(SpectralError::EigenvaluesOutsideField {
            unfactored_degree: n - split_degree,
        });
    }
    let eigenspaces: Vec<SubspaceBasis> = eigenvalues.iter().map(|t| kernel(&m.shift(t))).collect();
    let diagonalizable = eigenspaces.iter().map(SubspaceBasis::dim).sum::<usize>() == n;
    Ok(EigenStructure {
        transform: m.clone(),
        eigenvalues,
        algebraic_multiplicities,
        eigenspaces,
        diagonalizable,
    })
}

pub(crate) fn pairwise_distinct(xs: &[FieldElement]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, a)| xs[i + 1..].iter().all(|b| a != b))
}

/// Checks `(m - θ_i I) U_i ⊆ U_{i+1}` for every `i` with `U_{d+1} = 0`.
/// When this holds with distinct `θ_i`, `m` is diagonalizable with
/// eigenvalues exactly `{θ_i}`, `θ_i` having multiplicity `dim U_i`.
pub fn verify_split_shape_diagonalizable(
    m: &Matrix,
    decomp: &[SubspaceBasis],
    thetas: &[FieldElement],
) -> Result<bool, SpectralError> {
    if decomp.len() != thetas.len() {
        return Err(SpectralError::LengthMismatch(decomp.len(), thetas.len()));
    }
    if !m.is_square() {
        return Err(SpectralError::NotSquare(m.rows(), m.cols()));
    }
    if !pairwise_distinct(thetas) {
        return Err(SpectralError::DuplicateEigenvalue);
    }
    let (spec, n) = (m.spec(), m.rows());
    if !is_decomposition(decomp, spec, n)? {
        return Err(SpectralError::NotADecomposition);
    }
    let zero = SubspaceBasis::zero(spec, n);
    for (i, (u, t)) in decomp.iter().zip(thetas).enumerate() {
        let next = decomp.get(i + 1).unwrap_or(&zero);
        if !subspace_contains(next, &apply(&m.shift(t), u)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
