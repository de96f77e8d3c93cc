use std::fmt;

use crate::field::{FieldElement, FieldSpec};

use super::{LinalgError, Matrix};

/// A subspace of `K^n` stored as its reduced row-echelon basis.
///
/// The RREF is unique per subspace, so derived equality is subspace
/// equality. The zero subspace has no rows but keeps its ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    spec: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<FieldElement>>,
}

impl SubspaceBasis {
    pub fn zero(spec: FieldSpec, ambient: usize) -> Self {
        SubspaceBasis {
            spec,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(spec: FieldSpec, ambient: usize) -> Self {
        SubspaceBasis {
            spec,
            ambient,
            rows: Matrix::identity(spec, ambient).row_vecs(),
        }
    }

    /// Span of arbitrary vectors; they need not be independent.
    pub fn span(
        spec: FieldSpec,
        ambient: usize,
        vectors: Vec<Vec<FieldElement>>,
    ) -> Result<Self, LinalgError> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(LinalgError::AmbientMismatch(ambient, v.len()));
            }
            if let Some(bad) = v.iter().find(|x| x.spec() != spec) {
                return Err(LinalgError::FieldMismatch(spec, bad.spec()));
            }
        }
        Ok(Self::from_rows_unchecked(spec, ambient, vectors))
    }

    /// Span of the standard basis vectors `e_i` for the given indices.
    pub fn coordinate(spec: FieldSpec, ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let vecs = indices
            .into_iter()
            .map(|i| unit_vector(spec, ambient, i))
            .collect();
        Self::from_rows_unchecked(spec, ambient, vecs)
    }

    pub(crate) fn from_rows_unchecked(
        spec: FieldSpec,
        ambient: usize,
        vectors: Vec<Vec<FieldElement>>,
    ) -> Self {
        let (rows, _) = rref_rows(vectors, ambient);
        SubspaceBasis { spec, ambient, rows }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// The canonical basis rows (RREF, no zero rows).
    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.rows.len(), self.ambient, |i, j| {
            self.rows[i][j].clone()
        })
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("RREF row is nonzero"))
            .collect()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in
    /// the subspace.
    pub fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut w = v.to_vec();
        for (row, piv) in self.rows.iter().zip(self.pivots()) {
            if !w[piv].is_zero() {
                let f = w[piv].clone();
                for (x, r) in w.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = &*x - &(&f * r);
                    }
                }
            }
        }
        w
    }

    pub fn contains_vector(&self, v: &[FieldElement]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(FieldElement::is_zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LinalgError> {
        if self.spec != other.spec {
            return Err(LinalgError::FieldMismatch(self.spec, other.spec));
        }
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }
}

impl fmt::Debug for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span<{}^{}>{{", self.spec, self.ambient)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let s: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "({})", s.join(","))?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn unit_vector(spec: FieldSpec, n: usize, i: usize) -> Vec<FieldElement> {
    (0..n)
        .map(|j| if i == j { spec.one() } else { spec.zero() })
        .collect()
}

/// Gauss-Jordan elimination. Returns the nonzero RREF rows and their pivot
/// columns.
pub(crate) fn rref_rows(
    mut rows: Vec<Vec<FieldElement>>,
    cols: usize,
) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !pv.is_zero() {
                        *x = &*x - &(&f * pv);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Row space of `m` in canonical form, together with the rank.
pub fn rref(m: &Matrix) -> (SubspaceBasis, usize) {
    let s = SubspaceBasis::from_rows_unchecked(m.spec(), m.cols(), m.row_vecs());
    let rank = s.dim();
    (s, rank)
}

/// Null space `{v : m v = 0}` of a (possibly rectangular) matrix.
pub fn kernel(m: &Matrix) -> SubspaceBasis {
    let spec = m.spec();
    let n = m.cols();
    let (rows, pivots) = rref_rows(m.row_vecs(), n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vecs = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![spec.zero(); n];
            v[f] = spec.one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect();
    SubspaceBasis::from_rows_unchecked(spec, n, vecs)
}

pub fn subspace_sum(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis, LinalgError> {
    a.check_compatible(b)?;
    if b.is_zero() || a.is_full() {
        return Ok(a.clone());
    }
    if a.is_zero() || b.is_full() {
        return Ok(b.clone());
    }
    let rows = a.rows.iter().chain(&b.rows).cloned().collect();
    Ok(SubspaceBasis::from_rows_unchecked(a.spec, a.ambient, rows))
}

/// Sum of any number of subspaces of `K^n`; the empty sum is zero.
pub fn sum_all<'a>(
    spec: FieldSpec,
    ambient: usize,
    parts: impl IntoIterator<Item = &'a SubspaceBasis>,
) -> Result<SubspaceBasis, LinalgError> {
    let zero = SubspaceBasis::zero(spec, ambient);
    let mut rows = Vec::new();
    for p in parts {
        zero.check_compatible(p)?;
        rows.extend(p.rows.iter().cloned());
    }
    Ok(SubspaceBasis::from_rows_unchecked(spec, ambient, rows))
}

/// Intersection by the Zassenhaus method: row-reduce `[[a, a], [b, 0]]`;
/// the rows whose left half vanishes carry a basis of `a ∩ b` on the right.
pub fn subspace_intersect(
    a: &SubspaceBasis,
    b: &SubspaceBasis,
) -> Result<SubspaceBasis, LinalgError> {
    a.check_compatible(b)?;
    let (spec, n) = (a.spec, a.ambient);
    if a.is_zero() || b.is_full() {
        return Ok(a.clone());
    }
    if b.is_zero() || a.is_full() {
        return Ok(b.clone());
    }
    let mut stacked = Vec::with_capacity(a.dim() + b.dim());
    for r in &a.rows {
        let mut row = r.clone();
        row.extend(r.iter().cloned());
        stacked.push(row);
    }
    for r in &b.rows {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n(spec.zero(), n));
        stacked.push(row);
    }
    let (rows, pivots) = rref_rows(stacked, 2 * n);
    let meet = rows
        .into_iter()
        .zip(pivots)
        .filter(|(_, p)| *p >= n)
        .map(|(r, _)| r[n..].to_vec())
        .collect();
    Ok(SubspaceBasis::from_rows_unchecked(spec, n, meet))
}

/// Whether `b ⊆ a`.
pub fn subspace_contains(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<bool, LinalgError> {
    a.check_compatible(b)?;
    if b.dim() > a.dim() {
        return Ok(false);
    }
    Ok(b.rows.iter().all(|r| a.contains_vector(r)))
}

/// Image `m · s`.
pub fn apply(m: &Matrix, s: &SubspaceBasis) -> Result<SubspaceBasis, LinalgError> {
    if m.spec() != s.spec {
        return Err(LinalgError::FieldMismatch(m.spec(), s.spec));
    }
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    if m.cols() != s.ambient {
        return Err(LinalgError::AmbientMismatch(m.cols(), s.ambient));
    }
    let images = s.rows.iter().map(|v| m.mul_vec(v)).collect();
    Ok(SubspaceBasis::from_rows_unchecked(s.spec, s.ambient, images))
}

/// Whether `parts` is a decomposition of `K^n`: every part nonzero and the
/// sum direct and equal to the whole space.
pub fn is_decomposition(parts: &[SubspaceBasis], spec: FieldSpec, n: usize) -> Result<bool, LinalgError> {
    if parts.iter().any(SubspaceBasis::is_zero) {
        return Ok(false);
    }
    let total: usize = parts.iter().map(SubspaceBasis::dim).sum();
    Ok(total == n && sum_all(spec, n, parts)?.is_full())
}

/// Echelon basis that grows one vector at a time; used for spinning and
/// algebra closure where the span is built incrementally.
#[derive(Debug, Clone)]
pub struct EchelonBuilder {
    spec: FieldSpec,
    len: usize,
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl EchelonBuilder {
    pub fn new(spec: FieldSpec, len: usize) -> Self {
        EchelonBuilder {
            spec,
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            if !w[*piv].is_zero() {
                let f = w[*piv].clone();
                for (x, r) in w.iter_mut().zip(row).skip(*piv) {
                    if !r.is_zero() {
                        *x = &*x - &(&f * r);
                    }
                }
            }
        }
        w
    }

    /// Adds `v` if it is independent of what is already present; returns
    /// whether the span grew.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[piv].inv().expect("nonzero");
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push((piv, w));
        true
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(FieldElement::is_zero)
    }

    pub fn to_subspace(&self) -> SubspaceBasis {
        SubspaceBasis::from_rows_unchecked(
            self.spec,
            self.len,
            self.rows.iter().map(|(_, r)| r.clone()).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn e(n: usize, i: usize) -> Vec<FieldElement> {
        unit_vector(q(), n, i)
    }

    #[test]
    fn rref_examples() {
        let (s, r) = rref(&Matrix::zeros(q(), 2, 2));
        assert_eq!((s.dim(), r), (0, 0));
        let f5 = FieldSpec::prime(5).unwrap();
        let (s, r) = rref(&Matrix::from_i64(f5, &[&[2]]).unwrap());
        assert_eq!(r, 1);
        assert_eq!(s.to_matrix(), Matrix::from_i64(f5, &[&[1]]).unwrap());
        let (s, r) = rref(&Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]).unwrap());
        assert_eq!(r, 1);
        assert_eq!(s.to_matrix(), Matrix::from_i64(q(), &[&[1, 2]]).unwrap());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::identity(q(), 3)).is_zero());
        assert_eq!(kernel(&Matrix::zeros(q(), 2, 2)), SubspaceBasis::full(q(), 2));
        let k = kernel(&Matrix::from_i64(q(), &[&[1, 1], &[1, 1]]).unwrap());
        let expect = SubspaceBasis::span(q(), 2, vec![vec![q().from_i64(1), q().from_i64(-1)]]).unwrap();
        assert_eq!(k, expect);
    }

    #[test]
    fn sum_examples() {
        let a = SubspaceBasis::span(q(), 3, vec![e(3, 0)]).unwrap();
        let b = SubspaceBasis::span(q(), 3, vec![e(3, 1)]).unwrap();
        assert_eq!(subspace_sum(&a, &b).unwrap(), SubspaceBasis::coordinate(q(), 3, [0, 1]));
        assert_eq!(subspace_sum(&a, &SubspaceBasis::zero(q(), 3)).unwrap(), a);
        assert_eq!(subspace_sum(&a, &a).unwrap(), a);
        assert!(matches!(
            subspace_sum(&a, &SubspaceBasis::zero(q(), 2)),
            Err(LinalgError::AmbientMismatch(3, 2))
        ));
    }

    #[test]
    fn intersect_examples() {
        let a = SubspaceBasis::coordinate(q(), 3, [0, 1]);
        let b = SubspaceBasis::coordinate(q(), 3, [1, 2]);
        assert_eq!(subspace_intersect(&a, &b).unwrap(), SubspaceBasis::coordinate(q(), 3, [1]));
        assert_eq!(subspace_intersect(&a, &SubspaceBasis::full(q(), 3)).unwrap(), a);
        // Non-coordinate case: span{(1,1,0),(0,0,1)} ∩ span{(1,0,0),(0,1,1)}
        // contains (1,1,1) only.
        let x = SubspaceBasis::span(q(), 3, vec![vec![q().one(), q().one(), q().zero()], e(3, 2)]).unwrap();
        let y = SubspaceBasis::span(q(), 3, vec![e(3, 0), vec![q().zero(), q().one(), q().one()]]).unwrap();
        let m = subspace_intersect(&x, &y).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(m.contains_vector(&[q().one(), q().one(), q().one()]));
    }

    #[test]
    fn contains_and_apply() {
        let w = SubspaceBasis::coordinate(q(), 2, [1]);
        assert!(subspace_contains(&SubspaceBasis::full(q(), 2), &w).unwrap());
        assert!(!subspace_contains(&w, &SubspaceBasis::full(q(), 2)).unwrap());
        assert_eq!(apply(&Matrix::identity(q(), 2), &w).unwrap(), w);
        let nil = Matrix::from_i64(q(), &[&[0, 1], &[0, 0]]).unwrap();
        assert_eq!(apply(&nil, &w).unwrap(), SubspaceBasis::coordinate(q(), 2, [0]));
        assert!(apply(&Matrix::identity(q(), 3), &w).is_err());
    }

    #[test]
    fn decomposition_check() {
        let parts = vec![
            SubspaceBasis::coordinate(q(), 3, [0]),
            SubspaceBasis::coordinate(q(), 3, [1, 2]),
        ];
        assert!(is_decomposition(&parts, q(), 3).unwrap());
        let overlapping = vec![
            SubspaceBasis::coordinate(q(), 3, [0, 1]),
            SubspaceBasis::coordinate(q(), 3, [1, 2]),
        ];
        assert!(!is_decomposition(&overlapping, q(), 3).unwrap());
        let with_zero = vec![SubspaceBasis::full(q(), 3), SubspaceBasis::zero(q(), 3)];
        assert!(!is_decomposition(&with_zero, q(), 3).unwrap());
    }
}
