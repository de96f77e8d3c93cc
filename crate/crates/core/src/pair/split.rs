use std::fmt;

use serde::Serialize;

use super::lattice::build_vij_lattice;
use super::search::eigen_pair;
use super::{is_hessenberg_wrt, OrderedEigenData, PairError};
use crate::field::FieldElement;
use crate::linalg::{apply, subspace_contains, subspace_intersect, sum_all, Matrix, SubspaceBasis};
use crate::modstruct::{IrreducibilityStatus, IrreducibilityVerdict};
use crate::spectral::pairwise_distinct;

/// A decomposition `U_0, ..., U_d` of `V` together with eigenvalue
/// sequences `θ_0, ..., θ_d` of `A` and `θ*_0, ..., θ*_d` of `A*`.
///
/// It is a split decomposition for `(A, A*)` when
/// `(A - θ_{d-i} I) U_i ⊆ U_{i+1}` and `(A* - θ*_i I) U_i ⊆ U_{i-1}` for
/// all `i`, with `U_{-1} = U_{d+1} = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDecomposition {
    pub subspaces: Vec<SubspaceBasis>,
    pub theta: Vec<FieldElement>,
    pub theta_star: Vec<FieldElement>,
}

impl SplitDecomposition {
    pub fn d(&self) -> usize {
        self.subspaces.len().saturating_sub(1)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(SubspaceBasis::dim).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitViolation {
    LengthMismatch { subspaces: usize, theta: usize, theta_star: usize },
    ZeroPart { index: usize },
    NotDirectSum,
    DuplicateTheta,
    DuplicateThetaStar,
    /// `(A - θ_{d-i} I) U_i ⊄ U_{i+1}`.
    RaisingInclusion { index: usize },
    /// `(A* - θ*_i I) U_i ⊄ U_{i-1}`.
    LoweringInclusion { index: usize },
}

impl fmt::Display for SplitViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitViolation::LengthMismatch { subspaces, theta, theta_star } => write!(
                f,
                "{subspaces} subspaces, {theta} values of theta, {theta_star} values of theta*"
            ),
            SplitViolation::ZeroPart { index } => write!(f, "U_{index} = 0"),
            SplitViolation::NotDirectSum => f.write_str("the U_i do not form a direct sum equal to V"),
            SplitViolation::DuplicateTheta => f.write_str("theta values are not distinct"),
            SplitViolation::DuplicateThetaStar => f.write_str("theta* values are not distinct"),
            SplitViolation::RaisingInclusion { index: i } => {
                write!(f, "(A - theta_{{d-{i}}} I) U_{i} is not contained in U_{}", i + 1)
            }
            SplitViolation::LoweringInclusion { index: 0 } => f.write_str("(A* - theta*_0 I) U_0 is not zero"),
            SplitViolation::LoweringInclusion { index: i } => {
                write!(f, "(A* - theta*_{i} I) U_{i} is not contained in U_{}", i - 1)
            }
        }
    }
}

fn check_shapes(a: &Matrix, astar: &Matrix, split: &SplitDecomposition) -> Result<(), PairError> {
    let (spec, n) = (a.spec(), a.rows());
    if !a.is_square() || !astar.is_square() || astar.rows() != n || astar.spec() != spec {
        return Err(PairError::ShapeMismatch("A and A* must be square of one size over one field".into()));
    }
    if split.subspaces.iter().any(|u| u.spec() != spec || u.ambient_dim() != n)
        || split.theta.iter().chain(&split.theta_star).any(|t| t.spec() != spec)
    {
        return Err(PairError::ShapeMismatch("candidate does not live in the pair's space".into()));
    }
    Ok(())
}

/// Every way in which `split` fails to be a split decomposition for
/// `(A, A*)`. Empty means it is one.
pub fn split_violations(
    a: &Matrix,
    astar: &Matrix,
    split: &SplitDecomposition,
) -> Result<Vec<SplitViolation>, PairError> {
    check_shapes(a, astar, split)?;
    let k = split.subspaces.len();
    if k == 0 || split.theta.len() != k || split.theta_star.len() != k {
        return Ok(vec![SplitViolation::LengthMismatch {
            subspaces: k,
            theta: split.theta.len(),
            theta_star: split.theta_star.len(),
        }]);
    }
    let (spec, n) = (a.spec(), a.rows());
    let d = k - 1;
    let u = &split.subspaces;
    let mut out = Vec::new();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            out.push(SplitViolation::ZeroPart { index: i });
        }
    }
    let total: usize = u.iter().map(SubspaceBasis::dim).sum();
    if total != n || !sum_all(spec, n, u)?.is_full() {
        out.push(SplitViolation::NotDirectSum);
    }
    if !pairwise_distinct(&split.theta) {
        out.push(SplitViolation::DuplicateTheta);
    }
    if !pairwise_distinct(&split.theta_star) {
        out.push(SplitViolation::DuplicateThetaStar);
    }
    let zero = SubspaceBasis::zero(spec, n);
    for i in 0..=d {
        let up = if i < d { &u[i + 1] } else { &zero };
        if !subspace_contains(up, &apply(&a.shift(&split.theta[d - i]), &u[i])?)? {
            out.push(SplitViolation::RaisingInclusion { index: i });
        }
        let down = if i > 0 { &u[i - 1] } else { &zero };
        if !subspace_contains(down, &apply(&astar.shift(&split.theta_star[i]), &u[i])?)? {
            out.push(SplitViolation::LoweringInclusion { index: i });
        }
    }
    Ok(out)
}

pub fn verify_split(a: &Matrix, astar: &Matrix, split: &SplitDecomposition) -> Result<bool, PairError> {
    Ok(split_violations(a, astar, split)?.is_empty())
}

fn describe(violations: &[SplitViolation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Builds the split decomposition `U_i = V_{d-i,i}` of an irreducible
/// Hessenberg pair.
///
/// `verdict` must be the irreducibility verdict for this same pair, as
/// produced by [`decide_irreducible`](crate::modstruct::decide_irreducible).
/// A reducible verdict gives `NotIrreducible`; an undetermined one is
/// refused rather than guessed.
pub fn construct_split_from_hessenberg(
    a: &Matrix,
    astar: &Matrix,
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
    verdict: &IrreducibilityVerdict,
) -> Result<SplitDecomposition, PairError> {
    if !is_hessenberg_wrt(a, astar, ord_a, ord_astar)? {
        return Err(PairError::NotHessenberg);
    }
    match verdict.status {
        IrreducibilityStatus::Irreducible => {}
        IrreducibilityStatus::Reducible => {
            let dim = verdict.witness.as_ref().map_or(0, SubspaceBasis::dim);
            return Err(PairError::NotIrreducible(format!(
                "invariant subspace of dimension {dim}"
            )));
        }
        IrreducibilityStatus::Undetermined => return Err(PairError::IrreducibilityUndetermined),
    }
    let (d, delta) = (ord_a.d(), ord_astar.d());
    if d != delta {
        return Err(PairError::DDeltaMismatch { d, delta });
    }
    let lattice = build_vij_lattice(ord_a, ord_astar)?;
    let subspaces: Vec<SubspaceBasis> = (0..=d)
        .map(|i| lattice.cell((d - i) as isize, i as isize).clone())
        .collect();
    let split = SplitDecomposition {
        subspaces,
        theta: ord_a.thetas(),
        theta_star: ord_astar.thetas(),
    };
    let violations = split_violations(a, astar, &split)?;
    if violations.iter().any(|v| matches!(v, SplitViolation::ZeroPart { .. } | SplitViolation::NotDirectSum)) {
        return Err(PairError::NotIrreducible(format!(
            "V_(d-i),i do not decompose V: {}",
            describe(&violations)
        )));
    }
    if !violations.is_empty() {
        return Err(PairError::SplitInvalid(describe(&violations)));
    }
    Ok(split)
}

/// `U_i = (V*_0 + ... + V*_i) ∩ (V_0 + ... + V_{d-i})`, without checking
/// that the result is a split decomposition.
pub fn split_from_formula(
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
) -> Result<SplitDecomposition, PairError> {
    let (d, delta) = (ord_a.d(), ord_astar.d());
    if d != delta {
        return Err(PairError::DDeltaMismatch { d, delta });
    }
    let subspaces = (0..=d)
        .map(|i| subspace_intersect(&ord_astar.flag(i as isize), &ord_a.flag((d - i) as isize)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SplitDecomposition {
        subspaces,
        theta: ord_a.thetas(),
        theta_star: ord_astar.thetas(),
    })
}

/// Outcome of comparing the partial sums of a split decomposition with the
/// eigenspace flags at index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagEquality {
    pub i: usize,
    /// `U_i + ... + U_d = V_0 + ... + V_{d-i}`.
    pub upper: bool,
    /// `U_0 + ... + U_i = V*_0 + ... + V*_i`.
    pub lower: bool,
}

pub fn flag_equalities(
    split: &SplitDecomposition,
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
) -> Result<Vec<FlagEquality>, PairError> {
    let d = split.d();
    if split.subspaces.is_empty() || ord_a.d() != d || ord_astar.d() != d {
        return Err(PairError::DDeltaMismatch { d: ord_a.d(), delta: ord_astar.d() });
    }
    let spec = split.subspaces[0].spec();
    let n = split.subspaces[0].ambient_dim();
    (0..=d)
        .map(|i| {
            let upper = sum_all(spec, n, &split.subspaces[i..])? == ord_a.flag((d - i) as isize);
            let lower = sum_all(spec, n, &split.subspaces[..=i])? == ord_astar.flag(i as isize);
            Ok(FlagEquality { i, upper, lower })
        })
        .collect()
}

/// Given a split decomposition, checks that `(A, A*)` is Hessenberg with
/// respect to the orderings it induces: `V_i` the `θ_i`-eigenspace of `A`
/// and `V*_i` the `θ*_i`-eigenspace of `A*`. Also checks the flag
/// equalities linking the partial sums of the `U_i` to the eigenspace flags.
pub fn recover_hessenberg_from_split(
    a: &Matrix,
    astar: &Matrix,
    split: &SplitDecomposition,
) -> Result<bool, PairError> {
    let violations = split_violations(a, astar, split)?;
    if !violations.is_empty() {
        return Err(PairError::SplitInvalid(describe(&violations)));
    }
    let (ea, eb) = eigen_pair(a, astar)?;
    let induced = |e, thetas| {
        OrderedEigenData::from_thetas(e, thetas)
            .map_err(|_| PairError::SplitInvalid("theta values are not exactly the eigenvalues".into()))
    };
    let ord_a = induced(&ea, &split.theta)?;
    let ord_astar = induced(&eb, &split.theta_star)?;
    let flags_ok = flag_equalities(split, &ord_a, &ord_astar)?
        .iter()
        .all(|f| f.upper && f.lower);
    Ok(flags_ok && is_hessenberg_wrt(a, astar, &ord_a, &ord_astar)?)
}

/// Dimensions `dim V_{d-i}`, `dim V*_i` and `dim U_i` for `0 <= i <= d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionProfile {
    pub eigen_a_reversed: Vec<usize>,
    pub eigen_astar: Vec<usize>,
    pub split: Vec<usize>,
}

impl DimensionProfile {
    /// Indices where the three dimensions are not all equal.
    pub fn mismatches(&self) -> Vec<usize> {
        (0..self.split.len())
            .filter(|&i| {
                self.eigen_a_reversed[i] != self.split[i] || self.eigen_astar[i] != self.split[i]
            })
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.mismatches().is_empty()
    }
}

pub fn dimension_profile(
    split: &SplitDecomposition,
    ord_a: &OrderedEigenData<'_>,
    ord_astar: &OrderedEigenData<'_>,
) -> Result<DimensionProfile, PairError> {
    if split.theta != ord_a.thetas() || split.theta_star != ord_astar.thetas() {
        return Err(PairError::SplitInvalid(
            "split eigenvalue sequences differ from the orderings".into(),
        ));
    }
    let d = split.d();
    Ok(DimensionProfile {
        eigen_a_reversed: (0..=d).map(|i| ord_a.space(d - i).dim()).collect(),
        eigen_astar: (0..=d).map(|i| ord_astar.space(i).dim()).collect(),
        split: split.dims(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::modstruct::{decide_irreducible, IrreducibilityOptions};
    use crate::pair::tests::canonical_pair;
    use crate::spectral::eigen_structure;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn ints(xs: &[i64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    fn coord_split() -> SplitDecomposition {
        SplitDecomposition {
            subspaces: (0..3).map(|i| SubspaceBasis::coordinate(q(), 3, [i])).collect(),
            theta: ints(&[0, 1, 2]),
            theta_star: ints(&[0, 1, 2]),
        }
    }

    #[test]
    fn canonical_split_verifies() {
        let (a, b) = canonical_pair();
        assert!(verify_split(&a, &b, &coord_split()).unwrap());
        assert!(recover_hessenberg_from_split(&a, &b, &coord_split()).unwrap());
    }

    #[test]
    fn corrupted_split_names_the_failure() {
        let (a, b) = canonical_pair();
        let mut bad = coord_split();
        bad.subspaces.swap(0, 1);
        let v = split_violations(&a, &b, &bad).unwrap();
        assert!(v.contains(&SplitViolation::RaisingInclusion { index: 0 }));
        assert!(matches!(
            recover_hessenberg_from_split(&a, &b, &bad),
            Err(PairError::SplitInvalid(_))
        ));

        let mut dup = coord_split();
        dup.theta[0] = q().from_i64(1);
        assert!(split_violations(&a, &b, &dup).unwrap().contains(&SplitViolation::DuplicateTheta));

        let mut short = coord_split();
        short.theta.pop();
        assert!(matches!(
            split_violations(&a, &b, &short).unwrap()[..],
            [SplitViolation::LengthMismatch { subspaces: 3, theta: 2, theta_star: 3 }]
        ));

        let mut overlap = coord_split();
        overlap.subspaces[2] = overlap.subspaces[0].clone();
        assert!(split_violations(&a, &b, &overlap).unwrap().contains(&SplitViolation::NotDirectSum));
    }

    #[test]
    fn construction_matches_formula_and_coordinates() {
        let (a, b) = canonical_pair();
        let (ea, eb) = (eigen_structure(&a).unwrap(), eigen_structure(&b).unwrap());
        let oa = OrderedEigenData::from_thetas(&ea, &ints(&[0, 1, 2])).unwrap();
        let ob = OrderedEigenData::from_thetas(&eb, &ints(&[0, 1, 2])).unwrap();
        let verdict = decide_irreducible(&a, &b, &IrreducibilityOptions::default()).unwrap();
        assert!(verdict.is_irreducible());
        let built = construct_split_from_hessenberg(&a, &b, &oa, &ob, &verdict).unwrap();
        assert_eq!(built, coord_split());
        assert_eq!(split_from_formula(&oa, &ob).unwrap(), built);
        let prof = dimension_profile(&built, &oa, &ob).unwrap();
        assert_eq!(prof.split, vec![1, 1, 1]);
        assert!(prof.is_consistent());
        assert!(flag_equalities(&built, &oa, &ob).unwrap().iter().all(|f| f.upper && f.lower));

        // With d = 2 the A-side order may also be reversed; that split is a
        // different one, with U_0 = V*_0 = span(e_0) but U_1 = span(2,1,0).
        let other = construct_split_from_hessenberg(&a, &b, &oa.reversed(), &ob, &verdict).unwrap();
        assert_eq!(other.subspaces[0], built.subspaces[0]);
        assert_eq!(other.subspaces[1], SubspaceBasis::span(q(), 3, vec![ints(&[2, 1, 0])]).unwrap());
        assert!(verify_split(&a, &b, &other).unwrap());

        let bad = OrderedEigenData::from_thetas(&ea, &ints(&[1, 0, 2])).unwrap();
        assert_eq!(
            construct_split_from_hessenberg(&a, &b, &bad, &ob, &verdict),
            Err(PairError::NotHessenberg)
        );
    }

    #[test]
    fn reducible_and_undetermined_verdicts_refused() {
        let a = Matrix::from_i64(q(), &[&[0, 0], &[0, 1]]).unwrap();
        let b = Matrix::from_i64(q(), &[&[5, 0], &[0, 7]]).unwrap();
        let (ea, eb) = (eigen_structure(&a).unwrap(), eigen_structure(&b).unwrap());
        let (oa, ob) = (OrderedEigenData::canonical(&ea), OrderedEigenData::canonical(&eb));
        let verdict = decide_irreducible(&a, &b, &IrreducibilityOptions::default()).unwrap();
        assert_eq!(verdict.status, IrreducibilityStatus::Reducible);
        assert!(matches!(
            construct_split_from_hessenberg(&a, &b, &oa, &ob, &verdict),
            Err(PairError::NotIrreducible(_))
        ));
        let undetermined = IrreducibilityVerdict { status: IrreducibilityStatus::Undetermined, ..verdict };
        assert_eq!(
            construct_split_from_hessenberg(&a, &b, &oa, &ob, &undetermined),
            Err(PairError::IrreducibilityUndetermined)
        );
    }

    #[test]
    fn formula_requires_equal_diameters() {
        let a = Matrix::from_i64(q(), &[&[0, 0], &[0, 1]]).unwrap();
        let b = Matrix::identity(q(), 2);
        let (ea, eb) = (eigen_structure(&a).unwrap(), eigen_structure(&b).unwrap());
        assert_eq!(
            split_from_formula(&OrderedEigenData::canonical(&ea), &OrderedEigenData::canonical(&eb)),
            Err(PairError::DDeltaMismatch { d: 1, delta: 0 })
        );
    }
}
