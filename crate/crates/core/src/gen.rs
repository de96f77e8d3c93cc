//! Seeded generators for pairs with known structure.
//!
//! Every instance carries its ground truth: the split decomposition it was
//! built from, the eigenvalue sequences, and for reducible instances an
//! invariant subspace. All randomness comes from the explicit seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldKind, FieldSpec};
use crate::linalg::{apply, LinalgError, Matrix, SubspaceBasis};
use crate::modstruct::ModstructError;
use crate::pair::{
    is_tridiagonal_pair, split_from_formula, verify_split, AnalysisOptions, OrderedEigenData, PairError,
    SplitDecomposition,
};
use crate::spectral::{eigen_structure, pairwise_distinct, SpectralError};

const TRIDIAGONAL_ATTEMPTS: usize = 32;
const CONJUGATOR_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("dims must be a nonempty list of positive counts")]
    EmptyDims,
    #[error("dims, theta and theta_star have lengths {0}, {1}, {2}")]
    LengthMismatch(usize, usize, usize),
    #[error("eigenvalue sequence has a repeated value")]
    DuplicateEigenvalue,
    #[error("eigenvalues belong to a different field than {0}")]
    FieldMismatch(FieldSpec),
    #[error("no tridiagonal construction produces dims {0:?}")]
    UnsupportedShape(Vec<usize>),
    #[error("tridiagonal generation needs arithmetic-progression eigenvalue sequences")]
    NonArithmeticEigenvalues,
    #[error("characteristic of {0} is too small for this shape")]
    CharacteristicTooSmall(FieldSpec),
    #[error("no certified instance after {0} attempts")]
    GenerationBudgetExceeded(usize),
    #[error("no invertible conjugator after {0} draws")]
    SingularConjugator(usize),
    #[error("blocks of a reducible sum must share theta and theta_star")]
    IncompatibleBlocks,
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Modstruct(#[from] ModstructError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    SplitForm,
    TridiagonalForm,
    ReducibleSum,
    Conjugated,
}

/// How the off-diagonal blocks of split-form matrices are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fill {
    /// Uniform nonzero entries (integers in `[-5, 5]` over `Q`).
    #[default]
    Random,
    /// Every off-diagonal block entry is 1.
    Ones,
    /// Each entry is zero with probability one half, otherwise nonzero.
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truth {
    pub kind: ConstructionKind,
    /// The construction before any conjugation.
    pub base: ConstructionKind,
    pub split: SplitDecomposition,
    /// Accumulated change of basis `P`, with `A = P A_0 P^{-1}`.
    pub conjugator: Option<Matrix>,
    /// Proper nonzero invariant subspace, for reducible sums.
    pub witness: Option<SubspaceBasis>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub a: Matrix,
    pub astar: Matrix,
    pub truth: Truth,
}

/// Parameters of one split-form block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFormParams {
    pub dims: Vec<usize>,
    pub theta: Vec<FieldElement>,
    pub theta_star: Vec<FieldElement>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_nonzero(spec: FieldSpec, rng: &mut ChaCha8Rng) -> FieldElement {
    match spec.modulus() {
        Some(p) => spec.from_i64(rng.gen_range(1..p as i64)),
        None => loop {
            let v = rng.gen_range(-5i64..=5);
            if v != 0 {
                return spec.from_i64(v);
            }
        },
    }
}

fn random_entry(spec: FieldSpec, fill: Fill, rng: &mut ChaCha8Rng) -> FieldElement {
    match fill {
        Fill::Random => random_nonzero(spec, rng),
        Fill::Ones => spec.one(),
        Fill::Sparse => {
            if rng.gen_bool(0.5) {
                spec.zero()
            } else {
                random_nonzero(spec, rng)
            }
        }
    }
}

/// `k` pairwise distinct field elements drawn from the seed; over `Q` they
/// are integers in `[-2k, 2k]`. Panics when `GF(p)` has fewer than `k`
/// elements.
pub fn sample_distinct(spec: FieldSpec, k: usize, seed: u64) -> Vec<FieldElement> {
    let mut rng = rng(seed);
    let mut out: Vec<FieldElement> = Vec::with_capacity(k);
    if let Some(p) = spec.modulus() {
        assert!(k as u64 <= p as u64, "GF({p}) has fewer than {k} elements");
    }
    let span = 2 * k as i64 + 1;
    while out.len() < k {
        let x = match spec.modulus() {
            Some(p) => spec.from_i64(rng.gen_range(0..p as i64)),
            None => spec.from_i64(rng.gen_range(-span..=span)),
        };
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn check_params(spec: FieldSpec, dims: &[usize], theta: &[FieldElement], theta_star: &[FieldElement]) -> Result<(), GenError> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(GenError::EmptyDims);
    }
    if theta.len() != dims.len() || theta_star.len() != dims.len() {
        return Err(GenError::LengthMismatch(dims.len(), theta.len(), theta_star.len()));
    }
    if theta.iter().chain(theta_star).any(|t| t.spec() != spec) {
        return Err(GenError::FieldMismatch(spec));
    }
    if !pairwise_distinct(theta) || !pairwise_distinct(theta_star) {
        return Err(GenError::DuplicateEigenvalue);
    }
    Ok(())
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(dims.len() + 1);
    for &k in dims {
        out.push(acc);
        acc += k;
    }
    out.push(acc);
    out
}

fn block_flag(spec: FieldSpec, dims: &[usize]) -> Vec<SubspaceBasis> {
    let off = offsets(dims);
    let n = off[dims.len()];
    (0..dims.len())
        .map(|i| SubspaceBasis::coordinate(spec, n, off[i]..off[i + 1]))
        .collect()
}

pub fn gen_split_form(
    spec: FieldSpec,
    dims: &[usize],
    theta: &[FieldElement],
    theta_star: &[FieldElement],
    seed: u64,
) -> Result<GeneratedInstance, GenError> {
    gen_split_form_with(spec, dims, theta, theta_star, Fill::Random, seed)
}

/// Builds `A` block lower bidiagonal with diagonal blocks `θ_{d-i} I` and
/// `A*` block upper bidiagonal with diagonal blocks `θ*_i I`, in the basis
/// whose coordinate blocks of sizes `dims` are the split decomposition.
pub fn gen_split_form_with(
    spec: FieldSpec,
    dims: &[usize],
    theta: &[FieldElement],
    theta_star: &[FieldElement],
    fill: Fill,
    seed: u64,
) -> Result<GeneratedInstance, GenError> {
    check_params(spec, dims, theta, theta_star)?;
    let mut rng = rng(seed);
    let d = dims.len() - 1;
    let off = offsets(dims);
    let n = off[d + 1];
    let mut a = Matrix::zeros(spec, n, n);
    let mut astar = Matrix::zeros(spec, n, n);
    for i in 0..=d {
        for c in off[i]..off[i + 1] {
            a[(c, c)] = theta[d - i].clone();
            astar[(c, c)] = theta_star[i].clone();
        }
    }
    for i in 0..d {
        // A: block (U_{i+1}, U_i); A*: block (U_i, U_{i+1}).
        for r in off[i + 1]..off[i + 2] {
            for c in off[i]..off[i + 1] {
                a[(r, c)] = random_entry(spec, fill, &mut rng);
            }
        }
        for r in off[i]..off[i + 1] {
            for c in off[i + 1]..off[i + 2] {
                astar[(r, c)] = random_entry(spec, fill, &mut rng);
            }
        }
    }
    Ok(GeneratedInstance {
        a,
        astar,
        truth: Truth {
            kind: ConstructionKind::SplitForm,
            base: ConstructionKind::SplitForm,
            split: SplitDecomposition {
                subspaces: block_flag(spec, dims),
                theta: theta.to_vec(),
                theta_star: theta_star.to_vec(),
            },
            conjugator: None,
            witness: None,
            seed,
        },
    })
}

/// Block-diagonal sum of split-form pairs sharing `θ` and `θ*`. The first
/// block is recorded as the invariant-subspace witness.
pub fn gen_reducible(spec: FieldSpec, parts: &[SplitFormParams], seed: u64) -> Result<GeneratedInstance, GenError> {
    let first = parts.first().ok_or(GenError::EmptyDims)?;
    if parts.len() < 2 {
        return Err(GenError::IncompatibleBlocks);
    }
    if parts
        .iter()
        .any(|p| p.theta != first.theta || p.theta_star != first.theta_star)
    {
        return Err(GenError::IncompatibleBlocks);
    }
    let blocks = parts
        .iter()
        .enumerate()
        .map(|(k, p)| gen_split_form(spec, &p.dims, &p.theta, &p.theta_star, seed.wrapping_add(k as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let a = Matrix::direct_sum(&blocks.iter().map(|b| b.a.clone()).collect::<Vec<_>>())?;
    let astar = Matrix::direct_sum(&blocks.iter().map(|b| b.astar.clone()).collect::<Vec<_>>())?;
    let n = a.rows();
    let d = first.dims.len() - 1;
    let sizes: Vec<usize> = blocks.iter().map(|b| b.a.rows()).collect();
    let starts = offsets(&sizes);
    let subspaces = (0..=d)
        .map(|i| {
            let mut idx = Vec::new();
            for (k, p) in parts.iter().enumerate() {
                let local = offsets(&p.dims);
                idx.extend((local[i]..local[i + 1]).map(|c| starts[k] + c));
            }
            SubspaceBasis::coordinate(spec, n, idx)
        })
        .collect();
    Ok(GeneratedInstance {
        a,
        astar,
        truth: Truth {
            kind: ConstructionKind::ReducibleSum,
            base: ConstructionKind::ReducibleSum,
            split: SplitDecomposition {
                subspaces,
                theta: first.theta.clone(),
                theta_star: first.theta_star.clone(),
            },
            conjugator: None,
            witness: Some(SubspaceBasis::coordinate(spec, n, 0..sizes[0])),
            seed,
        },
    })
}

fn random_invertible(spec: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Result<(Matrix, Matrix), GenError> {
    for _ in 0..CONJUGATOR_ATTEMPTS {
        let p = Matrix::from_fn(spec, n, n, |_, _| match spec.modulus() {
            Some(q) => spec.from_i64(rng.gen_range(0..q as i64)),
            None => spec.from_i64(rng.gen_range(-3i64..=3)),
        });
        if let Some(inv) = p.inverse() {
            return Ok((p, inv));
        }
    }
    Err(GenError::SingularConjugator(CONJUGATOR_ATTEMPTS))
}

/// Applies a random change of basis `P`: `A ↦ P A P^{-1}`, `A* ↦ P A* P^{-1}`,
/// and every recorded subspace `W ↦ P W`.
pub fn conjugate(inst: &GeneratedInstance, seed: u64) -> Result<GeneratedInstance, GenError> {
    let mut rng = rng(seed);
    let (p, pinv) = random_invertible(inst.a.spec(), inst.a.rows(), &mut rng)?;
    conjugate_by(inst, &p, &pinv, seed)
}

/// Conjugation by a given invertible `p` with inverse `pinv`.
pub fn conjugate_by(inst: &GeneratedInstance, p: &Matrix, pinv: &Matrix, seed: u64) -> Result<GeneratedInstance, GenError> {
    let a = p.checked_mul(&inst.a)?.checked_mul(pinv)?;
    let astar = p.checked_mul(&inst.astar)?.checked_mul(pinv)?;
    let subspaces = inst
        .truth
        .split
        .subspaces
        .iter()
        .map(|u| apply(p, u))
        .collect::<Result<Vec<_>, _>>()?;
    let witness = inst.truth.witness.as_ref().map(|w| apply(p, w)).transpose()?;
    let conjugator = match &inst.truth.conjugator {
        Some(q) => p.checked_mul(q)?,
        None => p.clone(),
    };
    Ok(GeneratedInstance {
        a,
        astar,
        truth: Truth {
            kind: ConstructionKind::Conjugated,
            base: inst.truth.base,
            split: SplitDecomposition {
                subspaces,
                theta: inst.truth.split.theta.clone(),
                theta_star: inst.truth.split.theta_star.clone(),
            },
            conjugator: Some(conjugator),
            witness,
            seed,
        },
    })
}

/// Degrees `d_1, ..., d_k` (each at least 1) with
/// `∏ (1 + x + ... + x^{d_j}) = Σ dims[i] x^i`, if any.
fn factor_shape(dims: &[usize]) -> Option<Vec<usize>> {
    fn go(poly: &[i64], min_deg: usize, acc: &mut Vec<usize>) -> bool {
        if poly == [1] {
            return true;
        }
        let top = poly.len() - 1;
        for k in min_deg..=top {
            // Divide by 1 + x + ... + x^k, i.e. multiply by (1 - x) and
            // divide by (1 - x^{k+1}).
            let mut times = vec![0i64; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                times[i] += c;
                times[i + 1] -= c;
            }
            let mut q = vec![0i64; poly.len() - k];
            let mut rem = times;
            for i in 0..q.len() {
                q[i] = rem[i];
                rem[i + k + 1] += rem[i];
                rem[i] = 0;
            }
            if rem.iter().all(|&c| c == 0) && q.iter().all(|&c| c > 0) {
                acc.push(k);
                if go(&q, k, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let poly: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
    if dims.len() == 1 {
        return (dims[0] == 1).then(Vec::new);
    }
    let mut acc = Vec::new();
    go(&poly, 1, &mut acc).then_some(acc)
}

fn kron(x: &Matrix, y: &Matrix) -> Matrix {
    let (n, m) = (x.rows(), y.rows());
    Matrix::from_fn(x.spec(), n * m, n * m, |r, c| {
        &x[(r / m, c / m)] * &y[(r % m, c % m)]
    })
}

/// `e + f` and `t e + t^{-1} f` on the `(k+1)`-dimensional sl2-module, in the
/// weight basis `v_0, ..., v_k` with `e v_i = (k-i+1) v_{i-1}` and
/// `f v_i = (i+1) v_{i+1}`.
fn evaluation_pair(spec: FieldSpec, k: usize, t: &FieldElement) -> (Matrix, Matrix) {
    let tinv = t.inv().expect("evaluation parameter is nonzero");
    let mut a = Matrix::zeros(spec, k + 1, k + 1);
    let mut b = Matrix::zeros(spec, k + 1, k + 1);
    for i in 0..=k {
        if i > 0 {
            let c = spec.from_i64((k - i + 1) as i64);
            a[(i - 1, i)] = c.clone();
            b[(i - 1, i)] = &c * t;
        }
        if i < k {
            let c = spec.from_i64((i + 1) as i64);
            a[(i + 1, i)] = c.clone();
            b[(i + 1, i)] = &c * &tinv;
        }
    }
    (a, b)
}

/// `(α, β)` with `θ_k = α (D - 2k) + β`, when `θ` is an arithmetic
/// progression of length `D + 1`.
fn affine_from_base(spec: FieldSpec, theta: &[FieldElement]) -> Option<(FieldElement, FieldElement)> {
    let big_d = theta.len() - 1;
    if big_d == 0 {
        return Some((spec.one(), theta[0].clone()));
    }
    let step = &theta[1] - &theta[0];
    if theta.windows(2).any(|w| &w[1] - &w[0] != step) {
        return None;
    }
    let alpha = (-&step).try_div(&spec.from_i64(2)).ok()?;
    let beta = &theta[0] - &(&alpha * &spec.from_i64(big_d as i64));
    Some((alpha, beta))
}

/// A tridiagonal pair with eigenspace dimensions `dims` and eigenvalue
/// sequences `θ`, `θ*`, certified by [`is_tridiagonal_pair`].
///
/// The base pair is `(Σ_j e_j + f_j, Σ_j t_j e_j + t_j^{-1} f_j)` on a tensor
/// product of sl2-modules of dimensions `d_j + 1` with random evaluation
/// parameters `t_j`; both have eigenvalues `D, D-2, ..., -D` with
/// `D = Σ d_j`. Affine maps move these to `θ` and `θ*`, so both sequences
/// must be arithmetic progressions (automatic for `d <= 1`). A
/// non-affine change of eigenvalues would break the three-term conditions.
/// `dims` must be the coefficient list of `∏ (1 + x + ... + x^{d_j})`.
/// Candidates that come out reducible (for instance `t_j^2 = 1`) are
/// rejected and redrawn.
pub fn gen_tridiagonal_form(
    spec: FieldSpec,
    dims: &[usize],
    theta: &[FieldElement],
    theta_star: &[FieldElement],
    seed: u64,
) -> Result<GeneratedInstance, GenError> {
    check_params(spec, dims, theta, theta_star)?;
    let degrees = factor_shape(dims).ok_or_else(|| GenError::UnsupportedShape(dims.to_vec()))?;
    let big_d: usize = degrees.iter().sum();
    if let Some(p) = spec.modulus() {
        if big_d > 0 && (p == 2 || p as usize <= big_d) {
            return Err(GenError::CharacteristicTooSmall(spec));
        }
    }
    let mut rng = rng(seed);
    let (alpha, beta) = affine_from_base(spec, theta).ok_or(GenError::NonArithmeticEigenvalues)?;
    let (alpha_s, beta_s) = affine_from_base(spec, theta_star).ok_or(GenError::NonArithmeticEigenvalues)?;
    let opts = AnalysisOptions::default();
    for _ in 0..TRIDIAGONAL_ATTEMPTS {
        let mut a0 = Matrix::zeros(spec, 1, 1);
        let mut b0 = Matrix::zeros(spec, 1, 1);
        let mut size = 1;
        for &k in &degrees {
            let t = match spec.kind() {
                FieldKind::Rationals => spec.from_i64(rng.gen_range(2i64..=9)),
                FieldKind::PrimeField => random_nonzero(spec, &mut rng),
            };
            let (ea, eb) = evaluation_pair(spec, k, &t);
            let id_new = Matrix::identity(spec, k + 1);
            let id_old = Matrix::identity(spec, size);
            a0 = kron(&a0, &id_new).checked_add(&kron(&id_old, &ea))?;
            b0 = kron(&b0, &id_new).checked_add(&kron(&id_old, &eb))?;
            size *= k + 1;
        }
        let a = a0.scale(&alpha).checked_add(&Matrix::scalar(spec, size, &beta))?;
        let astar = b0.scale(&alpha_s).checked_add(&Matrix::scalar(spec, size, &beta_s))?;
        let (p, pinv) = random_invertible(spec, size, &mut rng)?;
        let a = p.checked_mul(&a)?.checked_mul(&pinv)?;
        let astar = p.checked_mul(&astar)?.checked_mul(&pinv)?;

        let (Ok(ea), Ok(eb)) = (eigen_structure(&a), eigen_structure(&astar)) else { continue };
        if !ea.diagonalizable || !eb.diagonalizable || ea.eigenvalues.len() != dims.len() || eb.eigenvalues.len() != dims.len() {
            continue;
        }
        let oa = OrderedEigenData::from_thetas(&ea, theta)?;
        let ob = OrderedEigenData::from_thetas(&eb, theta_star)?;
        let split = split_from_formula(&oa, &ob)?;
        if split.dims() != dims || !verify_split(&a, &astar, &split)? {
            continue;
        }
        if !is_tridiagonal_pair(&a, &astar, &opts)?.is_tridiagonal() {
            continue;
        }
        return Ok(GeneratedInstance {
            a,
            astar,
            truth: Truth {
                kind: ConstructionKind::TridiagonalForm,
                base: ConstructionKind::TridiagonalForm,
                split,
                conjugator: Some(p),
                witness: None,
                seed,
            },
        });
    }
    Err(GenError::GenerationBudgetExceeded(TRIDIAGONAL_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modstruct::{decide_irreducible, verify_invariant, IrreducibilityOptions, IrreducibilityStatus};
    use crate::pair::{dimension_profile, recover_hessenberg_from_split, TridiagonalStatus};

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn ints(spec: FieldSpec, xs: &[i64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| spec.from_i64(x)).collect()
    }

    #[test]
    fn canonical_worked_example() {
        let t = ints(q(), &[0, 1, 2]);
        let g = gen_split_form_with(q(), &[1, 1, 1], &t, &t, Fill::Ones, 0).unwrap();
        assert_eq!(g.a, Matrix::from_i64(q(), &[&[2, 0, 0], &[1, 1, 0], &[0, 1, 0]]).unwrap());
        assert_eq!(g.astar, Matrix::from_i64(q(), &[&[0, 1, 0], &[0, 1, 1], &[0, 0, 2]]).unwrap());
    }

    #[test]
    fn scalar_instance() {
        let g = gen_split_form(q(), &[1], &ints(q(), &[4]), &ints(q(), &[-1]), 9).unwrap();
        assert_eq!(g.a, Matrix::from_i64(q(), &[&[4]]).unwrap());
        assert_eq!(g.astar, Matrix::from_i64(q(), &[&[-1]]).unwrap());
    }

    #[test]
    fn gf7_profile_121() {
        let f = FieldSpec::prime(7).unwrap();
        let g = gen_split_form(f, &[1, 2, 1], &ints(f, &[0, 3, 5]), &ints(f, &[1, 2, 6]), 4).unwrap();
        assert!(verify_split(&g.a, &g.astar, &g.truth.split).unwrap());
        assert!(recover_hessenberg_from_split(&g.a, &g.astar, &g.truth.split).unwrap());
        let (ea, eb) = (eigen_structure(&g.a).unwrap(), eigen_structure(&g.astar).unwrap());
        let oa = OrderedEigenData::from_thetas(&ea, &g.truth.split.theta).unwrap();
        let ob = OrderedEigenData::from_thetas(&eb, &g.truth.split.theta_star).unwrap();
        let prof = dimension_profile(&g.truth.split, &oa, &ob).unwrap();
        assert_eq!(prof.eigen_a_reversed, vec![1, 2, 1]);
        assert_eq!(prof.eigen_astar, vec![1, 2, 1]);
        assert_eq!(prof.split, vec![1, 2, 1]);
    }

    #[test]
    fn parameter_errors() {
        let t = ints(q(), &[0, 1]);
        assert_eq!(gen_split_form(q(), &[], &[], &[], 0), Err(GenError::EmptyDims));
        assert_eq!(gen_split_form(q(), &[1, 0], &t, &t, 0), Err(GenError::EmptyDims));
        assert_eq!(gen_split_form(q(), &[1, 1, 1], &t, &t, 0), Err(GenError::LengthMismatch(3, 2, 2)));
        let dup = ints(q(), &[1, 1]);
        assert_eq!(gen_split_form(q(), &[1, 1], &dup, &t, 0), Err(GenError::DuplicateEigenvalue));
    }

    #[test]
    fn same_seed_same_instance() {
        let f = FieldSpec::prime(11).unwrap();
        let t = ints(f, &[1, 2, 3]);
        let x = gen_split_form(f, &[2, 1, 2], &t, &t, 77).unwrap();
        let y = gen_split_form(f, &[2, 1, 2], &t, &t, 77).unwrap();
        let z = gen_split_form(f, &[2, 1, 2], &t, &t, 78).unwrap();
        assert_eq!(x, y);
        assert_ne!(x.a, z.a);
    }

    #[test]
    fn reducible_sum_of_scalars() {
        let p = SplitFormParams { dims: vec![1], theta: ints(q(), &[2]), theta_star: ints(q(), &[3]) };
        let g = gen_reducible(q(), &[p.clone(), p], 0).unwrap();
        assert_eq!(g.truth.witness, Some(SubspaceBasis::coordinate(q(), 2, [0])));
        let v = decide_irreducible(&g.a, &g.astar, &IrreducibilityOptions::default()).unwrap();
        assert_eq!(v.status, IrreducibilityStatus::Reducible);
    }

    #[test]
    fn reducible_sum_keeps_split() {
        let f = FieldSpec::prime(5).unwrap();
        let p1 = SplitFormParams { dims: vec![1, 1], theta: ints(f, &[0, 1]), theta_star: ints(f, &[2, 4]) };
        let p2 = SplitFormParams { dims: vec![2, 1], ..p1.clone() };
        let g = gen_reducible(f, &[p1, p2], 3).unwrap();
        assert!(verify_split(&g.a, &g.astar, &g.truth.split).unwrap());
        assert!(recover_hessenberg_from_split(&g.a, &g.astar, &g.truth.split).unwrap());
        assert!(verify_invariant(g.truth.witness.as_ref().unwrap(), &g.a, &g.astar).unwrap());
    }

    #[test]
    fn conjugation_transports_truth() {
        let f = FieldSpec::prime(7).unwrap();
        let g = gen_split_form(f, &[1, 2, 1], &ints(f, &[0, 3, 5]), &ints(f, &[1, 2, 6]), 4).unwrap();
        let id = Matrix::identity(f, 4);
        let same = conjugate_by(&g, &id, &id, 4).unwrap();
        assert_eq!((same.a.clone(), same.astar.clone()), (g.a.clone(), g.astar.clone()));
        assert_eq!(same.truth.split, g.truth.split);

        let c = conjugate(&g, 12).unwrap();
        assert_eq!(c.truth.kind, ConstructionKind::Conjugated);
        assert_eq!(c.truth.base, ConstructionKind::SplitForm);
        assert!(verify_split(&c.a, &c.astar, &c.truth.split).unwrap());
        let opts = IrreducibilityOptions::default();
        assert_eq!(
            decide_irreducible(&g.a, &g.astar, &opts).unwrap().status,
            decide_irreducible(&c.a, &c.astar, &opts).unwrap().status
        );
    }

    #[test]
    fn shapes_factor_into_strings() {
        assert_eq!(factor_shape(&[1]), Some(vec![]));
        assert_eq!(factor_shape(&[1, 1, 1]), Some(vec![2]));
        assert_eq!(factor_shape(&[1, 2, 1]), Some(vec![1, 1]));
        assert_eq!(factor_shape(&[1, 2, 2, 1]), Some(vec![1, 2]));
        assert_eq!(factor_shape(&[1, 3, 3, 1]), Some(vec![1, 1, 1]));
        assert_eq!(factor_shape(&[1, 3, 1]), None);
        assert_eq!(factor_shape(&[2, 3]), None);
        assert_eq!(factor_shape(&[2]), None);
    }

    #[test]
    fn tridiagonal_instances_certify() {
        let f = FieldSpec::prime(11).unwrap();
        for seed in 0..4 {
            let g = gen_tridiagonal_form(f, &[1, 1, 1], &ints(f, &[3, 7, 0]), &ints(f, &[0, 5, 10]), seed).unwrap();
            let v = is_tridiagonal_pair(&g.a, &g.astar, &AnalysisOptions::default()).unwrap();
            assert_eq!(v.status, TridiagonalStatus::Tridiagonal);
            assert_eq!(v.orderings.len(), 4);
            assert!(verify_split(&g.a, &g.astar, &g.truth.split).unwrap());
        }
        let g = gen_tridiagonal_form(q(), &[1, 2, 1], &ints(q(), &[0, 1, 2]), &ints(q(), &[5, -1, -7]), 2).unwrap();
        assert_eq!(g.truth.split.dims(), vec![1, 2, 1]);
        let v = is_tridiagonal_pair(&g.a, &g.astar, &AnalysisOptions::default()).unwrap();
        assert!(v.is_tridiagonal());
        let g = gen_tridiagonal_form(q(), &[1, 2], &ints(q(), &[0, 1]), &ints(q(), &[2, 3]), 2);
        assert_eq!(g, Err(GenError::UnsupportedShape(vec![1, 2])));
        let g = gen_tridiagonal_form(q(), &[1], &ints(q(), &[3]), &ints(q(), &[1]), 0).unwrap();
        assert_eq!(g.a.rows(), 1);
    }

    #[test]
    fn tridiagonal_shape_and_field_limits() {
        let f3 = FieldSpec::prime(3).unwrap();
        let t = ints(q(), &[0, 1, 2]);
        assert_eq!(
            gen_tridiagonal_form(q(), &[1, 3, 1], &t, &t, 0),
            Err(GenError::UnsupportedShape(vec![1, 3, 1]))
        );
        let f3t = ints(f3, &[0, 1, 2]);
        assert_eq!(
            gen_tridiagonal_form(f3, &[1, 3, 3, 1], &[f3t.clone(), ints(f3, &[0])].concat(), &[f3t.clone(), ints(f3, &[0])].concat(), 0),
            Err(GenError::DuplicateEigenvalue)
        );
        let f2 = FieldSpec::prime(2).unwrap();
        let f2t = ints(f2, &[0, 1]);
        assert_eq!(gen_tridiagonal_form(f2, &[1, 1], &f2t, &f2t, 0), Err(GenError::CharacteristicTooSmall(f2)));
        assert_eq!(
            gen_tridiagonal_form(q(), &[1, 1, 1], &ints(q(), &[0, 1, 3]), &t, 0),
            Err(GenError::NonArithmeticEigenvalues)
        );
    }
}
