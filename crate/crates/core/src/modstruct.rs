//! Irreducibility of a pair: is there a proper nonzero subspace invariant
//! under both transformations?
//!
//! [`decide_irreducible`] runs a ladder of increasingly expensive tests and
//! stops at the first conclusive one. Every `Reducible` verdict carries a
//! witness subspace that can be re-checked with [`verify_invariant`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{
    apply, kernel, subspace_contains, unit_vector, EchelonBuilder, LinalgError, Matrix,
    SubspaceBasis,
};
use crate::spectral::char_poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModstructError {
    #[error("cannot spin the zero vector")]
    ZeroVector,
    #[error("generators have mismatched sizes")]
    SizeMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IrreducibilityStatus {
    Irreducible,
    Reducible,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DecisionMethod {
    BruteForce,
    MeatAxe,
    AlgebraDimension,
    SpinProbe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityVerdict {
    pub status: IrreducibilityStatus,
    /// Present exactly when `status` is `Reducible`.
    pub witness: Option<SubspaceBasis>,
    pub method: DecisionMethod,
}

impl IrreducibilityVerdict {
    fn irreducible(method: DecisionMethod) -> Self {
        IrreducibilityVerdict {
            status: IrreducibilityStatus::Irreducible,
            witness: None,
            method,
        }
    }

    fn reducible(witness: SubspaceBasis, method: DecisionMethod) -> Self {
        IrreducibilityVerdict {
            status: IrreducibilityStatus::Reducible,
            witness: Some(witness),
            method,
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.status == IrreducibilityStatus::Irreducible
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrreducibilityOptions {
    pub seed: u64,
    /// Upper bound on `(p^n - 1)/(p - 1)` for exhaustive spinning, and on
    /// the projective size of a nullspace examined by the Norton test.
    pub brute_force_budget: u64,
    pub meataxe_draws: usize,
}

impl Default for IrreducibilityOptions {
    fn default() -> Self {
        IrreducibilityOptions {
            seed: 0,
            brute_force_budget: 1 << 14,
            meataxe_draws: 64,
        }
    }
}

fn check_generators(gens: &[&Matrix]) -> Result<(FieldSpec, usize), ModstructError> {
    let first = gens.first().ok_or(ModstructError::SizeMismatch)?;
    let (spec, n) = (first.spec(), first.rows());
    if gens
        .iter()
        .any(|g| !g.is_square() || g.rows() != n || g.spec() != spec)
    {
        return Err(ModstructError::SizeMismatch);
    }
    Ok((spec, n))
}

/// Smallest subspace containing `v` and closed under every generator.
pub fn spin(v: &[FieldElement], generators: &[&Matrix]) -> Result<SubspaceBasis, ModstructError> {
    let (spec, n) = check_generators(generators)?;
    if v.len() != n {
        return Err(LinalgError::AmbientMismatch(n, v.len()).into());
    }
    if v.iter().all(FieldElement::is_zero) {
        return Err(ModstructError::ZeroVector);
    }
    let mut span = EchelonBuilder::new(spec, n);
    span.insert(v);
    let mut queue = vec![v.to_vec()];
    while let Some(w) = queue.pop() {
        if span.dim() == n {
            break;
        }
        for g in generators {
            let img = g.mul_vec(&w);
            if span.insert(&img) {
                queue.push(img);
            }
        }
    }
    Ok(span.to_subspace())
}

/// The unital algebra generated by a set of square matrices.
#[derive(Debug, Clone)]
pub struct AlgebraClosure {
    pub dim: usize,
    /// Linearly independent products of generators spanning the algebra.
    pub spanning: Vec<Matrix>,
}

pub fn algebra_closure(generators: &[&Matrix]) -> Result<AlgebraClosure, ModstructError> {
    let (spec, n) = check_generators(generators)?;
    let full = n * n;
    let mut span = EchelonBuilder::new(spec, full);
    let id = Matrix::identity(spec, n);
    span.insert(id.entries());
    let mut spanning = vec![id.clone()];
    let mut queue = vec![id];
    while let Some(b) = queue.pop() {
        if span.dim() == full {
            break;
        }
        for g in generators {
            let prod = *g * &b;
            if span.insert(prod.entries()) {
                spanning.push(prod.clone());
                queue.push(prod);
            }
        }
    }
    Ok(AlgebraClosure {
        dim: span.dim(),
        spanning,
    })
}

/// Whether `A W ⊆ W` and `A* W ⊆ W`.
pub fn verify_invariant(w: &SubspaceBasis, a: &Matrix, astar: &Matrix) -> Result<bool, ModstructError> {
    Ok(subspace_contains(w, &apply(a, w)?)? && subspace_contains(w, &apply(astar, w)?)?)
}

fn is_proper(s: &SubspaceBasis) -> bool {
    !s.is_zero() && !s.is_full()
}

/// Vectors whose first nonzero coordinate is 1: one per projective point.
pub(crate) fn projective_points(spec: FieldSpec, n: usize) -> impl Iterator<Item = Vec<FieldElement>> {
    let p = u64::from(spec.modulus().expect("finite field"));
    (0..n).flat_map(move |lead| {
        let tail = n - lead - 1;
        (0..p.pow(tail as u32)).map(move |mut code| {
            let mut v = vec![spec.zero(); n];
            v[lead] = spec.one();
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = spec.from_i64((code % p) as i64);
                code /= p;
            }
            v
        })
    })
}

fn projective_count(p: u64, dim: usize) -> Option<u64> {
    let total = p.checked_pow(dim as u32)?;
    Some((total - 1) / (p - 1))
}

/// Basis vectors of all in-field eigenspaces; the characteristic polynomial
/// need not split.
fn eigenvectors(m: &Matrix) -> Vec<Vec<FieldElement>> {
    let cp = char_poly(m).expect("square");
    cp.roots()
        .iter()
        .flat_map(|t| kernel(&m.shift(t)).basis().to_vec())
        .collect()
}

/// Complement witness from a proper dual submodule `s ⊆ V*`.
fn annihilator(s: &SubspaceBasis) -> SubspaceBasis {
    kernel(&s.to_matrix())
}

enum Norton {
    Irreducible,
    Reducible(SubspaceBasis),
    Inconclusive,
}

/// Norton's criterion for a singular algebra element `theta`: if every
/// nonzero vector of `ker theta` spins to `V` and one nonzero vector of
/// `ker theta^T` spins to `V*` under the transposed generators, the module
/// is irreducible. A proper spin on either side gives a witness.
fn norton_test(theta: &Matrix, gens: &[&Matrix], gens_t: &[&Matrix], budget: u64) -> Norton {
    let spec = theta.spec();
    let null = kernel(theta);
    if null.is_zero() {
        return Norton::Inconclusive;
    }
    let dim = null.dim();
    let candidates: Vec<Vec<FieldElement>> = if dim == 1 {
        vec![null.basis()[0].clone()]
    } else {
        let Some(p) = spec.order() else {
            return Norton::Inconclusive;
        };
        match projective_count(p, dim) {
            Some(c) if c <= budget => projective_points(spec, dim)
                .map(|coef| combine(&coef, null.basis()))
                .collect(),
            _ => return Norton::Inconclusive,
        }
    };
    for v in &candidates {
        let s = spin(v, gens).expect("nonzero vector");
        if is_proper(&s) {
            return Norton::Reducible(s);
        }
    }
    let dual_null = kernel(&theta.transpose());
    let w = &dual_null.basis()[0];
    let s = spin(w, gens_t).expect("nonzero vector");
    if is_proper(&s) {
        Norton::Reducible(annihilator(&s))
    } else {
        Norton::Irreducible
    }
}

fn combine(coef: &[FieldElement], basis: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    let n = basis[0].len();
    let spec = coef[0].spec();
    let mut v = vec![spec.zero(); n];
    for (c, b) in coef.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x = &*x + &(c * y);
        }
    }
    v
}

/// Primes for the modular algebra-dimension certificate over `Q`.
const CERTIFICATE_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

fn reduce_matrix(m: &Matrix, target: FieldSpec) -> Option<Matrix> {
    let rows = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.reduce_mod(target)).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Matrix::from_rows(target, rows).ok()
}

/// Over `Q`: reduction mod `p` is a ring map on `p`-integral matrices, and
/// words independent mod `p` are independent over `Q`. So an algebra of
/// dimension `n^2` mod some `p` has dimension `n^2` over `Q`. A smaller
/// modular dimension proves nothing.
fn full_algebra_mod_p(a: &Matrix, astar: &Matrix) -> Result<bool, ModstructError> {
    let n = a.rows();
    for p in CERTIFICATE_PRIMES {
        let target = FieldSpec::prime(p).expect("prime below 2^31");
        if let (Some(x), Some(y)) = (reduce_matrix(a, target), reduce_matrix(astar, target)) {
            if algebra_closure(&[&x, &y])?.dim == n * n {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Decides whether no proper nonzero subspace is invariant under both `a`
/// and `astar`.
///
/// The ladder: algebra dimension `n^2` (Burnside) proves irreducibility;
/// spin probes from standard and eigen vectors look for a witness; over
/// `GF(p)` small spaces are settled by spinning one vector per projective
/// point, larger ones by a seeded Norton test on random algebra elements.
/// Over `Q` the algebra dimension is first certified modulo large primes,
/// and computed exactly only after the probes fail. The Norton test is
/// used only with one-dimensional nullspaces of `A - θI` and `A* - θ*I`;
/// otherwise the answer is `Undetermined`.
pub fn decide_irreducible(
    a: &Matrix,
    astar: &Matrix,
    opts: &IrreducibilityOptions,
) -> Result<IrreducibilityVerdict, ModstructError> {
    let gens = [a, astar];
    let (spec, n) = check_generators(&gens)?;
    if n == 0 {
        return Err(ModstructError::SizeMismatch);
    }

    if !spec.is_finite() && full_algebra_mod_p(a, astar)? {
        return Ok(IrreducibilityVerdict::irreducible(DecisionMethod::AlgebraDimension));
    }
    let closure = if spec.is_finite() {
        let c = algebra_closure(&gens)?;
        if c.dim == n * n {
            return Ok(IrreducibilityVerdict::irreducible(DecisionMethod::AlgebraDimension));
        }
        Some(c)
    } else {
        None
    };

    let probes = (0..n)
        .map(|i| unit_vector(spec, n, i))
        .chain(eigenvectors(a))
        .chain(eigenvectors(astar));
    for v in probes {
        let s = spin(&v, &gens)?;
        if is_proper(&s) {
            return Ok(IrreducibilityVerdict::reducible(s, DecisionMethod::SpinProbe));
        }
    }

    let at = a.transpose();
    let astar_t = astar.transpose();
    let gens_t = [&at, &astar_t];

    let Some(p) = spec.order() else {
        if algebra_closure(&gens)?.dim == n * n {
            return Ok(IrreducibilityVerdict::irreducible(DecisionMethod::AlgebraDimension));
        }
        for m in [a, astar] {
            for t in char_poly(m).expect("square").roots() {
                match norton_test(&m.shift(&t), &gens, &gens_t, 1) {
                    Norton::Irreducible => {
                        return Ok(IrreducibilityVerdict::irreducible(DecisionMethod::MeatAxe))
                    }
                    Norton::Reducible(w) => {
                        return Ok(IrreducibilityVerdict::reducible(w, DecisionMethod::MeatAxe))
                    }
                    Norton::Inconclusive => {}
                }
            }
        }
        return Ok(IrreducibilityVerdict {
            status: IrreducibilityStatus::Undetermined,
            witness: None,
            method: DecisionMethod::MeatAxe,
        });
    };

    if projective_count(p, n).is_some_and(|c| c <= opts.brute_force_budget) {
        for v in projective_points(spec, n) {
            let s = spin(&v, &gens)?;
            if is_proper(&s) {
                return Ok(IrreducibilityVerdict::reducible(s, DecisionMethod::BruteForce));
            }
        }
        return Ok(IrreducibilityVerdict::irreducible(DecisionMethod::BruteForce));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.meataxe_draws {
        let mut theta = Matrix::zeros(spec, n, n);
        for b in &closure.as_ref().expect("finite field").spanning {
            let c = spec.from_i64(rng.gen_range(0..i64::from(p as u32)));
            theta = theta.checked_add(&b.scale(&c))?;
        }
        let roots = char_poly(&theta).expect("square").roots();
        for t in roots.iter().take(2) {
            match norton_test(&theta.shift(t), &gens, &gens_t, opts.brute_force_budget) {
                Norton::Irreducible => {
                    return Ok(IrreducibilityVerdict::irreducible(DecisionMethod::MeatAxe))
                }
                Norton::Reducible(w) => {
                    return Ok(IrreducibilityVerdict::reducible(w, DecisionMethod::MeatAxe))
                }
                Norton::Inconclusive => {}
            }
        }
    }
    Ok(IrreducibilityVerdict {
        status: IrreducibilityStatus::Undetermined,
        witness: None,
        method: DecisionMethod::MeatAxe,
    })
}
