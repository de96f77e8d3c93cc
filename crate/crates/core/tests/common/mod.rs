#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hessenberg::field::{FieldElement, FieldSpec};
use hessenberg::gen::{conjugate, gen_split_form, sample_distinct, GeneratedInstance};
use hessenberg::linalg::{apply, subspace_contains, sum_all, Matrix, SubspaceBasis};
use hessenberg::spectral::EigenStructure;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fields() -> [FieldSpec; 4] {
    [
        FieldSpec::prime(5).unwrap(),
        FieldSpec::prime(7).unwrap(),
        FieldSpec::prime(11).unwrap(),
        FieldSpec::rationals(),
    ]
}

pub fn ints(spec: FieldSpec, vs: &[i64]) -> Vec<FieldElement> {
    vs.iter().map(|&v| spec.from_i64(v)).collect()
}

/// Block dimensions with `d <= max_d`, blocks in `1..=3` and total at most 8.
pub fn random_dims(rng: &mut ChaCha8Rng, max_d: usize) -> Vec<usize> {
    let d = rng.gen_range(0..=max_d);
    let mut dims: Vec<usize> = (0..=d).map(|_| rng.gen_range(1..=3)).collect();
    while dims.iter().sum::<usize>() > 8 {
        let k = dims.iter().position(|&x| x > 1).expect("d + 1 <= 5 ones fit in 8");
        dims[k] -= 1;
    }
    dims
}

/// A split-form instance with random field, shape, eigenvalues and fill,
/// conjugated half of the time.
pub fn split_form_instance(seed: u64) -> GeneratedInstance {
    let mut r = rng(seed);
    let spec = fields()[r.gen_range(0..4)];
    let dims = random_dims(&mut r, 4);
    split_form_with_dims(spec, &dims, seed, r.gen_bool(0.5))
}

pub fn split_form_with_dims(spec: FieldSpec, dims: &[usize], seed: u64, conj: bool) -> GeneratedInstance {
    let k = dims.len();
    let theta = sample_distinct(spec, k, seed.wrapping_mul(2));
    let theta_star = sample_distinct(spec, k, seed.wrapping_mul(2).wrapping_add(1));
    let inst = gen_split_form(spec, dims, &theta, &theta_star, seed).unwrap();
    if conj {
        conjugate(&inst, seed ^ 0x5eed).unwrap()
    } else {
        inst
    }
}

pub fn random_matrix(spec: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(spec, n, n, |_, _| match spec.modulus() {
        Some(p) => spec.from_i64(rng.gen_range(0..p as i64)),
        None => spec.from_i64(rng.gen_range(-3i64..=3)),
    })
}

pub fn random_invertible(spec: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> (Matrix, Matrix) {
    loop {
        let p = random_matrix(spec, n, rng);
        if let Some(inv) = p.inverse() {
            return (p, inv);
        }
    }
}

/// `P diag(values) P^{-1}`.
pub fn diagonalizable(spec: FieldSpec, values: &[FieldElement], rng: &mut ChaCha8Rng) -> Matrix {
    let n = values.len();
    let (p, pinv) = random_invertible(spec, n, rng);
    let d = Matrix::from_fn(spec, n, n, |i, j| if i == j { values[i].clone() } else { spec.zero() });
    p.checked_mul(&d).unwrap().checked_mul(&pinv).unwrap()
}

/// `m E_i ⊆ E_{i-1} + E_i + E_{i+1}` for the eigenspaces of `e` listed in
/// the order `ord`, checked directly on the eigenspaces.
pub fn three_term_direct(m: &Matrix, e: &EigenStructure, ord: &[usize]) -> bool {
    let (spec, n) = (m.spec(), m.rows());
    let k = ord.len();
    (0..k).all(|i| {
        let band: Vec<&SubspaceBasis> = (i.saturating_sub(1)..=(i + 1).min(k - 1))
            .map(|t| &e.eigenspaces[ord[t]])
            .collect();
        let band = sum_all(spec, n, band).unwrap();
        subspace_contains(&band, &apply(m, &e.eigenspaces[ord[i]]).unwrap()).unwrap()
    })
}
