use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::Matrix;

/// Univariate polynomial with coefficients stored low-to-high. The leading
/// stored coefficient is nonzero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(spec: FieldSpec, coeffs: Vec<FieldElement>) -> Self {
        assert!(coeffs.iter().all(|c| c.spec() == spec), "coefficient from a different field");
        let mut p = Polynomial { spec, coeffs };
        p.trim();
        p
    }

    pub fn from_i64(spec: FieldSpec, coeffs: &[i64]) -> Self {
        Polynomial::new(spec, coeffs.iter().map(|&c| spec.from_i64(c)).collect())
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Polynomial { spec, coeffs: Vec::new() }
    }

    pub fn one(spec: FieldSpec) -> Self {
        Polynomial::new(spec, vec![spec.one()])
    }

    /// `x - r`.
    pub fn linear(r: &FieldElement) -> Self {
        let spec = r.spec();
        Polynomial::new(spec, vec![-r, spec.one()])
    }

    /// `x^k`.
    pub fn monomial(spec: FieldSpec, k: usize) -> Self {
        let mut c = vec![spec.zero(); k + 1];
        c[k] = spec.one();
        Polynomial::new(spec, c)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FieldElement::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FieldElement::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Polynomial::new(self.spec, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.spec.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(self.spec, n, n);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * m).checked_add(&Matrix::scalar(self.spec, n, c)).expect("square");
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new(self.spec, (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new(self.spec, (0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.spec);
        }
        let mut out = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.spec, out)
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Polynomial::zero(self.spec), Polynomial::zero(self.spec));
        };
        if nd < dd {
            return (Polynomial::zero(self.spec), self.clone());
        }
        let mut quot = vec![self.spec.zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * b);
            }
            quot[k] = c;
        }
        (Polynomial::new(self.spec, quot), Polynomial::new(self.spec, rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.spec,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.spec.from_i64(i as i64))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.div_rem(m).1;
        let mut acc = Polynomial::one(self.spec).div_rem(m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(m).1;
            }
            base = base.mul(&base).div_rem(m).1;
            e >>= 1;
        }
        acc
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots(spec: FieldSpec, roots: &[FieldElement]) -> Self {
        roots
            .iter()
            .fold(Polynomial::one(spec), |acc, r| acc.mul(&Polynomial::linear(r)))
    }

    /// Multiplicity of `r` as a root (0 if not a root). Zero polynomial
    /// yields 0.
    pub fn root_multiplicity(&self, r: &FieldElement) -> usize {
        let lin = Polynomial::linear(r);
        let mut g = self.clone();
        let mut m = 0;
        while !g.is_zero() && g.degree() > Some(0) {
            let (q, rem) = g.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            g = q;
            m += 1;
        }
        m
    }

    /// Distinct roots lying in the coefficient field, ascending.
    pub fn roots(&self) -> Vec<FieldElement> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut roots = match self.spec.modulus() {
            Some(p) => prime_field_roots(self, p),
            None => rational_roots(self),
        };
        roots.sort();
        roots.dedup();
        roots
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Field sizes up to this bound are scanned exhaustively; larger primes go
/// through `gcd(f, x^p - x)` and equal-degree splitting.
const SCAN_LIMIT: u32 = 1 << 12;

fn prime_field_roots(f: &Polynomial, p: u32) -> Vec<FieldElement> {
    let spec = f.spec;
    if p <= SCAN_LIMIT {
        return (0..p)
            .map(|v| spec.from_i64(i64::from(v)))
            .filter(|x| f.eval(x).is_zero())
            .collect();
    }
    let f = f.monic();
    let x = Polynomial::monomial(spec, 1);
    let xp = x.pow_mod(u64::from(p), &f);
    let g = f.gcd(&xp.sub(&x));
    let mut out = Vec::new();
    split_linear_product(&g, p, &mut out);
    out
}

/// Roots of a monic squarefree product of distinct linear factors.
fn split_linear_product(g: &Polynomial, p: u32, out: &mut Vec<FieldElement>) {
    let spec = g.spec;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-&g.coeffs[0]),
        Some(_) => {
            let half = u64::from(p - 1) / 2;
            // For two distinct roots r, s some shift a separates the quadratic
            // characters of r + a and s + a, so this loop always finds a split.
            for a in 0..p {
                let shifted = Polynomial::new(spec, vec![spec.from_i64(i64::from(a)), spec.one()]);
                let h = g.gcd(&shifted.pow_mod(half, g).sub(&Polynomial::one(spec)));
                let dh = h.degree().unwrap_or(0);
                if dh > 0 && Some(dh) < g.degree() {
                    let (q, _) = g.div_rem(&h);
                    split_linear_product(&h, p, out);
                    split_linear_product(&q.monic(), p, out);
                    return;
                }
            }
            unreachable!("no splitting shift for a product of distinct linear factors");
        }
    }
}

/// Rational-root theorem on the primitive integer scaling of `f`.
fn rational_roots(f: &Polynomial) -> Vec<FieldElement> {
    let spec = f.spec;
    let mut roots = Vec::new();
    let mut g = f.clone();
    if g.coeff(0).is_zero() {
        roots.push(spec.zero());
        let shift = g.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        g = Polynomial::new(spec, g.coeffs[shift..].to_vec());
    }
    if g.degree().unwrap_or(0) == 0 {
        return roots;
    }
    // Work with the squarefree part to keep the constant term small.
    let sqfree = g.div_rem(&g.gcd(&g.derivative())).0;
    let ints = integer_coefficients(&sqfree);
    let c0 = ints[0].abs();
    let cn = ints.last().expect("nonconstant").abs();
    let bound = cauchy_bound(&ints);
    let nums = divisors(&c0);
    let dens = divisors(&cn);
    let mut candidates = BTreeSet::new();
    for a in &nums {
        for b in &dens {
            if !a.gcd(b).is_one() {
                continue;
            }
            let r = BigRational::new(a.clone(), b.clone());
            if r > bound {
                continue;
            }
            candidates.insert(r.clone());
            candidates.insert(-r);
        }
    }
    let mut rest = sqfree;
    for r in candidates {
        let x = FieldElement::from_rational(r);
        if rest.eval(&x).is_zero() {
            rest = rest.div_rem(&Polynomial::linear(&x)).0;
            roots.push(x);
            if rest.degree() == Some(0) {
                break;
            }
        }
    }
    roots
}

fn integer_coefficients(f: &Polynomial) -> Vec<BigInt> {
    let qs: Vec<&BigRational> = f.coeffs.iter().map(|c| c.as_rational().expect("rational")).collect();
    let lcm = qs.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

fn cauchy_bound(ints: &[BigInt]) -> BigRational {
    let lead = ints.last().expect("nonempty").abs();
    let max = ints[..ints.len() - 1].iter().map(Signed::abs).max().unwrap_or_default();
    BigRational::one() + BigRational::new(max, lead)
}

/// Trial division stops here; a cofactor left above it is taken as prime.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 22;

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d: u64 = 2;
    while d <= TRIAL_DIVISION_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > m {
            break;
        }
        let mut e = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            e += 1;
        }
        if e > 0 {
            factors.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for base in &divs {
            let mut pw = base.clone();
            next.push(pw.clone());
            for _ in 0..e {
                pw = &pw * &p;
                next.push(pw.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}
