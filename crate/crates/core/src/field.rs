//! Exact scalars: arbitrary-precision rationals and prime fields `GF(p)`.
//!
//! Every [`FieldElement`] carries the field it lives in, so mixing elements
//! of different fields is detected at the point of arithmetic. The checked
//! `try_*` methods report such mistakes as [`FieldError`]; the operator
//! impls (`+`, `-`, `*`, unary `-`) are for code that has already
//! established a common field (a validated [`Matrix`](crate::linalg::Matrix)
//! for instance) and panic on a mismatch.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest prime modulus accepted (exclusive bound).
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("operands belong to different fields ({0} and {1})")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("the field {0} is infinite and cannot be enumerated")]
    InfiniteField(FieldSpec),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse {text:?} as an element of {field}: {reason}")]
    Parse {
        text: String,
        field: FieldSpec,
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// Identifies the scalar field: `Q` or `GF(p)` for a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    kind: FieldKind,
    p: u32,
}

impl FieldSpec {
    pub const fn rationals() -> Self {
        FieldSpec {
            kind: FieldKind::Rationals,
            p: 0,
        }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec {
            kind: FieldKind::PrimeField,
            p: p as u32,
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// The characteristic's prime, or `None` for the rationals.
    pub fn modulus(&self) -> Option<u32> {
        match self.kind {
            FieldKind::Rationals => None,
            FieldKind::PrimeField => Some(self.p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.kind == FieldKind::PrimeField
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        self.modulus().map(u64::from)
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    /// Image of an integer under the canonical ring map `Z -> K`.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        match self.kind {
            FieldKind::Rationals => FieldElement(Repr::Q(BigRational::from_integer(v.into()))),
            FieldKind::PrimeField => {
                let p = i64::from(self.p);
                FieldElement(Repr::Gf {
                    v: v.rem_euclid(p) as u32,
                    p: self.p,
                })
            }
        }
    }

    pub fn rational(&self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    pub fn parse(&self, text: &str) -> Result<FieldElement, FieldError> {
        FieldElement::parse(*self, text)
    }

    /// All elements of a prime field in ascending residue order.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElement>, FieldError> {
        enumerate_field(*self)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::PrimeField => write!(f, "GF({})", self.p),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `Q`, `GF(p)`, `GF:p` or `GFp`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::rationals());
        }
        let upper = t.to_ascii_uppercase();
        let digits = upper
            .strip_prefix("GF")
            .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
            .ok_or_else(|| FieldError::Parse {
                text: s.to_string(),
                field: FieldSpec::rationals(),
                reason: "expected Q or GF(p)".into(),
            })?;
        let p: u64 = digits.parse().map_err(|_| FieldError::Parse {
            text: s.to_string(),
            field: FieldSpec::rationals(),
            reason: "bad prime".into(),
        })?;
        FieldSpec::prime(p)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut q = 3;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Q(BigRational),
    Gf { v: u32, p: u32 },
}

/// An exact scalar in canonical form: a reduced fraction with positive
/// denominator, or a residue in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement(Repr);

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match &self.0 {
            Repr::Q(_) => FieldSpec::rationals(),
            Repr::Gf { p, .. } => FieldSpec {
                kind: FieldKind::PrimeField,
                p: *p,
            },
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        FieldElement(Repr::Q(q))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(q) => Some(q),
            Repr::Gf { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u32> {
        match self.0 {
            Repr::Gf { v, .. } => Some(v),
            Repr::Q(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_zero(),
            Repr::Gf { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_one(),
            Repr::Gf { v, .. } => *v == 1,
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        let (a, b) = (self.spec(), other.spec());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::MixedFields(a, b))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Q(q) => FieldElement(Repr::Q(q.recip())),
            Repr::Gf { v, p } => FieldElement(Repr::Gf {
                v: pow_mod(u64::from(*v), u64::from(*p) - 2, u64::from(*p)) as u32,
                p: *p,
            }),
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => FieldElement(Repr::Q(a + b)),
            (Repr::Gf { v: a, p }, Repr::Gf { v: b, .. }) => FieldElement(Repr::Gf {
                v: ((u64::from(*a) + u64::from(*b)) % u64::from(*p)) as u32,
                p: *p,
            }),
            _ => unreachable!("field mismatch checked by caller"),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => FieldElement(Repr::Q(a * b)),
            (Repr::Gf { v: a, p }, Repr::Gf { v: b, .. }) => FieldElement(Repr::Gf {
                v: ((u64::from(*a) * u64::from(*b)) % u64::from(*p)) as u32,
                p: *p,
            }),
            _ => unreachable!("field mismatch checked by caller"),
        }
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Q(a) => FieldElement(Repr::Q(-a)),
            Repr::Gf { v, p } => FieldElement(Repr::Gf {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            }),
        }
    }

    /// Re-establishes canonical form. Values built through this module are
    /// always canonical already, so this is the identity on them.
    pub fn canonical(&self) -> Self {
        match &self.0 {
            Repr::Q(q) => FieldElement(Repr::Q(BigRational::new(q.numer().clone(), q.denom().clone()))),
            Repr::Gf { v, p } => FieldElement(Repr::Gf { v: v % p, p: *p }),
        }
    }

    /// Image of a rational under `Z_(p) -> GF(p)`, or `None` when `p`
    /// divides the denominator or `self` is not rational.
    pub fn reduce_mod(&self, target: FieldSpec) -> Option<FieldElement> {
        let q = self.as_rational()?;
        let p = BigInt::from(target.modulus()?);
        let residue = |x: &BigInt| -> i64 {
            let r = ((x % &p) + &p) % &p;
            i64::try_from(r).expect("residue below 2^31")
        };
        let den = target.from_i64(residue(q.denom()));
        if den.is_zero() {
            return None;
        }
        Some(target.from_i64(residue(q.numer())) * den.inv().ok()?)
    }

    pub fn parse(spec: FieldSpec, text: &str) -> Result<Self, FieldError> {
        let err = |reason: &str| FieldError::Parse {
            text: text.to_string(),
            field: spec,
            reason: reason.to_string(),
        };
        let t = text.trim();
        match spec.kind {
            FieldKind::Rationals => {
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), Some(d.trim())),
                    None => (t, None),
                };
                let num: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
                let den: BigInt = match d {
                    Some(d) => d.parse().map_err(|_| err("bad denominator"))?,
                    None => BigInt::one(),
                };
                if !den.is_positive() {
                    return Err(err("denominator must be positive"));
                }
                Ok(FieldElement(Repr::Q(BigRational::new(num, den))))
            }
            FieldKind::PrimeField => {
                let v: u64 = t.parse().map_err(|_| err("expected an integer in [0, p)"))?;
                if v >= u64::from(spec.p) {
                    return Err(err("residue out of range [0, p)"));
                }
                Ok(FieldElement(Repr::Gf { v: v as u32, p: spec.p }))
            }
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Repr::Q(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Repr::Gf { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Numeric order on `Q`, residue order on `GF(p)`; elements of different
/// fields are ordered by field first.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => a.cmp(b),
            (Repr::Gf { v: a, p: pa }, Repr::Gf { v: b, p: pb }) => pa.cmp(pb).then(a.cmp(b)),
            (Repr::Q(_), Repr::Gf { .. }) => Ordering::Less,
            (Repr::Gf { .. }, Repr::Q(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("arithmetic on mixed fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$try(&rhs).expect("arithmetic on mixed fields")
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$try(rhs).expect("arithmetic on mixed fields")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

pub fn field_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    a.try_add(b)
}

pub fn field_sub(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    a.try_sub(b)
}

pub fn field_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    a.try_mul(b)
}

pub fn field_inv(a: &FieldElement) -> Result<FieldElement, FieldError> {
    a.inv()
}

/// Every residue of a prime field exactly once, ascending.
pub fn enumerate_field(spec: FieldSpec) -> Result<impl Iterator<Item = FieldElement>, FieldError> {
    let p = spec.modulus().ok_or(FieldError::InfiniteField(spec))?;
    Ok((0..p).map(move |v| FieldElement(Repr::Gf { v, p })))
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldSpec::rationals().rational(n, d).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!((q(1, 2) + q(1, 3)).to_string(), "5/6");
    }

    #[test]
    fn reduction_mod_p() {
        let f7 = FieldSpec::prime(7).unwrap();
        // 3/2 = 3 * 4 = 12 = 5 mod 7; -1/3 = -5 = 2 mod 7.
        assert_eq!(q(3, 2).reduce_mod(f7), Some(f7.from_i64(5)));
        assert_eq!(q(-1, 3).reduce_mod(f7), Some(f7.from_i64(2)));
        assert_eq!(q(1, 14).reduce_mod(f7), None);
        assert_eq!(f7.from_i64(3).reduce_mod(f7), None);
    }

    #[test]
    fn small_prime_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.from_i64(3).inv().unwrap(), f5.from_i64(2));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.from_i64(4) * f7.from_i64(5), f7.from_i64(6));
    }

    #[test]
    fn errors() {
        let f5 = FieldSpec::prime(5).unwrap();
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(
            f5.one().try_add(&f7.one()),
            Err(FieldError::MixedFields(f5, f7))
        );
        assert_eq!(f5.zero().inv(), Err(FieldError::DivisionByZero));
        assert_eq!(
            FieldSpec::rationals().zero().inv(),
            Err(FieldError::DivisionByZero)
        );
        assert!(matches!(
            enumerate_field(FieldSpec::rationals()),
            Err(FieldError::InfiniteField(_))
        ));
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1 << 31).is_err());
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
    }

    #[test]
    fn enumeration() {
        let f2: Vec<_> = enumerate_field(FieldSpec::prime(2).unwrap()).unwrap().collect();
        assert_eq!(f2.iter().map(|e| e.to_string()).collect::<Vec<_>>(), ["0", "1"]);
        let f3: Vec<_> = enumerate_field(FieldSpec::prime(3).unwrap()).unwrap().collect();
        assert_eq!(f3.len(), 3);
        let f5: Vec<_> = enumerate_field(FieldSpec::prime(5).unwrap()).unwrap().collect();
        let distinct: std::collections::HashSet<_> = f5.iter().cloned().collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn text_form() {
        let qs = FieldSpec::rationals();
        assert_eq!(qs.parse("-4/6").unwrap().to_string(), "-2/3");
        assert_eq!(qs.parse("7").unwrap().to_string(), "7");
        assert!(qs.parse("1/0").is_err());
        assert!(qs.parse("1/-2").is_err());
        assert!(qs.parse("x").is_err());
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.parse("6").unwrap().to_string(), "6");
        assert!(f7.parse("7").is_err());
        assert!(f7.parse("-1").is_err());
        assert_eq!("GF(7)".parse::<FieldSpec>().unwrap(), f7);
        assert_eq!("gf:7".parse::<FieldSpec>().unwrap(), f7);
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), qs);
    }

    fn element(spec: FieldSpec) -> impl Strategy<Value = FieldElement> {
        match spec.modulus() {
            Some(p) => (0..i64::from(p)).prop_map(move |v| spec.from_i64(v)).boxed(),
            None => (-50i64..50, 1i64..20)
                .prop_map(move |(n, d)| spec.rational(n, d).unwrap())
                .boxed(),
        }
    }

    fn any_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::rationals()),
            Just(FieldSpec::prime(2).unwrap()),
            Just(FieldSpec::prime(7).unwrap()),
            Just(FieldSpec::prime(2_147_483_647).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn field_axioms(
            (a, b, c) in any_field().prop_flat_map(|s| (element(s), element(s), element(s)))
        ) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(a.inv().unwrap().inv().unwrap(), a.clone());
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert_eq!(a.canonical().canonical(), a.canonical());
            prop_assert_eq!(a.canonical(), a.clone());
            prop_assert_eq!(FieldElement::parse(a.spec(), &a.to_string()).unwrap(), a);
        }
    }
}
