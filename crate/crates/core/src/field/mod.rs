//! Exact coefficient fields.
//!
//! Two backends sit behind the [`Field`] trait:
//!
//! * [`CyclotomicField`]: the cyclotomic rationals `Q(ζₙ)`, stored as residues
//!   modulo the n-th cyclotomic polynomial `Φₙ` with arbitrary-precision
//!   rational coefficients.
//! * [`PrimeField`]: `F_p` for a prime `p ≡ 1 (mod n)`, so that a primitive
//!   n-th root of unity exists.
//!
//! A field value is a lightweight handle. Elements do not carry a pointer to
//! their field; every operation goes through the handle.

mod cyclotomic;
mod prime;

use std::fmt;
use std::hash::Hash;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycScalar, CyclotomicField};
pub use prime::{is_prime, primes_with_root_of_unity, ModScalar, PrimeField};

/// Errors raised by field construction and scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("root-of-unity order must be positive")]
    InvalidOrder,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("F_{p} has no primitive root of unity of order {n} (p is not 1 mod n)")]
    NoRootOfUnity { n: u64, p: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    CyclotomicRational,
    PrimeModular,
}

/// Description of a coefficient field; `p` is only meaningful for
/// [`FieldKind::PrimeModular`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
}

impl FieldSpec {
    pub fn cyclotomic(n: u64) -> Self {
        FieldSpec {
            kind: FieldKind::CyclotomicRational,
            n,
            p: None,
        }
    }

    pub fn modular(n: u64, p: u64) -> Self {
        FieldSpec {
            kind: FieldKind::PrimeModular,
            n,
            p: Some(p),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.p) {
            (FieldKind::CyclotomicRational, _) => write!(f, "Q(zeta_{})", self.n),
            (FieldKind::PrimeModular, Some(p)) => write!(f, "F_{p} (n={})", self.n),
            (FieldKind::PrimeModular, None) => write!(f, "F_? (n={})", self.n),
        }
    }
}

/// An exact field containing a distinguished primitive n-th root of unity.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// The distinguished primitive n-th root of unity ζₙ.
    fn primitive_root(&self) -> Self::Elem;

    /// Whether `a` is a well-formed element of this field.
    fn contains(&self, a: &Self::Elem) -> bool;

    /// Small-integer sample for `Q(ζₙ)`, uniform element for `F_p`.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: u64) -> Self::Elem;

    /// The element as a rational number, if it is one.
    fn as_rational(&self, a: &Self::Elem) -> Option<BigRational>;

    fn format(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `acc -= a * b`
    fn sub_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(a, b));
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError> {
        crate::text::parse_scalar(self, s)
    }
}

/// Runtime-selected field backend.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldHandle {
    Cyclotomic(CyclotomicField),
    Prime(PrimeField),
}

impl FieldHandle {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldHandle::Cyclotomic(f) => f.spec(),
            FieldHandle::Prime(f) => f.spec(),
        }
    }
}

/// Build a field from its description, validating the root-of-unity
/// requirement.
pub fn make_field(spec: FieldSpec) -> Result<FieldHandle, FieldError> {
    match spec.kind {
        FieldKind::CyclotomicRational => Ok(FieldHandle::Cyclotomic(CyclotomicField::new(spec.n)?)),
        FieldKind::PrimeModular => {
            let p = spec.p.ok_or(FieldError::NotPrime(0))?;
            Ok(FieldHandle::Prime(PrimeField::new(spec.n, p)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary operation: both operands must be elements of `field`.
pub fn scalar_arith<F: Field>(
    field: &F,
    a: &F::Elem,
    b: &F::Elem,
    op: ScalarOp,
) -> Result<F::Elem, FieldError> {
    if !field.contains(a) || !field.contains(b) {
        return Err(FieldError::FieldMismatch);
    }
    Ok(match op {
        ScalarOp::Add => field.add(a, b),
        ScalarOp::Sub => field.sub(a, b),
        ScalarOp::Mul => field.mul(a, b),
        ScalarOp::Div => field.div(a, b)?,
    })
}

/// Multiplicative order of `a`, searched up to `limit`.
pub fn multiplicative_order<F: Field>(field: &F, a: &F::Elem, limit: u64) -> Option<u64> {
    let one = field.one();
    let mut acc = a.clone();
    for k in 1..=limit {
        if acc == one {
            return Some(k);
        }
        acc = field.mul(&acc, a);
    }
    None
}
