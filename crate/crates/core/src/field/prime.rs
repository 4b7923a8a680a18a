use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::{Field, FieldError, FieldSpec};

/// Residue in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModScalar(pub u64);

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The `count` largest primes below 2⁶¹ that are congruent to 1 modulo `n`.
pub fn primes_with_root_of_unity(n: u64, count: usize) -> Vec<u64> {
    let limit: u64 = 1 << 61;
    let mut k = (limit - 2) / n;
    let mut out = Vec::with_capacity(count);
    while out.len() < count && k > 0 {
        let p = k * n + 1;
        if is_prime(p) {
            out.push(p);
        }
        k -= 1;
    }
    out
}

/// `F_p` with a fixed primitive n-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    n: u64,
    root: u64,
}

impl PrimeField {
    pub fn new(n: u64, p: u64) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::InvalidOrder);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if !(p - 1).is_multiple_of(n) {
            return Err(FieldError::NoRootOfUnity { n, p });
        }
        let factors = prime_factors(n);
        let root = (2..p)
            .map(|g| pow_mod(g, (p - 1) / n, p))
            .find(|&h| factors.iter().all(|q| pow_mod(h, n / q, p) != 1))
            .unwrap_or(1);
        Ok(PrimeField { p, n, root })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
}

impl Field for PrimeField {
    type Elem = ModScalar;

    fn spec(&self) -> FieldSpec {
        FieldSpec::modular(self.n, self.p)
    }

    fn zero(&self) -> ModScalar {
        ModScalar(0)
    }

    fn one(&self) -> ModScalar {
        ModScalar(1 % self.p)
    }

    fn from_i64(&self, v: i64) -> ModScalar {
        ModScalar((v as i128).rem_euclid(self.p as i128) as u64)
    }

    fn from_rational(&self, q: &BigRational) -> Result<ModScalar, FieldError> {
        let num = self.reduce_big(q.numer());
        let den = self.reduce_big(q.denom());
        self.div(&ModScalar(num), &ModScalar(den))
    }

    fn add(&self, a: &ModScalar, b: &ModScalar) -> ModScalar {
        let s = a.0 + b.0;
        ModScalar(if s >= self.p { s - self.p } else { s })
    }

    fn sub(&self, a: &ModScalar, b: &ModScalar) -> ModScalar {
        ModScalar(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.p - b.0
        })
    }

    fn mul(&self, a: &ModScalar, b: &ModScalar) -> ModScalar {
        ModScalar(mul_mod(a.0, b.0, self.p))
    }

    fn neg(&self, a: &ModScalar) -> ModScalar {
        ModScalar(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    fn inv(&self, a: &ModScalar) -> Result<ModScalar, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(ModScalar(pow_mod(a.0, self.p - 2, self.p)))
    }

    fn is_zero(&self, a: &ModScalar) -> bool {
        a.0 == 0
    }

    fn primitive_root(&self) -> ModScalar {
        ModScalar(self.root)
    }

    fn contains(&self, a: &ModScalar) -> bool {
        a.0 < self.p
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R, _bound: u64) -> ModScalar {
        ModScalar(rng.gen_range(0..self.p))
    }

    fn as_rational(&self, _a: &ModScalar) -> Option<BigRational> {
        None
    }

    fn format(&self, a: &ModScalar) -> String {
        a.0.to_string()
    }

    fn sub_mul_assign(&self, acc: &mut ModScalar, a: &ModScalar, b: &ModScalar) {
        *acc = self.sub(acc, &self.mul(a, b));
    }
}

impl ModScalar {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}
