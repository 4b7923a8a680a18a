use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{Field, FieldError, FieldSpec};

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer coefficients of `Φₙ`, lowest degree first.
///
/// Computed as `(xⁿ − 1) / ∏_{d | n, d < n} Φ_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_exact_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element of `Q(ζₙ)`: the canonical residue `Σ cᵢ ζⁱ` with `i < φ(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
}

/// The cyclotomic field `Q(ζₙ) = Q[w]/(Φₙ(w))`.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    n: u64,
    /// Φₙ, monic, lowest degree first.
    modulus: Arc<Vec<i64>>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl CyclotomicField {
    pub fn new(n: u64) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::InvalidOrder);
        }
        Ok(CyclotomicField {
            n,
            modulus: Arc::new(cyclotomic_polynomial(n)),
        })
    }

    /// The field of rational numbers, `Q(ζ₁)`.
    pub fn rationals() -> Self {
        Self::new(1).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduce an arbitrary-length coefficient vector modulo Φₙ.
    pub fn from_coeffs(&self, mut v: Vec<BigRational>) -> CycScalar {
        let phi = self.degree();
        for k in (phi..v.len()).rev() {
            let c = std::mem::take(&mut v[k]);
            if c.is_zero() {
                continue;
            }
            for (i, m) in self.modulus[..phi].iter().enumerate() {
                if *m != 0 {
                    v[k - phi + i] -= &c * BigInt::from(*m);
                }
            }
        }
        v.resize(phi, BigRational::zero());
        CycScalar { coeffs: v }
    }

    fn constant(&self, q: BigRational) -> CycScalar {
        let mut coeffs = vec![BigRational::zero(); self.degree()];
        coeffs[0] = q;
        CycScalar { coeffs }
    }
}

#[allow(clippy::needless_range_loop)]
fn solve_rational(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for j in c..n {
            a[c][j] = &a[c][j] * &inv;
        }
        b[c] = &b[c] * &inv;
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[c];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

impl Field for CyclotomicField {
    type Elem = CycScalar;

    fn spec(&self) -> FieldSpec {
        FieldSpec::cyclotomic(self.n)
    }

    fn zero(&self) -> CycScalar {
        CycScalar {
            coeffs: vec![BigRational::zero(); self.degree()],
        }
    }

    fn one(&self) -> CycScalar {
        self.constant(BigRational::one())
    }

    fn from_i64(&self, v: i64) -> CycScalar {
        self.constant(BigRational::from_integer(v.into()))
    }

    fn from_rational(&self, q: &BigRational) -> Result<CycScalar, FieldError> {
        Ok(self.constant(q.clone()))
    }

    fn add(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycScalar { coeffs }
    }

    fn sub(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CycScalar { coeffs }
    }

    fn mul(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        let phi = self.degree();
        if phi == 1 {
            return CycScalar {
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0]],
            };
        }
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.from_coeffs(prod)
    }

    fn neg(&self, a: &CycScalar) -> CycScalar {
        CycScalar {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    fn inv(&self, a: &CycScalar) -> Result<CycScalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        let phi = self.degree();
        if a.coeffs[1..].iter().all(Zero::is_zero) {
            return Ok(self.constant(a.coeffs[0].recip()));
        }
        // Column j of the multiplication-by-a matrix is a·wʲ.
        let mut cols = Vec::with_capacity(phi);
        let mut basis = self.one();
        let w = self.primitive_root_raw();
        for _ in 0..phi {
            cols.push(self.mul(a, &basis).coeffs);
            basis = self.mul(&basis, &w);
        }
        let mat = (0..phi)
            .map(|r| (0..phi).map(|c| cols[c][r].clone()).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); phi];
        rhs[0] = BigRational::one();
        let coeffs = solve_rational(mat, rhs).ok_or(FieldError::DivisionByZero)?;
        Ok(CycScalar { coeffs })
    }

    fn is_zero(&self, a: &CycScalar) -> bool {
        a.coeffs.iter().all(Zero::is_zero)
    }

    fn primitive_root(&self) -> CycScalar {
        self.primitive_root_raw()
    }

    fn contains(&self, a: &CycScalar) -> bool {
        a.coeffs.len() == self.degree()
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: u64) -> CycScalar {
        let b = bound.max(1) as i64;
        self.from_i64(rng.gen_range(-b..=b))
    }

    fn as_rational(&self, a: &CycScalar) -> Option<BigRational> {
        a.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| a.coeffs[0].clone())
    }

    fn format(&self, a: &CycScalar) -> String {
        let mut out = String::new();
        for (k, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let power = match k {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{k}"),
            };
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{mag}*{power}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn sub_mul_assign(&self, acc: &mut CycScalar, a: &CycScalar, b: &CycScalar) {
        if self.degree() == 1 {
            let t = &a.coeffs[0] * &b.coeffs[0];
            acc.coeffs[0] -= t;
            return;
        }
        let p = self.mul(a, b);
        for (x, y) in acc.coeffs.iter_mut().zip(p.coeffs) {
            *x -= y;
        }
    }
}

impl CyclotomicField {
    fn primitive_root_raw(&self) -> CycScalar {
        let mut v = vec![BigRational::zero(); self.degree().max(2)];
        v[1] = BigRational::one();
        self.from_coeffs(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_and_cyclotomic_polys() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(13), 12);
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn small_orders() {
        let q = CyclotomicField::new(1).unwrap();
        assert!(q.is_one(&q.primitive_root()));
        let f2 = CyclotomicField::new(2).unwrap();
        assert_eq!(f2.primitive_root(), f2.from_i64(-1));
    }

    #[test]
    fn inverse_in_q_zeta5() {
        let f = CyclotomicField::new(5).unwrap();
        let a = f.parse("2 - w + 3*w^3").unwrap();
        let b = f.inv(&a).unwrap();
        assert!(f.is_one(&f.mul(&a, &b)));
    }
}
