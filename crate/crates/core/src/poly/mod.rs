//! Sparse multivariate polynomials over an exact [`Field`].
//!
//! Terms are kept in a map keyed by [`Monomial`] under the graded
//! lexicographic order with `x0 > x1 > …`. Zero coefficients are never
//! stored, so the zero polynomial is the empty map.

mod point;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError};

pub use point::ProjPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected} variables, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("projective point has all coordinates zero")]
    ZeroPoint,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent vector of a monomial.
///
/// Ordered by total degree first, then lexicographically with `x0` most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Monomial {
    pub fn display_with(&self, prefix: &str) -> String {
        use std::fmt::Write;
        let mut f = String::new();
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.push('*');
            }
            first = false;
            if e == 1 {
                let _ = write!(f, "{prefix}{i}");
            } else {
                let _ = write!(f, "{prefix}{i}^{e}");
            }
        }
        if first {
            f.push('1');
        }
        f
    }
}

/// All monomials of total degree `d` in `nvars` variables, in descending
/// graded-lex order (`x0^d` first).
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, nvars: usize, left: u32, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, nvars, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(&mut Vec::with_capacity(nvars), nvars, d, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// A polynomial in `nvars` variables.
#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.field == other.field && self.terms == other.terms
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

impl<F: Field> Poly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        Poly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::term(field, Monomial::one(nvars), c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The variable `x_i`.
    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        Self::term(field, Monomial::var(nvars, i), field.one())
    }

    pub fn term(field: &F, mono: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field, mono.nvars());
        if !field.is_zero(&c) {
            p.terms.insert(mono, c);
        }
        p
    }

    /// Sum of terms; repeated monomials are combined.
    pub fn from_terms(
        field: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, &c);
        }
        p
    }

    /// Polynomial with coefficient `coeffs[k]` on `monomials[k]`.
    pub fn from_coefficients(
        field: &F,
        nvars: usize,
        monomials: &[Monomial],
        coeffs: &[F::Elem],
    ) -> Self {
        Self::from_terms(
            field,
            nvars,
            monomials.iter().cloned().zip(coeffs.iter().cloned()),
        )
    }

    fn add_term(&mut self, m: Monomial, c: &F::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree of all terms, if the polynomial is a nonzero form.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// The constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<F::Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient_vector(&self, monomials: &[Monomial]) -> Vec<F::Elem> {
        monomials.iter().map(|m| self.coeff(m)).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.field != other.field {
            return Err(PolyError::FieldMismatch);
        }
        Ok(())
    }

    pub fn checked(&self, other: &Self, op: PolyOp) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(match op {
            PolyOp::Add => self.add_unchecked(other),
            PolyOp::Sub => self.sub_unchecked(other),
            PolyOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &self.field.neg(c));
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.field.neg(c))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        self.map_coeffs(|x| self.field.mul(x, c))
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.mul(m), self.field.mul(v, c)))
            .collect();
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    fn map_coeffs(&self, f: impl Fn(&F::Elem) -> F::Elem) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect();
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_var`.
    pub fn partial_derivative(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(
                Monomial(exps),
                &self.field.mul(c, &self.field.from_i64(e as i64)),
            );
        }
        Ok(out)
    }

    /// Mixed partial `∂^α` for the multi-index `alpha`.
    pub fn derivative(&self, alpha: &[u32]) -> Result<Self, PolyError> {
        if alpha.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: alpha.len(),
            });
        }
        let mut out = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.0.iter().zip(alpha).any(|(e, a)| e < a) {
                continue;
            }
            let mut factor: i64 = 1;
            let mut exps = m.0.clone();
            for (e, &a) in exps.iter_mut().zip(alpha) {
                for k in 0..a {
                    factor *= (*e - k) as i64;
                }
                *e -= a;
            }
            out.add_term(
                Monomial(exps),
                &self.field.mul(c, &self.field.from_i64(factor)),
            );
        }
        Ok(out)
    }

    /// Value at the given coordinate vector.
    pub fn evaluate(&self, pt: &ProjPoint<F::Elem>) -> Result<F::Elem, PolyError> {
        self.evaluate_at(pt.coords())
    }

    pub fn evaluate_at(&self, coords: &[F::Elem]) -> Result<F::Elem, PolyError> {
        if coords.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: coords.len(),
            });
        }
        let powers = PowerTable::new(&self.field, coords, self.degree().unwrap_or(0));
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            acc = self
                .field
                .add(&acc, &self.field.mul(c, &powers.monomial(&self.field, m)));
        }
        Ok(acc)
    }

    /// Replace each variable `x_i` by `images[i]`.
    pub fn substitute_vars(&self, images: &[Poly<F>]) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let target = first.nvars;
        for img in images {
            first.check_compatible(img)?;
        }
        if img_is_reindexing(images) {
            let map: Vec<usize> = images
                .iter()
                .map(|p| {
                    p.terms
                        .keys()
                        .next()
                        .unwrap()
                        .0
                        .iter()
                        .position(|&e| e == 1)
                        .unwrap()
                })
                .collect();
            let mut out = Self::zero(&self.field, target);
            for (m, c) in &self.terms {
                let mut exps = vec![0; target];
                for (i, &e) in m.0.iter().enumerate() {
                    exps[map[i]] += e;
                }
                out.add_term(Monomial(exps), c);
            }
            return Ok(out);
        }
        let mut cache: Vec<Vec<Poly<F>>> = images
            .iter()
            .map(|p| vec![Self::one(&self.field, target), p.clone()])
            .collect();
        let mut out = Self::zero(&self.field, target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&self.field, target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul_unchecked(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul_unchecked(&cache[i][e as usize]);
            }
            out = out.add_unchecked(&t);
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (dm, dc) = divisor.leading_term()?;
        let (dm, dc_inv) = (dm.clone(), self.field.inv(dc).ok()?);
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.field, self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !dm.divides(m) {
                return None;
            }
            let qm = dm.quotient_of(m);
            let qc = self.field.mul(c, &dc_inv);
            rem = rem.sub_unchecked(&divisor.mul_term(&qm, &qc));
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// The largest monomial dividing every term (`1` for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    /// Divide every term by `m`, which must divide all of them.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (m.quotient_of(k), v.clone()))
            .collect();
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// Append `extra` unused variables after the existing ones.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(self.nvars + extra, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        Poly {
            field: self.field.clone(),
            nvars: self.nvars + extra,
            terms,
        }
    }

    /// `self^n − other^n`.
    pub fn bracket(&self, other: &Self, n: u32) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.pow(n).sub_unchecked(&other.pow(n)))
    }
}

fn img_is_reindexing<F: Field>(images: &[Poly<F>]) -> bool {
    images.iter().all(|p| {
        p.terms.len() == 1 && {
            let (m, c) = p.terms.iter().next().unwrap();
            m.degree() == 1 && p.field.is_one(c)
        }
    })
}

/// `f^n − g^n`; the bracket `[f, g]` for `n = 3`.
pub fn bracket<F: Field>(f: &Poly<F>, g: &Poly<F>, n: u32) -> Result<Poly<F>, PolyError> {
    f.bracket(g, n)
}

/// Cached powers of a fixed coordinate vector.
pub(crate) struct PowerTable<E> {
    powers: Vec<Vec<E>>,
}

impl<E: Clone> PowerTable<E> {
    pub(crate) fn new<F: Field<Elem = E>>(field: &F, coords: &[E], max_exp: u32) -> Self {
        let powers = coords
            .iter()
            .map(|c| {
                let mut row = Vec::with_capacity(max_exp as usize + 1);
                row.push(field.one());
                for k in 0..max_exp as usize {
                    let next = field.mul(&row[k], c);
                    row.push(next);
                }
                row
            })
            .collect();
        PowerTable { powers }
    }

    pub(crate) fn monomial<F: Field<Elem = E>>(&self, field: &F, m: &Monomial) -> E {
        let mut acc: Option<E> = None;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = &self.powers[i][e as usize];
            acc = Some(match acc {
                None => p.clone(),
                Some(a) => field.mul(&a, p),
            });
        }
        acc.unwrap_or_else(|| field.one())
    }
}

impl<F: Field> std::ops::Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Self) -> Poly<F> {
        self.checked(rhs, PolyOp::Add)
            .expect("incompatible polynomials")
    }
}

impl<F: Field> std::ops::Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Self) -> Poly<F> {
        self.checked(rhs, PolyOp::Sub)
            .expect("incompatible polynomials")
    }
}

impl<F: Field> std::ops::Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Self) -> Poly<F> {
        self.checked(rhs, PolyOp::Mul)
            .expect("incompatible polynomials")
    }
}

impl<F: Field> std::ops::Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::neg(self)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, "x")
    }
}

impl<F: Field> Poly<F> {
    /// Text form with variables named `{prefix}0, {prefix}1, …`.
    pub fn display_with(&self, prefix: &str) -> String {
        struct Named<'a, F: Field>(&'a Poly<F>, &'a str);
        impl<F: Field> fmt::Display for Named<'_, F> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_with(f, self.1)
            }
        }
        Named(self, prefix).to_string()
    }

    fn write_with(&self, f: &mut fmt::Formatter<'_>, prefix: &str) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let s = self.field.format(c);
            let compound = s
                .get(1..)
                .is_some_and(|t| t.contains(" + ") || t.contains(" - "));
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ if compound => (false, format!("({s})")),
                _ => (false, s),
            };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono = m.display_with(prefix);
            if m.degree() == 0 {
                f.write_str(&mag)?;
            } else if mag == "1" {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> Poly<F> {
    pub fn parse(field: &F, nvars: usize, s: &str) -> Result<Self, PolyError> {
        crate::text::parse_poly(field, nvars, s)
    }
}
