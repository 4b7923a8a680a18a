//! Explicit hypersurfaces through Fermat-type configurations with prescribed
//! fat points.
//!
//! Each formula is written once over polynomial coordinates, so the same code
//! builds numeric instances (coordinates are constants) and symbolic ones
//! (coordinates are variables of a larger ring).

use serde::Serialize;
use thiserror::Error;

use crate::fermat::{self, Configuration, FermatError};
use crate::field::{Field, FieldSpec};
use crate::interpolation::{binomial, InterpolationError, LinearSystem};
use crate::linalg;
use crate::poly::{monomials_of_degree, Poly, PolyError, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),
    #[error("the two points coincide")]
    CoincidentPoints,
    #[error("the zero polynomial has no multiplicity")]
    ZeroPolynomial,
    #[error("cone indices must satisfy 0 <= i < j <= 3, got ({0}, {1})")]
    IndexError(usize, usize),
    #[error("expected a point of P^{expected}, got {found} coordinates")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("n must be at least 3, got {0}")]
    InvalidDegree(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Fermat(#[from] FermatError),
    #[error(transparent)]
    Interpolation(#[from] InterpolationError),
}

/// A constructed hypersurface with its verification record.
#[derive(Debug, Clone)]
pub struct ConstructionResult<F: Field> {
    pub poly: Poly<F>,
    pub base_config: Configuration<F::Elem>,
    pub claimed_multiplicities: Vec<(ProjPoint<F::Elem>, u32)>,
    pub measured_multiplicities: Vec<u32>,
    /// Number of base points where the polynomial vanishes.
    pub base_vanishing: usize,
    /// Whether the polynomial spans the solution space of the linear system
    /// it is claimed to belong to, when that check was run.
    pub system_check: Option<bool>,
    pub verified: bool,
}

#[derive(Debug, Serialize)]
struct MultiplicityEntry {
    point: Vec<String>,
    claimed: u32,
    measured: u32,
}

#[derive(Debug, Serialize)]
struct ResultJson {
    poly: String,
    degree: Option<u32>,
    nvars: usize,
    base_size: usize,
    base_vanishing: usize,
    multiplicities: Vec<MultiplicityEntry>,
    system_check: Option<bool>,
    verified: bool,
    backend: FieldSpec,
}

impl<F: Field> ConstructionResult<F> {
    fn verify(
        poly: Poly<F>,
        base_config: Configuration<F::Elem>,
        claimed: Vec<(ProjPoint<F::Elem>, u32)>,
    ) -> Result<Self, ConstructionError> {
        let field = poly.field().clone();
        let mut base_vanishing = 0;
        for p in base_config.points() {
            if field.is_zero(&poly.evaluate(p)?) {
                base_vanishing += 1;
            }
        }
        let measured = claimed
            .iter()
            .map(|(p, _)| multiplicity_at(&poly, p))
            .collect::<Result<Vec<_>, _>>()?;
        let verified = base_vanishing == base_config.len()
            && claimed.iter().zip(&measured).all(|((_, c), m)| m >= c);
        Ok(ConstructionResult {
            poly,
            base_config,
            claimed_multiplicities: claimed,
            measured_multiplicities: measured,
            base_vanishing,
            system_check: None,
            verified,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let field = self.poly.field();
        let doc = ResultJson {
            poly: self.poly.to_string(),
            degree: self.poly.degree(),
            nvars: self.poly.nvars(),
            base_size: self.base_config.len(),
            base_vanishing: self.base_vanishing,
            multiplicities: self
                .claimed_multiplicities
                .iter()
                .zip(&self.measured_multiplicities)
                .map(|((p, c), m)| MultiplicityEntry {
                    point: p.format(field),
                    claimed: *c,
                    measured: *m,
                })
                .collect(),
            system_check: self.system_check,
            verified: self.verified,
            backend: field.spec(),
        };
        serde_json::to_value(doc).expect("serializable")
    }
}

/// Largest `m` such that every partial derivative of order `< m` vanishes at
/// `pt`. All orders are tested.
pub fn multiplicity_at<F: Field>(
    f: &Poly<F>,
    pt: &ProjPoint<F::Elem>,
) -> Result<u32, ConstructionError> {
    if f.is_zero() {
        return Err(ConstructionError::ZeroPolynomial);
    }
    if pt.len() != f.nvars() {
        return Err(PolyError::ArityMismatch {
            expected: f.nvars(),
            found: pt.len(),
        }
        .into());
    }
    let field = f.field();
    let deg = f.degree().unwrap_or(0);
    for order in 0..=deg {
        for alpha in monomials_of_degree(f.nvars(), order) {
            if !field.is_zero(&f.derivative(alpha.exps())?.evaluate(pt)?) {
                return Ok(order);
            }
        }
    }
    unreachable!("a nonzero form has a nonvanishing derivative of order at most its degree")
}

fn check_point<F: Field>(
    field: &F,
    pt: &ProjPoint<F::Elem>,
    dim: usize,
    n: u64,
) -> Result<(), ConstructionError> {
    if pt.len() != dim + 1 {
        return Err(ConstructionError::DimensionMismatch {
            expected: dim,
            found: pt.len(),
        });
    }
    if !pt.is_nondegenerate(field, n) {
        return Err(ConstructionError::DegeneratePoint(format!(
            "({}) needs nonzero coordinates with pairwise distinct powers x^{n}",
            pt.format(field).join(" : ")
        )));
    }
    Ok(())
}

fn constant_coords<F: Field>(field: &F, nvars: usize, pt: &ProjPoint<F::Elem>) -> Vec<Poly<F>> {
    pt.coords()
        .iter()
        .map(|c| Poly::constant(field, nvars, c.clone()))
        .collect()
}

fn int<F: Field>(field: &F, nvars: usize, v: i64) -> Poly<F> {
    Poly::constant(field, nvars, field.from_i64(v))
}

/// `Q_P` with point coordinates `(a, b, c)` and variables `(x, y, z)` given
/// as polynomials of a common ring.
pub fn qp_formula<F: Field>(n: u64, abc: [&Poly<F>; 3], xyz: [&Poly<F>; 3]) -> Poly<F> {
    let [a, b, c] = abc;
    let [x, y, z] = xyz;
    let field = a.field();
    let nv = a.nvars();
    let e = n as u32;
    let u = int(field, nv, binomial(n, 2) as i64 - 1);
    let v = int(field, nv, binomial(n - 1, 2) as i64);
    let w = int(field, nv, binomial(n + 1, 2) as i64);
    let (an, bn, cn) = (a.pow(e), b.pow(e), c.pow(e));
    let (xn, yn, zn) = (x.pow(e), y.pow(e), z.pow(e));
    let zx = &zn - &xn;
    let yz = &yn - &zn;
    let xy = &xn - &yn;

    let t1 = &(&(c * x) * y)
        * &(&(&(&(&u * &bn) + &(&v * &cn)) * &zx) + &(&(&(&u * &an) + &(&v * &cn)) * &yz));
    let t2 = &(&(b * x) * z)
        * &(&(&(&(&u * &an) + &(&v * &bn)) * &yz) + &(&(&(&u * &cn) + &(&v * &bn)) * &xy));
    let t3 = &(&(a * y) * z)
        * &(&(&(&(&u * &bn) + &(&v * &an)) * &zx) + &(&(&(&u * &cn) + &(&v * &an)) * &xy));
    let t4 = &(&(&(&(&w * &a.pow(e - 1)) * b) * c) * &x.pow(2)) * &yz;
    let t5 = &(&(&(&(&w * a) * &b.pow(e - 1)) * c) * &y.pow(2)) * &zx;
    let t6 = &(&(&(&(&w * a) * b) * &c.pow(e - 1)) * &z.pow(2)) * &xy;
    let neg = &(&t1.neg() - &t2) - &t3;
    &(&(&neg + &t4) + &t5) + &t6
}

/// The curve of degree `n + 2` through `W_{2,n}` with a point of
/// multiplicity 4 at `r`.
pub fn curve_qp<F: Field>(
    field: &F,
    n: u64,
    r: &ProjPoint<F::Elem>,
) -> Result<ConstructionResult<F>, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::InvalidDegree(n));
    }
    check_point(field, r, 2, n)?;
    let a = constant_coords(field, 3, r);
    let x: Vec<_> = (0..3).map(|i| Poly::var(field, 3, i)).collect();
    let poly = qp_formula(n, [&a[0], &a[1], &a[2]], [&x[0], &x[1], &x[2]]);
    let base = fermat::build_configuration(2, n, field)?;
    ConstructionResult::verify(poly, base, vec![(r.clone(), 4)])
}

fn cube_bracket<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    &a.pow(3) - &b.pow(3)
}

/// Summand labels `(i, j)` and the index `k` of the sign, in summation order.
pub fn qr_summands() -> Vec<(usize, usize, usize)> {
    (0..4)
        .flat_map(|i| {
            (i + 2..=i + 3).map(move |j| {
                let j = j % 4;
                let k = (0..4)
                    .find(|&k| k != i && k != (i + 1) % 4 && k != j)
                    .expect("four indices");
                (i, j, k)
            })
        })
        .collect()
}

/// Coefficient of `g_{i,j}` in `Q_R`: `(−1)^k a_i² [a_{i+1}, a_k]`.
pub fn qr_coefficients<F: Field>(a: &[Poly<F>]) -> Vec<((usize, usize), Poly<F>)> {
    qr_summands()
        .into_iter()
        .map(|(i, j, k)| {
            let c = &a[i].pow(2) * &cube_bracket(&a[(i + 1) % 4], &a[k]);
            ((i, j), if k % 2 == 1 { c.neg() } else { c })
        })
        .collect()
}

/// `Q_R` over polynomial coordinates `a` (the point) and `x` (the variables).
pub fn qr_formula<F: Field>(a: &[Poly<F>], x: &[Poly<F>]) -> Poly<F> {
    assert_eq!(a.len(), 4);
    assert_eq!(x.len(), 4);
    let mut acc = Poly::zero(a[0].field(), a[0].nvars());
    for ((i, j), c) in qr_coefficients(a) {
        let g = &x[i] * &cube_bracket(&x[(i + 1) % 4], &x[j]);
        acc = &acc + &(&c * &g);
    }
    acc
}

/// The quartic surface through `W_{3,3}` with a triple point at `r`.
pub fn quartic_qr<F: Field>(
    field: &F,
    r: &ProjPoint<F::Elem>,
) -> Result<ConstructionResult<F>, ConstructionError> {
    check_point(field, r, 3, 3)?;
    let a = constant_coords(field, 4, r);
    let x: Vec<_> = (0..4).map(|i| Poly::var(field, 4, i)).collect();
    let poly = qr_formula(&a, &x);
    let base = fermat::build_configuration(3, 3, field)?;
    ConstructionResult::verify(poly, base, vec![(r.clone(), 3)])
}

/// Indices of `{0, …, 5} \ {i, j}` in increasing order.
pub fn cone_support(i: usize, j: usize) -> Result<[usize; 4], ConstructionError> {
    if i >= j || j > 3 {
        return Err(ConstructionError::IndexError(i, j));
    }
    let rest: Vec<usize> = (0..6).filter(|&s| s != i && s != j).collect();
    Ok([rest[0], rest[1], rest[2], rest[3]])
}

/// The cone `J_{i,j}`: `Q_R` for the point and variables restricted to the
/// complement of `{i, j}`.
pub fn cone_j<F: Field>(
    field: &F,
    i: usize,
    j: usize,
    r: &ProjPoint<F::Elem>,
) -> Result<Poly<F>, ConstructionError> {
    let support = cone_support(i, j)?;
    check_point(field, r, 5, 3)?;
    let a: Vec<_> = support
        .iter()
        .map(|&s| Poly::constant(field, 6, r.coords()[s].clone()))
        .collect();
    let x: Vec<_> = support.iter().map(|&s| Poly::var(field, 6, s)).collect();
    Ok(qr_formula(&a, &x))
}

/// Cone pairs in summation order.
pub const CONE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Sign of the summand with cone `J_{i,j}`: minus when neither `(i, j)` nor
/// its complement in `{0, 1, 2, 3}` contains consecutive indices.
pub fn cone_sign(pair: (usize, usize)) -> i64 {
    match pair {
        (0, 2) | (1, 3) => -1,
        _ => 1,
    }
}

fn complement_pair(pair: (usize, usize)) -> (usize, usize) {
    let rest: Vec<usize> = (0..4).filter(|&s| s != pair.0 && s != pair.1).collect();
    (rest[0], rest[1])
}

/// The quartic in `P^5` through `W_{5,3}` with a triple point at `r` and a
/// double point at `p`. The coefficient of `J_{i,j}` is the complementary
/// cone evaluated at `p`.
pub fn quartic_qrp<F: Field>(
    field: &F,
    r: &ProjPoint<F::Elem>,
    p: &ProjPoint<F::Elem>,
) -> Result<ConstructionResult<F>, ConstructionError> {
    check_point(field, r, 5, 3)?;
    check_point(field, p, 5, 3)?;
    if r.same_point(p, field) {
        return Err(ConstructionError::CoincidentPoints);
    }
    let cones: Vec<Poly<F>> = CONE_PAIRS
        .iter()
        .map(|&(i, j)| cone_j(field, i, j, r))
        .collect::<Result<_, _>>()?;
    let mut poly = Poly::zero(field, 6);
    for (k, &pair) in CONE_PAIRS.iter().enumerate() {
        let comp = complement_pair(pair);
        let idx = CONE_PAIRS
            .iter()
            .position(|&q| q == comp)
            .expect("pair listed");
        let coeff = field.mul(&field.from_i64(cone_sign(pair)), &cones[idx].evaluate(p)?);
        poly = &poly + &cones[k].scale(&coeff);
    }
    let base = fermat::build_configuration(5, 3, field)?;
    let mut result = ConstructionResult::verify(poly, base, vec![(r.clone(), 3), (p.clone(), 2)])?;
    result.system_check = Some(spans_system(&result)?);
    result.verified &= result.system_check == Some(true);
    Ok(result)
}

/// Whether `result.poly` spans the space of forms of its degree through the
/// base with the claimed fat points.
pub fn spans_system<F: Field>(result: &ConstructionResult<F>) -> Result<bool, ConstructionError> {
    let field = result.poly.field();
    let Some(d) = result.poly.homogeneous_degree() else {
        return Ok(false);
    };
    let system = LinearSystem::through(field, &result.base_config, d);
    let sols = system.solutions(&result.claimed_multiplicities)?;
    if sols.len() != 1 {
        return Ok(false);
    }
    let monomials = monomials_of_degree(result.poly.nvars(), d);
    let rows = vec![
        sols[0].coefficient_vector(&monomials),
        result.poly.coefficient_vector(&monomials),
    ];
    let m = linalg::DenseMatrix::from_rows(rows, monomials.len()).expect("uniform rows");
    Ok(linalg::rank(field, &m) == 1)
}

/// Ring with variables `a0..a{m-1}` followed by `x0..x{m-1}`, returning both
/// coordinate lists.
pub fn symbolic_coordinates<F: Field>(field: &F, m: usize) -> (Vec<Poly<F>>, Vec<Poly<F>>) {
    let a = (0..m).map(|i| Poly::var(field, 2 * m, i)).collect();
    let x = (0..m).map(|i| Poly::var(field, 2 * m, m + i)).collect();
    (a, x)
}

/// Result of checking the derivative identities of `Q_R` symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub first_derivative: bool,
    pub second_derivative_x0x0: bool,
    pub mixed_derivative_x0x1: bool,
    /// First derivatives of `Q_R` vanish at `R` as polynomials in `a`.
    pub first_derivatives_vanish_at_r: bool,
    /// Second derivatives of `Q_R` vanish at `R` as polynomials in `a`.
    pub second_derivatives_vanish_at_r: bool,
}

impl IdentityCheck {
    pub fn all(&self) -> bool {
        self.first_derivative
            && self.second_derivative_x0x0
            && self.mixed_derivative_x0x1
            && self.first_derivatives_vanish_at_r
            && self.second_derivatives_vanish_at_r
    }
}

/// Check the closed forms of the low-order derivatives of `Q_R` as exact
/// identities in `a0..a3, x0..x3`.
pub fn qr_derivative_identities<F: Field>(field: &F) -> Result<IdentityCheck, ConstructionError> {
    let (a, x) = symbolic_coordinates(field, 4);
    let q = qr_formula(&a, &x);
    let dx = |f: &Poly<F>, i: usize| f.partial_derivative(4 + i);
    let br = cube_bracket::<F>;
    let sq = |p: &Poly<F>| p.pow(2);

    let q0 = dx(&q, 0)?;
    let expected0 = &(&(&(&br(&a[1], &a[2]) * &br(&x[1], &x[3]))
        - &(&br(&a[1], &a[3]) * &br(&x[1], &x[2])))
        * &sq(&a[0]))
        + &(&(&int(field, 8, 3) * &sq(&x[0]))
            * &(&(&(&(&sq(&a[1]) * &x[1]) * &br(&a[2], &a[3]))
                + &(&(&sq(&a[2]) * &x[2]) * &br(&a[3], &a[1])))
                + &(&(&sq(&a[3]) * &x[3]) * &br(&a[1], &a[2]))));

    let q00 = dx(&q0, 0)?;
    let mut sum = Poly::zero(field, 8);
    for k in 1..=3usize {
        let rest: Vec<usize> = (1..=3).filter(|&s| s != k).collect();
        let (j, l) = (rest[0], rest[1]);
        let term = &(&(&sq(&a[j]) * &sq(&a[l])) * &(&(&a[l] * &x[j]) - &(&a[j] * &x[l])));
        sum = if k % 2 == 1 { &sum - term } else { &sum + term };
    }
    let expected00 = &(&int(field, 8, -6) * &x[0]) * &sum;

    let q01 = dx(&q0, 1)?;
    let expected01 = &(&int(field, 8, 3) * &br(&a[2], &a[3]))
        * &(&(&sq(&a[1]) * &sq(&x[0])) - &(&sq(&a[0]) * &sq(&x[1])));

    // Substituting x = a leaves polynomials in a alone.
    let at_r: Vec<Poly<F>> = a.iter().chain(a.iter()).cloned().collect();
    let mut first_zero = true;
    let mut second_zero = true;
    for i in 0..4 {
        let di = dx(&q, i)?;
        first_zero &= di.substitute_vars(&at_r)?.is_zero();
        for j in i..4 {
            second_zero &= dx(&di, j)?.substitute_vars(&at_r)?.is_zero();
        }
    }
    Ok(IdentityCheck {
        first_derivative: q0 == expected0,
        second_derivative_x0x0: q00 == expected00,
        mixed_derivative_x0x1: q01 == expected01,
        first_derivatives_vanish_at_r: first_zero,
        second_derivatives_vanish_at_r: second_zero,
    })
}

/// `Q_R` under the cyclic shift of coordinates: returns `c` with
/// `Q_{σR}(σx) = c · Q_R(x)` when such `c ∈ {1, −1}` exists.
pub fn qr_shift_sign<F: Field>(field: &F) -> Result<Option<i64>, ConstructionError> {
    let (a, x) = symbolic_coordinates(field, 4);
    let q = qr_formula(&a, &x);
    let sa: Vec<_> = (0..4).map(|i| a[(i + 1) % 4].clone()).collect();
    let sx: Vec<_> = (0..4).map(|i| x[(i + 1) % 4].clone()).collect();
    let shifted = qr_formula(&sa, &sx);
    Ok(if shifted == q {
        Some(1)
    } else if shifted == q.neg() {
        Some(-1)
    } else {
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CyclotomicField;

    fn q3() -> CyclotomicField {
        CyclotomicField::new(3).unwrap()
    }

    #[test]
    fn multiplicity_examples() {
        let f = q3();
        let p = Poly::parse(&f, 4, "x0^2*x1^2").unwrap();
        let pt = ProjPoint::from_ints(&f, &[0, 0, 1, 1]).unwrap();
        assert_eq!(multiplicity_at(&p, &pt).unwrap(), 4);
        let on_one_plane = ProjPoint::from_ints(&f, &[0, 1, 1, 1]).unwrap();
        assert_eq!(multiplicity_at(&p, &on_one_plane).unwrap(), 2);
        let one = ProjPoint::from_ints(&f, &[1, 1, 1, 1]).unwrap();
        assert_eq!(multiplicity_at(&p, &one).unwrap(), 0);
        assert_eq!(
            multiplicity_at(&Poly::zero(&f, 4), &pt),
            Err(ConstructionError::ZeroPolynomial)
        );
    }

    #[test]
    fn qr_summand_table() {
        let s = qr_summands();
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], (0, 2, 3));
        assert_eq!(s[1], (0, 3, 2));
        let f = q3();
        let (a, _) = symbolic_coordinates(&f, 4);
        let coeffs = qr_coefficients(&a);
        let expected = (&a[0].pow(2) * &cube_bracket(&a[1], &a[3])).neg();
        assert_eq!(coeffs[0], ((0, 2), expected));
    }

    #[test]
    fn qp_n3_point() {
        let f = q3();
        let r = ProjPoint::from_ints(&f, &[1, 2, 3]).unwrap();
        let res = curve_qp(&f, 3, &r).unwrap();
        assert_eq!(res.poly.homogeneous_degree(), Some(5));
        assert_eq!(res.base_vanishing, 12);
        assert_eq!(res.measured_multiplicities, vec![4]);
        assert!(res.verified);
    }

    #[test]
    fn degenerate_inputs() {
        let f = q3();
        let r = ProjPoint::from_ints(&f, &[1, 1, 1]).unwrap();
        assert!(matches!(
            curve_qp(&f, 3, &r),
            Err(ConstructionError::DegeneratePoint(_))
        ));
        let r = ProjPoint::from_ints(&f, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert!(matches!(
            quartic_qrp(&f, &r, &r.scaled(&f, &f.from_i64(2))),
            Err(ConstructionError::CoincidentPoints)
        ));
        assert_eq!(
            cone_j(&f, 2, 1, &r),
            Err(ConstructionError::IndexError(2, 1))
        );
        assert_eq!(
            cone_j(&f, 0, 4, &r),
            Err(ConstructionError::IndexError(0, 4))
        );
    }

    #[test]
    fn cone_support_and_signs() {
        assert_eq!(cone_support(0, 1).unwrap(), [2, 3, 4, 5]);
        assert_eq!(cone_support(1, 3).unwrap(), [0, 2, 4, 5]);
        let signs: Vec<i64> = CONE_PAIRS.iter().map(|&p| cone_sign(p)).collect();
        assert_eq!(signs, vec![1, -1, 1, 1, -1, 1]);
        assert_eq!(complement_pair((0, 1)), (2, 3));
        assert_eq!(complement_pair((1, 3)), (0, 2));
    }

    #[test]
    fn derivative_identities_hold() {
        let c = qr_derivative_identities(&q3()).unwrap();
        assert!(c.all(), "{c:?}");
    }
}
