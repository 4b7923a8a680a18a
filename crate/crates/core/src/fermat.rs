//! Fermat-type point configurations and the binomial generators of their
//! ideals.
//!
//! For a primitive n-th root of unity `ε`, the configuration `Z_{N,n}` consists
//! of the `n^N` points `(1 : ε^{α₁} : … : ε^{α_N})` with `1 ≤ αᵢ ≤ n`; adding
//! the `N + 1` coordinate points gives `W_{N,n}`.
//!
//! Indices of variables are read modulo `N + 1` wherever a generator refers
//! to `x_{i+1}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldSpec};
use crate::linalg::{self, DenseMatrix};
use crate::poly::{Monomial, Poly, PolyError, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FermatError {
    #[error("field {field} has no primitive root of unity of order {n}")]
    NoRootOfUnity { n: u64, field: String },
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("malformed configuration: {0}")]
    Malformed(String),
}

/// The point set `W_{N,n}`, split into its Fermat and coordinate parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration<E> {
    pub dim: usize,
    pub n: u64,
    pub fermat_points: Vec<ProjPoint<E>>,
    pub coordinate_points: Vec<ProjPoint<E>>,
}

impl<E: Clone + PartialEq> Configuration<E> {
    /// A configuration with no points in `P^dim`.
    pub fn empty(dim: usize) -> Self {
        Configuration {
            dim,
            n: 0,
            fermat_points: Vec::new(),
            coordinate_points: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.fermat_points.len() + self.coordinate_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fermat points first, then coordinate points.
    pub fn points(&self) -> impl Iterator<Item = &ProjPoint<E>> {
        self.fermat_points.iter().chain(&self.coordinate_points)
    }

    pub fn contains<F: Field<Elem = E>>(&self, field: &F, pt: &ProjPoint<E>) -> bool {
        let pt = pt.normalized(field);
        self.points().any(|q| *q == pt)
    }
}

/// A primitive n-th root of unity in `field`: the field's own root when the
/// orders agree, otherwise a suitable power of it.
pub fn root_of_unity<F: Field>(field: &F, n: u64) -> Result<F::Elem, FermatError> {
    let m = field.spec().n;
    if n == 0 || !m.is_multiple_of(n) {
        return Err(FermatError::NoRootOfUnity {
            n,
            field: field.spec().to_string(),
        });
    }
    Ok(field.pow(&field.primitive_root(), m / n))
}

/// Construct `W_{N,n}`.
pub fn build_configuration<F: Field>(
    dim: usize,
    n: u64,
    field: &F,
) -> Result<Configuration<F::Elem>, FermatError> {
    if dim == 0 {
        return Err(FermatError::UnsupportedParameters(
            "dimension must be positive".into(),
        ));
    }
    let eps = root_of_unity(field, n)?;
    let powers: Vec<F::Elem> = (1..=n).map(|a| field.pow(&eps, a)).collect();
    let total = (n as usize).pow(dim as u32);
    let mut fermat_points = Vec::with_capacity(total);
    let mut alpha = vec![0usize; dim];
    for _ in 0..total {
        let mut coords = Vec::with_capacity(dim + 1);
        coords.push(field.one());
        coords.extend(alpha.iter().map(|&a| powers[a].clone()));
        fermat_points.push(ProjPoint::new(field, coords)?);
        // odometer, last exponent fastest
        for slot in alpha.iter_mut().rev() {
            *slot += 1;
            if *slot < n as usize {
                break;
            }
            *slot = 0;
        }
    }
    let coordinate_points = (0..=dim)
        .map(|i| ProjPoint::coordinate_point(field, dim, i))
        .collect();
    Ok(Configuration {
        dim,
        n,
        fermat_points,
        coordinate_points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorKind {
    /// `x_i^n − x_{i+1}^n`, `i = 0..N−1`: the complete intersection `I_{N,n}`.
    CompleteIntersection,
    /// `x(y^n − z^n), y(z^n − x^n), z(x^n − y^n)` in the plane.
    FermatPlane,
    /// `x_i [x_{i+1}, x_j]` for cubes, `j ∉ {i, i+1}`.
    FermatSpace,
}

#[derive(Debug, Clone)]
pub struct GeneratorSet<F: Field> {
    pub kind: GeneratorKind,
    pub dim: usize,
    pub n: u64,
    pub gens: Vec<Poly<F>>,
    /// `(i, j)` for [`GeneratorKind::FermatSpace`], empty otherwise.
    pub labels: Vec<(usize, usize)>,
}

impl<F: Field> GeneratorSet<F> {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Position of `g_{i,j}` in the canonical order.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == (i, j))
    }
}

/// `x_i (x_a^n − x_b^n)` in `nvars` variables.
pub fn binomial<F: Field>(
    field: &F,
    nvars: usize,
    i: usize,
    a: usize,
    b: usize,
    n: u32,
) -> Poly<F> {
    let mut ma = vec![0; nvars];
    ma[i] += 1;
    ma[a] += n;
    let mut mb = vec![0; nvars];
    mb[i] += 1;
    mb[b] += n;
    Poly::from_terms(
        field,
        nvars,
        [
            (Monomial::new(ma), field.one()),
            (Monomial::new(mb), field.neg(&field.one())),
        ],
    )
}

/// The generator `g_{i,j} = x_i [x_{i+1}, x_j]` in `P^dim`.
pub fn fermat_generator<F: Field>(field: &F, dim: usize, i: usize, j: usize) -> Poly<F> {
    binomial(field, dim + 1, i, (i + 1) % (dim + 1), j, 3)
}

/// The canonical `(i, j)` labels for cubes: `i = 0..=N`, then
/// `j = i+2, …, i+N` modulo `N + 1`.
pub fn fermat_labels(dim: usize) -> Vec<(usize, usize)> {
    let m = dim + 1;
    (0..m)
        .flat_map(|i| (i + 2..=i + dim).map(move |j| (i, j % m)))
        .collect()
}

pub fn generators<F: Field>(
    kind: GeneratorKind,
    dim: usize,
    n: u64,
    field: &F,
) -> Result<GeneratorSet<F>, FermatError> {
    let unsupported = |msg: &str| Err(FermatError::UnsupportedParameters(msg.to_string()));
    let e =
        u32::try_from(n).map_err(|_| FermatError::UnsupportedParameters("n too large".into()))?;
    let (gens, labels) = match kind {
        GeneratorKind::CompleteIntersection => {
            if dim == 0 || n == 0 {
                return unsupported("complete intersection needs N >= 1 and n >= 1");
            }
            let nv = dim + 1;
            let gens = (0..dim)
                .map(|i| {
                    let mut a = vec![0; nv];
                    a[i] = e;
                    let mut b = vec![0; nv];
                    b[i + 1] = e;
                    Poly::from_terms(
                        field,
                        nv,
                        [
                            (Monomial::new(a), field.one()),
                            (Monomial::new(b), field.neg(&field.one())),
                        ],
                    )
                })
                .collect();
            (gens, Vec::new())
        }
        GeneratorKind::FermatPlane => {
            if dim != 2 || n < 3 {
                return unsupported("plane generators need N = 2 and n >= 3");
            }
            let gens = vec![
                binomial(field, 3, 0, 1, 2, e),
                binomial(field, 3, 1, 2, 0, e),
                binomial(field, 3, 2, 0, 1, e),
            ];
            (gens, Vec::new())
        }
        GeneratorKind::FermatSpace => {
            if n != 3 || dim < 2 {
                return unsupported("space generators need n = 3 and N >= 2");
            }
            let labels = fermat_labels(dim);
            let gens = labels
                .iter()
                .map(|&(i, j)| fermat_generator(field, dim, i, j))
                .collect();
            (gens, labels)
        }
    };
    Ok(GeneratorSet {
        kind,
        dim,
        n,
        gens,
        labels,
    })
}

/// Result of checking that generators vanish on a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingCheck {
    pub holds: bool,
    /// First failing `(generator index, point index)`; points are indexed
    /// Fermat points first.
    pub witness: Option<(usize, usize)>,
}

pub fn verify_vanishing<F: Field>(
    gens: &GeneratorSet<F>,
    config: &Configuration<F::Elem>,
) -> Result<VanishingCheck, FermatError> {
    for (gi, g) in gens.gens.iter().enumerate() {
        for (pi, pt) in config.points().enumerate() {
            if !g.field().is_zero(&g.evaluate(pt)?) {
                return Ok(VanishingCheck {
                    holds: false,
                    witness: Some((gi, pi)),
                });
            }
        }
    }
    Ok(VanishingCheck {
        holds: true,
        witness: None,
    })
}

/// Rank of the coefficient matrix of `polys` over the union of their
/// monomials.
pub fn coefficient_rank<F: Field>(field: &F, polys: &[Poly<F>]) -> usize {
    let mut monos: Vec<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    let rows = polys.iter().map(|p| p.coefficient_vector(&monos)).collect();
    let m = DenseMatrix::from_rows(rows, monos.len()).expect("uniform rows");
    linalg::rank(field, &m)
}

/// Checks the polynomial identities used to show that the binomials
/// `x_i [x_{i+1}, x_j]` generate the ideal of `W_N`:
///
/// * `x_i [x_j, x_k] = x_i [x_{i+1}, x_k] − x_i [x_{i+1}, x_j]` for mutually
///   distinct `i, j, k`, where both right-hand terms are generators (or zero);
/// * `x_0 x_i [x_0, x_i] = x_i · x_0 [x_j, x_i] − x_0 · x_i [x_j, x_0]` for
///   `j ∉ {0, i}`.
pub fn rewrite_identity_check<F: Field>(dim: usize, field: &F) -> Result<bool, FermatError> {
    if dim < 3 {
        return Err(FermatError::UnsupportedParameters(
            "identities need N >= 3".into(),
        ));
    }
    let nv = dim + 1;
    let gens = generators(GeneratorKind::FermatSpace, dim, 3, field)?;
    let is_generator_or_zero = |p: &Poly<F>| p.is_zero() || gens.gens.contains(p);
    let b = |i, a, c| binomial(field, nv, i, a, c, 3);
    for i in 0..nv {
        let next = (i + 1) % nv;
        for j in (0..nv).filter(|&j| j != i) {
            for k in (0..nv).filter(|&k| k != i && k != j) {
                let rhs1 = b(i, next, k);
                let rhs2 = b(i, next, j);
                if b(i, j, k) != &rhs1 - &rhs2
                    || !is_generator_or_zero(&rhs1)
                    || !is_generator_or_zero(&rhs2)
                {
                    return Ok(false);
                }
            }
        }
    }
    let x = |i| Poly::var(field, nv, i);
    for i in 1..nv {
        let lhs = &(&x(0) * &x(i)) * &x(0).bracket(&x(i), 3)?;
        for j in (1..nv).filter(|&j| j != i) {
            let rhs = &(&x(i) * &b(0, j, i)) - &(&x(0) * &b(i, j, 0));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConfigurationJson {
    dim: usize,
    n: u64,
    field: FieldSpec,
    fermat_points: Vec<Vec<String>>,
    coordinate_points: Vec<Vec<String>>,
}

impl<E: Clone + PartialEq> Configuration<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, field: &F) -> String {
        let doc = ConfigurationJson {
            dim: self.dim,
            n: self.n,
            field: field.spec(),
            fermat_points: self.fermat_points.iter().map(|p| p.format(field)).collect(),
            coordinate_points: self
                .coordinate_points
                .iter()
                .map(|p| p.format(field))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json<F: Field<Elem = E>>(field: &F, text: &str) -> Result<Self, FermatError> {
        let doc: ConfigurationJson =
            serde_json::from_str(text).map_err(|e| FermatError::Malformed(e.to_string()))?;
        if doc.field != field.spec() {
            return Err(FermatError::Malformed(format!(
                "field {} does not match {}",
                doc.field,
                field.spec()
            )));
        }
        let parse = |pts: &[Vec<String>]| -> Result<Vec<ProjPoint<E>>, FermatError> {
            pts.iter()
                .map(|p| {
                    if p.len() != doc.dim + 1 {
                        return Err(FermatError::Malformed("wrong coordinate count".into()));
                    }
                    Ok(ProjPoint::parse(field, p)?)
                })
                .collect()
        };
        Ok(Configuration {
            dim: doc.dim,
            n: doc.n,
            fermat_points: parse(&doc.fermat_points)?,
            coordinate_points: parse(&doc.coordinate_points)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{CyclotomicField, PrimeField};
    use std::collections::HashSet;

    fn q3() -> CyclotomicField {
        CyclotomicField::new(3).unwrap()
    }

    #[test]
    fn configuration_counts() {
        let f = q3();
        assert_eq!(build_configuration(5, 3, &f).unwrap().len(), 249);
        assert_eq!(build_configuration(2, 3, &f).unwrap().len(), 12);
        assert_eq!(build_configuration(3, 3, &f).unwrap().len(), 31);
        let c = build_configuration(3, 3, &f).unwrap();
        assert_eq!(c.fermat_points.len(), 27);
        let distinct: HashSet<_> = c.points().map(|p| p.normalized(&f)).collect();
        assert_eq!(distinct.len(), 31);
        assert!(c.fermat_points.iter().all(|p| f.is_one(&p.coords()[0])));
    }

    #[test]
    fn missing_root_of_unity() {
        let f = CyclotomicField::new(4).unwrap();
        assert!(matches!(
            build_configuration(2, 3, &f),
            Err(FermatError::NoRootOfUnity { .. })
        ));
        // Q(ζ₆) contains the cube roots of unity.
        assert_eq!(
            build_configuration(2, 3, &CyclotomicField::new(6).unwrap())
                .unwrap()
                .len(),
            12
        );
    }

    #[test]
    fn generator_listing_n3() {
        let f = q3();
        let g = generators(GeneratorKind::FermatSpace, 3, 3, &f).unwrap();
        assert_eq!(
            g.labels,
            vec![
                (0, 2),
                (0, 3),
                (1, 3),
                (1, 0),
                (2, 0),
                (2, 1),
                (3, 1),
                (3, 2)
            ]
        );
        assert_eq!(g.gens[0], Poly::parse(&f, 4, "x0*x1^3 - x0*x2^3").unwrap());
        assert_eq!(g.gens[3], Poly::parse(&f, 4, "x1*x2^3 - x1*x0^3").unwrap());
        assert_eq!(g.gens[6], Poly::parse(&f, 4, "x3*x0^3 - x3*x1^3").unwrap());
        assert_eq!(
            generators(GeneratorKind::FermatSpace, 5, 3, &f)
                .unwrap()
                .len(),
            24
        );
        let plane = generators(GeneratorKind::FermatPlane, 2, 3, &f).unwrap();
        let expected: Vec<_> = ["x0*(x1^3 - x2^3)", "x1*(x2^3 - x0^3)", "x2*(x0^3 - x1^3)"]
            .iter()
            .map(|s| Poly::parse(&f, 3, s).unwrap())
            .collect();
        assert_eq!(plane.gens, expected);
        assert!(generators(GeneratorKind::FermatSpace, 3, 4, &f).is_err());
        assert!(generators(GeneratorKind::FermatPlane, 3, 3, &f).is_err());
        assert!(generators(GeneratorKind::FermatPlane, 2, 2, &f).is_err());
    }

    #[test]
    fn vanishing_examples() {
        let f = q3();
        let w3 = build_configuration(3, 3, &f).unwrap();
        let pn = generators(GeneratorKind::FermatSpace, 3, 3, &f).unwrap();
        assert!(verify_vanishing(&pn, &w3).unwrap().holds);
        let ci = generators(GeneratorKind::CompleteIntersection, 3, 3, &f).unwrap();
        let check = verify_vanishing(&ci, &w3).unwrap();
        assert!(!check.holds);
        let (_, pi) = check.witness.unwrap();
        assert_eq!(
            w3.points().nth(pi).unwrap(),
            &ProjPoint::coordinate_point(&f, 3, 0)
        );

        let f4 = CyclotomicField::new(4).unwrap();
        let w24 = build_configuration(2, 4, &f4).unwrap();
        let plane = generators(GeneratorKind::FermatPlane, 2, 4, &f4).unwrap();
        assert!(verify_vanishing(&plane, &w24).unwrap().holds);
    }

    #[test]
    fn vanishing_sweep_and_independence() {
        let f = PrimeField::new(3, crate::field::primes_with_root_of_unity(3, 1)[0]).unwrap();
        for dim in 2..=7 {
            let w = build_configuration(dim, 3, &f).unwrap();
            let g = generators(GeneratorKind::FermatSpace, dim, 3, &f).unwrap();
            assert_eq!(g.len(), (dim + 1) * (dim - 1));
            assert!(verify_vanishing(&g, &w).unwrap().holds, "N = {dim}");
            assert_eq!(coefficient_rank(&f, &g.gens), g.len());
        }
    }

    #[test]
    fn rewrite_identities() {
        let f = q3();
        for dim in [3, 4, 5, 7] {
            assert!(rewrite_identity_check(dim, &f).unwrap());
        }
        assert!(rewrite_identity_check(2, &f).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = q3();
        let c = build_configuration(2, 3, &f).unwrap();
        let text = c.to_json(&f);
        assert_eq!(Configuration::from_json(&f, &text).unwrap(), c);
        assert!(Configuration::from_json(&CyclotomicField::new(6).unwrap(), &text).is_err());
    }
}
