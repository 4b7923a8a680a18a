//! Fat-point conditions on graded pieces of vanishing ideals.
//!
//! A point `P` of multiplicity `m` imposes on forms of degree `d > m − 1` the
//! vanishing of all partials of order `m − 1` at `P`. Lower orders follow by
//! the Euler identity `Σ xᵢ ∂f/∂xᵢ = deg(f)·f`, so only the top order is
//! emitted.
//!
//! Dimensions of systems through general points are estimated with random
//! points. Specializing a point can only raise the dimension, so a single
//! trial with `actual > expected` already certifies unexpectedness; the
//! minimum over several trials is the estimate of the generic dimension.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fermat::{self, Configuration, FermatError, GeneratorKind};
use crate::field::{Field, FieldSpec};
use crate::linalg::{self, DenseMatrix};
use crate::poly::{monomials_of_degree, Monomial, Poly, PolyError, PowerTable, ProjPoint};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resample budget per general point.
pub const RESAMPLE_BUDGET: usize = 100;
pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_BOUND: u64 = 100;
/// Largest `k` accepted by [`conditions_count_sweep`] without an override.
pub const DEFAULT_MAX_K: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpolationError {
    #[error("forms of degree {degree} cannot carry a point of multiplicity {multiplicity}")]
    DegreeTooLow { degree: u32, multiplicity: u32 },
    #[error("no nondegenerate point found after {0} samples")]
    DegenerateSamplingExhausted(usize),
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error(transparent)]
    Fermat(#[from] FermatError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of conditions a point of multiplicity `m` imposes in `P^dim`:
/// `C(dim + m − 1, dim)`.
pub fn fat_point_conditions(dim: usize, m: u32) -> u64 {
    if m == 0 {
        return 0;
    }
    binomial(dim as u64 + m as u64 - 1, dim as u64)
}

/// A base configuration plus general points with multiplicities.
#[derive(Debug, Clone)]
pub struct FatPointScheme<E> {
    pub base: Configuration<E>,
    pub general_points: Vec<(ProjPoint<E>, u32)>,
}

impl<E: Clone + PartialEq> FatPointScheme<E> {
    pub fn validate<F: Field<Elem = E>>(&self, field: &F) -> Result<(), InterpolationError> {
        for (k, (p, m)) in self.general_points.iter().enumerate() {
            if *m == 0 {
                return Err(InterpolationError::InvalidScheme(
                    "multiplicity must be positive".into(),
                ));
            }
            if p.len() != self.base.dim + 1 {
                return Err(InterpolationError::InvalidScheme(
                    "point dimension mismatch".into(),
                ));
            }
            if self.base.contains(field, p) {
                return Err(InterpolationError::InvalidScheme(format!(
                    "point {k} lies in the base"
                )));
            }
            if self.general_points[..k]
                .iter()
                .any(|(q, _)| q.same_point(p, field))
            {
                return Err(InterpolationError::InvalidScheme(format!(
                    "point {k} repeats an earlier point"
                )));
            }
        }
        Ok(())
    }
}

/// Points × monomials evaluation matrix.
pub fn evaluation_matrix<'a, F: Field>(
    field: &F,
    points: impl IntoIterator<Item = &'a ProjPoint<F::Elem>>,
    monomials: &[Monomial],
) -> DenseMatrix<F::Elem>
where
    F::Elem: 'a,
{
    let max_deg = monomials.iter().map(Monomial::degree).max().unwrap_or(0);
    let points: Vec<_> = points.into_iter().collect();
    let rows: Vec<Vec<F::Elem>> = points
        .par_iter()
        .map(|p| {
            let table = PowerTable::new(field, p.coords(), max_deg);
            monomials.iter().map(|m| table.monomial(field, m)).collect()
        })
        .collect();
    DenseMatrix::from_rows(rows, monomials.len()).expect("uniform rows")
}

/// Basis of the degree-`d` forms vanishing on `config`: the kernel of the
/// evaluation matrix, with columns in descending graded-lex order.
pub fn vanishing_space<F: Field>(
    field: &F,
    config: &Configuration<F::Elem>,
    d: u32,
) -> Vec<Poly<F>> {
    let nvars = config.dim + 1;
    let monomials = monomials_of_degree(nvars, d);
    if config.is_empty() {
        return monomials
            .into_iter()
            .map(|m| Poly::term(field, m, field.one()))
            .collect();
    }
    let m = evaluation_matrix(field, config.points(), &monomials);
    linalg::kernel_basis(field, &m)
        .into_iter()
        .map(|v| Poly::from_coefficients(field, nvars, &monomials, &v))
        .collect()
}

/// `dim` of the degree-`d` piece of the vanishing ideal, without a basis.
pub fn vanishing_dimension<F: Field>(field: &F, config: &Configuration<F::Elem>, d: u32) -> usize {
    let monomials = monomials_of_degree(config.dim + 1, d);
    if config.is_empty() {
        return monomials.len();
    }
    monomials.len()
        - linalg::rank(
            field,
            &evaluation_matrix(field, config.points(), &monomials),
        )
}

/// Multi-indices of order `k` in `nvars` variables, descending graded-lex
/// (`∂x0^k` first).
pub fn derivative_multi_indices(nvars: usize, k: u32) -> Vec<Vec<u32>> {
    monomials_of_degree(nvars, k)
        .into_iter()
        .map(|m| m.exps().to_vec())
        .collect()
}

/// One row per partial derivative of order `m − 1`, one column per basis
/// form; entries are the derivatives evaluated at `pt`.
pub fn derivative_rows<F: Field>(
    basis: &[Poly<F>],
    pt: &ProjPoint<F::Elem>,
    m: u32,
) -> Result<DenseMatrix<F::Elem>, InterpolationError> {
    assert!(m >= 1, "multiplicity must be positive");
    let nvars = pt.len();
    let alphas = derivative_multi_indices(nvars, m - 1);
    let Some(first) = basis.first() else {
        return Ok(DenseMatrix::new(alphas.len(), 0, Vec::new()));
    };
    let field = first.field();
    let mut max_deg = 0;
    for b in basis {
        if b.nvars() != nvars {
            return Err(PolyError::ArityMismatch {
                expected: nvars,
                found: b.nvars(),
            }
            .into());
        }
        if let Some(d) = b.degree() {
            if d < m {
                return Err(InterpolationError::DegreeTooLow {
                    degree: d,
                    multiplicity: m,
                });
            }
            max_deg = max_deg.max(d);
        }
    }
    let table = PowerTable::new(field, pt.coords(), max_deg);
    let columns: Vec<Vec<F::Elem>> = basis
        .par_iter()
        .map(|b| {
            let mut col = vec![field.zero(); alphas.len()];
            for (mono, c) in b.terms() {
                let e = mono.exps();
                for (r, alpha) in alphas.iter().enumerate() {
                    if e.iter().zip(alpha).any(|(x, a)| x < a) {
                        continue;
                    }
                    let mut factor: i64 = 1;
                    let mut rest = e.to_vec();
                    for (x, &a) in rest.iter_mut().zip(alpha) {
                        for k in 0..a {
                            factor *= (*x - k) as i64;
                        }
                        *x -= a;
                    }
                    let v = field.mul(c, &table.monomial(field, &Monomial::new(rest)));
                    col[r] = field.add(&col[r], &field.mul(&v, &field.from_i64(factor)));
                }
            }
            col
        })
        .collect();
    let mut data = Vec::with_capacity(alphas.len() * basis.len());
    for r in 0..alphas.len() {
        for col in &columns {
            data.push(col[r].clone());
        }
    }
    Ok(DenseMatrix::new(alphas.len(), basis.len(), data))
}

/// Dimension of a linear system with the rank contributed by each fat point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemDimension {
    pub base_dim: usize,
    pub dim: usize,
    /// Incremental rank added by each general point, in order.
    pub increments: Vec<usize>,
}

/// The degree-`d` forms through a base configuration, against which fat
/// points are imposed.
#[derive(Debug, Clone)]
pub struct LinearSystem<F: Field> {
    pub field: F,
    pub dim: usize,
    pub degree: u32,
    pub basis: Vec<Poly<F>>,
}

impl<F: Field> LinearSystem<F> {
    pub fn through(field: &F, base: &Configuration<F::Elem>, degree: u32) -> Self {
        LinearSystem {
            field: field.clone(),
            dim: base.dim,
            degree,
            basis: vanishing_space(field, base, degree),
        }
    }

    pub fn base_dim(&self) -> usize {
        self.basis.len()
    }

    /// Stacked derivative rows of all fat points.
    pub fn conditions_matrix(
        &self,
        points: &[(ProjPoint<F::Elem>, u32)],
    ) -> Result<DenseMatrix<F::Elem>, InterpolationError> {
        let mut acc = DenseMatrix::new(0, self.basis.len(), Vec::new());
        for (p, m) in points {
            acc = acc.stack(&derivative_rows(&self.basis, p, *m)?);
        }
        Ok(acc)
    }

    pub fn dimension_with(
        &self,
        points: &[(ProjPoint<F::Elem>, u32)],
    ) -> Result<SystemDimension, InterpolationError> {
        let mut acc = DenseMatrix::new(0, self.basis.len(), Vec::new());
        let mut increments = Vec::with_capacity(points.len());
        let mut prev = 0;
        for (p, m) in points {
            acc = acc.stack(&derivative_rows(&self.basis, p, *m)?);
            let r = linalg::rank(&self.field, &acc);
            increments.push(r - prev);
            prev = r;
        }
        Ok(SystemDimension {
            base_dim: self.base_dim(),
            dim: self.base_dim() - prev,
            increments,
        })
    }

    /// Basis of the forms in the system satisfying all fat-point conditions.
    pub fn solutions(
        &self,
        points: &[(ProjPoint<F::Elem>, u32)],
    ) -> Result<Vec<Poly<F>>, InterpolationError> {
        let m = self.conditions_matrix(points)?;
        let kernel = linalg::kernel_basis(&self.field, &m);
        Ok(kernel
            .into_iter()
            .map(|v| {
                self.basis
                    .iter()
                    .zip(&v)
                    .fold(Poly::zero(&self.field, self.dim + 1), |acc, (b, c)| {
                        &acc + &b.scale(c)
                    })
            })
            .collect())
    }
}

pub fn system_dimension<F: Field>(
    field: &F,
    scheme: &FatPointScheme<F::Elem>,
    d: u32,
) -> Result<SystemDimension, InterpolationError> {
    scheme.validate(field)?;
    LinearSystem::through(field, &scheme.base, d).dimension_with(&scheme.general_points)
}

/// Draw a point with nonzero coordinates whose `n`-th powers are pairwise
/// distinct, avoiding the base configuration and the points in `avoid`.
pub fn sample_general_point<F: Field>(
    field: &F,
    rng: &mut ChaCha8Rng,
    dim: usize,
    n: u64,
    bound: u64,
    base: &Configuration<F::Elem>,
    avoid: &[ProjPoint<F::Elem>],
) -> Result<ProjPoint<F::Elem>, InterpolationError> {
    for _ in 0..RESAMPLE_BUDGET {
        let coords: Vec<F::Elem> = (0..=dim).map(|_| field.random(rng, bound)).collect();
        let Ok(p) = ProjPoint::new(field, coords) else {
            continue;
        };
        if !p.is_nondegenerate(field, n.max(1)) || base.contains(field, &p) {
            continue;
        }
        if avoid.iter().any(|q| q.same_point(&p, field)) {
            continue;
        }
        return Ok(p);
    }
    Err(InterpolationError::DegenerateSamplingExhausted(
        RESAMPLE_BUDGET,
    ))
}

/// `count` distinct points of `P^dim` with nonzero coordinates and pairwise
/// distinct `n`-th powers, drawn from `seed`.
pub fn random_general_points<F: Field>(
    field: &F,
    dim: usize,
    n: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<ProjPoint<F::Elem>>, InterpolationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = Configuration::empty(dim);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let p = sample_general_point(field, &mut rng, dim, n, DEFAULT_BOUND, &base, &out)?;
        out.push(p);
    }
    Ok(out)
}

/// Per-trial seeds derived from a master seed.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| master.next_u64()).collect()
}

/// Points paired with their multiplicities.
pub type FatPoints<E> = Vec<(ProjPoint<E>, u32)>;

/// Sample one general point per multiplicity from a trial seed.
pub fn sample_fat_points<F: Field>(
    field: &F,
    base: &Configuration<F::Elem>,
    mults: &[u32],
    trial_seed: u64,
    bound: u64,
) -> Result<FatPoints<F::Elem>, InterpolationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let mut chosen: Vec<ProjPoint<F::Elem>> = Vec::new();
    for _ in mults {
        let p = sample_general_point(field, &mut rng, base.dim, base.n, bound, base, &chosen)?;
        chosen.push(p);
    }
    Ok(chosen.into_iter().zip(mults.iter().copied()).collect())
}

/// Result of testing a configuration for unexpected hypersurfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnexpectednessReport {
    pub degree: u32,
    pub base_dim: usize,
    pub conditions_expected: u64,
    pub virtual_dim: i64,
    pub expected_dim: u64,
    pub actual_dim: usize,
    pub rank_per_point: Vec<usize>,
    pub verdict: bool,
    pub trials: usize,
    pub seeds: Vec<u64>,
    pub artifact_version: String,
    pub backend: FieldSpec,
}

/// Decide whether general fat points of the given multiplicities fail to
/// impose independent conditions on degree-`d` forms through `config`.
///
/// `base_dim` is the computed dimension of the system through the base, even
/// when the base itself does not impose independent conditions.
pub fn unexpectedness_report<F: Field>(
    field: &F,
    config: &Configuration<F::Elem>,
    degree: u32,
    mults: &[u32],
    trials: usize,
    seed: u64,
) -> Result<UnexpectednessReport, InterpolationError> {
    if trials == 0 {
        return Err(InterpolationError::UnsupportedParameters(
            "trials must be positive".into(),
        ));
    }
    if mults.contains(&0) {
        return Err(InterpolationError::InvalidScheme(
            "multiplicity must be positive".into(),
        ));
    }
    let system = LinearSystem::through(field, config, degree);
    let base_dim = system.base_dim();
    let conditions_expected: u64 = mults
        .iter()
        .map(|&m| fat_point_conditions(config.dim, m))
        .sum();
    let virtual_dim = base_dim as i64 - conditions_expected as i64;
    let expected_dim = virtual_dim.max(0) as u64;

    let seeds = trial_seeds(seed, trials);
    let outcomes: Vec<SystemDimension> = seeds
        .par_iter()
        .map(|&s| {
            let pts = sample_fat_points(field, config, mults, s, DEFAULT_BOUND)?;
            system.dimension_with(&pts)
        })
        .collect::<Result<_, _>>()?;
    let best = outcomes
        .iter()
        .min_by_key(|o| o.dim)
        .expect("at least one trial");
    debug_assert!(best.dim as u64 >= expected_dim);

    let mut sorted_seeds = seeds;
    sorted_seeds.sort_unstable();
    Ok(UnexpectednessReport {
        degree,
        base_dim,
        conditions_expected,
        virtual_dim,
        expected_dim,
        actual_dim: best.dim,
        rank_per_point: best.increments.clone(),
        verdict: best.dim as u64 > expected_dim,
        trials,
        seeds: sorted_seeds,
        artifact_version: ARTIFACT_VERSION.to_string(),
        backend: field.spec(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationRow {
    pub degree: u32,
    /// Dimension of the span of `monomial · generator` products.
    pub span_dim: usize,
    /// Dimension of the degree piece of the vanishing ideal.
    pub kernel_dim: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub dim: usize,
    pub n: u64,
    pub rows: Vec<GenerationRow>,
    pub holds: bool,
}

/// Compare, degree by degree, the span of the generator multiples with the
/// graded piece of the ideal of `W_{N,n}`.
///
/// The products always lie in the ideal, so equal dimensions mean the
/// generators span that graded piece.
pub fn verify_generation<F: Field>(
    field: &F,
    dim: usize,
    n: u64,
    d_max: u32,
) -> Result<GenerationReport, InterpolationError> {
    let kind = match (dim, n) {
        (2, n) if n >= 3 => GeneratorKind::FermatPlane,
        (d, 3) if d >= 3 => GeneratorKind::FermatSpace,
        _ => {
            return Err(InterpolationError::UnsupportedParameters(format!(
                "generation is known for N = 2, n >= 3 or N >= 3, n = 3; got N = {dim}, n = {n}"
            )))
        }
    };
    let gens = fermat::generators(kind, dim, n, field)?;
    let gen_degree = n as u32 + 1;
    if d_max < gen_degree {
        return Err(InterpolationError::UnsupportedParameters(format!(
            "max degree must be at least {gen_degree}"
        )));
    }
    let config = fermat::build_configuration(dim, n, field)?;
    let nvars = dim + 1;
    let mut rows = Vec::new();
    for d in 1..=d_max {
        let span_dim = if d < gen_degree {
            0
        } else {
            let monomials = monomials_of_degree(nvars, d);
            let index: std::collections::HashMap<&Monomial, usize> =
                monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let multipliers = monomials_of_degree(nvars, d - gen_degree);
            let mut prod_rows = Vec::with_capacity(multipliers.len() * gens.len());
            for mult in &multipliers {
                for g in &gens.gens {
                    let mut row = vec![field.zero(); monomials.len()];
                    for (m, c) in g.terms() {
                        row[index[&m.mul(mult)]] = c.clone();
                    }
                    prod_rows.push(row);
                }
            }
            let m = DenseMatrix::from_rows(prod_rows, monomials.len()).expect("uniform rows");
            linalg::rank(field, &m)
        };
        let kernel_dim = vanishing_dimension(field, &config, d);
        rows.push(GenerationRow {
            degree: d,
            span_dim,
            kernel_dim,
            equal: span_dim == kernel_dim,
        });
    }
    let holds = rows.iter().all(|r| r.equal);
    Ok(GenerationReport {
        dim,
        n,
        rows,
        holds,
    })
}

/// Symbolic interpolation matrix of a triple point for the generators of
/// the ideal of `W_{N,3}`.
#[derive(Debug, Clone)]
pub struct SymbolicTable<F: Field> {
    /// Entries are polynomials in the point coordinates `a0, …, aN`.
    pub matrix: DenseMatrix<Poly<F>>,
    /// Order-2 derivative multi-index of each row.
    pub row_labels: Vec<Vec<u32>>,
    /// Generator `(i, j)` of each column, sorted lexicographically.
    pub column_labels: Vec<(usize, usize)>,
    /// Monomial and positive integer divided out of each row.
    pub row_factors: Vec<(Monomial, BigInt)>,
}

/// The second-order derivatives of the generators `x_i [x_{i+1}, x_j]` at the
/// symbolic point `(a0 : … : aN)`, each row divided by its greatest common
/// monomial and positive integer content.
///
/// Columns are ordered by `(i, j)` lexicographically.
pub fn symbolic_interpolation_matrix<F: Field>(
    field: &F,
    dim: usize,
) -> Result<SymbolicTable<F>, InterpolationError> {
    if dim != 3 && dim != 5 {
        return Err(InterpolationError::UnsupportedParameters(
            "tables exist for N = 3 and N = 5".into(),
        ));
    }
    let gens = fermat::generators(GeneratorKind::FermatSpace, dim, 3, field)?;
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&k| gens.labels[k]);
    let column_labels: Vec<_> = order.iter().map(|&k| gens.labels[k]).collect();
    let row_labels = derivative_multi_indices(dim + 1, 2);
    let mut rows = Vec::with_capacity(row_labels.len());
    let mut row_factors = Vec::with_capacity(row_labels.len());
    for alpha in &row_labels {
        // Evaluating at the symbolic point renames x_i to a_i.
        let entries: Vec<Poly<F>> = order
            .iter()
            .map(|&k| gens.gens[k].derivative(alpha))
            .collect::<Result<_, _>>()?;
        let (mono, content) = row_content(field, &entries);
        let inv = field
            .inv(
                &field
                    .from_rational(&BigRational::from_integer(content.clone()))
                    .map_err(PolyError::from)?,
            )
            .map_err(PolyError::from)?;
        rows.push(
            entries
                .iter()
                .map(|e| e.div_monomial(&mono).scale(&inv))
                .collect(),
        );
        row_factors.push((mono, content));
    }
    let matrix = DenseMatrix::from_rows(rows, column_labels.len()).expect("uniform rows");
    Ok(SymbolicTable {
        matrix,
        row_labels,
        column_labels,
        row_factors,
    })
}

fn row_content<F: Field>(field: &F, entries: &[Poly<F>]) -> (Monomial, BigInt) {
    let nonzero: Vec<&Poly<F>> = entries.iter().filter(|e| !e.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return (
            Monomial::one(entries.first().map_or(0, Poly::nvars)),
            BigInt::one(),
        );
    };
    let mono = nonzero
        .iter()
        .skip(1)
        .fold(first.monomial_content(), |g, e| {
            g.gcd(&e.monomial_content())
        });
    let mut content = BigInt::zero();
    for e in &nonzero {
        for (_, c) in e.terms() {
            match field.as_rational(c) {
                Some(q) if q.is_integer() => content = content.gcd(q.numer()),
                _ => return (mono, BigInt::one()),
            }
        }
    }
    (mono, content.abs().max(BigInt::one()))
}

const REFERENCE_N3: &str = include_str!("../data/imat_n3.csv");
const REFERENCE_N5: &str = include_str!("../data/imat_n5.csv");

/// Published interpolation matrix of a triple point for `N = 3` or `N = 5`,
/// with entries in the point coordinates `a0, …, aN`.
pub fn reference_table<F: Field>(
    field: &F,
    dim: usize,
) -> Result<DenseMatrix<Poly<F>>, InterpolationError> {
    let text = match dim {
        3 => REFERENCE_N3,
        5 => REFERENCE_N5,
        _ => {
            return Err(InterpolationError::UnsupportedParameters(
                "tables exist for N = 3 and N = 5".into(),
            ))
        }
    };
    let nvars = dim + 1;
    DenseMatrix::from_csv(text, |s| Poly::parse(field, nvars, &s.replace('a', "x")))
        .map_err(|e| InterpolationError::UnsupportedParameters(format!("reference table: {e}")))
}

/// A row where the computed table is not a scalar multiple of the reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowMismatch {
    pub row: usize,
    pub derivative: Vec<u32>,
    pub computed: Vec<String>,
    pub reference: Vec<String>,
}

/// Rows of `computed` that are not a nonzero scalar multiple of the
/// corresponding row of `reference`.
pub fn compare_tables<F: Field>(
    table: &SymbolicTable<F>,
    reference: &DenseMatrix<Poly<F>>,
) -> Vec<RowMismatch> {
    let computed = &table.matrix;
    let mut out = Vec::new();
    for r in 0..computed.rows().max(reference.rows()) {
        let ok = r < computed.rows()
            && r < reference.rows()
            && computed.cols() == reference.cols()
            && rows_proportional(computed.row(r), reference.row(r));
        if !ok {
            let show = |m: &DenseMatrix<Poly<F>>| {
                if r < m.rows() {
                    m.row(r).iter().map(|e| e.display_with("a")).collect()
                } else {
                    Vec::new()
                }
            };
            out.push(RowMismatch {
                row: r,
                derivative: table.row_labels.get(r).cloned().unwrap_or_default(),
                computed: show(computed),
                reference: show(reference),
            });
        }
    }
    out
}

fn rows_proportional<F: Field>(a: &[Poly<F>], b: &[Poly<F>]) -> bool {
    let Some(k) = b.iter().position(|e| !e.is_zero()) else {
        return a.iter().all(Poly::is_zero);
    };
    let (Some((ma, ca)), Some((mb, cb))) = (a[k].leading_term(), b[k].leading_term()) else {
        return false;
    };
    if ma != mb {
        return false;
    }
    let field = b[k].field();
    let Ok(inv) = field.inv(cb) else { return false };
    let c = field.mul(ca, &inv);
    a.iter().zip(b).all(|(x, y)| *x == y.scale(&c))
}

/// Substitute numeric coordinates into a symbolic table.
pub fn specialize<F: Field>(
    m: &DenseMatrix<Poly<F>>,
    point: &ProjPoint<F::Elem>,
) -> Result<DenseMatrix<F::Elem>, InterpolationError> {
    let rows = m
        .to_rows()
        .into_iter()
        .map(|r| {
            r.iter()
                .map(|e| e.evaluate(point))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DenseMatrix::from_rows(rows, m.cols()).expect("uniform rows"))
}

/// Conditions imposed by successive double points on the quartics through
/// `W_{2k+1,3}` with a general triple point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub dim: usize,
    /// `dim V_{N,3}` after imposing the triple point.
    pub triple_dim: usize,
    pub expected_triple_dim: u64,
    /// Conditions imposed by each of the `k − 1` double points.
    pub increments: Vec<usize>,
    pub total_conditions: usize,
    pub expected_total: u64,
    pub final_dim: usize,
    pub seed: u64,
    /// The triple-point dimension and all increments match the predicted
    /// counts: `C(N−1, 2)`, then `2k + 2` for all but the last point and
    /// `k + 3` for the last, totalling `2k² − k − 1`.
    pub matches: bool,
    pub backend: FieldSpec,
}

pub fn predicted_increments(k: usize) -> Vec<usize> {
    if k < 2 {
        return Vec::new();
    }
    let mut v = vec![2 * k + 2; k - 2];
    v.push(k + 3);
    v
}

pub fn conditions_count_sweep<F: Field>(
    field: &F,
    k_list: &[usize],
    trials: usize,
    seed: u64,
    max_k: usize,
) -> Result<Vec<SweepRow>, InterpolationError> {
    if trials == 0 {
        return Err(InterpolationError::UnsupportedParameters(
            "trials must be positive".into(),
        ));
    }
    let mut out = Vec::new();
    for &k in k_list {
        if k < 2 {
            return Err(InterpolationError::UnsupportedParameters(
                "k must be at least 2".into(),
            ));
        }
        if k > max_k {
            return Err(InterpolationError::ResourceGuard(format!(
                "k = {k} exceeds the bound {max_k}"
            )));
        }
        let dim = 2 * k + 1;
        let config = fermat::build_configuration(dim, 3, field)?;
        let system = LinearSystem::through(field, &config, 4);
        let mut mults = vec![3u32];
        mults.extend(std::iter::repeat_n(2, k - 1));
        let seeds = trial_seeds(seed ^ k as u64, trials);
        let outcomes: Vec<(u64, SystemDimension)> = seeds
            .par_iter()
            .map(|&s| {
                let pts = sample_fat_points(field, &config, &mults, s, DEFAULT_BOUND)?;
                Ok((s, system.dimension_with(&pts)?))
            })
            .collect::<Result<_, InterpolationError>>()?;
        let (s, best) = outcomes
            .iter()
            .min_by_key(|(_, o)| o.dim)
            .expect("at least one trial");
        let triple_dim = best.base_dim - best.increments[0];
        let increments = best.increments[1..].to_vec();
        let total: usize = increments.iter().sum();
        let expected_triple_dim = binomial(dim as u64 - 1, 2);
        let expected_total = (2 * k * k - k - 1) as u64;
        let matches = triple_dim as u64 == expected_triple_dim
            && increments == predicted_increments(k)
            && total as u64 == expected_total;
        out.push(SweepRow {
            k,
            dim,
            triple_dim,
            expected_triple_dim,
            increments,
            total_conditions: total,
            expected_total,
            final_dim: best.dim,
            seed: *s,
            matches,
            backend: field.spec(),
        });
    }
    Ok(out)
}

/// `dim V_{N,3}`: quartics through `W_{N,3}` with a general triple point,
/// minimized over trials.
pub fn triple_point_dimension<F: Field>(
    field: &F,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<usize, InterpolationError> {
    let config = fermat::build_configuration(dim, 3, field)?;
    let report = unexpectedness_report(field, &config, 4, &[3], trials, seed)?;
    Ok(report.actual_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermat::build_configuration;
    use crate::field::{primes_with_root_of_unity, CyclotomicField, PrimeField};

    fn q3() -> CyclotomicField {
        CyclotomicField::new(3).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 5), 21);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(fat_point_conditions(5, 3), 21);
        assert_eq!(fat_point_conditions(5, 2), 6);
        assert_eq!(fat_point_conditions(2, 4), 10);
        assert_eq!(predicted_increments(2), vec![5]);
        assert_eq!(predicted_increments(3), vec![8, 6]);
        assert_eq!(predicted_increments(4), vec![10, 10, 7]);
    }

    #[test]
    fn derivative_row_shapes() {
        let f = q3();
        let gens5 = fermat::generators(GeneratorKind::FermatSpace, 5, 3, &f).unwrap();
        let r5 = ProjPoint::from_ints(&f, &[1, 2, 3, 4, 5, 6]).unwrap();
        let m = derivative_rows(&gens5.gens, &r5, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (21, 24));
        let gens3 = fermat::generators(GeneratorKind::FermatSpace, 3, 3, &f).unwrap();
        let r3 = ProjPoint::from_ints(&f, &[1, 2, 3, 4]).unwrap();
        let m = derivative_rows(&gens3.gens, &r3, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (10, 8));
        let m1 = derivative_rows(&gens3.gens, &r3, 1).unwrap();
        assert_eq!(m1.rows(), 1);
        for (j, g) in gens3.gens.iter().enumerate() {
            assert_eq!(m1.get(0, j), &g.evaluate(&r3).unwrap());
        }
        assert_eq!(
            derivative_rows(&gens3.gens, &r3, 5).unwrap_err(),
            InterpolationError::DegreeTooLow {
                degree: 4,
                multiplicity: 5
            }
        );
    }

    #[test]
    fn empty_configuration_space() {
        let f = q3();
        assert_eq!(vanishing_space(&f, &Configuration::empty(5), 4).len(), 126);
    }

    #[test]
    fn vanishing_space_w3() {
        let f = q3();
        let w = build_configuration(3, 3, &f).unwrap();
        let basis = vanishing_space(&f, &w, 4);
        assert_eq!(basis.len(), 8);
        for b in &basis {
            assert!(b.is_homogeneous());
            for p in w.points() {
                assert!(f.is_zero(&b.evaluate(p).unwrap()));
            }
        }
    }

    #[test]
    fn negative_control_conic() {
        let f = q3();
        let r = unexpectedness_report(&f, &Configuration::empty(2), 2, &[2], 3, 1).unwrap();
        assert_eq!(
            (
                r.base_dim,
                r.conditions_expected,
                r.actual_dim,
                r.expected_dim
            ),
            (6, 3, 3, 3)
        );
        assert!(!r.verdict);
        assert_eq!(r.rank_per_point, vec![3]);
    }

    #[test]
    fn report_determinism() {
        let f = q3();
        let w = build_configuration(2, 3, &f).unwrap();
        let a = unexpectedness_report(&f, &w, 5, &[4], 2, 9).unwrap();
        let b = unexpectedness_report(&f, &w, 5, &[4], 2, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seeds.len(), 2);
        assert!(a.verdict);
    }

    #[test]
    fn validate_rejects_base_points() {
        let f = q3();
        let w = build_configuration(2, 3, &f).unwrap();
        let scheme = FatPointScheme {
            base: w.clone(),
            general_points: vec![(w.coordinate_points[0].clone(), 2)],
        };
        assert!(matches!(
            system_dimension(&f, &scheme, 5),
            Err(InterpolationError::InvalidScheme(_))
        ));
        let p = ProjPoint::from_ints(&f, &[1, 2, 5]).unwrap();
        let scheme = FatPointScheme {
            base: w,
            general_points: vec![(p.clone(), 2), (p.scaled(&f, &f.from_i64(3)), 1)],
        };
        assert!(matches!(
            system_dimension(&f, &scheme, 5),
            Err(InterpolationError::InvalidScheme(_))
        ));
    }

    #[test]
    fn sweep_guard() {
        let f = PrimeField::new(3, primes_with_root_of_unity(3, 1)[0]).unwrap();
        assert!(matches!(
            conditions_count_sweep(&f, &[4], 1, 0, 3),
            Err(InterpolationError::ResourceGuard(_))
        ));
        assert!(matches!(
            conditions_count_sweep(&f, &[1], 1, 0, 3),
            Err(InterpolationError::UnsupportedParameters(_))
        ));
    }

    #[test]
    fn reference_tables_parse() {
        let f = q3();
        let t3 = reference_table(&f, 3).unwrap();
        assert_eq!((t3.rows(), t3.cols()), (10, 8));
        let t5 = reference_table(&f, 5).unwrap();
        assert_eq!((t5.rows(), t5.cols()), (21, 24));
        assert!(reference_table(&f, 4).is_err());
    }

    #[test]
    fn generation_parameters() {
        let f = q3();
        assert!(verify_generation(&f, 3, 4, 6).is_err());
        assert!(verify_generation(&f, 3, 3, 3).is_err());
        let r = verify_generation(&f, 2, 3, 6).unwrap();
        assert!(r.holds);
        assert_eq!(
            r.rows[3],
            GenerationRow {
                degree: 4,
                span_dim: 3,
                kernel_dim: 3,
                equal: true
            }
        );
    }
}
