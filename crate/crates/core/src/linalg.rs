//! Exact dense linear algebra.
//!
//! Scalar matrices are reduced by plain Gaussian elimination over the field;
//! matrices of polynomials use fraction-free (Bareiss) elimination so that no
//! rational functions ever appear.

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Field, PrimeField};
use crate::poly::Poly;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot parse entry ({row}, {col}): {msg}")]
    Entry { row: usize, col: usize, msg: String },
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        DenseMatrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(DenseMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        DenseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Append the rows of `other` below `self`.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// One line per row, entries rendered by `fmt`, in construction order.
    pub fn to_csv(&self, fmt: impl Fn(&T) -> String) -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for r in 0..self.rows {
            w.write_record(self.row(r).iter().map(&fmt))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn from_csv<E: std::fmt::Display>(
        text: &str,
        parse: impl Fn(&str) -> Result<T, E>,
    ) -> Result<Self, MatrixError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (r, rec) in reader.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    parse(s.trim()).map_err(|e| MatrixError::Entry {
                        row: r,
                        col: c,
                        msg: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows, cols)
    }
}

impl<E: Clone> DenseMatrix<E> {
    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }
}

// Below this many entries the row updates run serially.
const PARALLEL_THRESHOLD: usize = 1 << 14;

fn eliminate_below<F: Field>(
    field: &F,
    pivot_row: &[F::Elem],
    rest: &mut [Vec<F::Elem>],
    col: usize,
    inv: &F::Elem,
) {
    let update = |row: &mut Vec<F::Elem>| {
        if field.is_zero(&row[col]) {
            return;
        }
        let factor = field.mul(&row[col], inv);
        row[col] = field.zero();
        for (x, p) in row[col + 1..].iter_mut().zip(&pivot_row[col + 1..]) {
            if !field.is_zero(p) {
                field.sub_mul_assign(x, &factor, p);
            }
        }
    };
    if rest.len() * (pivot_row.len() - col) >= PARALLEL_THRESHOLD {
        rest.par_iter_mut().for_each(update);
    } else {
        rest.iter_mut().for_each(update);
    }
}

/// Exact rank.
pub fn rank<F: Field>(field: &F, m: &DenseMatrix<F::Elem>) -> usize {
    let mut rows = m.to_rows();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let (head, rest) = rows.split_at_mut(r + 1);
        let inv = field.inv(&head[r][c]).expect("nonzero pivot");
        eliminate_below(field, &head[r], rest, c, &inv);
        r += 1;
    }
    r
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon<E> {
    pub reduced: DenseMatrix<E>,
    pub pivots: Vec<usize>,
}

pub fn reduced_row_echelon<F: Field>(field: &F, m: &DenseMatrix<F::Elem>) -> Echelon<F::Elem> {
    let mut rows = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r][c..].iter_mut() {
            if !field.is_zero(x) {
                *x = field.mul(x, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        let one = field.one();
        let (above, rest) = rows.split_at_mut(r);
        eliminate_below(field, &pivot_row, &mut rest[1..], c, &one);
        eliminate_below(field, &pivot_row, above, c, &one);
        pivots.push(c);
        r += 1;
    }
    let data = rows.into_iter().flatten().collect();
    Echelon {
        reduced: DenseMatrix::new(m.rows, m.cols, data),
        pivots,
    }
}

/// Basis of the right kernel `{v : m·v = 0}`, one vector per free column.
pub fn kernel_basis<F: Field>(field: &F, m: &DenseMatrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let ech = reduced_row_echelon(field, m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); m.cols];
            v[free] = field.one();
            for (i, &p) in ech.pivots.iter().enumerate() {
                v[p] = field.neg(ech.reduced.get(i, free));
            }
            v
        })
        .collect()
}

pub fn mat_vec<F: Field>(field: &F, m: &DenseMatrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(v.len(), m.cols);
    (0..m.rows)
        .map(|r| {
            m.row(r).iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                field.add(&acc, &field.mul(a, b))
            })
        })
        .collect()
}

/// Rank over the rational function field, with the Bareiss pivots.
///
/// The rank is attained at every specialization of the parameters where none
/// of the recorded pivots vanishes.
#[derive(Debug, Clone)]
pub struct SymbolicRank<F: Field> {
    pub rank: usize,
    pub pivots: Vec<Poly<F>>,
    pub pivot_columns: Vec<usize>,
}

/// Fraction-free elimination of a polynomial matrix.
pub fn symbolic_rank<F: Field>(m: &DenseMatrix<Poly<F>>) -> SymbolicRank<F> {
    let mut rows = m.to_rows();
    let mut pivots: Vec<Poly<F>> = Vec::new();
    let mut pivot_columns = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        let prev = pivots.last();
        rest.par_iter_mut().for_each(|row| {
            let lead = std::mem::replace(&mut row[c], Poly::zero(pivot.field(), pivot.nvars()));
            for j in c + 1..row.len() {
                let mut v = &(pivot * &row[j]) - &(&lead * &pivot_row[j]);
                if let Some(d) = prev {
                    v = v.div_exact(d).expect("Bareiss division is exact");
                }
                row[j] = v;
            }
        });
        pivots.push(pivot.clone());
        pivot_columns.push(c);
        r += 1;
    }
    SymbolicRank {
        rank: r,
        pivots,
        pivot_columns,
    }
}

/// Rank of an integer matrix over `Q`, bounded below by reductions modulo
/// the given primes; the largest modular rank is returned.
pub fn integer_rank_mod_primes(m: &DenseMatrix<i64>, primes: &[u64]) -> usize {
    primes
        .iter()
        .map(|&p| {
            let f = PrimeField::new(1, p).expect("prime");
            rank(&f, &m.map(|&v| f.from_i64(v)))
        })
        .max()
        .unwrap_or(0)
}
