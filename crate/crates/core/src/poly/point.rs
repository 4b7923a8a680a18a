use crate::field::Field;

use super::PolyError;

/// Homogeneous coordinates of a point in projective space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint<E> {
    coords: Vec<E>,
}

impl<E: Clone + PartialEq> ProjPoint<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, coords: Vec<E>) -> Result<Self, PolyError> {
        if coords.iter().all(|c| field.is_zero(c)) {
            return Err(PolyError::ZeroPoint);
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_ints<F: Field<Elem = E>>(field: &F, coords: &[i64]) -> Result<Self, PolyError> {
        Self::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// The `i`-th standard basis point of `P^{dim}`.
    pub fn coordinate_point<F: Field<Elem = E>>(field: &F, dim: usize, i: usize) -> Self {
        let mut coords = vec![field.zero(); dim + 1];
        coords[i] = field.one();
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Representative with the first nonzero coordinate equal to one.
    pub fn normalized<F: Field<Elem = E>>(&self, field: &F) -> Self {
        let lead = self
            .coords
            .iter()
            .find(|c| !field.is_zero(c))
            .expect("nonzero point");
        let inv = field.inv(lead).expect("nonzero lead");
        ProjPoint {
            coords: self.coords.iter().map(|c| field.mul(c, &inv)).collect(),
        }
    }

    /// Equality as points of projective space.
    pub fn same_point<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> bool {
        self.coords.len() == other.coords.len() && self.normalized(field) == other.normalized(field)
    }

    pub fn scaled<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        ProjPoint {
            coords: self.coords.iter().map(|x| field.mul(x, c)).collect(),
        }
    }

    pub fn format<F: Field<Elem = E>>(&self, field: &F) -> Vec<String> {
        self.coords.iter().map(|c| field.format(c)).collect()
    }

    pub fn parse<F: Field<Elem = E>>(
        field: &F,
        coords: &[impl AsRef<str>],
    ) -> Result<Self, PolyError> {
        let coords = coords
            .iter()
            .map(|s| field.parse(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, coords)
    }
}

impl<E: Clone + PartialEq> ProjPoint<E> {
    /// All coordinates nonzero and their `n`-th powers pairwise distinct.
    pub fn is_nondegenerate<F: Field<Elem = E>>(&self, field: &F, n: u64) -> bool {
        if self.coords.iter().any(|c| field.is_zero(c)) {
            return false;
        }
        let powers: Vec<E> = self.coords.iter().map(|c| field.pow(c, n)).collect();
        (0..powers.len()).all(|i| (i + 1..powers.len()).all(|j| powers[i] != powers[j]))
    }
}
