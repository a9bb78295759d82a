//! Dot products, rank, affine dimension and confinement over GF(q).
//!
//! All routines take vectors through `AsRef<[Elem]>` so they accept both
//! [`FieldVector`]s and plain coordinate slices (confinement and affine arguments
//! range over all of F_q^d, not only vectors without zero components).

use crate::error::{Error, Result};
use crate::gf::field::{Elem, GaloisField};

/// A vector with no zero components, i.e. an element of (F_q*)^d.
///
/// Ordering is lexicographic under the field's fixed order on F_q*.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldVector(Vec<Elem>);

impl FieldVector {
    pub fn new(field: &GaloisField, coords: Vec<Elem>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("vector must have at least one coordinate"));
        }
        for &c in &coords {
            if c.is_zero() {
                return Err(Error::domain("vector components must be nonzero"));
            }
            if !field.contains(c) {
                return Err(Error::domain(format!("{c} is not an element of GF({})", field.order())));
            }
        }
        Ok(FieldVector(coords))
    }

    pub fn from_indices(field: &GaloisField, coords: &[u32]) -> Result<Self> {
        Self::new(field, coords.iter().map(|&c| Elem(c)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }
}

impl AsRef<[Elem]> for FieldVector {
    fn as_ref(&self) -> &[Elem] {
        &self.0
    }
}

fn check_dims<V: AsRef<[Elem]>>(vs: &[V]) -> Result<usize> {
    let d = vs[0].as_ref().len();
    for v in vs {
        if v.as_ref().len() != d {
            return Err(Error::SizeMismatch {
                expected: d,
                actual: v.as_ref().len(),
            });
        }
    }
    Ok(d)
}

pub fn dot(field: &GaloisField, u: &[Elem], v: &[Elem]) -> Result<Elem> {
    if u.len() != v.len() {
        return Err(Error::SizeMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    Ok(dot_unchecked(field, u, v))
}

#[inline]
pub(crate) fn dot_unchecked(field: &GaloisField, u: &[Elem], v: &[Elem]) -> Elem {
    u.iter()
        .zip(v)
        .fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

/// Row-reduces `rows` in place and returns the rank.
fn eliminate(field: &GaloisField, rows: &mut [Vec<Elem>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, pv));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Dimension of the linear span. The empty set has rank 0.
pub fn rank<V: AsRef<[Elem]>>(field: &GaloisField, vs: &[V]) -> Result<usize> {
    if vs.is_empty() {
        return Ok(0);
    }
    check_dims(vs)?;
    let mut rows: Vec<Vec<Elem>> = vs.iter().map(|v| v.as_ref().to_vec()).collect();
    Ok(eliminate(field, &mut rows))
}

/// Dimension of the affine hull, computed from differences to the first vector.
pub fn affine_dim<V: AsRef<[Elem]>>(field: &GaloisField, vs: &[V]) -> Result<usize> {
    affine_dim_from(field, vs, 0)
}

/// Affine dimension using `vs[base]` as the base point.
pub fn affine_dim_from<V: AsRef<[Elem]>>(field: &GaloisField, vs: &[V], base: usize) -> Result<usize> {
    if vs.is_empty() {
        return Err(Error::domain("affine dimension of an empty set is undefined"));
    }
    if base >= vs.len() {
        return Err(Error::domain("base point index out of range"));
    }
    check_dims(vs)?;
    let b = vs[base].as_ref();
    let mut rows: Vec<Vec<Elem>> = vs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != base)
        .map(|(_, v)| v.as_ref().iter().zip(b).map(|(&x, &y)| field.sub(x, y)).collect())
        .collect();
    Ok(eliminate(field, &mut rows))
}

/// True iff every `a` in `confining` has a constant dot product across `confined`.
pub fn confines<V: AsRef<[Elem]>, W: AsRef<[Elem]>>(
    field: &GaloisField,
    confining: &[V],
    confined: &[W],
) -> Result<bool> {
    if confining.is_empty() || confined.is_empty() {
        return Err(Error::domain("confinement requires nonempty sets"));
    }
    let d = check_dims(confining)?;
    let d2 = check_dims(confined)?;
    if d != d2 {
        return Err(Error::SizeMismatch {
            expected: d,
            actual: d2,
        });
    }
    if confining
        .iter()
        .any(|a| confined.iter().any(|b| a.as_ref() == b.as_ref()))
    {
        return Err(Error::domain("confinement is defined for disjoint sets"));
    }
    Ok(confining.iter().all(|a| {
        let a = a.as_ref();
        let first = dot_unchecked(field, a, confined[0].as_ref());
        confined[1..]
            .iter()
            .all(|b| dot_unchecked(field, a, b.as_ref()) == first)
    }))
}
