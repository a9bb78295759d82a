//! The modified dot-product coloring `φ_d` on `(F_q*)^d`.
//!
//! For `x < y` (lexicographic under the field's fixed order) with first differing
//! coordinate `i`:
//!
//! * `ZERO(i, x_i + y_i)` when `x·y = 0`,
//! * `UP(i, x_i + y_i)` when `x·y != 0` and `x·y = x·x`,
//! * `DOWN(i, x_i + y_i)` when `x·y ∉ {0, x·x}` and `x·y = y·y`,
//! * `DOT(x·y)` otherwise.
//!
//! The coloring uses at most `(3d + 1)q - 1` colors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{dot_unchecked, prime_power, Elem, FieldVector, GaloisField};
use crate::model::{
    ColorSource, ColorValue, DotClass, DotColor, EdgeColoring, Provenance, DEFAULT_MATERIALIZE_CAP,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotParams {
    d: usize,
    field: Arc<GaloisField>,
}

/// Odd prime powers in increasing order, starting at 3.
pub fn odd_prime_powers() -> impl Iterator<Item = u64> {
    (3u64..)
        .step_by(2)
        .filter(|&q| prime_power(q).is_some())
}

impl DotParams {
    pub fn new(d: usize, field: GaloisField) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        Ok(DotParams {
            d,
            field: Arc::new(field),
        })
    }

    /// Smallest odd prime power `q` with `(q-1)^d >= n`.
    pub fn select(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("need at least one vertex"));
        }
        if d == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        let q = odd_prime_powers()
            .find(|&q| {
                (q - 1)
                    .checked_pow(d as u32)
                    .is_none_or(|cap| cap >= n as u64)
            })
            .unwrap();
        let q = u32::try_from(q).map_err(|_| Error::domain("field order too large"))?;
        Self::new(d, GaloisField::new(q)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// `(q-1)^d`, saturating.
    pub fn vertex_capacity(&self) -> u64 {
        ((self.q() - 1) as u64).saturating_pow(self.d as u32)
    }

    pub fn provenance(&self) -> Provenance {
        let desc = self.field.descriptor();
        Provenance::Dotprod {
            d: self.d as u32,
            p: desc.p,
            k: desc.k,
            modulus: desc.modulus,
        }
    }
}

/// Base-(q-1) digits of `i`, most significant first, mapped onto F_q* in order.
pub fn vertex_to_vector(i: usize, params: &DotParams) -> Result<FieldVector> {
    if i as u64 >= params.vertex_capacity() {
        return Err(Error::domain(format!(
            "vertex {i} out of range for (q-1)^d = {}",
            params.vertex_capacity()
        )));
    }
    let radix = (params.q() - 1) as usize;
    let mut coords = vec![Elem::ONE; params.d];
    let mut rest = i;
    for slot in coords.iter_mut().rev() {
        *slot = Elem((rest % radix) as u32 + 1);
        rest /= radix;
    }
    FieldVector::new(params.field(), coords)
}

fn check_vector(v: &FieldVector, params: &DotParams) -> Result<()> {
    if v.dim() != params.d {
        return Err(Error::SizeMismatch {
            expected: params.d,
            actual: v.dim(),
        });
    }
    if v.coords().iter().any(|&c| c.is_zero() || !params.field.contains(c)) {
        return Err(Error::domain("vector is not in (F_q*)^d"));
    }
    Ok(())
}

/// `φ_d(x, y)`; the arguments are ordered internally, so the result is symmetric.
pub fn phi_d(x: &FieldVector, y: &FieldVector, params: &DotParams) -> Result<ColorValue> {
    check_vector(x, params)?;
    check_vector(y, params)?;
    if x == y {
        return Err(Error::domain("φ_d is defined on distinct vectors"));
    }
    Ok(ColorValue::Dot(phi_unchecked(x.coords(), y.coords(), &params.field)))
}

fn phi_unchecked(x: &[Elem], y: &[Elem], field: &GaloisField) -> DotColor {
    let (x, y) = if x < y { (x, y) } else { (y, x) };
    let xy = dot_unchecked(field, x, y);
    let xx = dot_unchecked(field, x, x);
    let yy = dot_unchecked(field, y, y);
    let i = x.iter().zip(y).position(|(a, b)| a != b).expect("distinct");
    let sum = field.add(x[i], y[i]);
    let coord = i as u16 + 1;
    let class = if xy.is_zero() {
        DotClass::Zero
    } else if xy == xx {
        DotClass::Up
    } else if xy == yy {
        DotClass::Down
    } else {
        return DotColor::dot(xy).expect("nonzero dot product");
    };
    DotColor::positional(class, coord, sum).expect("valid coordinate")
}

/// `(3d + 1)q - 1`.
pub fn dotprod_color_bound(params: &DotParams) -> u64 {
    (3 * params.d as u64 + 1) * params.q() as u64 - 1
}

/// φ_d restricted to the first `n` vectors of `(F_q*)^d`.
#[derive(Clone, Debug)]
pub struct DotColoring {
    params: DotParams,
    n: usize,
}

impl DotColoring {
    pub fn new(n: usize, params: DotParams) -> Result<Self> {
        if n as u64 > params.vertex_capacity() {
            return Err(Error::domain(format!(
                "{n} vertices exceed (q-1)^d = {}",
                params.vertex_capacity()
            )));
        }
        Ok(DotColoring { params, n })
    }

    pub fn params(&self) -> &DotParams {
        &self.params
    }

    pub fn into_coloring(self) -> EdgeColoring {
        self.into_coloring_with_cap(DEFAULT_MATERIALIZE_CAP)
    }

    pub fn into_coloring_with_cap(self, cap: usize) -> EdgeColoring {
        let provenance = self.params.provenance();
        EdgeColoring::from_source(Arc::new(self), provenance, cap)
    }
}

impl ColorSource for DotColoring {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn color_value(&self, u: usize, v: usize) -> ColorValue {
        let x = vertex_to_vector(u, &self.params).expect("vertex in range");
        let y = vertex_to_vector(v, &self.params).expect("vertex in range");
        ColorValue::Dot(phi_unchecked(x.coords(), y.coords(), &self.params.field))
    }
}

/// φ_d on `K_n` with `q` chosen by [`DotParams::select`].
pub fn phi_coloring(n: usize, d: usize) -> Result<EdgeColoring> {
    Ok(DotColoring::new(n, DotParams::select(n, d)?)?.into_coloring())
}
