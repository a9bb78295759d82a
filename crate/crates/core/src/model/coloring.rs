//! Total edge colorings of K_n.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::color::ColorValue;
use crate::model::palette::{ColorId, Palette};

/// Colorings with at most this many vertices are stored as a full table.
pub const DEFAULT_MATERIALIZE_CAP: usize = 4096;

/// Which construction produced a coloring, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "lowercase")]
pub enum Provenance {
    /// Block-decomposition coloring; `signed` distinguishes ψ_p from plain c_p.
    Cfls {
        p: u32,
        beta: u64,
        alpha: u64,
        signed: bool,
    },
    Dotprod {
        d: u32,
        p: u32,
        k: u32,
        modulus: Vec<u32>,
    },
    Product {
        left: Box<Provenance>,
        right: Box<Provenance>,
    },
    Synthetic {
        name: String,
    },
}

impl Provenance {
    pub fn synthetic(name: impl Into<String>) -> Self {
        Provenance::Synthetic { name: name.into() }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Cfls { .. } => "cfls",
            Provenance::Dotprod { .. } => "dotprod",
            Provenance::Product { .. } => "product",
            Provenance::Synthetic { .. } => "synthetic",
        }
    }
}

/// On-demand color function for colorings too large to materialize.
pub trait ColorSource: Send + Sync {
    fn vertex_count(&self) -> usize;

    /// Color of the pair `{u, v}`; called only with `u != v`, both in range.
    fn color_value(&self, u: usize, v: usize) -> ColorValue;
}

enum Repr {
    Dense {
        palette: Palette,
        /// Full `n * n` symmetric table; the diagonal is unused.
        table: Vec<ColorId>,
    },
    Lazy {
        source: Arc<dyn ColorSource>,
        interner: Mutex<Palette>,
    },
}

pub struct EdgeColoring {
    n: usize,
    provenance: Provenance,
    repr: Repr,
}

const NO_COLOR: ColorId = ColorId(u32::MAX);

/// Number of unordered pairs on `n` vertices.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl EdgeColoring {
    /// Materializes a coloring by evaluating `color` on every pair `u < v` in
    /// row-major order; palette ids follow first appearance in that order.
    pub fn build<F>(n: usize, provenance: Provenance, mut color: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<ColorValue>,
    {
        let mut palette = Palette::new();
        let mut table = vec![NO_COLOR; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let id = palette.intern(color(u, v)?);
                table[u * n + v] = id;
                table[v * n + u] = id;
            }
        }
        Ok(EdgeColoring {
            n,
            provenance,
            repr: Repr::Dense { palette, table },
        })
    }

    /// Dense when `n <= cap`, otherwise colors are computed and interned on demand.
    pub fn from_source(source: Arc<dyn ColorSource>, provenance: Provenance, cap: usize) -> Self {
        let n = source.vertex_count();
        if n <= cap {
            let src = source.clone();
            return Self::build(n, provenance, move |u, v| Ok(src.color_value(u, v)))
                .expect("infallible color source");
        }
        EdgeColoring {
            n,
            provenance,
            repr: Repr::Lazy {
                source,
                interner: Mutex::new(Palette::new()),
            },
        }
    }

    /// Assembles a coloring from a palette and the row-major upper triangle of ids.
    pub fn from_parts(
        n: usize,
        palette: Palette,
        upper: &[ColorId],
        provenance: Provenance,
    ) -> Result<Self> {
        if upper.len() != pair_count(n) {
            return Err(Error::SizeMismatch {
                expected: pair_count(n),
                actual: upper.len(),
            });
        }
        let mut table = vec![NO_COLOR; n * n];
        let mut ids = upper.iter();
        for u in 0..n {
            for v in u + 1..n {
                let &id = ids.next().unwrap();
                if id.index() >= palette.len() {
                    return Err(Error::domain(format!(
                        "color id {id} not in palette of size {}",
                        palette.len()
                    )));
                }
                table[u * n + v] = id;
                table[v * n + u] = id;
            }
        }
        Ok(EdgeColoring {
            n,
            provenance,
            repr: Repr::Dense { palette, table },
        })
    }

    /// Coloring from a symmetric matrix of small integer labels (diagonal ignored).
    pub fn from_labels(labels: &[Vec<u64>], name: &str) -> Result<Self> {
        let n = labels.len();
        for (u, row) in labels.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            for v in 0..u {
                if labels[v][u] != row[v] {
                    return Err(Error::domain(format!("labels not symmetric at ({v},{u})")));
                }
            }
        }
        Self::build(n, Provenance::synthetic(name), |u, v| {
            Ok(ColorValue::Label(labels[u][v]))
        })
    }

    pub fn monochromatic(n: usize) -> Self {
        Self::build(n, Provenance::synthetic("monochromatic"), |_, _| {
            Ok(ColorValue::Label(0))
        })
        .unwrap()
    }

    pub fn rainbow(n: usize) -> Self {
        Self::build(n, Provenance::synthetic("rainbow"), |u, v| {
            Ok(ColorValue::Label((u * n + v) as u64))
        })
        .unwrap()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    /// The full `n * n` id table of a materialized coloring.
    pub fn dense_table(&self) -> Option<&[ColorId]> {
        match &self.repr {
            Repr::Dense { table, .. } => Some(table),
            Repr::Lazy { .. } => None,
        }
    }

    /// Color id of `{u, v}`. Callers guarantee `u != v` and both `< n`.
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> ColorId {
        debug_assert!(u != v && u < self.n && v < self.n);
        match &self.repr {
            Repr::Dense { table, .. } => table[u * self.n + v],
            Repr::Lazy { source, interner } => {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                let value = source.color_value(a, b);
                interner.lock().unwrap().intern(value)
            }
        }
    }

    pub fn try_color(&self, u: usize, v: usize) -> Result<ColorId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::domain("edges join distinct vertices"));
        }
        Ok(self.color(u, v))
    }

    pub fn color_value(&self, u: usize, v: usize) -> Result<ColorValue> {
        let id = self.try_color(u, v)?;
        Ok(self.value(id).expect("interned id"))
    }

    pub fn value(&self, id: ColorId) -> Option<ColorValue> {
        self.with_palette(|p| p.lookup(id).cloned())
    }

    /// Runs `f` against the palette. For lazy colorings this is the set of colors
    /// interned so far.
    pub fn with_palette<R>(&self, f: impl FnOnce(&Palette) -> R) -> R {
        match &self.repr {
            Repr::Dense { palette, .. } => f(palette),
            Repr::Lazy { interner, .. } => f(&interner.lock().unwrap()),
        }
    }

    pub fn palette_len(&self) -> usize {
        self.with_palette(Palette::len)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::domain(format!(
                "vertex {v} out of range for n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Row-major upper triangle of color ids.
    pub fn upper_triangle(&self) -> Vec<ColorId> {
        let mut out = Vec::with_capacity(pair_count(self.n));
        for u in 0..self.n {
            for v in u + 1..self.n {
                out.push(self.color(u, v));
            }
        }
        out
    }

    /// A materialized copy; lazy colorings are evaluated on every pair.
    pub fn to_dense(&self) -> EdgeColoring {
        match &self.repr {
            Repr::Dense { palette, table } => EdgeColoring {
                n: self.n,
                provenance: self.provenance.clone(),
                repr: Repr::Dense {
                    palette: palette.clone(),
                    table: table.clone(),
                },
            },
            Repr::Lazy { source, .. } => {
                Self::build(self.n, self.provenance.clone(), |u, v| {
                    Ok(source.color_value(u, v))
                })
                .expect("infallible color source")
            }
        }
    }

    /// Number of distinct colors on the pairs inside `s`; 0 when `|s| <= 1`.
    pub fn distinct_colors(&self, s: &[usize]) -> Result<usize> {
        for &v in s {
            self.check_vertex(v)?;
        }
        let mut seen: Vec<ColorId> = Vec::new();
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                if u == v {
                    return Err(Error::domain(format!("vertex {u} repeated in subset")));
                }
                let c = self.color(u, v);
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
        }
        Ok(seen.len())
    }

    /// The product coloring: each pair gets the ordered pair of its two factor colors.
    pub fn product(&self, other: &EdgeColoring) -> Result<EdgeColoring> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let provenance = Provenance::Product {
            left: Box::new(self.provenance.clone()),
            right: Box::new(other.provenance.clone()),
        };
        if !(self.is_materialized() && other.is_materialized()) {
            let source = ProductSource {
                left: Arc::new(self.to_source_clone()),
                right: Arc::new(other.to_source_clone()),
            };
            return Ok(EdgeColoring::from_source(Arc::new(source), provenance, 0));
        }
        // intern on id pairs first so structured values are only built once per color
        let mut pairs: HashMap<(ColorId, ColorId), ColorId> = HashMap::new();
        let mut palette = Palette::new();
        let n = self.n;
        let mut table = vec![NO_COLOR; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let key = (self.color(u, v), other.color(u, v));
                let id = *pairs.entry(key).or_insert_with(|| {
                    palette.intern(ColorValue::product(
                        self.value(key.0).unwrap(),
                        other.value(key.1).unwrap(),
                    ))
                });
                table[u * n + v] = id;
                table[v * n + u] = id;
            }
        }
        Ok(EdgeColoring {
            n,
            provenance,
            repr: Repr::Dense { palette, table },
        })
    }

    fn to_source_clone(&self) -> EdgeColoring {
        match &self.repr {
            Repr::Dense { .. } => self.to_dense(),
            Repr::Lazy { source, .. } => EdgeColoring {
                n: self.n,
                provenance: self.provenance.clone(),
                repr: Repr::Lazy {
                    source: source.clone(),
                    interner: Mutex::new(Palette::new()),
                },
            },
        }
    }

    /// Compares palettes and edge tables (not provenance).
    pub fn same_coloring(&self, other: &EdgeColoring) -> bool {
        self.n == other.n
            && self.with_palette(|a| other.with_palette(|b| a == b))
            && self.upper_triangle() == other.upper_triangle()
    }
}

impl std::fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EdgeColoring")
            .field("n", &self.n)
            .field("provenance", &self.provenance)
            .field("materialized", &self.is_materialized())
            .field("palette_len", &self.palette_len())
            .finish()
    }
}

struct ProductSource {
    left: Arc<EdgeColoring>,
    right: Arc<EdgeColoring>,
}

impl ColorSource for ProductSource {
    fn vertex_count(&self) -> usize {
        self.left.n()
    }

    fn color_value(&self, u: usize, v: usize) -> ColorValue {
        let a = self.left.value(self.left.color(u, v)).unwrap();
        let b = self.right.value(self.right.color(u, v)).unwrap();
        ColorValue::product(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn striped_k4() -> EdgeColoring {
        // matchings {01,23}, {02,13}, {03,12}
        EdgeColoring::from_labels(
            &[
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0],
            ],
            "striped",
        )
        .unwrap()
    }

    #[test]
    fn distinct_color_basics() {
        let r = EdgeColoring::rainbow(6);
        assert_eq!(r.distinct_colors(&[3]).unwrap(), 0);
        assert_eq!(r.distinct_colors(&[]).unwrap(), 0);
        assert_eq!(r.distinct_colors(&[0, 1, 2, 3, 4]).unwrap(), 10);
        assert!(matches!(r.distinct_colors(&[0, 6]), Err(Error::Domain(_))));
        assert!(r.distinct_colors(&[1, 1]).is_err());
        assert_eq!(striped_k4().distinct_colors(&[0, 1, 2, 3]).unwrap(), 3);
    }

    #[test]
    fn product_with_rainbow_on_striped_k4() {
        let prod = striped_k4().product(&EdgeColoring::rainbow(4)).unwrap();
        assert_eq!(prod.palette_len(), 6);
        assert_eq!(prod.distinct_colors(&[0, 1, 2, 3]).unwrap(), 6);
        assert!(matches!(
            prod.product(&EdgeColoring::rainbow(5)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn product_with_constant_factor_keeps_counts() {
        let s = striped_k4();
        let prod = EdgeColoring::monochromatic(4).product(&s).unwrap();
        let sq = s.product(&s).unwrap();
        for subset in [&[0, 1, 2][..], &[0, 1, 2, 3], &[1, 3]] {
            let base = s.distinct_colors(subset).unwrap();
            assert_eq!(prod.distinct_colors(subset).unwrap(), base);
            assert_eq!(sq.distinct_colors(subset).unwrap(), base);
        }
    }

    #[test]
    fn lazy_and_dense_agree() {
        struct Xor(usize);
        impl ColorSource for Xor {
            fn vertex_count(&self) -> usize {
                self.0
            }
            fn color_value(&self, u: usize, v: usize) -> ColorValue {
                ColorValue::Label((u ^ v) as u64)
            }
        }
        let src: Arc<dyn ColorSource> = Arc::new(Xor(20));
        let dense = EdgeColoring::from_source(src.clone(), Provenance::synthetic("xor"), 4096);
        let lazy = EdgeColoring::from_source(src, Provenance::synthetic("xor"), 8);
        assert!(dense.is_materialized());
        assert!(!lazy.is_materialized());
        assert!(lazy.to_dense().same_coloring(&dense));
        let s = [0, 3, 5, 6, 9, 17];
        assert_eq!(
            lazy.distinct_colors(&s).unwrap(),
            dense.distinct_colors(&s).unwrap()
        );
        let prod = lazy.product(&dense).unwrap();
        assert!(!prod.is_materialized());
        assert_eq!(prod.distinct_colors(&s).unwrap(), dense.distinct_colors(&s).unwrap());
    }

    fn small_coloring(n: usize, colors: u64) -> impl Strategy<Value = EdgeColoring> {
        proptest::collection::vec(0..colors, pair_count(n)).prop_map(move |labels| {
            let mut it = labels.into_iter();
            let mut m = vec![vec![0; n]; n];
            #[allow(clippy::needless_range_loop)]
            for u in 0..n {
                for v in u + 1..n {
                    let l = it.next().unwrap();
                    m[u][v] = l;
                    m[v][u] = l;
                }
            }
            EdgeColoring::from_labels(&m, "random").unwrap()
        })
    }

    proptest! {
        #[test]
        fn product_refines_both_factors(
            a in small_coloring(7, 3),
            b in small_coloring(7, 4),
            mask in 0u32..128,
        ) {
            let s: Vec<usize> = (0..7).filter(|i| mask >> i & 1 == 1).collect();
            let prod = a.product(&b).unwrap();
            let pc = prod.distinct_colors(&s).unwrap();
            prop_assert!(pc >= a.distinct_colors(&s).unwrap());
            prop_assert!(pc >= b.distinct_colors(&s).unwrap());
            prop_assert!(pc <= pair_count(s.len()));
            prop_assert!(prod.palette_len() <= a.palette_len() * b.palette_len());
        }
    }
}
