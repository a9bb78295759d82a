//! The block-decomposition coloring `c_p` and its sign refinement `ψ_p = (c_p, Δ_p)`.
//!
//! Vertices are binary strings of length `α`. For each level `d` a string is cut into
//! `r_d`-blocks: `a_d` full blocks followed by one final block of length `b_d` with
//! `1 <= b_d <= r_d` (so when `r_d | α` the final block is a full block).
//!
//! * `η_d(x, y)` is `0` when `x = y`, otherwise the index of the first differing
//!   `r_d`-block together with the unordered pair of those blocks.
//! * `ξ_d(x, y)` applies `η_d` to each pair of corresponding `r_{d+1}`-blocks.
//! * `c_p(x, y) = (ξ_p, ..., ξ_0)` with `r_0 = 1` and `r_{p+1} = α`.
//! * `Δ_p(x, y)` compares the `r_p`-blocks of the ordered pair `x < y`, giving `+1`
//!   where the block of `x` is `<=` that of `y` and `-1` elsewhere.

mod bits;

use std::sync::Arc;

pub use bits::BitString;

use crate::error::{Error, Result};
use crate::model::{
    CflsColor, ColorSource, ColorValue, EdgeColoring, EtaValue, Provenance, Sign,
    DEFAULT_MATERIALIZE_CAP,
};

/// Block lengths `r_0 = 1 | r_1 | ... | r_p | r_{p+1} = α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CflsParams {
    p: u32,
    beta: u64,
    alpha: usize,
    radii: Vec<usize>,
}

impl CflsParams {
    /// Parameters for `K_n`: `β` is the unique positive integer with
    /// `2^((β-1)^(p+1)) < n <= 2^(β^(p+1))`, and `r_d = β^d`.
    pub fn select(n: usize, p: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("need at least two vertices"));
        }
        if p < 1 {
            return Err(Error::domain("construction level p must be at least 1"));
        }
        // ceil(log2 n); both inequalities reduce to (β-1)^(p+1) < L <= β^(p+1)
        let l = (usize::BITS - (n - 1).leading_zeros()) as u64;
        let mut beta = 1u64;
        while beta.checked_pow(p + 1).is_some_and(|v| v < l) {
            beta += 1;
        }
        Self::from_beta(p, beta)
    }

    /// `r_d = β^d` for `d = 1..=p+1` and `α = β^(p+1)`.
    pub fn from_beta(p: u32, beta: u64) -> Result<Self> {
        if beta == 0 {
            return Err(Error::domain("β must be positive"));
        }
        let alpha = beta
            .checked_pow(p + 1)
            .and_then(|a| usize::try_from(a).ok())
            .ok_or_else(|| Error::domain("α = β^(p+1) overflows"))?;
        let mut radii = Vec::with_capacity(p as usize + 2);
        for d in 0..=p + 1 {
            radii.push(beta.pow(d) as usize);
        }
        Ok(CflsParams {
            p,
            beta,
            alpha,
            radii,
        })
    }

    /// General parameters: `inner` holds `r_1..=r_p`, each dividing the next.
    ///
    /// `β` is reported as 0 for parameter sets that do not come from a base.
    pub fn with_radii(p: u32, inner: &[usize], alpha: usize) -> Result<Self> {
        if inner.len() != p as usize {
            return Err(Error::SizeMismatch {
                expected: p as usize,
                actual: inner.len(),
            });
        }
        let mut radii = Vec::with_capacity(inner.len() + 2);
        radii.push(1);
        radii.extend_from_slice(inner);
        if alpha < *radii.last().unwrap() {
            return Err(Error::domain("α must be at least r_p"));
        }
        for w in radii.windows(2) {
            if w[0] == 0 || w[1] % w[0] != 0 {
                return Err(Error::domain(format!("r = {} does not divide {}", w[0], w[1])));
            }
        }
        radii.push(alpha);
        Ok(CflsParams {
            p,
            beta: 0,
            alpha,
            radii,
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn beta(&self) -> u64 {
        self.beta
    }

    #[inline]
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// `r_d` for `d = 0..=p+1`.
    pub fn radius(&self, d: usize) -> usize {
        self.radii[d]
    }

    pub fn radii(&self) -> &[usize] {
        &self.radii
    }

    /// `(a_d, b_d)` with `α = a_d r_d + b_d` and `1 <= b_d <= r_d`.
    pub fn decomposition(&self, d: usize) -> (usize, usize) {
        block_counts(self.alpha, self.radii[d])
    }

    /// Largest vertex count these parameters can host, `2^α` (saturating).
    pub fn capacity(&self) -> u128 {
        if self.alpha >= 128 {
            u128::MAX
        } else {
            1u128 << self.alpha
        }
    }
}

/// `(a, b)` with `len = a r + b`, `1 <= b <= r`.
fn block_counts(len: usize, r: usize) -> (usize, usize) {
    let a = (len - 1) / r;
    (a, len - a * r)
}

/// Cuts `x` into `r`-blocks; the final block has length in `1..=r`.
pub fn block_split(x: &[bool], r: usize) -> Result<Vec<&[bool]>> {
    if x.is_empty() {
        return Err(Error::domain("cannot split an empty string"));
    }
    if r == 0 {
        return Err(Error::domain("block length must be positive"));
    }
    Ok(blocks(x, r).collect())
}

fn blocks(x: &[bool], r: usize) -> impl Iterator<Item = &[bool]> {
    let (a, _) = block_counts(x.len(), r);
    (0..=a).map(move |i| {
        if i < a {
            &x[i * r..(i + 1) * r]
        } else {
            &x[a * r..]
        }
    })
}

/// `η` with block length `r`.
pub fn eta(x: &[bool], y: &[bool], r: usize) -> Result<EtaValue> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if r == 0 {
        return Err(Error::domain("block length must be positive"));
    }
    Ok(eta_unchecked(x, y, r))
}

fn eta_unchecked(x: &[bool], y: &[bool], r: usize) -> EtaValue {
    match x.iter().zip(y).position(|(a, b)| a != b) {
        None => EtaValue::Zero,
        Some(bit) => {
            let i = bit / r;
            let (a, _) = block_counts(x.len(), r);
            let range = if i < a { i * r..(i + 1) * r } else { a * r..x.len() };
            EtaValue::pair(
                i as u32 + 1,
                BitString::from(&x[range.clone()]),
                BitString::from(&y[range]),
            )
        }
    }
}

fn check_vertices(x: &BitString, y: &BitString, params: &CflsParams) -> Result<()> {
    for v in [x, y] {
        if v.len() != params.alpha {
            return Err(Error::SizeMismatch {
                expected: params.alpha,
                actual: v.len(),
            });
        }
    }
    Ok(())
}

/// `ξ_d(x, y)` for `0 <= d <= p`.
pub fn xi(x: &BitString, y: &BitString, d: usize, params: &CflsParams) -> Result<Vec<EtaValue>> {
    check_vertices(x, y, params)?;
    if d > params.p as usize {
        return Err(Error::domain(format!("level {d} exceeds p = {}", params.p)));
    }
    Ok(xi_unchecked(x.bits(), y.bits(), d, params))
}

fn xi_unchecked(x: &[bool], y: &[bool], d: usize, params: &CflsParams) -> Vec<EtaValue> {
    let outer = params.radii[d + 1];
    let inner = params.radii[d];
    blocks(x, outer)
        .zip(blocks(y, outer))
        .map(|(bx, by)| eta_unchecked(bx, by, inner))
        .collect()
}

fn c_p_levels(x: &[bool], y: &[bool], params: &CflsParams) -> Vec<Vec<EtaValue>> {
    (0..=params.p as usize)
        .rev()
        .map(|d| xi_unchecked(x, y, d, params))
        .collect()
}

/// `c_p(x, y) = (ξ_p, ..., ξ_0)`.
pub fn c_p(x: &BitString, y: &BitString, params: &CflsParams) -> Result<ColorValue> {
    check_vertices(x, y, params)?;
    if x == y {
        return Err(Error::domain("c_p is defined on distinct vertices"));
    }
    Ok(ColorValue::Cfls(CflsColor {
        xi: c_p_levels(x.bits(), y.bits(), params),
        signs: None,
    }))
}

fn delta_unchecked(x: &[bool], y: &[bool], params: &CflsParams) -> Vec<Sign> {
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let r = params.radii[params.p as usize];
    blocks(lo, r)
        .zip(blocks(hi, r))
        .map(|(a, b)| if a <= b { Sign::Plus } else { Sign::Minus })
        .collect()
}

/// `Δ_p` of the pair, computed on the lexicographically ordered arguments.
pub fn delta_p(x: &BitString, y: &BitString, params: &CflsParams) -> Result<Vec<Sign>> {
    check_vertices(x, y, params)?;
    if x == y {
        return Err(Error::domain("Δ_p is defined on distinct vertices"));
    }
    Ok(delta_unchecked(x.bits(), y.bits(), params))
}

/// `ψ_p(x, y) = (c_p(x, y), Δ_p(x, y))`.
pub fn psi_p(x: &BitString, y: &BitString, params: &CflsParams) -> Result<ColorValue> {
    check_vertices(x, y, params)?;
    if x == y {
        return Err(Error::domain("ψ_p is defined on distinct vertices"));
    }
    Ok(ColorValue::Cfls(CflsColor {
        xi: c_p_levels(x.bits(), y.bits(), params),
        signs: Some(delta_unchecked(x.bits(), y.bits(), params)),
    }))
}

/// Vertex `i` is the `α`-bit big-endian representation of `i`.
pub fn vertex(i: usize, params: &CflsParams) -> Result<BitString> {
    BitString::from_index(i as u128, params.alpha)
}

/// Upper bound `2^E` on the number of colors of ψ_p, `E = 4(p+1)β^p log2 β + β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColorBound {
    /// `E` as a real number.
    pub log2: f64,
    /// `E` exactly, when `β` is a power of two.
    pub exact_exponent: Option<u64>,
}

impl ColorBound {
    /// The bound as an integer, when it fits in 128 bits. Non-exact exponents are
    /// rounded up to `ceil(2^E)`.
    pub fn as_u128(&self) -> Option<u128> {
        match self.exact_exponent {
            Some(e) if e < 128 => Some(1u128 << e),
            Some(_) => None,
            None if self.log2 < 127.0 => Some(self.log2.exp2().ceil() as u128),
            None => None,
        }
    }

    /// Whether `count <= factor * 2^E`.
    pub fn admits_scaled(&self, count: u128, factor: u128) -> bool {
        if let Some(e) = self.exact_exponent {
            if e >= 128 {
                return true;
            }
            return match factor.checked_mul(1u128 << e) {
                Some(limit) => count <= limit,
                None => true,
            };
        }
        if count == 0 {
            return true;
        }
        (count as f64).log2() <= self.log2 + (factor as f64).log2() + 1e-9
    }

    pub fn admits(&self, count: u128) -> bool {
        self.admits_scaled(count, 1)
    }
}

pub fn cfls_color_bound(params: &CflsParams) -> ColorBound {
    let p = params.p as u64;
    let beta = params.beta.max(1);
    let scale = 4 * (p + 1) * beta.pow(params.p);
    let exact_exponent = beta
        .is_power_of_two()
        .then(|| scale * beta.trailing_zeros() as u64 + beta);
    ColorBound {
        log2: scale as f64 * (beta as f64).log2() + beta as f64,
        exact_exponent,
    }
}

/// ψ_p (or plain c_p when `signed` is false) on vertices `0..n`.
#[derive(Clone, Debug)]
pub struct CflsColoring {
    params: CflsParams,
    n: usize,
    signed: bool,
}

impl CflsColoring {
    pub fn new(n: usize, params: CflsParams, signed: bool) -> Result<Self> {
        if (n as u128) > params.capacity() {
            return Err(Error::domain(format!(
                "{n} vertices do not fit in {{0,1}}^{}",
                params.alpha
            )));
        }
        Ok(CflsColoring { params, n, signed })
    }

    pub fn params(&self) -> &CflsParams {
        &self.params
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::Cfls {
            p: self.params.p,
            beta: self.params.beta,
            alpha: self.params.alpha as u64,
            signed: self.signed,
        }
    }

    pub fn into_coloring(self) -> EdgeColoring {
        self.into_coloring_with_cap(DEFAULT_MATERIALIZE_CAP)
    }

    pub fn into_coloring_with_cap(self, cap: usize) -> EdgeColoring {
        let provenance = self.provenance();
        EdgeColoring::from_source(Arc::new(self), provenance, cap)
    }
}

impl ColorSource for CflsColoring {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn color_value(&self, u: usize, v: usize) -> ColorValue {
        let x = vertex(u, &self.params).expect("vertex in range");
        let y = vertex(v, &self.params).expect("vertex in range");
        ColorValue::Cfls(CflsColor {
            xi: c_p_levels(x.bits(), y.bits(), &self.params),
            signs: self
                .signed
                .then(|| delta_unchecked(x.bits(), y.bits(), &self.params)),
        })
    }
}

/// ψ_p on `K_n` with parameters chosen by [`CflsParams::select`].
pub fn psi_coloring(n: usize, p: u32) -> Result<EdgeColoring> {
    Ok(CflsColoring::new(n, CflsParams::select(n, p)?, true)?.into_coloring())
}

/// Plain c_p on `K_n`, without the sign refinement.
pub fn c_p_coloring(n: usize, p: u32) -> Result<EdgeColoring> {
    Ok(CflsColoring::new(n, CflsParams::select(n, p)?, false)?.into_coloring())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn pair(i: u32, a: &str, b: &str) -> EtaValue {
        EtaValue::pair(i, bs(a), bs(b))
    }

    #[test]
    fn parameter_selection() {
        let p = CflsParams::select(64, 3).unwrap();
        assert_eq!((p.beta(), p.alpha()), (2, 16));
        assert_eq!(p.radii(), &[1, 2, 4, 8, 16]);
        let p = CflsParams::select(2, 1).unwrap();
        assert_eq!((p.beta(), p.alpha()), (1, 1));
        let p = CflsParams::select(16, 5).unwrap();
        assert_eq!((p.beta(), p.alpha()), (2, 64));
        assert!(CflsParams::select(1, 3).is_err());
        assert!(CflsParams::select(64, 0).is_err());
    }

    #[test]
    fn selected_beta_satisfies_the_defining_inequality() {
        for p in 1..4u32 {
            for n in 2..5000usize {
                let beta = CflsParams::select(n, p).unwrap().beta();
                let upper = beta.pow(p + 1);
                let lower = (beta - 1).pow(p + 1);
                // 2^lower < n <= 2^upper, checked in floating point away from ties
                let log_n = (n as f64).log2();
                assert!((lower as f64) < log_n || (lower == 0 && n >= 2), "n={n} p={p}");
                assert!(log_n <= upper as f64 + 1e-12, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn final_block_convention() {
        let p = CflsParams::from_beta(3, 2).unwrap();
        for d in 0..=4 {
            let (a, b) = p.decomposition(d);
            assert_eq!(b, p.radius(d));
            assert_eq!(a, 16 / p.radius(d) - 1);
        }
        assert_eq!(block_counts(5, 2), (2, 1));
        assert_eq!(block_counts(2, 5), (0, 2));
    }

    #[test]
    fn explicit_radii_are_validated() {
        assert!(CflsParams::with_radii(2, &[2, 6], 12).is_ok());
        assert!(CflsParams::with_radii(2, &[2, 5], 10).is_err());
        assert!(CflsParams::with_radii(2, &[2, 4], 3).is_err());
        assert!(CflsParams::with_radii(2, &[2], 8).is_err());
    }

    #[test]
    fn block_split_examples() {
        let x = bs("0101");
        let parts: Vec<String> = block_split(x.bits(), 2)
            .unwrap()
            .into_iter()
            .map(|b| BitString::from(b).to_string())
            .collect();
        assert_eq!(parts, ["01", "01"]);
        let x = bs("01011");
        let parts: Vec<String> = block_split(x.bits(), 2)
            .unwrap()
            .into_iter()
            .map(|b| BitString::from(b).to_string())
            .collect();
        assert_eq!(parts, ["01", "01", "1"]);
        assert_eq!(block_split(bs("01").bits(), 5).unwrap().len(), 1);
        assert!(block_split(&[], 2).is_err());
    }

    #[test]
    fn eta_examples() {
        let x = bs("0101");
        assert_eq!(eta(x.bits(), x.bits(), 2).unwrap(), EtaValue::Zero);
        assert_eq!(
            eta(x.bits(), bs("0001").bits(), 2).unwrap(),
            pair(1, "01", "00")
        );
        assert_eq!(
            eta(x.bits(), bs("0111").bits(), 2).unwrap(),
            pair(2, "01", "11")
        );
        assert!(matches!(
            eta(x.bits(), bs("011").bits(), 2),
            Err(Error::SizeMismatch { .. })
        ));
        // short final block
        assert_eq!(
            eta(bs("01011").bits(), bs("01010").bits(), 2).unwrap(),
            pair(3, "1", "0")
        );
    }

    #[test]
    fn xi_examples() {
        let params = CflsParams::from_beta(1, 2).unwrap();
        let (x, y) = (bs("0101"), bs("0110"));
        assert_eq!(
            xi(&x, &y, 0, &params).unwrap(),
            vec![EtaValue::Zero, pair(1, "0", "1")]
        );
        assert_eq!(xi(&x, &y, 1, &params).unwrap(), vec![pair(2, "01", "10")]);
        assert_eq!(
            xi(&x, &x, 0, &params).unwrap(),
            vec![EtaValue::Zero, EtaValue::Zero]
        );
        assert!(xi(&x, &y, 2, &params).is_err());
    }

    #[test]
    fn c_p_example_and_symmetry() {
        let params = CflsParams::from_beta(1, 2).unwrap();
        let (x, y) = (bs("0101"), bs("0110"));
        let expected = ColorValue::Cfls(CflsColor {
            xi: vec![
                vec![pair(2, "01", "10")],
                vec![EtaValue::Zero, pair(1, "0", "1")],
            ],
            signs: None,
        });
        assert_eq!(c_p(&x, &y, &params).unwrap(), expected);
        assert_eq!(c_p(&y, &x, &params).unwrap(), expected);
        assert!(c_p(&x, &x, &params).is_err());
    }

    #[test]
    fn delta_examples() {
        let params = CflsParams::from_beta(1, 2).unwrap();
        use Sign::*;
        assert_eq!(
            delta_p(&bs("0101"), &bs("0110"), &params).unwrap(),
            vec![Plus, Plus]
        );
        assert_eq!(
            delta_p(&bs("0110"), &bs("1001"), &params).unwrap(),
            vec![Plus, Minus]
        );
        assert_eq!(
            delta_p(&bs("1001"), &bs("0110"), &params).unwrap(),
            vec![Plus, Minus]
        );
        // equal prefix blocks, smaller final block
        assert_eq!(
            delta_p(&bs("0100"), &bs("0101"), &params).unwrap(),
            vec![Plus, Plus]
        );
        assert!(delta_p(&bs("0101"), &bs("0101"), &params).is_err());
    }

    #[test]
    fn distinct_colors_when_alpha_fits_one_block() {
        // α <= r_p: ξ_p is (1, {x, y}) for every pair
        let params = CflsParams::with_radii(1, &[4], 4).unwrap();
        let c = CflsColoring::new(16, params, false).unwrap().into_coloring();
        assert_eq!(c.palette_len(), 120);
    }

    #[test]
    fn color_bound_evaluation() {
        let b = cfls_color_bound(&CflsParams::from_beta(3, 2).unwrap());
        assert_eq!(b.exact_exponent, Some(130));
        assert_eq!(b.as_u128(), None);
        let b = cfls_color_bound(&CflsParams::from_beta(4, 1).unwrap());
        assert_eq!(b.exact_exponent, Some(1));
        assert_eq!(b.as_u128(), Some(2));
        let b = cfls_color_bound(&CflsParams::from_beta(1, 2).unwrap());
        assert_eq!(b.exact_exponent, Some(18));
        let b = cfls_color_bound(&CflsParams::from_beta(1, 3).unwrap());
        assert_eq!(b.exact_exponent, None);
        assert!((b.log2 - (24.0 * 3f64.log2() + 3.0)).abs() < 1e-9);
        assert!(b.admits(1 << 20));
        assert!(!b.admits(1 << 50));
    }

    #[test]
    fn full_cube_palette_respects_bound() {
        // β = 2, p = 1: all 16 strings of length 4
        let params = CflsParams::from_beta(1, 2).unwrap();
        let bound = cfls_color_bound(&params);
        let c = CflsColoring::new(16, params, true).unwrap().into_coloring();
        assert!(bound.admits(c.palette_len() as u128));
    }

    #[test]
    fn psi_refines_c_p() {
        let n = 64;
        let psi = psi_coloring(n, 3).unwrap();
        let plain = c_p_coloring(n, 3).unwrap();
        let mut seen = std::collections::HashMap::new();
        for u in 0..n {
            for v in u + 1..n {
                let prev = *seen.entry(psi.color(u, v)).or_insert(plain.color(u, v));
                assert_eq!(prev, plain.color(u, v));
            }
        }
        assert!(psi.palette_len() >= plain.palette_len());
    }

    #[test]
    fn vertices_beyond_capacity_are_rejected() {
        let params = CflsParams::from_beta(1, 2).unwrap();
        assert!(CflsColoring::new(17, params, true).is_err());
    }
}
