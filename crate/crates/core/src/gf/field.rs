//! Arithmetic in GF(q) for odd prime powers q = p^k.
//!
//! Elements are stored as a single integer index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! encoding the coefficient vector of the representative polynomial. Index order is the
//! fixed linear order used everywhere in the crate: natural residue order for prime
//! fields, and lexicographic order on `(c_{k-1}, ..., c_0)` for extensions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field element, identified by its coefficient-vector index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: characteristic, degree and modulus.
///
/// `modulus` holds the monic irreducible polynomial low degree first (length `k + 1`)
/// and is empty for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

/// Largest order for which full addition/multiplication tables are kept.
const TABLE_LIMIT: u32 = 256;
/// Largest order for which an inverse table is kept.
const INV_TABLE_LIMIT: u32 = 1 << 16;

#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    inv_table: Option<Vec<u32>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `(p, k)` with `n = p^k` when `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        // no factor up to sqrt(n): n is prime
        return Some((n, 1));
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn builtin_modulus(q: u32) -> Option<Vec<u32>> {
    match q {
        9 => Some(vec![1, 0, 1]),     // t^2 + 1 over Z_3
        25 => Some(vec![2, 0, 1]),    // t^2 + 2 over Z_5
        27 => Some(vec![1, 2, 0, 1]), // t^3 + 2t + 1 over Z_3
        _ => None,
    }
}

impl GaloisField {
    /// The field of order `q`, using a built-in modulus for q ∈ {9, 25, 27} and the
    /// smallest monic irreducible polynomial for other extension degrees.
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q as u64)
            .ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
        let p = p as u32;
        if k == 1 {
            return Self::prime(p);
        }
        let modulus = match builtin_modulus(q) {
            Some(m) => m,
            None => find_irreducible(p, k)?,
        };
        Self::with_modulus(p, modulus)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::build(p, 1, Vec::new())
    }

    /// GF(p^k) with the given monic modulus (coefficients low degree first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::domain("modulus must have degree at least 1"));
        }
        let k = (modulus.len() - 1) as u32;
        if *modulus.last().unwrap() != 1 {
            return Err(Error::domain("modulus must be monic"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::domain("modulus coefficients must be reduced mod p"));
        }
        if k == 1 {
            return Self::prime(p);
        }
        Self::check_characteristic(p)?;
        if !is_irreducible(p, &modulus) {
            return Err(Error::domain(format!(
                "modulus {modulus:?} is reducible over Z_{p}"
            )));
        }
        Self::build(p, k, modulus)
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        if desc.k <= 1 {
            Self::prime(desc.p)
        } else {
            Self::with_modulus(desc.p, desc.modulus.clone())
        }
    }

    fn check_characteristic(p: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::domain("field order must be odd"));
        }
        Ok(())
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Result<Self> {
        Self::check_characteristic(p)?;
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::domain("field order too large"))? as u32;
        let mut field = GaloisField {
            p,
            k,
            q,
            modulus,
            add_table: None,
            mul_table: None,
            inv_table: None,
        };
        if k > 1 && q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = field.add_slow(a, b);
                    mul[(a * q + b) as usize] = field.mul_slow(a, b);
                }
            }
            field.add_table = Some(add);
            field.mul_table = Some(mul);
        }
        if q <= INV_TABLE_LIMIT {
            let mut inv = vec![0; q as usize];
            for a in 1..q {
                inv[a as usize] = field.pow(Elem(a), (q - 2) as u64).0;
            }
            field.inv_table = Some(inv);
        }
        Ok(field)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element from a coefficient vector (low degree first, at most `k` entries).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.k as usize {
            return Err(Error::SizeMismatch {
                expected: self.k as usize,
                actual: coeffs.len(),
            });
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::domain(format!("coefficient {c} not reduced mod {}", self.p)));
            }
            idx = idx * self.p + c;
        }
        Ok(Elem(idx))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut v = a.0;
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    /// Nonzero elements in the fixed linear order.
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            None => Elem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut idx = 0;
        let mut mult = 1;
        let mut v = a.0;
        for _ in 0..self.k {
            let c = v % self.p;
            v /= self.p;
            idx += ((self.p - c) % self.p) * mult;
            mult *= self.p;
        }
        Elem(idx)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        match &self.mul_table {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            None => Elem(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::domain("zero has no multiplicative inverse"));
        }
        Ok(match &self.inv_table {
            Some(t) => Elem(t[a.0 as usize]),
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut idx = 0;
        let mut mult = 1;
        for _ in 0..self.k {
            let c = (a % self.p + b % self.p) % self.p;
            a /= self.p;
            b /= self.p;
            idx += c * mult;
            mult *= self.p;
        }
        idx
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let ad = self.coeffs(Elem(a));
        let bd = self.coeffs(Elem(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in ad.iter().enumerate() {
            for (j, &y) in bd.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (t, &m) in self.modulus.iter().enumerate() {
                let slot = deg - k + t;
                prod[slot] = (prod[slot] + (p - c) * m as u64) % p;
            }
        }
        prod[..k]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p + c) as u32
    }
}

/// Remainder of `num` modulo the monic polynomial `den` over Z_p (low degree first).
fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let base = r.len() - dd;
            for (t, &m) in den[..dd].iter().enumerate() {
                r[base + t] = (r[base + t] + (p - lead) * m as u64) % p;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree 1..=k/2.
pub fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let k = modulus.len() - 1;
    for m in 1..=k / 2 {
        let count = (p as u64).pow(m as u32);
        for idx in 0..count {
            let mut den = Vec::with_capacity(m + 1);
            let mut v = idx;
            for _ in 0..m {
                den.push((v % p as u64) as u32);
                v /= p as u64;
            }
            den.push(1);
            if poly_rem(p, modulus, &den).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn find_irreducible(p: u32, k: u32) -> Result<Vec<u32>> {
    let count = (p as u64).pow(k);
    for idx in 0..count {
        let mut poly = Vec::with_capacity(k as usize + 1);
        let mut v = idx;
        for _ in 0..k {
            poly.push((v % p as u64) as u32);
            v /= p as u64;
        }
        poly.push(1);
        if is_irreducible(p, &poly) {
            return Ok(poly);
        }
    }
    Err(Error::domain(format!("no irreducible polynomial of degree {k} over Z_{p}")))
}
