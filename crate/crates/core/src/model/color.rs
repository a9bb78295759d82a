//! Structured color values and their canonical byte serialization.
//!
//! Every variant starts with a tag byte and every variable-length component is
//! length-prefixed, so the encoding is prefix-free and therefore injective.

use std::fmt;

use crate::cfls::BitString;
use crate::error::{Error, Result};
use crate::gf::Elem;

const TAG_CFLS: u8 = 0x01;
const TAG_DOT: u8 = 0x02;
const TAG_PRODUCT: u8 = 0x03;
const TAG_LABEL: u8 = 0x04;

/// One `η` value: either `Zero` for equal arguments, or the first differing block
/// index (1-based) together with the unordered pair of differing blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EtaValue {
    Zero,
    Pair {
        block: u32,
        /// The smaller of the two blocks.
        lo: BitString,
        hi: BitString,
    },
}

impl EtaValue {
    pub fn pair(block: u32, a: BitString, b: BitString) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        EtaValue::Pair { block, lo, hi }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// A color of the block-decomposition coloring.
///
/// `xi[j]` holds `ξ_{p-j}`, so the levels run from the coarsest (`ξ_p`) down to `ξ_0`.
/// `signs` is present for the sign-refined coloring and holds the block comparison
/// sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CflsColor {
    pub xi: Vec<Vec<EtaValue>>,
    pub signs: Option<Vec<Sign>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DotClass {
    Dot,
    Zero,
    Up,
    Down,
}

impl DotClass {
    fn code(self) -> u8 {
        match self {
            DotClass::Dot => 0,
            DotClass::Zero => 1,
            DotClass::Up => 2,
            DotClass::Down => 3,
        }
    }

    fn from_code(c: u8) -> Result<Self> {
        Ok(match c {
            0 => DotClass::Dot,
            1 => DotClass::Zero,
            2 => DotClass::Up,
            3 => DotClass::Down,
            _ => return Err(Error::parse(format!("unknown dot class {c}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            DotClass::Dot => "DOT",
            DotClass::Zero => "ZERO",
            DotClass::Up => "UP",
            DotClass::Down => "DOWN",
        }
    }

    /// Colors whose edges all share one dot product value.
    pub fn has_dot_property(self) -> bool {
        matches!(self, DotClass::Dot | DotClass::Zero)
    }
}

/// A color of the dot-product coloring.
///
/// `coord` is the 1-based first differing coordinate and is 0 for the `Dot` class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DotColor {
    class: DotClass,
    coord: u16,
    value: Elem,
}

impl DotColor {
    pub fn dot(value: Elem) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::domain("DOT colors carry a nonzero field element"));
        }
        Ok(DotColor {
            class: DotClass::Dot,
            coord: 0,
            value,
        })
    }

    pub fn positional(class: DotClass, coord: u16, value: Elem) -> Result<Self> {
        if class == DotClass::Dot {
            return Err(Error::domain("DOT colors carry no coordinate"));
        }
        if coord == 0 {
            return Err(Error::domain("coordinates are 1-based"));
        }
        Ok(DotColor { class, coord, value })
    }

    #[inline]
    pub fn class(&self) -> DotClass {
        self.class
    }

    /// First differing coordinate (1-based); `None` for `Dot`.
    pub fn coord(&self) -> Option<u16> {
        (self.class != DotClass::Dot).then_some(self.coord)
    }

    #[inline]
    pub fn value(&self) -> Elem {
        self.value
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorValue {
    Cfls(CflsColor),
    Dot(DotColor),
    Product(Box<ColorValue>, Box<ColorValue>),
    /// An opaque numbered color, used by synthetic colorings.
    Label(u64),
}

impl ColorValue {
    pub fn product(a: ColorValue, b: ColorValue) -> Self {
        ColorValue::Product(Box::new(a), Box::new(b))
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            ColorValue::Cfls(c) => {
                out.push(TAG_CFLS);
                out.push(c.signs.is_some() as u8);
                out.extend_from_slice(&(c.xi.len() as u16).to_le_bytes());
                let top = c.xi.len().saturating_sub(1);
                for (j, level) in c.xi.iter().enumerate() {
                    out.extend_from_slice(&((top - j) as u16).to_le_bytes());
                    out.extend_from_slice(&(level.len() as u32).to_le_bytes());
                    for eta in level {
                        match eta {
                            EtaValue::Zero => out.push(0),
                            EtaValue::Pair { block, lo, hi } => {
                                out.push(1);
                                out.extend_from_slice(&block.to_le_bytes());
                                encode_bits(lo, out);
                                encode_bits(hi, out);
                            }
                        }
                    }
                }
                if let Some(signs) = &c.signs {
                    out.extend_from_slice(&(signs.len() as u32).to_le_bytes());
                    out.extend(signs.iter().map(|s| match s {
                        Sign::Plus => 0x01u8,
                        Sign::Minus => 0xff,
                    }));
                }
            }
            ColorValue::Dot(c) => {
                out.push(TAG_DOT);
                out.push(c.class.code());
                if c.class != DotClass::Dot {
                    out.extend_from_slice(&c.coord.to_le_bytes());
                }
                out.extend_from_slice(&c.value.0.to_le_bytes());
            }
            ColorValue::Product(a, b) => {
                out.push(TAG_PRODUCT);
                for part in [a, b] {
                    let bytes = part.encode();
                    out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
                    out.extend_from_slice(&bytes);
                }
            }
            ColorValue::Label(n) => {
                out.push(TAG_LABEL);
                out.extend_from_slice(&n.to_le_bytes());
            }
        }
    }

    /// Inverse of [`ColorValue::encode`]; rejects trailing bytes.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        let v = decode_value(&mut cur)?;
        if cur.pos != bytes.len() {
            return Err(Error::parse("trailing bytes after color value"));
        }
        Ok(v)
    }
}

fn encode_bits(b: &BitString, out: &mut Vec<u8>) {
    out.extend_from_slice(&(b.len() as u32).to_le_bytes());
    out.extend_from_slice(&b.packed());
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::parse("truncated color value"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn bits(&mut self) -> Result<BitString> {
        let len = self.u32()? as usize;
        let payload = self.take(len.div_ceil(8))?;
        let b = BitString::from_packed(payload, len)?;
        // padding bits must be zero for the encoding to stay canonical
        if b.packed() != payload {
            return Err(Error::parse("nonzero padding in bit string"));
        }
        Ok(b)
    }
}

fn decode_value(cur: &mut Cursor<'_>) -> Result<ColorValue> {
    match cur.u8()? {
        TAG_CFLS => {
            let has_signs = match cur.u8()? {
                0 => false,
                1 => true,
                other => return Err(Error::parse(format!("bad sign flag {other}"))),
            };
            let levels = cur.u16()? as usize;
            let mut xi = Vec::with_capacity(levels);
            for j in 0..levels {
                let tag = cur.u16()? as usize;
                if tag != levels - 1 - j {
                    return Err(Error::parse("level tags out of sequence"));
                }
                let count = cur.u32()? as usize;
                let mut level = Vec::with_capacity(count.min(1 << 16));
                for _ in 0..count {
                    level.push(match cur.u8()? {
                        0 => EtaValue::Zero,
                        1 => {
                            let block = cur.u32()?;
                            let lo = cur.bits()?;
                            let hi = cur.bits()?;
                            if lo > hi {
                                return Err(Error::parse("unordered eta pair"));
                            }
                            EtaValue::Pair { block, lo, hi }
                        }
                        other => return Err(Error::parse(format!("bad eta tag {other}"))),
                    });
                }
                xi.push(level);
            }
            let signs = if has_signs {
                let count = cur.u32()? as usize;
                let raw = cur.take(count)?;
                Some(
                    raw.iter()
                        .map(|&b| match b {
                            0x01 => Ok(Sign::Plus),
                            0xff => Ok(Sign::Minus),
                            other => Err(Error::parse(format!("bad sign byte {other}"))),
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            } else {
                None
            };
            Ok(ColorValue::Cfls(CflsColor { xi, signs }))
        }
        TAG_DOT => {
            let class = DotClass::from_code(cur.u8()?)?;
            let color = if class == DotClass::Dot {
                DotColor::dot(Elem(cur.u32()?))
            } else {
                let coord = cur.u16()?;
                DotColor::positional(class, coord, Elem(cur.u32()?))
            };
            color
                .map(ColorValue::Dot)
                .map_err(|e| Error::parse(e.to_string()))
        }
        TAG_PRODUCT => {
            let mut parts = Vec::with_capacity(2);
            for _ in 0..2 {
                let len = cur.u32()? as usize;
                parts.push(ColorValue::decode(cur.take(len)?)?);
            }
            let b = parts.pop().unwrap();
            let a = parts.pop().unwrap();
            Ok(ColorValue::product(a, b))
        }
        TAG_LABEL => Ok(ColorValue::Label(cur.u64()?)),
        other => Err(Error::parse(format!("unknown color tag {other:#04x}"))),
    }
}

impl fmt::Display for EtaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaValue::Zero => f.write_str("0"),
            EtaValue::Pair { block, lo, hi } => write!(f, "({block},{{{lo},{hi}}})"),
        }
    }
}

impl fmt::Display for ColorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorValue::Cfls(c) => {
                f.write_str("[")?;
                for (j, level) in c.xi.iter().enumerate() {
                    if j > 0 {
                        f.write_str("; ")?;
                    }
                    for (i, eta) in level.iter().enumerate() {
                        if i > 0 {
                            f.write_str(" ")?;
                        }
                        write!(f, "{eta}")?;
                    }
                }
                f.write_str("]")?;
                if let Some(signs) = &c.signs {
                    f.write_str("/")?;
                    for s in signs {
                        f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
                    }
                }
                Ok(())
            }
            ColorValue::Dot(c) => match c.coord() {
                None => write!(f, "DOT({})", c.value),
                Some(i) => write!(f, "{}({},{})", c.class.name(), i, c.value),
            },
            ColorValue::Product(a, b) => write!(f, "<{a} | {b}>"),
            ColorValue::Label(n) => write!(f, "#{n}"),
        }
    }
}
