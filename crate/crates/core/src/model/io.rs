//! Coloring files.
//!
//! Binary layout (all integers little-endian):
//!
//! ```text
//! magic      8 bytes  "PQCOLOR\n"
//! version    u32
//! header     u32 length + UTF-8 JSON {version, n, construction, <parameters>}
//! palette    u32 count, then per id: u32 length + canonical color bytes
//! id width   u8 in {1, 2, 4}
//! edges      C(n,2) ids of `width` bytes, row-major upper triangle
//! ```
//!
//! A JSON mirror with the same header fields plus `palette` and `edges` arrays is
//! available for colorings with at most [`JSON_MIRROR_MAX_N`] vertices.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::color::ColorValue;
use crate::model::coloring::{pair_count, EdgeColoring, Provenance};
use crate::model::palette::{ColorId, Palette};

pub const MAGIC: &[u8; 8] = b"PQCOLOR\n";
pub const FORMAT_VERSION: u32 = 1;
pub const JSON_MIRROR_MAX_N: usize = 256;

#[derive(Serialize, Deserialize)]
struct Header {
    version: u32,
    n: usize,
    #[serde(flatten)]
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct JsonColor {
    id: u32,
    canonical: String,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct JsonMirror {
    version: u32,
    n: usize,
    #[serde(flatten)]
    provenance: Provenance,
    palette: Vec<JsonColor>,
    /// Row `u` lists the colors of pairs `(u, v)` for `v > u`.
    edges: Vec<Vec<u32>>,
}

fn id_width(palette_len: usize) -> u8 {
    match palette_len {
        0..=0x100 => 1,
        0x101..=0x1_0000 => 2,
        _ => 4,
    }
}

pub fn write_binary<W: Write>(c: &EdgeColoring, mut w: W) -> Result<()> {
    let dense;
    let c = if c.is_materialized() {
        c
    } else {
        dense = c.to_dense();
        &dense
    };
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    let header = serde_json::to_vec(&Header {
        version: FORMAT_VERSION,
        n: c.n(),
        provenance: c.provenance().clone(),
    })?;
    w.write_all(&(header.len() as u32).to_le_bytes())?;
    w.write_all(&header)?;
    let palette_len = c.palette_len();
    w.write_all(&(palette_len as u32).to_le_bytes())?;
    c.with_palette(|p| -> Result<()> {
        for v in p.values() {
            let bytes = v.encode();
            w.write_all(&(bytes.len() as u32).to_le_bytes())?;
            w.write_all(&bytes)?;
        }
        Ok(())
    })?;
    let width = id_width(palette_len);
    w.write_all(&[width])?;
    let mut buf = Vec::with_capacity(pair_count(c.n()) * width as usize);
    for id in c.upper_triangle() {
        buf.extend_from_slice(&id.0.to_le_bytes()[..width as usize]);
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn read_exact_vec<R: Read>(r: &mut R, len: usize) -> Result<Vec<u8>> {
    let mut buf = vec![0; len];
    r.read_exact(&mut buf)
        .map_err(|e| Error::parse(format!("unexpected end of file: {e}")))?;
    Ok(buf)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let b = read_exact_vec(r, 4)?;
    Ok(u32::from_le_bytes(b.try_into().unwrap()))
}

pub fn read_binary<R: Read>(mut r: R) -> Result<EdgeColoring> {
    let magic = read_exact_vec(&mut r, MAGIC.len())?;
    if magic != MAGIC {
        return Err(Error::parse("bad magic"));
    }
    let version = read_u32(&mut r)?;
    if version != FORMAT_VERSION {
        return Err(Error::parse(format!("unsupported format version {version}")));
    }
    let header_len = read_u32(&mut r)? as usize;
    let header: Header = serde_json::from_slice(&read_exact_vec(&mut r, header_len)?)
        .map_err(|e| Error::parse(format!("bad header: {e}")))?;
    if header.version != version {
        return Err(Error::parse("header version disagrees with preamble"));
    }
    let palette_len = read_u32(&mut r)? as usize;
    let mut palette = Palette::new();
    for i in 0..palette_len {
        let len = read_u32(&mut r)? as usize;
        let value = ColorValue::decode(&read_exact_vec(&mut r, len)?)?;
        if palette.intern(value).index() != i {
            return Err(Error::parse(format!("palette entry {i} is a duplicate")));
        }
    }
    let width = read_exact_vec(&mut r, 1)?[0];
    if width != id_width(palette_len) {
        return Err(Error::parse(format!("unexpected id width {width}")));
    }
    let edges = read_exact_vec(&mut r, pair_count(header.n) * width as usize)?;
    let upper: Vec<ColorId> = edges
        .chunks_exact(width as usize)
        .map(|chunk| {
            let mut b = [0u8; 4];
            b[..chunk.len()].copy_from_slice(chunk);
            ColorId(u32::from_le_bytes(b))
        })
        .collect();
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::parse("trailing bytes after edge section"));
    }
    EdgeColoring::from_parts(header.n, palette, &upper, header.provenance)
        .map_err(|e| Error::parse(e.to_string()))
}

pub fn to_json(c: &EdgeColoring) -> Result<String> {
    if c.n() > JSON_MIRROR_MAX_N {
        return Err(Error::Capacity {
            what: "JSON mirror vertex count",
            requested: c.n() as u128,
            cap: JSON_MIRROR_MAX_N as u128,
        });
    }
    let palette = c.with_palette(|p| {
        p.iter()
            .map(|(id, v)| JsonColor {
                id: id.0,
                canonical: hex::encode(v.encode()),
                label: v.to_string(),
            })
            .collect()
    });
    let edges = (0..c.n())
        .map(|u| (u + 1..c.n()).map(|v| c.color(u, v).0).collect())
        .collect();
    let mirror = JsonMirror {
        version: FORMAT_VERSION,
        n: c.n(),
        provenance: c.provenance().clone(),
        palette,
        edges,
    };
    Ok(serde_json::to_string_pretty(&mirror)?)
}

pub fn from_json(s: &str) -> Result<EdgeColoring> {
    let m: JsonMirror =
        serde_json::from_str(s).map_err(|e| Error::parse(format!("bad JSON coloring: {e}")))?;
    if m.version != FORMAT_VERSION {
        return Err(Error::parse(format!("unsupported format version {}", m.version)));
    }
    let mut palette = Palette::new();
    for (i, entry) in m.palette.iter().enumerate() {
        if entry.id as usize != i {
            return Err(Error::parse("palette ids must be dense and ordered"));
        }
        let bytes =
            hex::decode(&entry.canonical).map_err(|e| Error::parse(format!("bad hex: {e}")))?;
        if palette.intern(ColorValue::decode(&bytes)?).index() != i {
            return Err(Error::parse(format!("palette entry {i} is a duplicate")));
        }
    }
    if m.edges.len() != m.n {
        return Err(Error::parse("edge rows do not match n"));
    }
    let mut upper = Vec::with_capacity(pair_count(m.n));
    for (u, row) in m.edges.iter().enumerate() {
        if row.len() != m.n - u - 1 {
            return Err(Error::parse(format!("edge row {u} has wrong length")));
        }
        upper.extend(row.iter().map(|&id| ColorId(id)));
    }
    EdgeColoring::from_parts(m.n, palette, &upper, m.provenance)
        .map_err(|e| Error::parse(e.to_string()))
}

/// Writes the JSON mirror when `path` ends in `.json`, the binary format otherwise.
pub fn save(c: &EdgeColoring, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e == "json") {
        std::fs::write(path, to_json(c)?)?;
        Ok(())
    } else {
        write_binary(c, BufWriter::new(File::create(path)?))
    }
}

/// Reads either format, detected from the leading bytes.
pub fn load(path: &Path) -> Result<EdgeColoring> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.starts_with(MAGIC) {
        read_binary(bytes.as_slice())
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|_| Error::parse("not a coloring file"))?;
        from_json(text)
    }
}
