//! Explicit edge-colorings of complete graphs in which every `p`-clique sees many
//! colors, plus the tooling to verify that property by enumeration.
//!
//! The two constructions are the block-decomposition coloring on binary strings
//! ([`cfls`]) and the dot-product coloring over `(F_q^*)^d` ([`dotprod`]). Their
//! product is formed with [`EdgeColoring::product`].

pub mod cfls;
pub mod claims;
pub mod dotprod;
mod error;
pub mod gf;
pub mod model;
pub mod structures;
pub mod verifier;

pub use error::{Error, Result};
pub use model::{ColorId, ColorValue, EdgeColoring, Palette, Provenance};
