//! Color values, palettes and edge colorings of complete graphs.

mod color;
mod coloring;
pub mod io;
mod palette;

pub use color::{CflsColor, ColorValue, DotClass, DotColor, EtaValue, Sign};
pub use coloring::{pair_count, ColorSource, EdgeColoring, Provenance, DEFAULT_MATERIALIZE_CAP};
pub use palette::{ColorId, Palette};
