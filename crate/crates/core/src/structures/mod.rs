//! Leftover structures, striped K4s, falling stars and the split-sequence
//! feasibility check for leftover cliques under the dot-product coloring.

mod falling;
mod feasibility;
mod leftover;
mod striped;
mod tree;

pub use falling::{falling_star_number, is_falling_star, max_falling_star, DEFAULT_FALLING_STAR_CAP};
pub use feasibility::{clog2, wildtime_feasible, FeasibilitySequence};
pub use leftover::{is_leftover, LeftoverTree};
pub use striped::{find_striped_k4, is_striped_k4, StripedWitness};
pub(crate) use striped::striped_unchecked;
pub use tree::{make_leftover, TreeShape};
