//! Finite fields of odd order and the small amount of linear algebra the
//! dot-product coloring needs.

mod field;
mod linalg;

pub use field::{is_irreducible, is_prime, prime_power, Elem, FieldDescriptor, GaloisField};
pub use linalg::{affine_dim, affine_dim_from, confines, dot, rank, FieldVector};
pub(crate) use linalg::dot_unchecked;
