//! Exact linear algebra: dense fraction-free elimination for small systems and
//! sparse multi-modular kernel computation for the large ansatz systems.

pub mod dense;
pub mod modular;
pub mod sparse;

pub use dense::{nullspace, primitive_integer_vector, rank, Matrix, RatMatrix};
pub use modular::{kernel_vector_in, rank_mod_p};
pub use sparse::{EchelonModP, SparseSystem, SystemBuilder};
