pub mod factor;
pub mod hnf;
pub mod matrix;
pub mod poly;
pub mod primes;

pub use hnf::{hnf, int_kernel, lattice_hnf, HnfResult};
pub use matrix::{IntMatrix, RatMatrix};
pub use poly::{IntPoly, ModPoly};
