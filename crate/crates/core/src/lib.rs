pub mod autgroup;
pub mod cli_io;
pub mod criterion;
pub mod degree2;
pub mod gallery;
pub mod hermitian;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod projective;
pub mod ratmap;
pub mod sampling;
pub mod scalar;
