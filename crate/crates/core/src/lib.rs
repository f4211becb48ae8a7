//! Dense complex matrices, sectorial matrices and unitarily invariant norm
//! bounds for concave functions of `|A|` over 2x2 block partitions.
//!
//! The crate is `no_std` with `alloc`. File formats, campaigns and the
//! command-line driver live in the companion `sectorial-lab` crate.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod concave;
pub mod eigen;
pub mod error;
pub mod lab;
pub mod matrix;
pub mod norms;
pub mod random;
pub mod search;
pub mod sectorial;
pub mod svd;

pub use bounds::{BoundInstance, BoundKind, BoundReport, PartitionedMatrix, SOptimum};
pub use concave::{ConcaveFamily, ConcaveFunction};
pub use eigen::{hermitian_eigen, is_psd, PsdVerdict, SpectralData};
pub use error::{Error, Result};
pub use matrix::{cartesian_decompose, ComplexMatrix, HermitianMatrix};
pub use norms::{NormFamily, NormSpec};
pub use num_complex::Complex64;
pub use random::{derive_seed, random_matrix, RandomKind};
pub use sectorial::{sector_angle, AngleMethod, SectorAngle, Sectoriality};
pub use svd::{polar_decompose, singular_values, svd, Polar, Svd};
