//! Spectral laboratory for block-partitioned symmetric random matrices.
//!
//! The crate samples matrices `A_n` whose entries follow one law inside the
//! diagonal blocks of a vertex partition and another law across blocks,
//! computes their spectra, and compares the results with closed-form limit
//! laws and exact closed-walk counting oracles. A second half deals with the
//! energy of random multipartite graphs.
//!
//! Modules:
//! - [`ensemble`]: partitions, entry laws, deterministic matrix sampling.
//! - [`spectral`]: eigenvalues, ESDs, moments, Stieltjes transforms and the
//!   two perturbation inequalities.
//! - [`laws`]: semicircle family, theoretical moment sequences, Hankel tests
//!   and Bessel-function characteristic functions.
//! - [`walks`]: exact closed-walk enumeration and rational moment oracles.
//! - [`graphenergy`]: random graphs on complete multipartite hosts.
//! - [`experiment`]: config-driven runner behind the `rmtlab` binary.

pub mod eigen;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod graphenergy;
pub mod laws;
pub mod matrix;
pub mod rng;
pub mod spectral;
pub mod walks;

pub use ensemble::{EnsembleSpec, EntryLaw, PartitionSpec};
pub use error::{Error, Result};
pub use matrix::SymmetricMatrix;
pub use spectral::{EmpiricalCdf, Spectrum};
