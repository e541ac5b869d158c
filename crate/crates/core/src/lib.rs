//! Construction of finite regular graphs with prescribed top adjacency
//! eigenvalues, together with the numerical machinery used to check each
//! step: nonbacktracking spectra, Green's functions of tree extensions,
//! local resampling, and branching statistics.

pub mod error;
pub mod graph;
pub mod greens;
pub mod nonbacktracking;
pub mod pipeline;
pub mod random;
pub mod rng;
pub mod spectral;
pub mod tree;

pub use error::{ForgeError, Result};
pub use graph::MultiGraph;
pub use rng::RngSpec;
