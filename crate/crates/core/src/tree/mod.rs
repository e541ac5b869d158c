//! Tree extensions of graphs with bounded degree, spectral targets, and
//! eigenvector localization diagnostics.

mod extension;
mod localization;
mod radial;
mod target;

pub use extension::{augment, projected_vertex_count, tree_extend, tree_extend_with_cap, TreeExtendedGraph, DEFAULT_VERTEX_CAP};
pub use localization::{decay_profile_check, localization_check, truncation_gap, DecayReport, LocalizationReport, TruncationRow};
pub use radial::RadialQuotient;
pub use target::{target_from_mu, zeta_of_lambda, SpectralTarget};
