//! Random graph models and the local resampling dynamics.

mod branching;
mod configuration;
mod resampling;

pub use branching::{kesten_stigum_stats, sample_branching_tree, BranchingStats, TailCount, TAIL_GRID};
pub use configuration::{percolate, sample_configuration_model, sample_simple_configuration_model};
pub use resampling::{
    apply_local_resampling, build_resampling_data, reverse_resampling_data, switch_indicator,
    BoundaryEdge, PartnerEdge, ResamplingData,
};
