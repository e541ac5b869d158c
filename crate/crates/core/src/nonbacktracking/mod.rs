//! The nonbacktracking operator on oriented edges and its spectral
//! relations with the adjacency matrix.

mod cycles;
mod ihara;
mod operator;

pub use cycles::{count_k_cycles, edge_intersection_census, CycleCensus, IntersectionCensus, CENSUS_WORK_CAP};
pub use ihara::{ihara_map, ihara_roots, ihara_unmap, s_theta_map};
pub use operator::{build_nb_operator, nb_spectral_radius, nb_trace, NbOperator, NbSpectrum, TraceMethod, TRACE_WORK_CAP};
