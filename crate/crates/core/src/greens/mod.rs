//! Green's functions of tree extensions on the normalized scale
//! `H = A / sqrt(d-1)`.

mod delta;
mod finitized;
mod omega;
mod params;
mod recursion;
mod schur;
mod stieltjes;

pub use delta::{boundary_count, delta_diagnostics, DeltaDiagnostics, PiSample};
pub use finitized::{finitize, green_matrix, ward_residual, ward_summary, FinitizedOperator, GreensEvaluation, WardSummary, DENSE_GREEN_CAP};
pub use omega::{local_green_entry, omega_residuals, OmegaReport, OmegaSample};
pub use params::{default_ell, ErrorScales, ParameterSet, DEFAULT_FC};
pub use recursion::{ext_green, root_leaf_sq, tree_resolvents, x_ell, y_ell};
pub use schur::{schur_identity_suite, SchurReport};
pub use stieltjes::{integrate, m_d, m_d_quadrature, m_sc, rho_d, rho_d_mass, SpectralDomainPoint};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::graph::MultiGraph;
use crate::rng::RngSpec;

/// One row of a local-law sweep.
#[derive(Debug, Clone, Serialize)]
pub struct GreenLawReport {
    pub z: Complex64,
    #[serde(rename = "mN")]
    pub m_n: Complex64,
    #[serde(rename = "Q")]
    pub q: Option<Complex64>,
    pub msc: Complex64,
    pub md: Complex64,
    pub ward_max: f64,
    pub omega_max_diag: f64,
    pub omega_max_off: f64,
    #[serde(rename = "deltaQ")]
    pub delta_q: Option<Complex64>,
    #[serde(rename = "deltam")]
    pub delta_m: Option<Complex64>,
}

#[derive(Debug, Clone)]
pub struct GreenLawOptions {
    pub d: usize,
    pub p: f64,
    pub ell: Option<usize>,
    pub radius: Option<usize>,
    pub samples: usize,
    pub rng: RngSpec,
}

pub fn green_law(g0: &MultiGraph, z: Complex64, opts: &GreenLawOptions) -> Result<GreenLawReport> {
    let op = finitize(g0, opts.d, z)?;
    let ev = green_matrix(&op)?;
    let ward = ward_summary(&ward_residual(&op, &ev));
    let params = ParameterSet::new(g0.vertex_count().max(2), opts.d)?;
    let omega = omega_residuals(&op, &ev, &params, opts.radius, opts.samples, opts.rng)?;
    let ell = opts.ell.unwrap_or(params.ell);
    let delta = delta_diagnostics(&op, &ev, ell, opts.p, 0, opts.rng).ok();
    Ok(GreenLawReport {
        z,
        m_n: ev.m_n,
        q: ev.q,
        msc: ev.msc,
        md: ev.md,
        ward_max: ward.max_abs,
        omega_max_diag: omega.max_diag,
        omega_max_off: omega.max_off,
        delta_q: delta.as_ref().map(|x| x.delta_q),
        delta_m: delta.as_ref().map(|x| x.delta_m),
    })
}
