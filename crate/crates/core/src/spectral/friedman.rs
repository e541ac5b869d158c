use serde::{Deserialize, Serialize};

use super::lanczos::{lanczos_largest, lanczos_smallest, LanczosOptions};
use crate::error::Result;
use crate::graph::MultiGraph;
use crate::random::{sample_configuration_model, sample_simple_configuration_model};
use crate::rng::RngSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FriedmanTrial {
    pub lambda2: f64,
    pub lambda_min: f64,
    /// `max(lambda2, -lambda_min)`.
    pub stat: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FriedmanReport {
    pub n: usize,
    pub d: usize,
    pub trials: Vec<FriedmanTrial>,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub ramanujan: f64,
}

/// Second eigenvalue and bottom eigenvalue of a d-regular graph; the
/// constant vector is deflated.
pub fn extreme_nontrivial(g: &MultiGraph, seed: u64) -> Result<FriedmanTrial> {
    let n = g.vertex_count();
    let c = vec![1.0 / (n as f64).sqrt(); n];
    let opts = LanczosOptions::new(1).tol(1e-9).seed(seed);
    let lambda2 = lanczos_largest(g, &opts, std::slice::from_ref(&c))?.values[0];
    let lambda_min = lanczos_smallest(g, &opts, &[])?.values[0];
    Ok(FriedmanTrial { lambda2, lambda_min, stat: lambda2.max(-lambda_min) })
}

/// Spectral-gap statistics over configuration-model samples; `simple_only`
/// conditions on simplicity by rejection.
pub fn friedman_check(n: usize, d: usize, trials: usize, rng: RngSpec, simple_only: bool) -> Result<FriedmanReport> {
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials {
        let spec = rng.child(t as u64);
        let g = if simple_only {
            sample_simple_configuration_model(n, d, spec, 10_000)?.0
        } else {
            sample_configuration_model(n, d, spec)?
        };
        out.push(extreme_nontrivial(&g, spec.seed ^ spec.stream)?);
    }
    let mut stats: Vec<f64> = out.iter().map(|t| t.stat).collect();
    stats.sort_by(f64::total_cmp);
    let pick = |q: f64| stats.get(((stats.len() as f64 - 1.0) * q).round() as usize).copied().unwrap_or(f64::NAN);
    Ok(FriedmanReport {
        n,
        d,
        min: pick(0.0),
        median: pick(0.5),
        max: pick(1.0),
        trials: out,
        ramanujan: 2.0 * ((d as f64) - 1.0).sqrt(),
    })
}
