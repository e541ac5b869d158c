use serde::{Deserialize, Serialize};

use super::lanczos::{lanczos_largest, LanczosOptions, SymOp};
use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub iters: usize,
    pub restarts: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: usize,
    pub m: usize,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub solver: SolverStats,
    pub fingerprint: String,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Top `k` adjacency eigenpairs of `g`, residual-verified.
pub fn lanczos_topk(g: &MultiGraph, k: usize, tol: f64, seed: u64) -> Result<SpectralReport> {
    let r = lanczos_largest(g, &LanczosOptions::new(k).tol(tol).seed(seed), &[])?;
    let slack = tol.max(1e-12) * 100.0;
    if let Some(bad) = r.residuals.iter().position(|&x| x > slack) {
        return Err(ForgeError::Numeric(format!(
            "eigenpair {bad} has residual {:.3e} above tolerance {tol:.1e}",
            r.residuals[bad]
        )));
    }
    let dmax = g.max_degree() as f64;
    if r.values[0] > dmax + 1e-8 {
        return Err(ForgeError::Consistency(format!(
            "top eigenvalue {} exceeds the maximum degree {dmax}",
            r.values[0]
        )));
    }
    Ok(SpectralReport {
        n: g.vertex_count(),
        m: g.edge_count(),
        eigenvalues: r.values,
        residuals: r.residuals,
        solver: SolverStats { iters: r.matvecs, restarts: r.restarts },
        fingerprint: format!("{:016x}", g.fingerprint()),
        eigenvectors: r.vectors,
    })
}

/// `||A psi - lambda psi||^2 / ||psi||^2`.
pub fn rayleigh_residual<T: SymOp + ?Sized>(op: &T, lambda: f64, psi: &[f64]) -> Result<f64> {
    let nn: f64 = psi.iter().map(|x| x * x).sum();
    if nn == 0.0 {
        return Err(ForgeError::Input("zero vector has no Rayleigh residual".into()));
    }
    let mut y = vec![0.0; psi.len()];
    op.apply(psi, &mut y);
    let r: f64 = y.iter().zip(psi).map(|(a, b)| (a - lambda * b).powi(2)).sum();
    Ok(r / nn)
}
