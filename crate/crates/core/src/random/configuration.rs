use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;
use crate::rng::RngSpec;

/// Uniform perfect matching on `n * d` half-edges (vertex `v` owns
/// half-edges `v*d .. v*d + d`). Loops and parallel edges are kept.
pub fn sample_configuration_model(n: usize, d: usize, rng: RngSpec) -> Result<MultiGraph> {
    if d == 0 {
        return Err(ForgeError::Parameter("degree must be at least 1".into()));
    }
    if (n * d) % 2 == 1 {
        return Err(ForgeError::Parameter(format!(
            "n*d = {} is odd; no perfect matching of half-edges exists",
            n * d
        )));
    }
    let mut half: Vec<usize> = (0..n * d).map(|h| h / d).collect();
    let mut r = rng.rng();
    half.shuffle(&mut r);
    let edges = half.chunks_exact(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
    Ok(MultiGraph::from_checked(n, edges))
}

/// Configuration model conditioned on simplicity by rejection. Returns the
/// graph and the number of rejected draws.
pub fn sample_simple_configuration_model(
    n: usize,
    d: usize,
    rng: RngSpec,
    max_attempts: usize,
) -> Result<(MultiGraph, usize)> {
    for attempt in 0..max_attempts {
        let g = sample_configuration_model(n, d, rng.child(attempt as u64))?;
        if g.is_simple() {
            return Ok((g, attempt));
        }
    }
    Err(ForgeError::Sampling(format!(
        "no simple {d}-regular graph on {n} vertices in {max_attempts} attempts"
    )))
}

/// Bond percolation: each edge (every parallel copy and loop separately)
/// survives independently with probability `p`.
pub fn percolate(h: &MultiGraph, p: f64, rng: RngSpec) -> Result<MultiGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ForgeError::Parameter(format!("percolation probability {p} outside [0,1]")));
    }
    let mut r = rng.rng();
    let kept = h
        .edges()
        .iter()
        .copied()
        .filter(|_| r.random_bool(p))
        .collect();
    Ok(MultiGraph::from_checked(h.vertex_count(), kept))
}
