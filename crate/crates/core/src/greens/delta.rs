use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::finitized::{FinitizedOperator, GreensEvaluation};
use super::recursion::{root_leaf_sq, x_ell, y_ell};
use crate::error::{ForgeError, Result};
use crate::graph::bfs_distances;
use crate::rng::RngSpec;

#[derive(Debug, Clone, Serialize)]
pub struct PiSample {
    pub o: usize,
    pub i: usize,
    pub boundary: usize,
    pub value: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaDiagnostics {
    pub ell: usize,
    pub p: f64,
    pub degrees: Vec<usize>,
    pub dgd: Complex64,
    pub djd: f64,
    pub delta_q: Complex64,
    pub delta_m: Complex64,
    pub q_ell: Complex64,
    /// `Q - Y_l(Q_l) - delta_Q`.
    pub q_residual: Complex64,
    /// `m_N - X_l(Q_l) - delta_m`.
    pub m_residual: Complex64,
    pub root_leaf_sq: Complex64,
    pub pi: Vec<PiSample>,
    pub pi_mean: Complex64,
    pub pi_stderr: f64,
}

/// Number of base vertices at distance `ell+1` from `o` and `ell+2` from `i`.
pub fn boundary_count(op: &FinitizedOperator, o: usize, i: usize, ell: usize) -> usize {
    let from_o = bfs_distances(&op.base, &[o], Some(ell + 1));
    let from_i = bfs_distances(&op.base, &[i], Some(ell + 2));
    (0..op.dim()).filter(|&v| from_o[v] == ell + 1 && from_i[v] == ell + 2).count()
}

pub fn delta_diagnostics(
    op: &FinitizedOperator,
    eval: &GreensEvaluation,
    ell: usize,
    p: f64,
    samples: usize,
    rng: RngSpec,
) -> Result<DeltaDiagnostics> {
    if ell == 0 {
        return Err(ForgeError::Parameter("ell must be at least 1".into()));
    }
    let links: Vec<(usize, usize)> = op.base.edges().iter().copied().filter(|&(a, b)| a != b).collect();
    let (Some(q), false) = (eval.q, links.is_empty()) else {
        return Err(ForgeError::Input("no non-loop base edges".into()));
    };
    let d = op.d;
    let q1 = d as f64 - 1.0;
    let growth = p * q1;
    if (growth - 1.0).abs() < 1e-12 {
        return Err(ForgeError::Parameter("p(d-1) = 1 makes the delta terms singular".into()));
    }
    let n = op.dim();
    let degrees = op.base.degrees();
    let mut dgd = Complex64::default();
    for u in 0..n {
        for v in 0..n {
            dgd += eval.g[(u, v)] * (degrees[u] * degrees[v]) as f64;
        }
    }
    let total: usize = degrees.iter().sum();
    let djd = (total * total) as f64;
    let (msc, md, z) = (eval.msc, eval.md, eval.z);
    let frac = (growth - growth.powi(-(ell as i32))) / (growth - 1.0);
    let common = (1.0 + msc / q1.sqrt()).powi(2) * (msc * p * q1.sqrt()).powi(2 * ell as i32) * dgd / djd;
    let delta_q = msc * msc * p * p * (d as f64 - 2.0) * frac * common;
    let delta_m = d as f64 / q1 * md * md * p * p * (q1.powi(-(ell as i32)) + (d as f64 - 2.0) * frac) * common;
    let q_ell = eval.q_ell(p, ell).expect("q present");
    let q_residual = q - y_ell(q_ell, z, d, ell)? - delta_q;
    let m_residual = eval.m_n - x_ell(q_ell, z, d, ell)? - delta_m;

    let pol = root_leaf_sq(q_ell, z, d, ell)?;
    let expected = growth.powi(ell as i32 + 1);
    let mut r = rng.rng();
    let pi: Vec<PiSample> = (0..samples)
        .map(|_| {
            let (a, b) = links[r.random_range(0..links.len())];
            let (o, i) = if r.random_bool(0.5) { (a, b) } else { (b, a) };
            let boundary = boundary_count(op, o, i, ell);
            PiSample { o, i, boundary, value: pol / q1 * (boundary as f64 - expected) }
        })
        .collect();
    let k = pi.len().max(1) as f64;
    let pi_mean = pi.iter().map(|s| s.value).sum::<Complex64>() / k;
    let var = pi.iter().map(|s| (s.value - pi_mean).norm_sqr()).sum::<f64>() / (k - 1.0).max(1.0);
    Ok(DeltaDiagnostics {
        ell,
        p,
        degrees,
        dgd,
        djd,
        delta_q,
        delta_m,
        q_ell,
        q_residual,
        m_residual,
        root_leaf_sq: pol,
        pi,
        pi_mean,
        pi_stderr: (var / k).sqrt(),
    })
}
