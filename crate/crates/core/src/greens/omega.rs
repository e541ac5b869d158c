use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::finitized::{FinitizedOperator, GreensEvaluation};
use super::params::ParameterSet;
use super::recursion::{invert, shifted_operator};
use super::stieltjes::SpectralDomainPoint;
use crate::error::Result;
use crate::graph::{bfs_ball, MultiGraph};
use crate::rng::RngSpec;

#[derive(Debug, Clone, Serialize)]
pub struct OmegaSample {
    pub i: usize,
    pub j: usize,
    pub exact: [f64; 2],
    pub local: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaReport {
    pub radius: usize,
    pub diagonal: Vec<OmegaSample>,
    pub off_diagonal: Vec<OmegaSample>,
    pub max_diag: f64,
    pub max_off: f64,
    pub q_deviation: Option<f64>,
    pub q_bound: f64,
    pub eps: f64,
    pub note: Option<String>,
}

/// `G_ij` of the ball `B_radius({i, j})` in the finitized graph, keeping its
/// tree loops and putting ghost weight `q` on every cut base edge.
pub fn local_green_entry(op: &FinitizedOperator, q: Complex64, i: usize, j: usize, radius: usize) -> Result<Complex64> {
    let ball = bfs_ball(&op.base, &[i, j], radius);
    let mut index = vec![usize::MAX; op.dim()];
    for (k, &v) in ball.vertices.iter().enumerate() {
        index[v] = k;
    }
    let edges: Vec<(usize, usize)> = ball
        .edges
        .iter()
        .map(|&e| {
            let (a, b) = op.base.edge(e);
            (index[a], index[b])
        })
        .collect();
    let sub = MultiGraph::from_edge_list(ball.vertices.len(), &edges)?;
    let weights: Vec<Complex64> = ball
        .vertices
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let cut = op.base.degree(v) - sub.degree(k);
            op.loop_weight * op.deficiency[v] as f64 + q * cut as f64
        })
        .collect();
    let g = invert(&shifted_operator(&sub, op.d, op.z, &weights))?;
    Ok(g[(index[i], index[j])])
}

fn sample_pair(op: &FinitizedOperator, eval: &GreensEvaluation, q: Complex64, i: usize, j: usize, radius: usize) -> Result<OmegaSample> {
    let exact = eval.g[(i, j)];
    let local = local_green_entry(op, q, i, j, radius)?;
    Ok(OmegaSample { i, j, exact: [exact.re, exact.im], local: [local.re, local.im], residual: (exact - local).norm() })
}

/// Compares sampled Green's entries against their local ball approximations.
/// `radius` overrides the parameter set's `floor(r)`.
pub fn omega_residuals(
    op: &FinitizedOperator,
    eval: &GreensEvaluation,
    params: &ParameterSet,
    radius: Option<usize>,
    samples: usize,
    rng: RngSpec,
) -> Result<OmegaReport> {
    let n = op.dim();
    let radius = radius.unwrap_or_else(|| params.radius());
    let q = eval.q.unwrap_or(eval.msc);
    let mut r = rng.rng();
    let picks = sample(&mut r, n, samples.min(n)).into_vec();
    let mut diagonal = Vec::new();
    let mut off_diagonal = Vec::new();
    for &i in &picks {
        diagonal.push(sample_pair(op, eval, q, i, i, radius)?);
        let nb: Vec<usize> = op.base.neighbors(i).filter(|&j| j != i).collect();
        if !nb.is_empty() {
            let j = nb[r.random_range(0..nb.len())];
            off_diagonal.push(sample_pair(op, eval, q, i, j, radius)?);
        }
    }
    let point = SpectralDomainPoint::new(op.z)?;
    let scales = params.scales(&point)?;
    let max = |v: &[OmegaSample]| v.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(OmegaReport {
        radius,
        max_diag: max(&diagonal),
        max_off: max(&off_diagonal),
        diagonal,
        off_diagonal,
        q_deviation: eval.q.map(|q| (q - eval.msc).norm()),
        q_bound: scales.eps / (point.kappa() + point.eta() + scales.eps).sqrt(),
        eps: scales.eps,
        note: (radius == 0).then(|| "ball too small: radius 0".to_string()),
    })
}
