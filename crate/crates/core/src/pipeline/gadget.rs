use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::graph::{delete_vertices, girth, girth_at_least, MultiGraph};
use crate::nonbacktracking::{build_nb_operator, nb_spectral_radius};
use crate::random::{percolate, sample_configuration_model};
use crate::rng::RngSpec;
use crate::spectral::{dense_spectrum, lanczos_largest, LanczosOptions};
use crate::tree::{tree_extend, RadialQuotient, SpectralTarget};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub target: SpectralTarget,
    pub n: usize,
    pub girth: usize,
    pub depth: usize,
    pub max_girth_retries: usize,
}

impl GadgetSpec {
    pub fn new(target: SpectralTarget, n: usize) -> Self {
        Self { target, n, girth: 4, depth: 10, max_girth_retries: 1000 }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.target.d;
        if self.n == 0 || (self.n * d) % 2 == 1 {
            return Err(ForgeError::Parameter(format!("n = {} with d = {d} has odd degree sum", self.n)));
        }
        if self.depth == 0 || self.girth < 3 {
            return Err(ForgeError::Parameter("need depth >= 1 and girth >= 3".into()));
        }
        Ok(())
    }
}

/// Where a gadget came from: the stream of the accepted draw and how many
/// configuration-model draws failed the girth test before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetProvenance {
    pub rng: RngSpec,
    pub rejected: usize,
    pub girth: Option<usize>,
}

/// Percolated configuration-model graph whose parent has girth at least `spec.girth`.
pub fn construct_gadget(spec: &GadgetSpec, rng: RngSpec) -> Result<(MultiGraph, GadgetProvenance)> {
    spec.validate()?;
    let mut best = None;
    for attempt in 0..spec.max_girth_retries {
        let draw = rng.child(attempt as u64);
        let h = sample_configuration_model(spec.n, spec.target.d, draw)?;
        if girth_at_least(&h, spec.girth) {
            let g0 = percolate(&h, spec.target.p, draw.child(1))?;
            return Ok((g0, GadgetProvenance { rng: draw, rejected: attempt, girth: girth(&h) }));
        }
        best = best.max(girth(&h));
    }
    Err(ForgeError::Construction(format!(
        "no parent with girth >= {} in {} draws; best girth {:?}",
        spec.girth, spec.max_girth_retries, best
    )))
}

/// Vertices of degree at most one are peeled until none remain, then the
/// largest surviving component is kept. Returns the core and, per core
/// vertex, its vertex in `g`.
pub fn gadget_core(g: &MultiGraph) -> (MultiGraph, Vec<usize>) {
    let n = g.vertex_count();
    let mut deg = g.degrees();
    let mut gone = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if gone[v] {
            continue;
        }
        gone[v] = true;
        for h in g.incident(v) {
            let w = h.to;
            if !gone[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let peeled: Vec<usize> = (0..n).filter(|&v| gone[v]).collect();
    let core = delete_vertices(g, &peeled);
    let (label, count) = core.graph.components();
    if count <= 1 {
        return (core.graph, core.new_to_old);
    }
    let mut sizes = vec![0usize; count];
    label.iter().for_each(|&c| sizes[c] += 1);
    let big = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap();
    let drop: Vec<usize> = (0..core.graph.vertex_count()).filter(|&v| label[v] != big).collect();
    let kept = delete_vertices(&core.graph, &drop);
    let map = kept.new_to_old.iter().map(|&v| core.new_to_old[v]).collect();
    (kept.graph, map)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lambda1Check {
    pub theta_hat: f64,
    /// `theta + (d-1)/theta`, present when `theta > sqrt(d-1)`.
    pub lambda1_hat: Option<f64>,
    /// `lambda1_hat - (p(d-1) + 1/p)` for the target's `p`.
    pub gap: Option<f64>,
    pub iterations: usize,
}

/// Top eigenvalue of the infinite tree extension, read off the Perron value
/// of the nonbacktracking operator.
pub fn verify_gadget_lambda1(g0: &MultiGraph, d: usize, target: Option<&SpectralTarget>, tol: f64) -> Result<Lambda1Check> {
    if g0.vertex_count() == 0 {
        return Err(ForgeError::Input("empty gadget".into()));
    }
    let b = build_nb_operator(g0, None);
    let (theta_hat, iterations) = nb_spectral_radius(&b, tol, 1_000_000)?;
    let q = d as f64 - 1.0;
    let lambda1_hat = (theta_hat > q.sqrt()).then(|| theta_hat + q / theta_hat);
    let gap = match (lambda1_hat, target) {
        (Some(l), Some(t)) => Some(l - t.mu_from_p()),
        _ => None,
    };
    Ok(Lambda1Check { theta_hat, lambda1_hat, gap, iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Lambda2Method {
    /// Radial quotient plus the explicit non-radial eigenvalues.
    #[default]
    Quotient,
    /// Lanczos on the materialized extension.
    Materialized,
}

const DENSE_CUTOFF: usize = 300;

fn top_two<T: crate::spectral::SymOp>(op: &T, tol: f64, seed: u64) -> Result<Vec<f64>> {
    if op.dim() <= DENSE_CUTOFF {
        return Ok(dense_spectrum(op).into_iter().take(2).collect());
    }
    Ok(lanczos_largest(op, &LanczosOptions::new(2).tol(tol).seed(seed), &[])?.values)
}

/// Second adjacency eigenvalue of `T^depth g0`.
pub fn verify_gadget_lambda2(g0: &MultiGraph, d: usize, depth: usize, tol: f64, method: Lambda2Method) -> Result<f64> {
    let mut top = match method {
        Lambda2Method::Quotient => {
            let rq = RadialQuotient::new(g0, d, depth)?;
            let mut v = top_two(&rq, tol, 17)?;
            if let Some(x) = rq.non_radial_max() {
                v.push(x);
            }
            v
        }
        Lambda2Method::Materialized => top_two(&tree_extend(g0, d, depth)?.full, tol, 17)?,
    };
    top.sort_by(|a, b| b.total_cmp(a));
    top.get(1)
        .copied()
        .ok_or_else(|| ForgeError::Input("extension has a single vertex".into()))
}
