use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::graph::metrics::BfsScratch;
use crate::graph::MultiGraph;
use crate::tree::TreeExtendedGraph;

/// `max(1, round(0.22 log_{d-1} n))`.
pub fn default_t(n: usize, d: usize) -> usize {
    default_t_with(n, d, 0.22)
}

pub fn default_t_with(n: usize, d: usize, c: f64) -> usize {
    ((c * (n as f64).ln() / (d as f64 - 1.0).ln()).round() as usize).max(1)
}

/// Power-method test vector on the tree extension of `g0`: sphere counts at
/// radius `t`, normalized, set to zero where the `(t+1)`-ball has a cycle,
/// and continued down the attached trees by a factor `1/(p(d-1))` per level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestVector {
    pub t: usize,
    pub d: usize,
    pub p: f64,
    /// Sphere sizes at radius `t - 1`, `t`, `t + 1`.
    pub z_prev: Vec<u64>,
    pub z_t: Vec<u64>,
    pub z_next: Vec<u64>,
    /// True where the `(t+1)`-ball contains a cycle and the value is zeroed.
    pub tangle_mask: Vec<bool>,
    /// Values on the base.
    pub values: Vec<f64>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TestVectorResidual {
    /// `||(A - mu) psi||^2` over base rows; tree rows contribute nothing on
    /// the infinite extension.
    pub base_rows: f64,
    /// Contribution of the leaves when the trees are cut at a finite depth.
    pub frontier: f64,
    pub norm_sq: f64,
    /// `(base_rows + frontier) / norm_sq`.
    pub ratio: f64,
    pub max_value: f64,
}

impl TestVector {
    fn decay(&self) -> f64 {
        1.0 / (self.p * (self.d as f64 - 1.0))
    }

    pub fn mu(&self) -> f64 {
        self.p * (self.d as f64 - 1.0) + 1.0 / self.p
    }

    /// Values on a materialized extension of the same base.
    pub fn materialize(&self, teg: &TreeExtendedGraph) -> Vec<f64> {
        let x = self.decay();
        (0..teg.full.vertex_count())
            .map(|u| self.values[teg.root_of(u)] * x.powi(teg.level_of[u] as i32))
            .collect()
    }

    /// Residual against `p(d-1) + 1/p`; `depth = None` is the infinite extension.
    pub fn residual(&self, g0: &MultiGraph, depth: Option<usize>) -> TestVectorResidual {
        let d = self.d as f64;
        let x = self.decay();
        let mu = self.mu();
        let n = g0.vertex_count();
        let mut y = vec![0.0; n];
        g0.adjacency_apply(&self.values, &mut y);
        let mut base_rows = 0.0;
        let mut frontier = 0.0;
        let mut norm_sq = 0.0;
        let r = (d - 1.0) * x * x;
        for v in 0..n {
            let psi = self.values[v];
            let f = (self.d - g0.degree(v)) as f64;
            let extended = if depth == Some(0) { 0.0 } else { f * psi * x };
            base_rows += (y[v] + extended - mu * psi).powi(2);
            let tree = match depth {
                None => f / (d - 1.0) * r / (1.0 - r),
                Some(l) => f / (d - 1.0) * (1..=l).map(|k| r.powi(k as i32)).sum::<f64>(),
            };
            norm_sq += psi * psi * (1.0 + tree);
            if let Some(l) = depth.filter(|&l| l > 0) {
                let leaf = psi * x.powi(l as i32) * (d - 1.0) * x;
                frontier += f * (d - 1.0).powi(l as i32 - 1) * leaf * leaf;
            }
        }
        let max_value = self.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        TestVectorResidual { base_rows, frontier, norm_sq, ratio: (base_rows + frontier) / norm_sq, max_value }
    }
}

/// Builds the test vector on `g0` (degrees at most `d`) with radius `t`.
pub fn build_test_vector(g0: &MultiGraph, d: usize, p: f64, t: usize) -> Result<TestVector> {
    if !(p > 0.0 && p <= 1.0) || t == 0 {
        return Err(ForgeError::Parameter(format!("need 0 < p <= 1 and t >= 1, got p = {p}, t = {t}")));
    }
    let n = g0.vertex_count();
    if g0.max_degree() > d {
        return Err(ForgeError::Input(format!("maximum degree {} exceeds {d}", g0.max_degree())));
    }
    let scale = (p * (d as f64 - 1.0)).powi(t as i32);
    let mut s = BfsScratch::new(n);
    let (mut z_prev, mut z_t, mut z_next) = (vec![0; n], vec![0; n], vec![0; n]);
    let mut tangle_mask = vec![false; n];
    let mut values = vec![0.0; n];
    for v in 0..n {
        s.run(g0, &[v], t + 1, None);
        for &u in &s.order {
            let k = s.dist[u];
            if k + 1 == t {
                z_prev[v] += 1;
            } else if k == t {
                z_t[v] += 1;
            } else if k == t + 1 {
                z_next[v] += 1;
            }
        }
        let (nv, ne) = s.induced_counts(g0);
        if ne + 1 != nv {
            tangle_mask[v] = true;
        } else {
            values[v] = z_t[v] as f64 / scale;
        }
    }
    let warning = ((d as f64 - 1.0).powi(t as i32 + 1) > n as f64).then(|| {
        format!("radius {} balls can exceed the graph size {n}; sphere counts are truncated", t + 1)
    });
    Ok(TestVector { t, d, p, z_prev, z_t, z_next, tangle_mask, values, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_tangle_free;
    use crate::random::{percolate, sample_configuration_model};
    use crate::rng::RngSpec;
    use crate::spectral::rayleigh_residual;
    use crate::tree::tree_extend;

    fn percolated(n: usize, p: f64, seed: u64) -> MultiGraph {
        let h = sample_configuration_model(n, 3, RngSpec::new(seed, 0)).unwrap();
        percolate(&h, p, RngSpec::new(seed, 1)).unwrap()
    }

    #[test]
    fn full_regular_tree_value() {
        let h = sample_configuration_model(4000, 3, RngSpec::from_seed(3)).unwrap();
        let tv = build_test_vector(&h, 3, 1.0, 3).unwrap();
        for v in 0..4000 {
            if !tv.tangle_mask[v] {
                // d (d-1)^(t-1) vertices on the sphere, normalized by (d-1)^t
                assert_eq!(tv.z_t[v], 12);
                assert!((tv.values[v] - 1.5).abs() < 1e-15);
            } else {
                assert_eq!(tv.values[v], 0.0);
            }
        }
    }

    #[test]
    fn tangle_mask_matches_ball_cycles() {
        let g = percolated(300, 0.9, 5);
        let tv = build_test_vector(&g, 3, 0.9, 2).unwrap();
        for v in 0..300 {
            let ball = crate::graph::bfs_ball(&g, &[v], 3);
            assert_eq!(tv.tangle_mask[v], ball.edges.len() + 1 != ball.vertices.len());
        }
        let globally = is_tangle_free(&g, 3).tangle_free;
        if tv.tangle_mask.iter().all(|m| !m) {
            assert!(globally);
        }
    }

    #[test]
    fn sphere_recursion_on_tree_balls() {
        let g = percolated(2000, 0.88, 11);
        let t = 3;
        let tv = build_test_vector(&g, 3, 0.88, t).unwrap();
        for v in 0..2000 {
            let nb: Vec<usize> = g.neighbors(v).collect();
            if tv.tangle_mask[v] || nb.iter().any(|&x| tv.tangle_mask[x]) {
                continue;
            }
            let lhs: u64 = nb.iter().map(|&x| tv.z_t[x]).sum();
            let dv = nb.len() as u64;
            let rhs = tv.z_next[v] + dv.saturating_sub(1) * tv.z_prev[v];
            if dv == 0 {
                continue;
            }
            assert_eq!(lhs, rhs, "vertex {v}");
        }
    }

    #[test]
    fn analytic_residual_matches_materialized() {
        let g = percolated(150, 0.88, 2);
        let tv = build_test_vector(&g, 3, 0.88, 2).unwrap();
        for depth in [1, 3, 5] {
            let teg = tree_extend(&g, 3, depth).unwrap();
            let psi = tv.materialize(&teg);
            let direct = rayleigh_residual(&teg.full, tv.mu(), &psi).unwrap();
            let r = tv.residual(&g, Some(depth));
            assert!((direct - r.ratio).abs() < 1e-10 * direct.max(1.0), "{direct} vs {}", r.ratio);
        }
    }
}
