use super::extension::TreeExtendedGraph;
use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;
use crate::spectral::SymOp;

/// The adjacency of a tree extension restricted to functions that are
/// constant on each level of the trees hanging off each base vertex, in
/// orthonormal coordinates. Each deficient base vertex `v` carries a path
/// `v - p_1 - ... - p_L` with weights `sqrt(f(v))`, then `sqrt(d-1)`.
/// The rest of the spectrum is explicit (see `non_radial_eigenvalues`).
#[derive(Debug, Clone)]
pub struct RadialQuotient {
    base: MultiGraph,
    d: usize,
    depth: usize,
    deficient: Vec<usize>,
    deficiency: Vec<usize>,
}

impl RadialQuotient {
    pub fn new(base: &MultiGraph, d: usize, depth: usize) -> Result<Self> {
        let mut deficiency = Vec::with_capacity(base.vertex_count());
        for v in 0..base.vertex_count() {
            let f = d.checked_sub(base.degree(v)).ok_or_else(|| {
                ForgeError::Input(format!("vertex {v} has degree {} > {d}", base.degree(v)))
            })?;
            deficiency.push(f);
        }
        let deficient = if depth == 0 {
            Vec::new()
        } else {
            (0..base.vertex_count()).filter(|&v| deficiency[v] > 0).collect()
        };
        Ok(Self { base: base.clone(), d, depth, deficient, deficiency })
    }

    pub fn base(&self) -> &MultiGraph {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn slot(&self, k: usize, level: usize) -> usize {
        self.base.vertex_count() + k * self.depth + level - 1
    }

    /// Eigenvalues outside the radial sector with multiplicities.
    pub fn non_radial_eigenvalues(&self) -> Vec<(f64, usize)> {
        let s = (self.d as f64 - 1.0).sqrt();
        let l = self.depth;
        let path = |m: usize, mult: usize, out: &mut Vec<(f64, usize)>| {
            if mult == 0 {
                return;
            }
            for j in 1..=m {
                out.push((2.0 * s * (j as f64 * std::f64::consts::PI / (m as f64 + 1.0)).cos(), mult));
            }
        };
        let mut out = Vec::new();
        if l == 0 {
            return out;
        }
        let first: usize = self.deficient.iter().map(|&v| self.deficiency[v] - 1).sum();
        path(l, first, &mut out);
        let stubs: usize = self.deficient.iter().map(|&v| self.deficiency[v]).sum();
        let mut parents = stubs;
        for level in 2..=l {
            path(l - level + 1, parents * (self.d - 2), &mut out);
            parents *= self.d - 1;
        }
        out
    }

    pub fn non_radial_max(&self) -> Option<f64> {
        self.non_radial_eigenvalues().into_iter().map(|(x, _)| x).reduce(f64::max)
    }

    /// Squared mass per level of the lifted vector.
    pub fn level_masses(&self, q: &[f64]) -> Vec<f64> {
        let n0 = self.base.vertex_count();
        let mut m = vec![0.0; self.depth + 1];
        m[0] = q[..n0].iter().map(|x| x * x).sum();
        for k in 0..self.deficient.len() {
            for l in 1..=self.depth {
                m[l] += q[self.slot(k, l)].powi(2);
            }
        }
        m
    }

    /// The radial vector on the materialized extension.
    pub fn lift(&self, q: &[f64], teg: &TreeExtendedGraph) -> Vec<f64> {
        let n0 = self.base.vertex_count();
        let mut index = vec![usize::MAX; n0];
        for (k, &v) in self.deficient.iter().enumerate() {
            index[v] = k;
        }
        (0..teg.full.vertex_count())
            .map(|u| {
                let l = teg.level_of[u];
                if l == 0 {
                    return q[u];
                }
                let v = teg.root_of(u);
                let count = self.deficiency[v] as f64 * (self.d as f64 - 1.0).powi(l as i32 - 1);
                q[self.slot(index[v], l)] / count.sqrt()
            })
            .collect()
    }
}

impl SymOp for RadialQuotient {
    fn dim(&self) -> usize {
        self.base.vertex_count() + self.deficient.len() * self.depth
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n0 = self.base.vertex_count();
        self.base.adjacency_apply(&x[..n0], &mut y[..n0]);
        let s = (self.d as f64 - 1.0).sqrt();
        let l = self.depth;
        for (k, &v) in self.deficient.iter().enumerate() {
            let w = (self.deficiency[v] as f64).sqrt();
            let p = self.slot(k, 1);
            y[v] += w * x[p];
            for j in 0..l {
                let below = if j == 0 { w * x[v] } else { s * x[p + j - 1] };
                let above = if j + 1 < l { s * x[p + j + 1] } else { 0.0 };
                y[p + j] = below + above;
            }
        }
    }
}

impl SymOp for TreeExtendedGraph {
    fn dim(&self) -> usize {
        self.full.vertex_count()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.full.adjacency_apply(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dense_spectrum, rayleigh_residual};
    use crate::tree::tree_extend;

    fn combined(q: &RadialQuotient) -> Vec<f64> {
        let mut all = dense_spectrum(q);
        for (x, m) in q.non_radial_eigenvalues() {
            all.extend(std::iter::repeat_n(x, m));
        }
        all.sort_by(|a, b| b.total_cmp(a));
        all
    }

    #[test]
    fn spectrum_matches_materialized() {
        let bases = [
            MultiGraph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap(),
            MultiGraph::from_edge_list(3, &[(0, 0), (1, 2)]).unwrap(),
            MultiGraph::empty(1),
            MultiGraph::from_edge_list(4, &[(0, 1), (0, 1), (2, 3), (1, 2)]).unwrap(),
        ];
        for (d, depth) in [(3, 1), (3, 4), (4, 3)] {
            for g in &bases {
                let q = RadialQuotient::new(g, d, depth).unwrap();
                let teg = tree_extend(g, d, depth).unwrap();
                let a = combined(&q);
                let b = dense_spectrum(&teg.full);
                assert_eq!(a.len(), b.len());
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-9, "{x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn lifted_eigenvector_is_eigenvector() {
        let g = MultiGraph::from_edge_list(3, &[(0, 0), (0, 1), (1, 2)]).unwrap();
        let q = RadialQuotient::new(&g, 3, 5).unwrap();
        let teg = tree_extend(&g, 3, 5).unwrap();
        let r = crate::spectral::lanczos_largest(&q, &crate::spectral::LanczosOptions::new(1), &[]).unwrap();
        let lifted = q.lift(&r.vectors[0], &teg);
        let norm: f64 = lifted.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        assert!(rayleigh_residual(&teg.full, r.values[0], &lifted).unwrap() < 1e-18);
        let m1 = teg.level_masses(&lifted);
        let m2 = q.level_masses(&r.vectors[0]);
        for (a, b) in m1.iter().zip(&m2) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn non_radial_top() {
        let s = 2f64.sqrt();
        let g = MultiGraph::empty(1);
        let q = RadialQuotient::new(&g, 3, 6).unwrap();
        let top = q.non_radial_max().unwrap();
        assert!((top - 2.0 * s * (std::f64::consts::PI / 7.0).cos()).abs() < 1e-12);
        let cyc = MultiGraph::from_edge_list(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let q = RadialQuotient::new(&cyc, 3, 6).unwrap();
        let top = q.non_radial_max().unwrap();
        assert!((top - 2.0 * s * (std::f64::consts::PI / 6.0).cos()).abs() < 1e-12);
    }
}
