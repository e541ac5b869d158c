use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;

/// Nonbacktracking operator. Oriented edge `2j` runs along the `j`-th kept
/// edge from its smaller endpoint, `2j + 1` is its reversal, so reversal is
/// `e ^ 1`. Acts as `(Bx)_e = sum over f leaving head(e), f != reverse(e), of x_f`;
/// with this orientation `S_theta psi` is a right eigenvector.
#[derive(Debug, Clone)]
pub struct NbOperator {
    n: usize,
    tail: Vec<usize>,
    head: Vec<usize>,
    /// Original edge id of each kept undirected edge.
    pub source_edges: Vec<usize>,
    pub restricted: bool,
}

pub fn build_nb_operator(g: &MultiGraph, restrict_to: Option<&[bool]>) -> NbOperator {
    let keep = |v: usize| restrict_to.is_none_or(|m| m[v]);
    let mut tail = Vec::new();
    let mut head = Vec::new();
    let mut source_edges = Vec::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if keep(u) && keep(v) {
            tail.extend([u, v]);
            head.extend([v, u]);
            source_edges.push(id);
        }
    }
    NbOperator { n: g.vertex_count(), tail, head, source_edges, restricted: restrict_to.is_some() }
}

impl NbOperator {
    pub fn dim(&self) -> usize {
        self.tail.len()
    }

    pub fn tail(&self, e: usize) -> usize {
        self.tail[e]
    }

    pub fn head(&self, e: usize) -> usize {
        self.head[e]
    }

    pub fn reverse(e: usize) -> usize {
        e ^ 1
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut out = vec![0.0; self.n];
        for (e, &t) in self.tail.iter().enumerate() {
            out[t] += x[e];
        }
        for (e, ye) in y.iter_mut().enumerate() {
            *ye = out[self.head[e]] - x[e ^ 1];
        }
    }

    /// Oriented edges reachable in one step from `e`.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut leaving = vec![Vec::new(); self.n];
        for (f, &t) in self.tail.iter().enumerate() {
            leaving[t].push(f);
        }
        (0..self.dim())
            .map(|e| leaving[self.head[e]].iter().copied().filter(|&f| f != e ^ 1).collect())
            .collect()
    }

    /// Restriction to edges of the 2-core (vertices of degree at least two
    /// after repeatedly stripping leaves). Dangling edges only add nilpotent
    /// parts, so the nonzero spectrum is unchanged.
    pub fn two_core(&self) -> NbOperator {
        let mut deg = vec![0usize; self.n];
        for &t in &self.tail {
            deg[t] += 1;
        }
        let mut adj = vec![Vec::new(); self.n];
        for e in (0..self.dim()).step_by(2) {
            adj[self.tail[e]].push(self.head[e]);
            adj[self.head[e]].push(self.tail[e]);
        }
        let mut alive = vec![true; self.n];
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| deg[v] < 2).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in &adj[v] {
                if alive[w] && w != v {
                    deg[w] -= 1;
                    if deg[w] < 2 {
                        stack.push(w);
                    }
                }
            }
        }
        let mut out = NbOperator { n: self.n, tail: Vec::new(), head: Vec::new(), source_edges: Vec::new(), restricted: self.restricted };
        for j in 0..self.dim() / 2 {
            let (u, v) = (self.tail[2 * j], self.head[2 * j]);
            if alive[u] && alive[v] {
                out.tail.extend([u, v]);
                out.head.extend([v, u]);
                out.source_edges.push(self.source_edges[j]);
            }
        }
        out
    }

    /// All eigenvalues of the dense matrix; small operators only.
    pub fn dense_eigenvalues(&self) -> Result<Vec<num_complex::Complex64>> {
        let b = self.dense();
        let m = faer::Mat::<f64>::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)]);
        m.eigenvalues()
            .map_err(|e| ForgeError::Numeric(format!("dense eigenvalue solve failed: {e:?}")))
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let m = self.dim();
        let mut b = DMatrix::zeros(m, m);
        for (e, succ) in self.successors().iter().enumerate() {
            for &f in succ {
                b[(e, f)] += 1.0;
            }
        }
        b
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NbSpectrum {
    pub rho: f64,
    pub iterations: usize,
    /// `rho + (d-1)/rho` when `rho > sqrt(d-1)`.
    pub mapped_mu: Option<f64>,
}

/// Perron value of B by power iteration on `B + I`, which is aperiodic; the
/// growth rate is the ratio of l1 norms of successive nonnegative iterates.
pub fn nb_spectral_radius(b: &NbOperator, tol: f64, max_iter: usize) -> Result<(f64, usize)> {
    let core = b.two_core();
    let b = &core;
    let m = b.dim();
    if m == 0 {
        return Ok((0.0, 0));
    }
    let mut x: Vec<f64> = (0..m).map(|e| 1.0 + 1e-3 * ((e * 7919 % 101) as f64 / 101.0)).collect();
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
    let mut y = vec![0.0; m];
    let mut prev = f64::NAN;
    for it in 1..=max_iter {
        b.apply(&x, &mut y);
        let mut total = 0.0;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
            total += *yi;
        }
        let rate = total - 1.0;
        y.iter_mut().for_each(|v| *v /= total);
        std::mem::swap(&mut x, &mut y);
        if (rate - prev).abs() < tol * rate.abs().max(1.0) {
            return Ok((rate.max(0.0), it));
        }
        prev = rate;
    }
    Err(ForgeError::NotConverged { what: "nonbacktracking power iteration", iterations: max_iter, estimate: vec![prev] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMethod {
    /// Depth-first enumeration of nonbacktracking walks from each edge.
    ExactWalk,
    /// Repeated sparse application to each basis vector.
    MatrixPower,
}

pub const TRACE_WORK_CAP: u128 = 2_000_000_000;

/// `tr(B^k)`: closed nonbacktracking walks of length `k` returning to their
/// starting oriented edge.
pub fn nb_trace(b: &NbOperator, k: usize, method: TraceMethod) -> Result<u128> {
    if k == 0 {
        return Err(ForgeError::Parameter("trace power must be at least 1".into()));
    }
    let m = b.dim() as u128;
    let succ = b.successors();
    let branching = succ.iter().map(|s| s.len()).max().unwrap_or(0) as u128;
    let work = match method {
        TraceMethod::ExactWalk => branching.checked_pow(k as u32).and_then(|w| w.checked_mul(m)),
        TraceMethod::MatrixPower => m.checked_mul(m).and_then(|w| w.checked_mul(k as u128 * branching.max(1))),
    };
    if work.is_none_or(|w| w > TRACE_WORK_CAP) {
        return Err(ForgeError::Resource(format!(
            "trace of B^{k} over {m} oriented edges exceeds the work cap; use the spectral radius instead"
        )));
    }
    let mut total: u128 = 0;
    match method {
        TraceMethod::ExactWalk => {
            let mut stack: Vec<(usize, usize)> = Vec::new();
            for start in 0..succ.len() {
                stack.push((start, 0));
                while let Some((e, len)) = stack.pop() {
                    if len == k {
                        total += u128::from(e == start);
                        continue;
                    }
                    for &f in &succ[e] {
                        stack.push((f, len + 1));
                    }
                }
            }
        }
        TraceMethod::MatrixPower => {
            let mut cur = vec![0u128; succ.len()];
            let mut next = vec![0u128; succ.len()];
            for start in 0..succ.len() {
                cur.iter_mut().for_each(|c| *c = 0);
                cur[start] = 1;
                for _ in 0..k {
                    next.iter_mut().for_each(|c| *c = 0);
                    for (e, &c) in cur.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for &f in &succ[e] {
                            next[f] = next[f].checked_add(c).ok_or_else(|| {
                                ForgeError::Resource("walk count overflows 128 bits".into())
                            })?;
                        }
                    }
                    std::mem::swap(&mut cur, &mut next);
                }
                total += cur[start];
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> MultiGraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_edge_list(n, &e).unwrap()
    }

    fn binary_tree() -> MultiGraph {
        MultiGraph::from_edge_list(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap()
    }

    #[test]
    fn reversal_is_involution_and_rows_sum() {
        let b = build_nb_operator(&MultiGraph::complete(4), None);
        for e in 0..b.dim() {
            let r = NbOperator::reverse(e);
            assert_eq!(NbOperator::reverse(r), e);
            assert_eq!((b.tail(r), b.head(r)), (b.head(e), b.tail(e)));
        }
        let dense = b.dense();
        for i in 0..b.dim() {
            assert_eq!(dense.row(i).sum(), 2.0);
        }
        let x: Vec<f64> = (0..b.dim()).map(|i| i as f64 * 0.3 - 1.0).collect();
        let mut y = vec![0.0; b.dim()];
        b.apply(&x, &mut y);
        let yd = &dense * nalgebra::DVector::from_vec(x);
        for i in 0..b.dim() {
            assert!((y[i] - yd[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn perron_examples() {
        let (r, _) = nb_spectral_radius(&build_nb_operator(&MultiGraph::complete(4), None), 1e-12, 10_000).unwrap();
        assert!((r - 2.0).abs() < 1e-9);
        let (r, _) = nb_spectral_radius(&build_nb_operator(&cycle(5), None), 1e-12, 10_000).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        let (r, _) = nb_spectral_radius(&build_nb_operator(&binary_tree(), None), 1e-12, 10_000).unwrap();
        assert!(r.abs() < 1e-9);
    }

    #[test]
    fn two_core_strips_pendant_paths() {
        let g = MultiGraph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (5, 5)]).unwrap();
        let core = build_nb_operator(&g, None).two_core();
        assert_eq!(core.source_edges, vec![0, 1, 2, 5]);
    }

    #[test]
    fn traces() {
        let c5 = build_nb_operator(&cycle(5), None);
        for method in [TraceMethod::ExactWalk, TraceMethod::MatrixPower] {
            assert_eq!(nb_trace(&c5, 5, method).unwrap(), 10);
            assert_eq!(nb_trace(&c5, 4, method).unwrap(), 0);
            let t = build_nb_operator(&binary_tree(), None);
            for k in 1..6 {
                assert_eq!(nb_trace(&t, k, method).unwrap(), 0);
            }
        }
    }

    #[test]
    fn restriction_drops_outside_edges() {
        let g = MultiGraph::from_edge_list(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let mask = [true, true, true, false];
        let b = build_nb_operator(&g, Some(&mask));
        assert_eq!(b.dim(), 6);
        assert_eq!(b.source_edges, vec![0, 1, 2]);
    }
}
