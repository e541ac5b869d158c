//! Finite multigraphs with loops and parallel edges.
//!
//! Vertices are dense `0..n` ids. Each undirected edge has an id; a loop
//! contributes two half-edges to its endpoint, so it adds 2 to the degree
//! and 2 to the diagonal of the adjacency matrix.

mod io;
pub(crate) mod metrics;

pub use io::{read_edge_list, write_edge_list, EDGE_LIST_MAGIC};
pub use metrics::{
    bfs_ball, bfs_distances, delete_vertices, distance, girth, girth_at_least, is_tangle_free,
    BfsBall, TangleReport, Deletion,
};

use crate::error::{ForgeError, Result};

pub const UNREACHED: usize = usize::MAX;

/// One end of an edge as seen from a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    pub to: usize,
    pub edge: usize,
}

/// Immutable multigraph in compressed incidence form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    incidence: Vec<HalfEdge>,
}

impl MultiGraph {
    /// Builds a multigraph on `n` vertices. Edge ids follow the order of
    /// `edges`; each pair is stored with its smaller endpoint first.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut stored = Vec::with_capacity(edges.len());
        for (k, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(ForgeError::Input(format!(
                    "edge {k} = ({u},{v}) references a vertex outside 0..{n}"
                )));
            }
            stored.push(if u <= v { (u, v) } else { (v, u) });
        }
        Ok(Self::from_checked(n, stored))
    }

    pub(crate) fn from_checked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for d in degree.iter().take(n) {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        let mut fill = offsets.clone();
        let mut incidence = vec![HalfEdge { to: 0, edge: 0 }; acc];
        for (id, &(u, v)) in edges.iter().enumerate() {
            incidence[fill[u]] = HalfEdge { to: v, edge: id };
            fill[u] += 1;
            incidence[fill[v]] = HalfEdge { to: u, edge: id };
            fill[v] += 1;
        }
        let g = Self {
            n,
            edges,
            offsets,
            incidence,
        };
        debug_assert_eq!(g.degree_sum(), 2 * g.edge_count());
        g
    }

    pub fn empty(n: usize) -> Self {
        Self::from_checked(n, Vec::new())
    }

    /// Simple complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_checked(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degree_sum(&self) -> usize {
        self.incidence.len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.n).all(|v| self.degree(v) == d)
    }

    /// Half-edges at `v`; a loop appears twice.
    pub fn incident(&self, v: usize) -> &[HalfEdge] {
        &self.incidence[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident(v).iter().map(|h| h.to)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Number of edges beyond the first in each parallel class.
    pub fn parallel_excess(&self) -> usize {
        let mut sorted: Vec<_> = self.edges.iter().filter(|(u, v)| u != v).collect();
        sorted.sort_unstable();
        sorted.windows(2).filter(|w| w[0] == w[1]).count()
    }

    pub fn is_simple(&self) -> bool {
        self.loop_count() == 0 && self.parallel_excess() == 0
    }

    /// Edge multiset in canonical (sorted) order.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// `y = A x` with loops contributing 2 on the diagonal.
    pub fn adjacency_apply(&self, x: &[f64], y: &mut [f64]) {
        for v in 0..self.n {
            let mut acc = 0.0;
            for h in self.incident(v) {
                acc += x[h.to];
            }
            y[v] = acc;
        }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &MultiGraph) -> MultiGraph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Self::from_checked(self.n + other.n, edges)
    }

    /// Dense adjacency matrix (row-major), for small graphs and oracles.
    pub fn dense_adjacency(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for &(u, v) in &self.edges {
            if u == v {
                a[u][u] += 2.0;
            } else {
                a[u][v] += 1.0;
                a[v][u] += 1.0;
            }
        }
        a
    }

    /// Membership mask for a vertex list.
    pub fn mask(&self, set: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &v in set {
            m[v] = true;
        }
        m
    }

    /// Connected components as a label per vertex plus the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![UNREACHED; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != UNREACHED {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for h in self.incident(u) {
                    if label[h.to] == UNREACHED {
                        label[h.to] = count;
                        stack.push(h.to);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Simple FNV-1a hash of the sorted edge list, used as a fingerprint.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut mix = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        mix(self.n as u64);
        for (u, v) in self.sorted_edges() {
            mix(u as u64);
            mix(v as u64);
        }
        h
    }
}
