use std::collections::VecDeque;

use super::{MultiGraph, UNREACHED};

/// Reusable BFS state; resetting only touches vertices visited last time.
pub(crate) struct BfsScratch {
    pub dist: Vec<usize>,
    pub order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![UNREACHED; n],
            order: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v] = UNREACHED;
        }
        self.order.clear();
        self.queue.clear();
    }

    /// Multi-source BFS up to `radius` hops, optionally skipping vertices
    /// for which `blocked` returns true.
    pub fn run(
        &mut self,
        g: &MultiGraph,
        sources: &[usize],
        radius: usize,
        blocked: Option<&[bool]>,
    ) {
        self.reset();
        for &s in sources {
            if self.dist[s] == UNREACHED && !blocked.is_some_and(|b| b[s]) {
                self.dist[s] = 0;
                self.order.push(s);
                self.queue.push_back(s);
            }
        }
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du == radius {
                continue;
            }
            for h in g.incident(u) {
                let w = h.to;
                if self.dist[w] == UNREACHED && !blocked.is_some_and(|b| b[w]) {
                    self.dist[w] = du + 1;
                    self.order.push(w);
                    self.queue.push_back(w);
                }
            }
        }
    }

    /// Counts (vertices, edges) of the subgraph induced by the last ball.
    pub fn induced_counts(&self, g: &MultiGraph) -> (usize, usize) {
        let mut half = 0;
        for &v in &self.order {
            half += g
                .incident(v)
                .iter()
                .filter(|h| self.dist[h.to] != UNREACHED)
                .count();
        }
        (self.order.len(), half / 2)
    }
}

/// Hop distances from a source set; `UNREACHED` marks unreachable vertices.
pub fn bfs_distances(g: &MultiGraph, sources: &[usize], radius: Option<usize>) -> Vec<usize> {
    let mut s = BfsScratch::new(g.vertex_count());
    s.run(g, sources, radius.unwrap_or(usize::MAX), None);
    s.dist
}

/// Length of the shortest cycle; `None` for forests. Loops have length 1,
/// parallel pairs length 2.
pub fn girth(g: &MultiGraph) -> Option<usize> {
    shortest_cycle_below(g, usize::MAX)
}

/// `girth(g) >= r`, with BFS cut off at depth about r/2.
pub fn girth_at_least(g: &MultiGraph, r: usize) -> bool {
    shortest_cycle_below(g, r).is_none()
}

/// Shortest cycle strictly shorter than `bound`, if any.
fn shortest_cycle_below(g: &MultiGraph, bound: usize) -> Option<usize> {
    let n = g.vertex_count();
    let mut best = bound;
    let mut dist = vec![UNREACHED; n];
    let mut parent_edge = vec![UNREACHED; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if g.degree(root) < 2 {
            continue;
        }
        for &v in &touched {
            dist[v] = UNREACHED;
            parent_edge[v] = UNREACHED;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] >= best {
                break;
            }
            for h in g.incident(u) {
                if h.edge == parent_edge[u] {
                    continue;
                }
                let w = h.to;
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = h.edge;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    if len < best {
                        best = len;
                        if best == 1 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        if best == 1 {
            break;
        }
    }
    (best < bound).then_some(best)
}

/// Metric ball around a vertex set together with its induced edges.
#[derive(Debug, Clone)]
pub struct BfsBall {
    pub centers: Vec<usize>,
    pub radius: usize,
    /// Ball vertices in BFS order.
    pub vertices: Vec<usize>,
    /// Ids of edges with both endpoints in the ball.
    pub edges: Vec<usize>,
    /// `(vertex, distance)` pairs aligned with `vertices`.
    pub distances: Vec<(usize, usize)>,
    pub components: usize,
}

impl BfsBall {
    /// Independent cycle count |E| - |V| + #components.
    pub fn excess(&self) -> usize {
        self.edges.len() + self.components - self.vertices.len()
    }

    pub fn distance_of(&self, v: usize) -> Option<usize> {
        self.distances.iter().find(|(u, _)| *u == v).map(|&(_, d)| d)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }
}

pub fn bfs_ball(g: &MultiGraph, centers: &[usize], radius: usize) -> BfsBall {
    let mut s = BfsScratch::new(g.vertex_count());
    s.run(g, centers, radius, None);
    ball_from_scratch(g, centers, radius, &s)
}

pub(crate) fn ball_from_scratch(
    g: &MultiGraph,
    centers: &[usize],
    radius: usize,
    s: &BfsScratch,
) -> BfsBall {
    let vertices = s.order.clone();
    let mut edges = Vec::new();
    for &v in &vertices {
        for h in g.incident(v) {
            if s.dist[h.to] == UNREACHED {
                continue;
            }
            edges.push(h.edge);
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let components = count_components(g, &vertices, &edges);
    let distances = vertices.iter().map(|&v| (v, s.dist[v])).collect();
    let mut centers = centers.to_vec();
    centers.sort_unstable();
    centers.dedup();
    BfsBall {
        centers,
        radius,
        vertices,
        edges,
        distances,
        components,
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub(crate) fn count_components(g: &MultiGraph, vertices: &[usize], edges: &[usize]) -> usize {
    let index: std::collections::HashMap<usize, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    let mut comps = vertices.len();
    for &e in edges {
        let (a, b) = g.edge(e);
        let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleReport {
    pub tangle_free: bool,
    /// Centers whose radius-r ball has excess at least 2.
    pub offending: Vec<usize>,
}

/// Every radius-`r` ball contains at most one independent cycle.
pub fn is_tangle_free(g: &MultiGraph, r: usize) -> TangleReport {
    let mut s = BfsScratch::new(g.vertex_count());
    let mut offending = Vec::new();
    for v in 0..g.vertex_count() {
        s.run(g, &[v], r, None);
        let (nv, ne) = s.induced_counts(g);
        if ne + 1 > nv + 1 {
            offending.push(v);
        }
    }
    TangleReport {
        tangle_free: offending.is_empty(),
        offending,
    }
}

/// Hop distance between two vertex sets; `None` if disconnected.
pub fn distance(g: &MultiGraph, a: &[usize], b: &[usize]) -> Option<usize> {
    let target = g.mask(b);
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in a {
        if target[s] {
            return Some(0);
        }
        if dist[s] == UNREACHED {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                if target[w] {
                    return Some(dist[w]);
                }
                queue.push_back(w);
            }
        }
    }
    None
}

/// Induced subgraph on the complement of a deleted set.
#[derive(Debug, Clone)]
pub struct Deletion {
    pub graph: MultiGraph,
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

pub fn delete_vertices(g: &MultiGraph, removed: &[usize]) -> Deletion {
    let gone = g.mask(removed);
    let mut old_to_new = vec![None; g.vertex_count()];
    let mut new_to_old = Vec::new();
    for v in 0..g.vertex_count() {
        if !gone[v] {
            old_to_new[v] = Some(new_to_old.len());
            new_to_old.push(v);
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| Some((old_to_new[u]?, old_to_new[v]?)))
        .collect();
    Deletion {
        graph: MultiGraph::from_checked(new_to_old.len(), edges),
        old_to_new,
        new_to_old,
    }
}
