use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::graph::{MultiGraph, UNREACHED};
use crate::tree::TreeExtendedGraph;

/// Result of a spread-set search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadSet {
    pub vertices: Vec<usize>,
    /// Smallest pairwise distance among `vertices`; `None` for fewer than two
    /// vertices or when they lie in different components.
    pub min_dist_achieved: Option<usize>,
    /// Whether `vertices` has the requested size.
    pub complete: bool,
}

/// First-fit scan in vertex order: a vertex is taken when it is farther
/// than `min_dist` from everything taken so far.
pub fn select_spread_set(f0: &MultiGraph, m: usize, min_dist: usize) -> Result<SpreadSet> {
    let n = f0.vertex_count();
    if m > n {
        return Err(ForgeError::Parameter(format!("cannot pick {m} of {n} vertices")));
    }
    let mut near = vec![UNREACHED; n];
    let mut queue = VecDeque::new();
    let mut chosen = Vec::with_capacity(m);
    for v in 0..n {
        if chosen.len() == m {
            break;
        }
        if near[v] != UNREACHED {
            continue;
        }
        chosen.push(v);
        // `near[w]` holds the smallest distance seen from a chosen vertex.
        near[v] = 0;
        queue.push_back((v, 0usize));
        while let Some((u, du)) = queue.pop_front() {
            if du == min_dist {
                continue;
            }
            for h in f0.incident(u) {
                let w = h.to;
                if near[w] == UNREACHED || near[w] > du + 1 {
                    near[w] = du + 1;
                    queue.push_back((w, du + 1));
                }
            }
        }
    }
    Ok(SpreadSet { min_dist_achieved: min_pairwise_distance(f0, &chosen), complete: chosen.len() == m, vertices: chosen })
}

/// Exact minimum distance between distinct members of `set`, by a BFS that
/// grows all members at once and records where two fronts meet.
pub fn min_pairwise_distance(g: &MultiGraph, set: &[usize]) -> Option<usize> {
    if set.len() < 2 {
        return None;
    }
    let n = g.vertex_count();
    let mut dist = vec![UNREACHED; n];
    let mut owner = vec![UNREACHED; n];
    let mut queue = VecDeque::new();
    for &s in set {
        if dist[s] == 0 {
            return Some(0);
        }
        dist[s] = 0;
        owner[s] = s;
        queue.push_back(s);
    }
    let mut best = UNREACHED;
    while let Some(u) = queue.pop_front() {
        if 2 * dist[u] + 1 >= best {
            break;
        }
        for h in g.incident(u) {
            let w = h.to;
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                owner[w] = owner[u];
                queue.push_back(w);
            } else if owner[w] != owner[u] {
                best = best.min(dist[u] + dist[w] + 1);
            }
        }
    }
    (best != UNREACHED).then_some(best)
}

/// Tries thresholds `start, start-1, ..., floor` and keeps the first one
/// that yields `m` vertices.
pub fn spread_with_fallback(f0: &MultiGraph, m: usize, start: usize, floor: usize) -> Result<(SpreadSet, usize)> {
    for t in (floor..=start.max(floor)).rev() {
        let s = select_spread_set(f0, m, t)?;
        if s.complete {
            return Ok((s, t));
        }
    }
    Err(ForgeError::Construction(format!(
        "no {m} vertices at pairwise distance > {floor}; use a larger base or smaller gadgets"
    )))
}

/// Path on `m` vertices, a spectrally inert gadget used to fix leaf-count divisibility.
pub fn path_gadget(m: usize) -> MultiGraph {
    let edges: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
    MultiGraph::from_checked(m, edges)
}

/// Length of the path gadget that brings `leaves` to a multiple of `d`
/// when extended to depth `depth + 1`; zero when none is needed.
pub fn pad_length(leaves: usize, d: usize, depth: usize) -> Result<usize> {
    if leaves % d == 0 {
        return Ok(0);
    }
    let per = |m: usize| ((d - 2) * m + 2) * (d - 1).pow(depth as u32);
    (1..=2 * d)
        .find(|&m| (leaves + per(m)) % d == 0)
        .ok_or_else(|| ForgeError::Parameter(format!("no path gadget makes {leaves} leaves divisible by {d}")))
}

/// Vertex `gadget_vertex` of gadget `gadget` became vertex `vertex` of the patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafLink {
    pub gadget: usize,
    pub leaf: usize,
    pub base_vertex: usize,
}

#[derive(Debug, Clone)]
pub struct PatchedGraph {
    pub graph: MultiGraph,
    /// Patch vertex of every surviving base vertex.
    pub base_map: Vec<Option<usize>>,
    /// Patch vertex offset of each gadget; non-leaf gadget vertices keep their order.
    pub gadget_offsets: Vec<usize>,
    pub links: Vec<LeafLink>,
}

/// Deletes `u` from `f0` and attaches the depth-(L+1) leaves of each
/// gadget, in (gadget, vertex) order, to the freed ports in (u, incidence) order.
pub fn r_patch(f0: &MultiGraph, gadgets: &[TreeExtendedGraph], u: &[usize]) -> Result<PatchedGraph> {
    let d = gadgets.first().map_or(0, |g| g.d);
    if gadgets.iter().any(|g| g.d != d) {
        return Err(ForgeError::Input("gadgets disagree on d".into()));
    }
    let n0 = f0.vertex_count();
    let removed = f0.mask(u);
    let mut ports = Vec::new();
    let mut hit = vec![false; n0];
    for &x in u {
        for h in f0.incident(x) {
            let w = h.to;
            if removed[w] || hit[w] {
                return Err(ForgeError::Consistency(format!("neighbourhoods of deleted vertices overlap at {w}")));
            }
            hit[w] = true;
            ports.push(w);
        }
    }
    let leaves: usize = gadgets.iter().map(|g| g.level_size(g.depth)).sum();
    if leaves != ports.len() {
        return Err(ForgeError::Parameter(format!(
            "{leaves} gadget leaves but {} freed ports; leaf count must equal d times the deleted set",
            ports.len()
        )));
    }
    let mut base_map = vec![None; n0];
    let mut next = 0;
    for v in 0..n0 {
        if !removed[v] {
            base_map[v] = Some(next);
            next += 1;
        }
    }
    let mut edges: Vec<(usize, usize)> = f0
        .edges()
        .iter()
        .filter_map(|&(a, b)| Some((base_map[a]?, base_map[b]?)))
        .collect();
    let mut gadget_offsets = Vec::with_capacity(gadgets.len());
    let mut links = Vec::with_capacity(leaves);
    let mut port = 0;
    for (gi, g) in gadgets.iter().enumerate() {
        let inner = g.level_start[g.depth];
        gadget_offsets.push(next);
        for &(a, b) in g.full.edges() {
            match (a < inner, b < inner) {
                (true, true) => edges.push((a + next, b + next)),
                (true, false) | (false, true) => {
                    let (keep, leaf) = if a < inner { (a, b) } else { (b, a) };
                    let w = ports[port];
                    port += 1;
                    edges.push((keep + next, base_map[w].expect("port survives")));
                    links.push(LeafLink { gadget: gi, leaf, base_vertex: w });
                }
                (false, false) => return Err(ForgeError::Consistency("edge between two leaves".into())),
            }
        }
        next += inner;
    }
    let graph = MultiGraph::from_edge_list(next, &edges)?;
    if d > 0 && !graph.is_regular(d) {
        return Err(ForgeError::Consistency("patched graph is not regular".into()));
    }
    Ok(PatchedGraph { graph, base_map, gadget_offsets, links })
}
