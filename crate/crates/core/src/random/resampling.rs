use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::graph::metrics::{ball_from_scratch, BfsScratch};
use crate::graph::{MultiGraph, UNREACHED};
use crate::rng::RngSpec;

/// Oriented boundary edge `(l, a)` of the ball, `l` inside and `a` outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub l: usize,
    pub a: usize,
    pub edge: usize,
}

/// Oriented partner edge `(b, c)` with both endpoints off the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartnerEdge {
    pub b: usize,
    pub c: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResamplingData {
    pub center: usize,
    pub ell: usize,
    /// Radius used by the switch indicator (a quarter of the tree radius).
    pub quarter_radius: usize,
    /// Vertex set of the ball, sorted.
    pub ball: Vec<usize>,
    pub boundary: Vec<BoundaryEdge>,
    pub partners: Vec<PartnerEdge>,
    /// Admissible indices, increasing.
    pub admissible: Vec<usize>,
}

impl ResamplingData {
    pub fn mu(&self) -> usize {
        self.boundary.len()
    }

    fn triple(&self, alpha: usize) -> [usize; 3] {
        let (e, p) = (self.boundary[alpha], self.partners[alpha]);
        [e.a, p.b, p.c]
    }
}

/// Mask of vertices excluded from the working graph: outside `v0`, plus the ball.
fn blocked_mask(n: usize, v0: Option<&[bool]>, ball: &[usize]) -> Vec<bool> {
    let mut blocked: Vec<bool> = match v0 {
        Some(m) => m.iter().map(|&x| !x).collect(),
        None => vec![false; n],
    };
    for &v in ball {
        blocked[v] = true;
    }
    blocked
}

/// Boundary edges and partner draws around `o`; `v0` restricts the working
/// vertex set (all vertices when `None`).
pub fn build_resampling_data(
    g: &MultiGraph,
    v0: Option<&[bool]>,
    o: usize,
    ell: usize,
    quarter_radius: usize,
    rng: RngSpec,
) -> Result<ResamplingData> {
    let n = g.vertex_count();
    if o >= n {
        return Err(ForgeError::Input(format!("center {o} out of range")));
    }
    if v0.is_some_and(|m| m.len() != n) {
        return Err(ForgeError::Input("vertex mask length differs from vertex count".into()));
    }
    if v0.is_some_and(|m| !m[o]) {
        return Err(ForgeError::Input(format!("center {o} is not in the working vertex set")));
    }
    let outside: Option<Vec<bool>> = v0.map(|m| m.iter().map(|&x| !x).collect());
    let mut s = BfsScratch::new(n);
    s.run(g, &[o], ell, outside.as_deref());

    let mut boundary = Vec::new();
    for &l in &s.order {
        if s.dist[l] != ell {
            continue;
        }
        for h in g.incident(l) {
            let a = h.to;
            if s.dist[a] == UNREACHED && v0.is_none_or(|m| m[a]) {
                boundary.push(BoundaryEdge { l, a, edge: h.edge });
            }
        }
    }
    let mut ball = s.order.clone();
    ball.sort_unstable();

    let blocked = blocked_mask(n, v0, &ball);
    let eligible: Vec<usize> = (0..g.edge_count())
        .filter(|&e| {
            let (u, v) = g.edge(e);
            !blocked[u] && !blocked[v]
        })
        .collect();
    if eligible.is_empty() {
        return Err(ForgeError::Sampling(
            "no oriented edges with both endpoints outside the ball".into(),
        ));
    }
    let mut r = rng.rng();
    let partners = boundary
        .iter()
        .map(|_| {
            let edge = eligible[r.random_range(0..eligible.len())];
            let (u, v) = g.edge(edge);
            if r.random_bool(0.5) {
                PartnerEdge { b: u, c: v, edge }
            } else {
                PartnerEdge { b: v, c: u, edge }
            }
        })
        .collect();

    let mut data = ResamplingData {
        center: o,
        ell,
        quarter_radius,
        ball,
        boundary,
        partners,
        admissible: Vec::new(),
    };
    data.admissible = admissible_set(g, v0, &data);
    Ok(data)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn indicator_with(
    g: &MultiGraph,
    data: &ResamplingData,
    alpha: usize,
    blocked: &[bool],
    s: &mut BfsScratch,
) -> bool {
    let triple = data.triple(alpha);
    let rq = data.quarter_radius;
    if triple.iter().any(|&v| blocked[v]) {
        return false;
    }
    s.run(g, &triple, rq, Some(blocked));

    // (2) other triples farther than rq
    for beta in 0..data.mu() {
        if beta != alpha && data.triple(beta).iter().any(|&v| s.dist[v] != UNREACHED) {
            return false;
        }
    }

    // (1) ball plus the edge {a, b} is a tree
    let ball = ball_from_scratch(g, &triple, rq, s);
    let nv = ball.vertices.len();
    if ball.edges.len() + 2 != nv {
        return false;
    }
    let index: std::collections::HashMap<usize, usize> =
        ball.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..nv).collect();
    let extra = (triple[0], triple[1]);
    for (u, v) in ball.edges.iter().map(|&e| g.edge(e)).chain(std::iter::once(extra)) {
        let (ru, rv) = (find(&mut parent, index[&u]), find(&mut parent, index[&v]));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
    }
    true
}

fn admissible_set(g: &MultiGraph, v0: Option<&[bool]>, data: &ResamplingData) -> Vec<usize> {
    let blocked = blocked_mask(g.vertex_count(), v0, &data.ball);
    let mut s = BfsScratch::new(g.vertex_count());
    (0..data.mu())
        .filter(|&a| indicator_with(g, data, a, &blocked, &mut s))
        .collect()
}

/// Indicator that switch `alpha` is admissible: the quarter-radius ball of
/// `{a, b, c}` off the ball, plus the edge `{a, b}`, is a tree, and no other
/// triple comes within that radius.
pub fn switch_indicator(g: &MultiGraph, v0: Option<&[bool]>, data: &ResamplingData, alpha: usize) -> bool {
    let blocked = blocked_mask(g.vertex_count(), v0, &data.ball);
    let mut s = BfsScratch::new(g.vertex_count());
    indicator_with(g, data, alpha, &blocked, &mut s)
}

fn ball_signature(g: &MultiGraph, v0: Option<&[bool]>, o: usize, ell: usize) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let outside: Option<Vec<bool>> = v0.map(|m| m.iter().map(|&x| !x).collect());
    let mut s = BfsScratch::new(g.vertex_count());
    s.run(g, &[o], ell, outside.as_deref());
    let ball = ball_from_scratch(g, &[o], ell, &s);
    let mut dist = ball.distances.clone();
    dist.sort_unstable();
    let mut edges: Vec<(usize, usize)> = ball.edges.iter().map(|&e| g.edge(e)).collect();
    edges.sort_unstable();
    (dist, edges)
}

/// Performs every admissible switch: `(l, a), (b, c)` becomes `{l, c}, {a, b}`.
/// Edge ids are preserved, so the switched edges occupy the old slots.
pub fn apply_local_resampling(g: &MultiGraph, v0: Option<&[bool]>, data: &ResamplingData) -> Result<MultiGraph> {
    let m = g.edge_count();
    let mut edges = g.edges().to_vec();
    let mut touched = vec![false; m];
    for &alpha in &data.admissible {
        let (e, p) = (data.boundary[alpha], data.partners[alpha]);
        if e.edge >= m || p.edge >= m {
            return Err(ForgeError::Consistency(format!("switch {alpha} references a missing edge")));
        }
        let same = |id: usize, x: usize, y: usize| {
            let (u, v) = g.edge(id);
            (u, v) == (x.min(y), x.max(y))
        };
        if !same(e.edge, e.l, e.a) || !same(p.edge, p.b, p.c) {
            return Err(ForgeError::Consistency(format!("switch {alpha} does not match the graph")));
        }
        if touched[e.edge] || touched[p.edge] || e.edge == p.edge {
            return Err(ForgeError::Consistency(format!("switch {alpha} reuses an edge")));
        }
        touched[e.edge] = true;
        touched[p.edge] = true;
        edges[e.edge] = (e.l.min(p.c), e.l.max(p.c));
        edges[p.edge] = (e.a.min(p.b), e.a.max(p.b));
    }
    let out = MultiGraph::from_checked(g.vertex_count(), edges);
    if ball_signature(g, v0, data.center, data.ell) != ball_signature(&out, v0, data.center, data.ell) {
        return Err(ForgeError::Consistency("switching altered the ball around the center".into()));
    }
    Ok(out)
}

/// Resampling data for the switched graph that undoes `data`: a switched
/// index `alpha` gets boundary `(l, c)` and partner `(b, a)`.
pub fn reverse_resampling_data(
    switched: &MultiGraph,
    v0: Option<&[bool]>,
    data: &ResamplingData,
) -> Result<ResamplingData> {
    let mut rev = data.clone();
    for &alpha in &data.admissible {
        let (e, p) = (data.boundary[alpha], data.partners[alpha]);
        rev.boundary[alpha] = BoundaryEdge { l: e.l, a: p.c, edge: e.edge };
        rev.partners[alpha] = PartnerEdge { b: p.b, c: e.a, edge: p.edge };
    }
    let recomputed = admissible_set(switched, v0, &rev);
    if recomputed != data.admissible {
        return Err(ForgeError::Consistency(format!(
            "admissible set changed under the switch: {:?} vs {:?}",
            data.admissible, recomputed
        )));
    }
    Ok(rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::sample_configuration_model;

    fn cycle(n: usize) -> MultiGraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_edge_list(n, &e).unwrap()
    }

    #[test]
    fn ell_zero_boundary_is_incident_edges() {
        let g = sample_configuration_model(40, 3, RngSpec::from_seed(3)).unwrap();
        let o = (0..40).find(|&v| g.incident(v).iter().all(|h| h.to != v)).unwrap();
        let d = build_resampling_data(&g, None, o, 0, 1, RngSpec::from_seed(1)).unwrap();
        assert_eq!(d.ball, vec![o]);
        assert_eq!(d.mu(), 3);
        for b in &d.boundary {
            assert_eq!(b.l, o);
        }
    }

    #[test]
    fn whole_graph_ball_has_no_partners() {
        let g = cycle(6);
        let r = build_resampling_data(&g, None, 0, 3, 1, RngSpec::from_seed(1));
        assert!(matches!(r, Err(ForgeError::Sampling(_))));
    }

    #[test]
    fn empty_admissible_set_leaves_graph() {
        let g = sample_configuration_model(30, 3, RngSpec::from_seed(8)).unwrap();
        let mut d = build_resampling_data(&g, None, 0, 1, 1, RngSpec::from_seed(2)).unwrap();
        d.admissible.clear();
        assert_eq!(apply_local_resampling(&g, None, &d).unwrap(), g);
    }

    #[test]
    fn planted_short_cycle_blocks_switch() {
        // center 0 on a long path; a triangle hangs off the boundary vertex 2
        let mut e: Vec<(usize, usize)> = (0..20).map(|i| (i, i + 1)).collect();
        e.extend([(2, 30), (30, 31), (31, 2)]);
        e.extend((40..60).map(|i| (i, i + 1)));
        let g = MultiGraph::from_edge_list(61, &e).unwrap();
        let mut d = build_resampling_data(&g, None, 0, 1, 1, RngSpec::from_seed(1)).unwrap();
        assert_eq!(d.boundary.len(), 1);
        d.partners[0] = PartnerEdge { b: 50, c: 51, edge: g.edges().iter().position(|&x| x == (50, 51)).unwrap() };
        assert!(!switch_indicator(&g, None, &d, 0));
        // same partner with the triangle removed is admissible
        let e2: Vec<_> = e.iter().copied().filter(|&(u, _)| u != 31 && u != 30).filter(|&x| x != (2, 30)).collect();
        let g2 = MultiGraph::from_edge_list(61, &e2).unwrap();
        d.partners[0].edge = g2.edges().iter().position(|&x| x == (50, 51)).unwrap();
        d.boundary[0].edge = g2.edges().iter().position(|&x| x == (1, 2)).unwrap();
        assert!(switch_indicator(&g2, None, &d, 0));
    }

    #[test]
    fn nearby_triples_block_each_other() {
        // star center 0 with two boundary edges, partners adjacent to each other
        let mut e = vec![(0, 1), (0, 2)];
        e.extend((1..40).map(|i| (i + 1, i + 2)).filter(|&(u, _)| u != 2));
        e.extend([(1, 100), (2, 200)]);
        e.extend((100..110).map(|i| (i, i + 1)));
        e.extend((200..210).map(|i| (i, i + 1)));
        e.extend((300..320).map(|i| (i, i + 1)));
        let g = MultiGraph::from_edge_list(321, &e).unwrap();
        let mut d = build_resampling_data(&g, None, 0, 0, 1, RngSpec::from_seed(1)).unwrap();
        assert_eq!(d.mu(), 2);
        let id = |a: usize, b: usize| g.edges().iter().position(|&x| x == (a, b)).unwrap();
        d.partners[0] = PartnerEdge { b: 305, c: 306, edge: id(305, 306) };
        d.partners[1] = PartnerEdge { b: 307, c: 308, edge: id(307, 308) };
        assert!(!switch_indicator(&g, None, &d, 0));
        d.partners[1] = PartnerEdge { b: 315, c: 316, edge: id(315, 316) };
        assert!(switch_indicator(&g, None, &d, 0));
        assert!(switch_indicator(&g, None, &d, 1));
    }

    #[test]
    fn switch_preserves_degrees_and_reverses() {
        for seed in 0..40 {
            let g = sample_configuration_model(200, 3, RngSpec::new(seed, 0)).unwrap();
            let d = build_resampling_data(&g, None, 0, 2, 1, RngSpec::new(seed, 1)).unwrap();
            let h = apply_local_resampling(&g, None, &d).unwrap();
            assert_eq!(h.degrees(), g.degrees());
            let rev = reverse_resampling_data(&h, None, &d).unwrap();
            let back = apply_local_resampling(&h, None, &rev).unwrap();
            assert_eq!(back, g);
        }
    }
}
