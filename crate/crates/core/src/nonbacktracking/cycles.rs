use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;

pub const CENSUS_WORK_CAP: f64 = 2e9;

/// k-cycles counted as ordered tuples of edges: every rotation and both
/// orientations are distinct, so a geometric cycle counts `2k` times.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleCensus {
    pub k: usize,
    pub ordered_count: u128,
    pub geometric_count: u128,
    /// `(d-1)^k` with `d` the maximum degree.
    pub expectation_reference: f64,
}

fn check_work(g: &MultiGraph, k: usize) -> Result<()> {
    let branch = g.max_degree().saturating_sub(1).max(1) as f64;
    let work = g.vertex_count() as f64 * g.max_degree().max(1) as f64 * branch.powi(k as i32 - 1);
    if work > CENSUS_WORK_CAP {
        return Err(ForgeError::Resource(format!(
            "cycle enumeration of length {k} needs about {work:.2e} steps"
        )));
    }
    Ok(())
}

/// Enumerates closed nonbacktracking walks with distinct vertices of length
/// `k` from `start`, calling `visit` with the edge ids of each.
fn walk_cycles(g: &MultiGraph, k: usize, start: usize, on_path: &mut [bool], path: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    fn rec(
        g: &MultiGraph,
        k: usize,
        start: usize,
        u: usize,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let last = path.last().copied();
        for h in g.incident(u) {
            if Some(h.edge) == last {
                continue;
            }
            if path.len() + 1 == k {
                if h.to == start {
                    path.push(h.edge);
                    visit(path);
                    path.pop();
                }
            } else if !on_path[h.to] {
                on_path[h.to] = true;
                path.push(h.edge);
                rec(g, k, start, h.to, on_path, path, visit);
                path.pop();
                on_path[h.to] = false;
            }
        }
    }
    on_path[start] = true;
    rec(g, k, start, start, on_path, path, visit);
    on_path[start] = false;
}

pub fn count_k_cycles(g: &MultiGraph, k: usize) -> Result<CycleCensus> {
    if k == 0 {
        return Err(ForgeError::Parameter("cycle length must be at least 1".into()));
    }
    check_work(g, k)?;
    let mut on_path = vec![false; g.vertex_count()];
    let mut path = Vec::with_capacity(k);
    let mut ordered: u128 = 0;
    for s in 0..g.vertex_count() {
        walk_cycles(g, k, s, &mut on_path, &mut path, &mut |_| ordered += 1);
    }
    let d = g.max_degree() as f64;
    Ok(CycleCensus {
        k,
        ordered_count: ordered,
        geometric_count: ordered / (2 * k as u128),
        expectation_reference: (d - 1.0).powi(k as i32),
    })
}

/// Pairs of k-cycles by the number of shared edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntersectionCensus {
    pub k: usize,
    pub geometric_cycles: usize,
    /// Ordered pairs of geometric cycles (a cycle paired with itself
    /// included) sharing exactly `i` edges, indexed by `i` in `0..=k`.
    pub geometric_pairs: Vec<u128>,
    /// `geometric_pairs` scaled by `2k * k`: ordered cycles on one side,
    /// rotations on the other, so that the full-overlap entry is `k` times
    /// the ordered cycle count.
    pub pair_counts: Vec<u128>,
}

pub fn edge_intersection_census(g: &MultiGraph, k: usize) -> Result<IntersectionCensus> {
    if k == 0 {
        return Err(ForgeError::Parameter("cycle length must be at least 1".into()));
    }
    check_work(g, k)?;
    let mut cycles: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut on_path = vec![false; g.vertex_count()];
    let mut path = Vec::with_capacity(k);
    for s in 0..g.vertex_count() {
        walk_cycles(g, k, s, &mut on_path, &mut path, &mut |edges| {
            let mut e = edges.to_vec();
            e.sort_unstable();
            cycles.insert(e);
        });
    }
    let cycles: Vec<Vec<usize>> = cycles.into_iter().collect();
    let m = cycles.len();
    if (m as f64).powi(2) > CENSUS_WORK_CAP {
        return Err(ForgeError::Resource(format!("{m} cycles is too many to pair")));
    }
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for &e in c {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut geometric_pairs = vec![0u128; k + 1];
    let mut shared = vec![0usize; m];
    for c in &cycles {
        let mut touched = Vec::new();
        for e in c {
            for &j in &by_edge[e] {
                if shared[j] == 0 {
                    touched.push(j);
                }
                shared[j] += 1;
            }
        }
        for &j in &touched {
            geometric_pairs[shared[j]] += 1;
            shared[j] = 0;
        }
        geometric_pairs[0] += (m - touched.len()) as u128;
    }
    let scale = 2 * (k as u128) * (k as u128);
    let pair_counts = geometric_pairs.iter().map(|&c| c * scale).collect();
    Ok(IntersectionCensus { k, geometric_cycles: m, geometric_pairs, pair_counts })
}
