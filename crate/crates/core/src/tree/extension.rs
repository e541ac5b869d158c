use serde::Serialize;

use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;

pub const DEFAULT_VERTEX_CAP: usize = 100_000_000;

/// `g` with rooted (d-1)-ary trees of height `depth` hung off every missing
/// degree. Vertices are ordered base first, then level 1 by (base vertex,
/// stub), then each deeper level by parent; so extending twice equals
/// extending once by the summed depth, labels included.
#[derive(Debug, Clone)]
pub struct TreeExtendedGraph {
    pub base: MultiGraph,
    pub d: usize,
    pub depth: usize,
    pub full: MultiGraph,
    pub level_of: Vec<usize>,
    pub parent_of: Vec<Option<usize>>,
    pub deficiency: Vec<usize>,
    /// Start offset of each level in `full`; `level_start[depth + 1]` is the vertex count.
    pub level_start: Vec<usize>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    levels: &'a [usize],
    base_size: usize,
}

impl TreeExtendedGraph {
    pub fn level_size(&self, l: usize) -> usize {
        self.level_start[l + 1] - self.level_start[l]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.depth).map(|l| self.level_size(l)).collect()
    }

    /// Level `l` vertex range.
    pub fn level(&self, l: usize) -> std::ops::Range<usize> {
        self.level_start[l]..self.level_start[l + 1]
    }

    /// Ancestor of `v` in the base.
    pub fn root_of(&self, mut v: usize) -> usize {
        while let Some(p) = self.parent_of[v] {
            v = p;
        }
        v
    }

    /// Squared mass of `psi` per level.
    pub fn level_masses(&self, psi: &[f64]) -> Vec<f64> {
        (0..=self.depth).map(|l| psi[self.level(l)].iter().map(|x| x * x).sum()).collect()
    }

    pub fn sidecar_json(&self) -> String {
        serde_json::to_string(&Sidecar { levels: &self.level_sizes(), base_size: self.base.vertex_count() })
            .expect("serializable")
    }
}

fn deficiencies(g: &MultiGraph, d: usize) -> Result<Vec<usize>> {
    (0..g.vertex_count())
        .map(|v| {
            d.checked_sub(g.degree(v))
                .ok_or_else(|| ForgeError::Input(format!("vertex {v} has degree {} > {d}", g.degree(v))))
        })
        .collect()
}

/// `|V(T^L g)|`, or `None` on overflow.
pub fn projected_vertex_count(g: &MultiGraph, d: usize, depth: usize) -> Option<usize> {
    let stubs: usize = (0..g.vertex_count()).map(|v| d.saturating_sub(g.degree(v))).sum();
    let mut total = g.vertex_count();
    let mut level = stubs;
    for _ in 0..depth {
        if level == 0 {
            break;
        }
        total = total.checked_add(level)?;
        level = level.checked_mul(d - 1)?;
    }
    Some(total)
}

pub fn augment(g: &MultiGraph, d: usize) -> Result<TreeExtendedGraph> {
    tree_extend(g, d, 1)
}

pub fn tree_extend(g: &MultiGraph, d: usize, depth: usize) -> Result<TreeExtendedGraph> {
    tree_extend_with_cap(g, d, depth, DEFAULT_VERTEX_CAP)
}

pub fn tree_extend_with_cap(g: &MultiGraph, d: usize, depth: usize, cap: usize) -> Result<TreeExtendedGraph> {
    if d < 2 {
        return Err(ForgeError::Parameter("tree extension needs d >= 2".into()));
    }
    let deficiency = deficiencies(g, d)?;
    let total = projected_vertex_count(g, d, depth)
        .filter(|&t| t <= cap)
        .ok_or_else(|| ForgeError::Resource(format!("depth-{depth} extension exceeds {cap} vertices")))?;

    let n0 = g.vertex_count();
    let mut edges = g.edges().to_vec();
    edges.reserve(total - n0);
    let mut level_of = vec![0; n0];
    let mut parent_of = vec![None; n0];
    level_of.reserve(total - n0);
    parent_of.reserve(total - n0);
    let mut level_start = vec![0, n0];

    let mut next = n0;
    let mut push_child = |p: usize, l: usize, edges: &mut Vec<(usize, usize)>| {
        edges.push((p, next));
        level_of.push(l);
        parent_of.push(Some(p));
        next += 1;
    };
    if depth >= 1 {
        for (v, &f) in deficiency.iter().enumerate() {
            for _ in 0..f {
                push_child(v, 1, &mut edges);
            }
        }
        level_start.push(n0 + deficiency.iter().sum::<usize>());
        for l in 2..=depth {
            let (lo, hi) = (level_start[l - 1], level_start[l]);
            for p in lo..hi {
                for _ in 0..d - 1 {
                    push_child(p, l, &mut edges);
                }
            }
            level_start.push(level_start[l] + (hi - lo) * (d - 1));
        }
    }
    debug_assert_eq!(*level_start.last().unwrap(), total);
    Ok(TreeExtendedGraph {
        base: g.clone(),
        d,
        depth,
        full: MultiGraph::from_checked(total, edges),
        level_of,
        parent_of,
        deficiency,
        level_start,
    })
}
