use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use num_complex::Complex64;

use super::stieltjes::check_domain;
use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;

const PIVOT_FLOOR: f64 = 1e-12;

fn pivot(x: Complex64) -> Result<Complex64> {
    if x.norm() < PIVOT_FLOOR {
        return Err(ForgeError::Numeric(format!("pivot {x} below {PIVOT_FLOOR}")));
    }
    Ok(1.0 / x)
}

/// Diagonal resolvents `S_0, ..., S_ell` along a root-to-leaf path of the
/// depth-`ell` (d-1)-ary tree whose leaves carry boundary weight `delta`.
pub fn tree_resolvents(delta: Complex64, z: Complex64, ell: usize) -> Result<Vec<Complex64>> {
    check_domain(z)?;
    let mut s = vec![Complex64::default(); ell + 1];
    s[ell] = pivot(-z - delta)?;
    for k in (0..ell).rev() {
        s[k] = pivot(-z - s[k + 1])?;
    }
    Ok(s)
}

/// Root entry of the depth-`ell` (d-1)-ary tree extension with boundary weight `delta`.
pub fn y_ell(delta: Complex64, z: Complex64, _d: usize, ell: usize) -> Result<Complex64> {
    Ok(tree_resolvents(delta, z, ell)?[0])
}

/// Root entry of the depth-`ell` d-regular ball with boundary weight `delta`.
pub fn x_ell(delta: Complex64, z: Complex64, d: usize, ell: usize) -> Result<Complex64> {
    let s1 = if ell == 0 { delta } else { tree_resolvents(delta, z, ell)?[1] };
    pivot(-z - (d as f64 / (d as f64 - 1.0)) * s1)
}

/// Squared root-to-leaf entry `P_ol^2` of the depth-`ell` (d-1)-ary tree
/// with boundary weight `delta`.
pub fn root_leaf_sq(delta: Complex64, z: Complex64, d: usize, ell: usize) -> Result<Complex64> {
    let s = tree_resolvents(delta, z, ell)?;
    let prod: Complex64 = s.iter().map(|x| x * x).product();
    Ok(prod / (d as f64 - 1.0).powi(ell as i32))
}

/// `(-z + H - diag(w)/(d-1))` with `H = A/sqrt(d-1)`.
pub(crate) fn shifted_operator(h: &MultiGraph, d: usize, z: Complex64, weights: &[Complex64]) -> Mat<Complex64> {
    let n = h.vertex_count();
    let s = 1.0 / (d as f64 - 1.0).sqrt();
    let mut m = Mat::<Complex64>::zeros(n, n);
    for v in 0..n {
        m[(v, v)] = -z - weights[v] / (d as f64 - 1.0);
    }
    for &(u, v) in h.edges() {
        let w = if u == v { 2.0 * s } else { s };
        m[(u, v)] += w;
        if u != v {
            m[(v, u)] += w;
        }
    }
    m
}

pub(crate) fn invert(m: &Mat<Complex64>) -> Result<Mat<Complex64>> {
    let inv = m.partial_piv_lu().inverse();
    for j in 0..inv.ncols() {
        for i in 0..inv.nrows() {
            if !inv[(i, j)].is_finite() {
                return Err(ForgeError::Numeric("singular Green's matrix".into()));
            }
        }
    }
    Ok(inv)
}

/// Green's matrix of `h` extended by ghost weight `delta` on `ghost[v]` missing edges per vertex.
pub fn ext_green(h: &MultiGraph, ghost: &[usize], delta: Complex64, z: Complex64, d: usize) -> Result<Mat<Complex64>> {
    check_domain(z)?;
    if ghost.len() != h.vertex_count() {
        return Err(ForgeError::Input("ghost vector length differs from vertex count".into()));
    }
    let w: Vec<Complex64> = ghost.iter().map(|&g| delta * g as f64).collect();
    invert(&shifted_operator(h, d, z, &w))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::greens::stieltjes::{m_d, m_sc};

    pub(crate) fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Depth-`ell` tree whose root has `root_children` children and every
    /// other internal vertex `d - 1`; returns the tree and its ghost counts.
    pub(crate) fn truncated_tree(d: usize, root_children: usize, ell: usize) -> (MultiGraph, Vec<usize>, Vec<usize>) {
        let mut edges = Vec::new();
        let mut depth = vec![0usize];
        let mut frontier = vec![0usize];
        for l in 1..=ell {
            let mut next = Vec::new();
            for &u in &frontier {
                let kids = if u == 0 { root_children } else { d - 1 };
                for _ in 0..kids {
                    let v = depth.len();
                    depth.push(l);
                    edges.push((u, v));
                    next.push(v);
                }
            }
            frontier = next;
        }
        let n = depth.len();
        let g = MultiGraph::from_edge_list(n, &edges).unwrap();
        let ghost = (0..n)
            .map(|v| if depth[v] == ell { if v == 0 { root_children } else { d - 1 } } else { 0 })
            .collect();
        (g, ghost, depth)
    }

    #[test]
    fn fixed_points() {
        for i in 0..20 {
            let z = c(-3.0 + 0.3 * i as f64, 0.02 + 0.1 * (i % 5) as f64);
            let m = m_sc(z).unwrap();
            for d in [3, 4, 7] {
                let md = m_d(z, d).unwrap();
                for ell in 0..=40 {
                    assert!((y_ell(m, z, d, ell).unwrap() - m).norm() < 1e-12);
                    assert!((x_ell(m, z, d, ell).unwrap() - md).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn recursion_matches_dense_tree() {
        let z = c(0.7, 0.3);
        let delta = c(-0.2, 0.45);
        for d in [3, 4] {
            let (g, ghost, depth) = truncated_tree(d, d - 1, 5);
            let gm = ext_green(&g, &ghost, delta, z, d).unwrap();
            assert!((gm[(0, 0)] - y_ell(delta, z, d, 5).unwrap()).norm() < 1e-10);
            let leaf = depth.iter().position(|&l| l == 5).unwrap();
            let p2 = gm[(0, leaf)] * gm[(0, leaf)];
            assert!((p2 - root_leaf_sq(delta, z, d, 5).unwrap()).norm() < 1e-10);
            let (g, ghost, _) = truncated_tree(d, d, 5);
            let gm = ext_green(&g, &ghost, delta, z, d).unwrap();
            assert!((gm[(0, 0)] - x_ell(delta, z, d, 5).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn single_vertex_ghosts() {
        let z = c(0.4, 0.8);
        let g = MultiGraph::empty(1);
        let m = m_sc(z).unwrap();
        let gd = ext_green(&g, &[3], m, z, 3).unwrap();
        assert!((gd[(0, 0)] - m_d(z, 3).unwrap()).norm() < 1e-14);
        let gs = ext_green(&g, &[2], m, z, 3).unwrap();
        assert!((gs[(0, 0)] - m).norm() < 1e-14);
        assert!((y_ell(m, z, 3, 0).unwrap() - gs[(0, 0)]).norm() < 1e-15);
    }

    #[test]
    fn second_order_expansion() {
        let mut worst: f64 = 0.0;
        for z in [c(0.5, 0.5), c(-1.2, 0.3), c(2.3, 0.2)] {
            let m = m_sc(z).unwrap();
            for ell in [1usize, 3, 6] {
                for k in 1..6 {
                    let h = 1e-2 / (ell as f64 * k as f64);
                    let delta = m + c(h, -0.5 * h);
                    let dm = delta - m;
                    let p = 2 * ell as i32 + 2;
                    let approx = m + m.powi(p) * dm + m.powi(p + 1) * (1.0 - m.powi(p)) / (1.0 - m * m) * dm * dm;
                    let err = (y_ell(delta, z, 3, ell).unwrap() - approx).norm();
                    worst = worst.max(err / ((ell * ell) as f64 * dm.norm().powi(3)));
                }
            }
        }
        assert!(worst < 50.0, "{worst}");
    }
}
