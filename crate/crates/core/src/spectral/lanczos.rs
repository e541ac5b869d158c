use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;
use crate::rng::RngSpec;

/// A real symmetric linear operator.
pub trait SymOp {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl SymOp for MultiGraph {
    fn dim(&self) -> usize {
        self.vertex_count()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.adjacency_apply(x, y)
    }
}

impl SymOp for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// `-op`, for the bottom of the spectrum.
pub struct Negated<'a, T: SymOp + ?Sized>(pub &'a T);

impl<T: SymOp + ?Sized> SymOp for Negated<'_, T> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply(x, y);
        y.iter_mut().for_each(|v| *v = -*v);
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    pub k: usize,
    /// Krylov basis size before a restart; 0 picks `max(2k + 10, 24)`.
    pub basis_size: usize,
    /// Absolute tolerance on `||A y - theta y||`.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl LanczosOptions {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            basis_size: 0,
            tol: 1e-10,
            max_restarts: 2000,
            seed: 0x5eed,
        }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn basis_size(mut self, m: usize) -> Self {
        self.basis_size = m;
        self
    }
}

#[derive(Debug, Clone)]
pub struct EigenPairs {
    /// Descending.
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// True residual norms `||A y - theta y||`.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
    pub restarts: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Two passes of classical Gram-Schmidt against `basis` and `deflate`,
/// returning the coefficients of the first pass on `basis`.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>], deflate: &[Vec<f64>]) -> Vec<f64> {
    let mut first = vec![0.0; basis.len()];
    for pass in 0..2 {
        for q in deflate {
            let c = dot(q, w);
            axpy(-c, q, w);
        }
        for (i, q) in basis.iter().enumerate() {
            let c = dot(q, w);
            axpy(-c, q, w);
            if pass == 0 {
                first[i] = c;
            } else {
                first[i] += c;
            }
        }
    }
    first
}

fn random_unit(n: usize, rng: &mut impl Rng, basis: &[Vec<f64>], deflate: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let before = norm(&v);
        orthogonalize(&mut v, basis, deflate);
        let nv = norm(&v);
        if nv > 1e-8 * before {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

/// Largest `k` eigenpairs of `op` restricted to the orthogonal complement of
/// `deflate` (which must be orthonormal). Thick-restart Lanczos with full
/// reorthogonalization.
pub fn lanczos_largest<T: SymOp + ?Sized>(op: &T, opts: &LanczosOptions, deflate: &[Vec<f64>]) -> Result<EigenPairs> {
    let n = op.dim();
    let avail = n.saturating_sub(deflate.len());
    if opts.k == 0 || opts.k > avail {
        return Err(ForgeError::Parameter(format!(
            "requested {} eigenpairs from an operator of effective dimension {avail}",
            opts.k
        )));
    }
    let k = opts.k;
    let m = if opts.basis_size == 0 { (2 * k + 10).max(24) } else { opts.basis_size.max(k + 2) };
    let m = m.min(avail);
    let mut rng = RngSpec::new(opts.seed, 0x1a2c).rng();

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut t = DMatrix::<f64>::zeros(m, m);
    basis.push(random_unit(n, &mut rng, &basis, deflate).ok_or_else(|| {
        ForgeError::Numeric("could not draw a start vector outside the deflation space".into())
    })?);
    let mut matvecs = 0;
    let mut restarts = 0;
    let mut w = vec![0.0; n];
    let mut last_beta;

    loop {
        let start = basis.len() - 1;
        last_beta = 0.0;
        for j in start..m {
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            let h = orthogonalize(&mut w, &basis, deflate);
            for (i, &c) in h.iter().enumerate() {
                t[(i, j)] = c;
                t[(j, i)] = c;
            }
            let beta = norm(&w);
            last_beta = beta;
            if j + 1 == m {
                break;
            }
            let scale = h.iter().map(|c| c.abs()).fold(1.0, f64::max);
            if beta > 1e-12 * scale {
                basis.push(w.iter().map(|x| x / beta).collect());
            } else {
                last_beta = 0.0;
                match random_unit(n, &mut rng, &basis, deflate) {
                    Some(v) => basis.push(v),
                    None => break,
                }
            }
        }
        let size = basis.len();
        let sub = t.view((0, 0), (size, size)).into_owned();
        let eig = SymmetricEigen::new(sub);
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let estimates: Vec<f64> = order
            .iter()
            .map(|&i| (last_beta * eig.eigenvectors[(size - 1, i)]).abs())
            .collect();
        let kk = k.min(size);
        let done = estimates[..kk].iter().all(|&r| r <= opts.tol) || size == avail;
        let last_estimates: Vec<f64> = order.iter().take(kk).map(|&i| eig.eigenvalues[i]).collect();

        let keep = if done { kk } else { (k + (size - k) / 2).min(size - 1).max(k) };
        let ritz: Vec<Vec<f64>> = order[..keep]
            .iter()
            .map(|&c| {
                let mut y = vec![0.0; n];
                for (r, q) in basis.iter().enumerate() {
                    axpy(eig.eigenvectors[(r, c)], q, &mut y);
                }
                y
            })
            .collect();
        if done {
            let values: Vec<f64> = order[..kk].iter().map(|&i| eig.eigenvalues[i]).collect();
            let mut residuals = Vec::with_capacity(kk);
            let mut ay = vec![0.0; n];
            for (y, &theta) in ritz.iter().zip(&values) {
                op.apply(y, &mut ay);
                axpy(-theta, y, &mut ay);
                residuals.push(norm(&ay));
            }
            return Ok(EigenPairs { values, vectors: ritz, residuals, matvecs, restarts });
        }
        if restarts >= opts.max_restarts {
            return Err(ForgeError::NotConverged {
                what: "lanczos",
                iterations: matvecs,
                estimate: last_estimates,
            });
        }
        restarts += 1;
        t.fill(0.0);
        for (i, &c) in order[..keep].iter().enumerate() {
            t[(i, i)] = eig.eigenvalues[c];
        }
        basis = ritz;
        let next = if last_beta > 0.0 {
            let mut r: Vec<f64> = w.clone();
            orthogonalize(&mut r, &basis, deflate);
            let nr = norm(&r);
            (nr > 1e-10 * last_beta).then(|| r.into_iter().map(|x| x / nr).collect())
        } else {
            None
        };
        match next.or_else(|| random_unit(n, &mut rng, &basis, deflate)) {
            Some(v) => basis.push(v),
            None => {
                return Err(ForgeError::Numeric("Krylov space exhausted during restart".into()));
            }
        }
    }
}

/// Smallest `k` eigenpairs, ascending.
pub fn lanczos_smallest<T: SymOp + ?Sized>(op: &T, opts: &LanczosOptions, deflate: &[Vec<f64>]) -> Result<EigenPairs> {
    let mut r = lanczos_largest(&Negated(op), opts, deflate)?;
    r.values.iter_mut().for_each(|v| *v = -*v);
    Ok(r)
}

/// Eigenvalues of a small operator by dense decomposition, descending.
pub fn dense_spectrum<T: SymOp + ?Sized>(op: &T) -> Vec<f64> {
    let n = op.dim();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        op.apply(&e, &mut col);
        e[j] = 0.0;
        for i in 0..n {
            a[(i, j)] = col[i];
        }
    }
    let a = (&a + a.transpose()) * 0.5;
    let mut v: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::sample_simple_configuration_model;

    #[test]
    fn k4_top_two() {
        let r = lanczos_largest(&MultiGraph::complete(4), &LanczosOptions::new(2), &[]).unwrap();
        assert!((r.values[0] - 3.0).abs() < 1e-10);
        assert!((r.values[1] + 1.0).abs() < 1e-10);
    }

    #[test]
    fn star_top() {
        let g = MultiGraph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = lanczos_largest(&g, &LanczosOptions::new(1), &[]).unwrap();
        assert!((r.values[0] - 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn regular_graph_constant_vector() {
        let (g, _) = sample_simple_configuration_model(500, 3, RngSpec::from_seed(7), 100).unwrap();
        let r = lanczos_largest(&g, &LanczosOptions::new(3), &[]).unwrap();
        assert!((r.values[0] - 3.0).abs() < 1e-10);
        assert!(r.residuals.iter().all(|&x| x < 1e-9), "{:?}", r.residuals);
        let y = &r.vectors[0];
        let mean = y.iter().sum::<f64>() / 500.0;
        assert!(y.iter().all(|v| (v - mean).abs() < 1e-8));
    }

    #[test]
    fn matches_dense_and_deflation() {
        let (g, _) = sample_simple_configuration_model(120, 4, RngSpec::from_seed(3), 100).unwrap();
        let dense = dense_spectrum(&g);
        let r = lanczos_largest(&g, &LanczosOptions::new(4), &[]).unwrap();
        for i in 0..4 {
            assert!((r.values[i] - dense[i]).abs() < 1e-8);
        }
        let c = vec![1.0 / (120f64).sqrt(); 120];
        let r2 = lanczos_largest(&g, &LanczosOptions::new(1), &[c]).unwrap();
        assert!((r2.values[0] - dense[1]).abs() < 1e-8);
        let low = lanczos_smallest(&g, &LanczosOptions::new(1), &[]).unwrap();
        assert!((low.values[0] - dense[119]).abs() < 1e-8);
    }

    #[test]
    fn tiny_operator_full_space() {
        let g = MultiGraph::from_edge_list(2, &[(0, 1)]).unwrap();
        let r = lanczos_largest(&g, &LanczosOptions::new(2), &[]).unwrap();
        assert!((r.values[0] - 1.0).abs() < 1e-12 && (r.values[1] + 1.0).abs() < 1e-12);
    }
}
