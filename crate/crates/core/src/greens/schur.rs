use faer::Mat;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::finitized::{FinitizedOperator, GreensEvaluation};
use super::recursion::invert;
use crate::error::Result;
use crate::rng::RngSpec;

/// Largest deviation seen for each resolvent or Schur complement identity.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SchurReport {
    pub samples: usize,
    pub resolvent: f64,
    pub block_inverse: f64,
    pub off_block_left: f64,
    pub off_block_right: f64,
    pub single_vertex: f64,
}

impl SchurReport {
    pub fn max_deviation(&self) -> f64 {
        [self.resolvent, self.block_inverse, self.off_block_left, self.off_block_right, self.single_vertex]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn pick(m: &Mat<Complex64>, rows: &[usize], cols: &[usize]) -> Mat<Complex64> {
    Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

fn max_abs_diff(a: &Mat<Complex64>, b: &Mat<Complex64>) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// Deviations of the block identities for the split `V`, `T = V^c`.
fn block_deviations(m: &Mat<Complex64>, g: &Mat<Complex64>, v: &[usize]) -> Result<[f64; 3]> {
    let n = m.nrows();
    if v.is_empty() || v.len() == n {
        return Ok([0.0; 3]);
    }
    let mut in_v = vec![false; n];
    v.iter().for_each(|&x| in_v[x] = true);
    let t: Vec<usize> = (0..n).filter(|&x| !in_v[x]).collect();
    let gt = invert(&pick(m, &t, &t))?;
    let b = pick(m, &t, v);
    let bt = pick(m, v, &t);
    let gv = pick(g, v, v);
    let schur = invert(&(pick(m, v, v) - &bt * &gt * &b))?;
    let left = -(&gt * &b * &gv);
    let right = -(&gv * &bt * &gt);
    Ok([
        max_abs_diff(&schur, &gv),
        max_abs_diff(&left, &pick(g, &t, v)),
        max_abs_diff(&right, &pick(g, v, &t)),
    ])
}

fn single_vertex_deviation(m: &Mat<Complex64>, g: &Mat<Complex64>, k: usize) -> Result<f64> {
    let n = m.nrows();
    if n == 1 {
        return Ok(0.0);
    }
    let keep: Vec<usize> = (0..n).filter(|&x| x != k).collect();
    let gk = invert(&pick(m, &keep, &keep))?;
    let formula = Mat::from_fn(n - 1, n - 1, |a, b| {
        let (i, j) = (keep[a], keep[b]);
        g[(i, j)] - g[(i, k)] * g[(k, j)] / g[(k, k)]
    });
    Ok(max_abs_diff(&gk, &formula))
}

/// Checks the resolvent identity and the Schur complement formulas on
/// `samples` random vertex sets.
pub fn schur_identity_suite(op: &FinitizedOperator, eval: &GreensEvaluation, samples: usize, rng: RngSpec) -> Result<SchurReport> {
    let m = op.shifted();
    let g = &eval.g;
    let n = m.nrows();
    let mut rep = SchurReport { samples, ..Default::default() };
    let mut r = rng.rng();
    for _ in 0..samples {
        let size = r.random_range(1..=n.div_ceil(2));
        let v = sample(&mut r, n, size).into_vec();
        let [a, b, c] = block_deviations(&m, g, &v)?;
        rep.block_inverse = rep.block_inverse.max(a);
        rep.off_block_left = rep.off_block_left.max(b);
        rep.off_block_right = rep.off_block_right.max(c);
        rep.single_vertex = rep.single_vertex.max(single_vertex_deviation(&m, g, r.random_range(0..n))?);

        let mut pert = Mat::<Complex64>::zeros(n, n);
        for _ in 0..n.min(8) {
            let (i, j) = (r.random_range(0..n), r.random_range(0..n));
            let x = Complex64::from(r.random_range(-0.2..0.2));
            pert[(i, j)] += x;
            if i != j {
                pert[(j, i)] += x;
            }
        }
        let shifted = &m + &pert;
        let gb = invert(&shifted)?;
        let lhs = g - &gb;
        let rhs = g * &pert * &gb;
        rep.resolvent = rep.resolvent.max(max_abs_diff(&lhs, &rhs));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::finitized::{finitize, green_matrix};
    use crate::greens::recursion::tests::c;
    use crate::random::{percolate, sample_configuration_model};

    #[test]
    fn suite_on_percolated_graph() {
        let h = sample_configuration_model(50, 3, RngSpec::from_seed(3)).unwrap();
        let g0 = percolate(&h, 0.85, RngSpec::from_seed(4)).unwrap();
        let op = finitize(&g0, 3, c(1.9, 0.05)).unwrap();
        let ev = green_matrix(&op).unwrap();
        let rep = schur_identity_suite(&op, &ev, 20, RngSpec::from_seed(5)).unwrap();
        assert!(rep.max_deviation() < 1e-9, "{rep:?}");
    }

    #[test]
    fn degenerate_sets() {
        let h = sample_configuration_model(12, 3, RngSpec::from_seed(1)).unwrap();
        let op = finitize(&h, 3, c(0.0, 0.5)).unwrap();
        let ev = green_matrix(&op).unwrap();
        let m = op.shifted();
        assert_eq!(block_deviations(&m, &ev.g, &[]).unwrap(), [0.0; 3]);
        assert!(single_vertex_deviation(&m, &ev.g, 3).unwrap() < 1e-12);
        let one = block_deviations(&m, &ev.g, &[5]).unwrap();
        assert!(one.iter().all(|&x| x < 1e-12));
    }
}
