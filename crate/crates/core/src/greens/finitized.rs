use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use super::recursion::{invert, shifted_operator};
use super::stieltjes::{check_domain, m_d, m_sc};
use crate::error::{ForgeError, Result};
use crate::graph::MultiGraph;

/// Largest vertex set handled with a dense Green's matrix.
pub const DENSE_GREEN_CAP: usize = 4000;

/// `A/sqrt(d-1) - (w/(d-1)) diag(f)` on `V0`, where `f` is the missing
/// degree and `w` the loop weight (`m_sc(z)` for the exact finitization).
#[derive(Debug, Clone)]
pub struct FinitizedOperator {
    pub base: MultiGraph,
    pub d: usize,
    pub deficiency: Vec<usize>,
    pub z: Complex64,
    pub loop_weight: Complex64,
}

pub fn finitize(g0: &MultiGraph, d: usize, z: Complex64) -> Result<FinitizedOperator> {
    check_domain(z)?;
    if d < 3 {
        return Err(ForgeError::Parameter(format!("d = {d} must be at least 3")));
    }
    if g0.max_degree() > d {
        return Err(ForgeError::Input(format!("max degree {} exceeds d = {d}", g0.max_degree())));
    }
    Ok(FinitizedOperator {
        base: g0.clone(),
        d,
        deficiency: g0.degrees().iter().map(|&k| d - k).collect(),
        z,
        loop_weight: m_sc(z)?,
    })
}

impl FinitizedOperator {
    pub fn dim(&self) -> usize {
        self.base.vertex_count()
    }

    pub(crate) fn loop_weights(&self) -> Vec<Complex64> {
        self.deficiency.iter().map(|&f| self.loop_weight * f as f64).collect()
    }

    /// Dense `H_f(z) - z`.
    pub fn shifted(&self) -> Mat<Complex64> {
        shifted_operator(&self.base, self.d, self.z, &self.loop_weights())
    }
}

#[derive(Debug, Clone)]
pub struct GreensEvaluation {
    pub z: Complex64,
    pub g: Mat<Complex64>,
    pub m_n: Complex64,
    /// Average of `G_oo^{(i)}` over directed non-loop edges; `None` without such edges.
    pub q: Option<Complex64>,
    pub msc: Complex64,
    pub md: Complex64,
}

impl GreensEvaluation {
    /// `p^{l+1} Q + (1 - p^{l+1}) m_sc`.
    pub fn q_ell(&self, p: f64, ell: usize) -> Option<Complex64> {
        let w = p.powi(ell as i32 + 1);
        self.q.map(|q| w * q + (1.0 - w) * self.msc)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.g[(i, j)]
    }
}

pub fn green_matrix(op: &FinitizedOperator) -> Result<GreensEvaluation> {
    let n = op.dim();
    if n == 0 {
        return Err(ForgeError::Input("empty vertex set".into()));
    }
    if n > DENSE_GREEN_CAP {
        return Err(ForgeError::Resource(format!("{n} vertices exceeds the dense cap {DENSE_GREEN_CAP}")));
    }
    let g = invert(&op.shifted())?;
    let m_n = (0..n).map(|i| g[(i, i)]).sum::<Complex64>() / n as f64;
    let mut acc = Complex64::default();
    let mut count = 0usize;
    for &(a, b) in op.base.edges() {
        if a == b {
            continue;
        }
        for (o, i) in [(a, b), (b, a)] {
            acc += g[(o, o)] - g[(o, i)] * g[(i, o)] / g[(i, i)];
            count += 1;
        }
    }
    Ok(GreensEvaluation {
        z: op.z,
        g,
        m_n,
        q: (count > 0).then(|| acc / count as f64),
        msc: m_sc(op.z)?,
        md: m_d(op.z, op.d)?,
    })
}

/// `Im G_ii - sum_j |G_ij|^2 (eta + Im m_sc f(j)/(d-1))` for every `i`.
pub fn ward_residual(op: &FinitizedOperator, eval: &GreensEvaluation) -> Vec<f64> {
    let n = op.dim();
    let eta = op.z.im;
    let w = eval.msc.im / (op.d as f64 - 1.0);
    let weight: Vec<f64> = op.deficiency.iter().map(|&f| eta + w * f as f64).collect();
    (0..n)
        .map(|i| {
            let s: f64 = (0..n).map(|j| eval.g[(i, j)].norm_sqr() * weight[j]).sum();
            eval.g[(i, i)].im - s
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct WardSummary {
    pub max_abs: f64,
    pub argmax: usize,
}

pub fn ward_summary(residuals: &[f64]) -> WardSummary {
    let (argmax, max_abs) = residuals
        .iter()
        .map(|r| r.abs())
        .enumerate()
        .fold((0, 0.0), |b, (i, r)| if r > b.1 { (i, r) } else { b });
    WardSummary { max_abs, argmax }
}
