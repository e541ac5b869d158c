use serde::{Deserialize, Serialize};

use super::extension::TreeExtendedGraph;
use super::target::zeta_of_lambda;
use crate::error::{ForgeError, Result};
use crate::spectral::{lanczos_largest, LanczosOptions, SymOp};

const EIGEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub lambda: f64,
    /// `||psi|_{V0}||`.
    pub base_norm: f64,
    /// `(lambda - 2 sqrt(d-1)) / (2d)`.
    pub bound: f64,
    pub passes: bool,
    pub skipped: bool,
    pub note: Option<String>,
}

impl LocalizationReport {
    pub fn from_masses(d: usize, lambda: f64, masses: &[f64]) -> Self {
        let edge = 2.0 * (d as f64 - 1.0).sqrt();
        let base_norm = masses[0].sqrt();
        let bound = (lambda - edge) / (2.0 * d as f64);
        if lambda <= edge {
            return Self {
                lambda,
                base_norm,
                bound,
                passes: true,
                skipped: true,
                note: Some(format!("lambda {lambda} is not above {edge}; bound is vacuous")),
            };
        }
        Self { lambda, base_norm, bound, passes: base_norm > bound, skipped: false, note: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport {
    pub lambda: f64,
    pub zeta: f64,
    /// Squared mass on levels `0..=L`.
    pub masses: Vec<f64>,
    /// `zeta^(2 - 2l)` for levels `0..=L`; level 0 is not constrained.
    pub bounds: Vec<f64>,
    pub passes: bool,
}

impl DecayReport {
    pub fn from_masses(d: usize, lambda: f64, masses: &[f64]) -> Result<Self> {
        let zeta = zeta_of_lambda(d, lambda)?;
        let bounds: Vec<f64> = (0..masses.len()).map(|l| zeta.powi(2 - 2 * l as i32)).collect();
        let passes = masses.iter().zip(&bounds).skip(1).all(|(m, b)| *m <= *b);
        Ok(Self { lambda, zeta, masses: masses.to_vec(), bounds, passes })
    }
}

fn check_eigenpair(teg: &TreeExtendedGraph, lambda: f64, psi: &[f64]) -> Result<()> {
    if psi.len() != teg.full.vertex_count() {
        return Err(ForgeError::Input("vector length differs from the extension size".into()));
    }
    let norm: f64 = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > EIGEN_TOL {
        return Err(ForgeError::Input(format!("vector norm {norm} is not 1")));
    }
    let mut y = vec![0.0; psi.len()];
    teg.apply(psi, &mut y);
    let r: f64 = y.iter().zip(psi).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
    if r > EIGEN_TOL {
        return Err(ForgeError::Input(format!("eigen-residual {r:.3e} exceeds {EIGEN_TOL:.0e}")));
    }
    Ok(())
}

pub fn localization_check(teg: &TreeExtendedGraph, lambda: f64, psi: &[f64]) -> Result<LocalizationReport> {
    check_eigenpair(teg, lambda, psi)?;
    Ok(LocalizationReport::from_masses(teg.d, lambda, &teg.level_masses(psi)))
}

pub fn decay_profile_check(teg: &TreeExtendedGraph, lambda: f64, psi: &[f64]) -> Result<DecayReport> {
    check_eigenpair(teg, lambda, psi)?;
    DecayReport::from_masses(teg.d, lambda, &teg.level_masses(psi))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TruncationRow {
    pub index: usize,
    pub shallow: f64,
    pub deep: f64,
    pub drift: f64,
}

/// Top eigenvalues of two extensions of the same base and their differences.
pub fn truncation_gap(shallow: &TreeExtendedGraph, deep: &TreeExtendedGraph, topk: usize) -> Result<Vec<TruncationRow>> {
    if shallow.base != deep.base || shallow.depth >= deep.depth {
        return Err(ForgeError::Input("truncation gap needs a common base and increasing depth".into()));
    }
    let opts = LanczosOptions::new(topk).tol(1e-10);
    let a = lanczos_largest(shallow, &opts, &[])?.values;
    let b = lanczos_largest(deep, &opts, &[])?.values;
    Ok(a.iter()
        .zip(&b)
        .enumerate()
        .map(|(index, (&x, &y))| TruncationRow { index, shallow: x, deep: y, drift: (x - y).abs() })
        .collect())
}
