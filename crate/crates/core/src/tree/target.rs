use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};

/// Target eigenvalue `mu` with its nonbacktracking root `theta`, retention
/// probability `p = theta/(d-1)` and `zeta = theta/sqrt(d-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralTarget {
    pub d: usize,
    pub mu: f64,
    pub theta: f64,
    pub p: f64,
    pub zeta: f64,
}

impl SpectralTarget {
    /// `p(d-1) + 1/p`, which equals `mu`.
    pub fn mu_from_p(&self) -> f64 {
        self.p * (self.d as f64 - 1.0) + 1.0 / self.p
    }
}

pub fn target_from_mu(d: usize, mu: f64) -> Result<SpectralTarget> {
    let q = d as f64 - 1.0;
    let lo = 2.0 * q.sqrt();
    if d < 3 || !(mu > lo && mu < d as f64) {
        return Err(ForgeError::Parameter(format!(
            "target {mu} must lie in the open interval ({lo}, {d}) for d = {d}"
        )));
    }
    let disc = (mu * mu - 4.0 * q).sqrt();
    let theta = (mu + disc) / 2.0;
    Ok(SpectralTarget { d, mu, theta, p: theta / q, zeta: theta / q.sqrt() })
}

/// The root `zeta > 1` of `zeta + 1/zeta = lambda / sqrt(d-1)`.
pub fn zeta_of_lambda(d: usize, lambda: f64) -> Result<f64> {
    let s = (d as f64 - 1.0).sqrt();
    let x = lambda / s;
    if !(x > 2.0) {
        return Err(ForgeError::Parameter(format!(
            "lambda {lambda} must exceed 2*sqrt(d-1) = {}",
            2.0 * s
        )));
    }
    Ok((x + (x * x - 4.0).sqrt()) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_targets() {
        let t = target_from_mu(3, 2.9).unwrap();
        let theta = (2.9 + (2.9f64 * 2.9 - 8.0).sqrt()) / 2.0;
        assert!((t.theta - theta).abs() < 1e-14);
        assert!((t.theta - 1.7701562).abs() < 5e-8);
        assert!((t.p - 0.8850781).abs() < 5e-8);
        assert!((t.theta * t.theta - 2.9 * t.theta + 2.0).abs() < 1e-12);
        assert!((t.mu_from_p() - 2.9).abs() < 1e-12);

        let edge = target_from_mu(3, 3.0 - 1e-9).unwrap();
        assert!((edge.theta - 2.0).abs() < 1e-6 && (edge.p - 1.0).abs() < 1e-6);
        assert!(target_from_mu(3, 3.0).is_err());
        assert!(target_from_mu(3, 2.0 * 2f64.sqrt()).is_err());
    }

    #[test]
    fn zeta_examples() {
        let z = zeta_of_lambda(3, 3.0).unwrap();
        assert!((z - 2f64.sqrt()).abs() < 1e-14);
        assert!(((z + 1.0 / z) * 2f64.sqrt() - 3.0).abs() < 1e-12);
        let near = zeta_of_lambda(3, 2.0 * 2f64.sqrt() + 1e-10).unwrap();
        assert!(near - 1.0 < 1e-4);
        assert!(zeta_of_lambda(3, 2.8).is_err());
    }

    #[test]
    fn monotone_in_mu() {
        let lo = 2.0 * 2f64.sqrt();
        let mut prev = (0.0, 0.0);
        for i in 1..=100 {
            let mu = lo + (3.0 - lo) * i as f64 / 101.0;
            let t = target_from_mu(3, mu).unwrap();
            assert!(t.theta > prev.0 && t.p > prev.1);
            assert!(t.theta > 2f64.sqrt() && t.theta < 2.0 && t.p > 1.0 / 2f64.sqrt() && t.p < 1.0);
            prev = (t.theta, t.p);
        }
    }
}
