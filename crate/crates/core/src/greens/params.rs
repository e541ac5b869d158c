use serde::Serialize;

use super::stieltjes::{m_d, SpectralDomainPoint};
use crate::error::{ForgeError, Result};

pub const DEFAULT_FC: f64 = 0.01;

/// Scale parameters of the local law at size `n`.
#[derive(Debug, Clone, Serialize)]
pub struct ParameterSet {
    pub n: usize,
    pub d: usize,
    pub fc: f64,
    pub r_frak: f64,
    pub r: f64,
    pub ell: usize,
}

/// `round(12 log_{d-1} log n)` clamped to `[1, 6]`.
pub fn default_ell(n: usize, d: usize) -> usize {
    let q = (d as f64 - 1.0).ln();
    let raw = 12.0 * (n.max(3) as f64).ln().ln() / q;
    (raw.round() as usize).clamp(1, 6)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ErrorScales {
    pub eps0: f64,
    pub eps: f64,
    pub eps_prime: f64,
    pub phi: f64,
}

impl ParameterSet {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Self::with_fc(n, d, DEFAULT_FC)
    }

    pub fn with_fc(n: usize, d: usize, fc: f64) -> Result<Self> {
        if d < 3 || n < 2 {
            return Err(ForgeError::Parameter(format!("need d >= 3 and n >= 2, got d = {d}, n = {n}")));
        }
        let logq = (n as f64).ln() / (d as f64 - 1.0).ln();
        let r_frak = fc / 4.0 * logq;
        Ok(Self { n, d, fc, r_frak, r: r_frak / 8.0, ell: default_ell(n, d) })
    }

    /// Integer ball radius `floor(r)`.
    pub fn radius(&self) -> usize {
        self.r.floor() as usize
    }

    /// Quarter of the switching radius, at least 1.
    pub fn quarter_radius(&self) -> usize {
        ((self.r_frak.max(4.0) / 4.0).floor() as usize).max(1)
    }

    pub fn scales(&self, point: &SpectralDomainPoint) -> Result<ErrorScales> {
        let ln = (self.n as f64).ln();
        let n_eta = self.n as f64 * point.eta();
        let im_md = m_d(point.z, self.d)?.im;
        let eps0 = ln.powi(96)
            * ((self.d as f64 - 1.0).powf(-self.r) + (im_md / n_eta).sqrt() + n_eta.powf(-2.0 / 3.0));
        let ke = point.kappa() + point.eta();
        let eps = if eps0 <= ke / ln { eps0 } else { ln.powi(4) * eps0 };
        let eps_prime = ln.powi(3) * eps;
        let phi = ln.powi(24) * ((im_md + eps_prime + eps / (ke + eps).sqrt()) / n_eta).sqrt();
        Ok(ErrorScales { eps0, eps, eps_prime, phi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn radii_relation_and_ell() {
        let ps = ParameterSet::new(1_000_000, 3).unwrap();
        assert!((ps.r_frak / 8.0 - ps.r).abs() < 1e-15);
        assert!((ps.r_frak - 0.0025 * 1e6f64.log2()).abs() < 1e-12);
        assert_eq!(ps.quarter_radius(), 1);
        assert!((1..=6).contains(&ps.ell));
        assert_eq!(default_ell(1000, 3), 6);
        assert_eq!(default_ell(1000, 1 << 20), 2);
        assert_eq!(default_ell(1000, 1 << 62), 1);
    }

    #[test]
    fn eps_split_is_honored() {
        let ps = ParameterSet::new(2000, 3).unwrap();
        let ln = 2000f64.ln();
        for z in [Complex64::new(2.2, 0.05), Complex64::new(0.0, 1.0)] {
            let pt = SpectralDomainPoint::new(z).unwrap();
            let s = ps.scales(&pt).unwrap();
            let thr = (pt.kappa() + pt.eta()) / ln;
            let want = if s.eps0 <= thr { s.eps0 } else { ln.powi(4) * s.eps0 };
            assert_eq!(s.eps, want);
            assert!((s.eps_prime - ln.powi(3) * s.eps).abs() <= 1e-12 * s.eps_prime);
            assert!(s.phi > 0.0);
        }
    }
}
