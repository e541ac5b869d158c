use num_complex::Complex64;

use super::operator::NbOperator;
use crate::error::{ForgeError, Result};

/// `theta + (d-1)/theta`.
pub fn ihara_map(d: usize, theta: f64) -> Result<f64> {
    if theta == 0.0 || (theta.abs() - 1.0).abs() < 1e-15 {
        return Err(ForgeError::Parameter(format!("theta = {theta} has no adjacency counterpart")));
    }
    Ok(theta + (d as f64 - 1.0) / theta)
}

/// Both roots of `theta^2 - mu theta + (d-1) = 0`, larger modulus first, for
/// `|mu| > 2 sqrt(d-1)`.
pub fn ihara_unmap(d: usize, mu: f64) -> Result<(f64, f64)> {
    let q = d as f64 - 1.0;
    let disc = mu * mu - 4.0 * q;
    if disc <= 0.0 {
        return Err(ForgeError::Parameter(format!(
            "|mu| = {} must exceed 2 sqrt(d-1) = {} for real roots",
            mu.abs(),
            2.0 * q.sqrt()
        )));
    }
    let s = disc.sqrt();
    let big = (mu + mu.signum() * s) / 2.0;
    Ok((big, q / big))
}

/// Both roots for any real `mu`, possibly complex.
pub fn ihara_roots(d: usize, mu: f64) -> (Complex64, Complex64) {
    let disc = Complex64::new(mu * mu - 4.0 * (d as f64 - 1.0), 0.0).sqrt();
    ((mu + disc) / 2.0, (mu - disc) / 2.0)
}

/// `(S_theta psi)(u, v) = theta psi(v) - psi(u)` on the oriented edges of `b`.
pub fn s_theta_map(b: &NbOperator, theta: f64, psi: &[f64]) -> Vec<f64> {
    (0..b.dim()).map(|e| theta * psi[b.head(e)] - psi[b.tail(e)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;
    use crate::nonbacktracking::build_nb_operator;

    #[test]
    fn map_and_unmap() {
        assert!((ihara_map(3, 2.0).unwrap() - 3.0).abs() < 1e-15);
        let (a, b) = ihara_unmap(3, 3.0).unwrap();
        assert!((a - 2.0).abs() < 1e-14 && (b - 1.0).abs() < 1e-14);
        assert!((ihara_map(3, 2f64.sqrt()).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(ihara_map(3, 1.0).is_err());
        assert!(ihara_unmap(3, 2.5).is_err());
        for i in 0..50 {
            let mu = 3.51 + 0.05 * i as f64;
            let (a, b) = ihara_unmap(4, mu).unwrap();
            assert!((ihara_map(4, a).unwrap() - mu).abs() < 1e-12);
            assert!((ihara_map(4, b).unwrap() - mu).abs() < 1e-12);
            let (a, _) = ihara_unmap(4, -mu).unwrap();
            assert!((ihara_map(4, a).unwrap() + mu).abs() < 1e-12);
        }
    }

    #[test]
    fn k4_constant_vector() {
        let b = build_nb_operator(&MultiGraph::complete(4), None);
        let s = s_theta_map(&b, 2.0, &[1.0; 4]);
        assert!(s.iter().all(|&x| x == 1.0));
        let mut y = vec![0.0; s.len()];
        b.apply(&s, &mut y);
        assert!(y.iter().all(|&x| x == 2.0));
        assert!(s_theta_map(&b, 2.0, &[0.0; 4]).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn eigenvector_transfer_and_negative_control() {
        let g = MultiGraph::complete(4);
        let b = build_nb_operator(&g, None);
        // eigenvalue -1 with psi = e0 - e1
        let psi = [1.0, -1.0, 0.0, 0.0];
        let (t, _) = ihara_roots(3, -1.0);
        assert!(t.im.abs() > 0.0);
        // the real pair case: lambda = 3, both roots
        for theta in [2.0, 1.0] {
            let s = s_theta_map(&b, theta, &[0.5; 4]);
            let mut y = vec![0.0; s.len()];
            b.apply(&s, &mut y);
            let r: f64 = y.iter().zip(&s).map(|(a, c)| (a - theta * c).powi(2)).sum();
            assert!(r < 1e-24, "theta {theta}");
        }
        let s = s_theta_map(&b, 1.7, &psi);
        let mut y = vec![0.0; s.len()];
        b.apply(&s, &mut y);
        let r: f64 = y.iter().zip(&s).map(|(a, c)| (a - 1.7 * c).powi(2)).sum();
        assert!(r > 1e-2);
    }
}
