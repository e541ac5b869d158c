use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};

/// A point `z = E + i eta` of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDomainPoint {
    pub z: Complex64,
}

impl SpectralDomainPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        check_domain(z)?;
        Ok(Self { z })
    }

    pub fn energy(&self) -> f64 {
        self.z.re
    }

    pub fn eta(&self) -> f64 {
        self.z.im
    }

    /// Distance of the energy to the nearest spectral edge `+-2`.
    pub fn kappa(&self) -> f64 {
        (self.z.re - 2.0).abs().min((self.z.re + 2.0).abs())
    }
}

pub(crate) fn check_domain(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) || !z.re.is_finite() {
        return Err(ForgeError::Parameter(format!("z = {z} is not in the upper half plane")));
    }
    Ok(())
}

/// Semicircle Stieltjes transform: the root of `m^2 + z m + 1 = 0` with `Im m > 0`.
pub fn m_sc(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    let s = (z * z - 4.0).sqrt();
    let a = (-z + s) / 2.0;
    let b = (-z - s) / 2.0;
    Ok(if a.im > b.im { a } else { b })
}

/// Kesten-McKay Stieltjes transform `1 / (-z - d/(d-1) m_sc)`.
pub fn m_d(z: Complex64, d: usize) -> Result<Complex64> {
    let m = m_sc(z)?;
    Ok(1.0 / (-z - (d as f64 / (d as f64 - 1.0)) * m))
}

/// Kesten-McKay density in the normalized variable.
pub fn rho_d(x: f64, d: usize) -> f64 {
    if x.abs() >= 2.0 {
        return 0.0;
    }
    let q = d as f64 - 1.0;
    (4.0 - x * x).sqrt() / (2.0 * std::f64::consts::PI) / (1.0 + 1.0 / q - x * x / d as f64)
}

fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64, whole: Complex64, tol: f64, depth: usize) -> Complex64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of a complex integrand on `[a, b]`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    let panels = 64;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
            let whole = h / 6.0 * (f0 + 4.0 * fm + f1);
            simpson(&f, x0, x1, f0, fm, f1, whole, tol / panels as f64, 40)
        })
        .sum()
}

/// `int rho_d(x) / (x - z) dx` by quadrature, substituting `x = 2 cos t`
/// to remove the square-root endpoints.
pub fn m_d_quadrature(z: Complex64, d: usize, tol: f64) -> Complex64 {
    integrate(
        |t| {
            let x = 2.0 * t.cos();
            Complex64::from(rho_d(x, d) * 2.0 * t.sin()) / (x - z)
        },
        0.0,
        std::f64::consts::PI,
        tol,
    )
}

/// `int rho_d`.
pub fn rho_d_mass(d: usize, tol: f64) -> f64 {
    integrate(|t| Complex64::from(rho_d(2.0 * t.cos(), d) * 2.0 * t.sin()), 0.0, std::f64::consts::PI, tol).re
}
