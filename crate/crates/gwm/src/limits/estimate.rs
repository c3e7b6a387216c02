//! Constants read off the exact engine: κ base coefficients for negative real
//! parts and residuals of the mean expansions.

use num_complex::Complex64;
use serde::Serialize;

use super::{mean2_coeff, mu_alpha, mu_prime, shape_mean_coeffs};
use crate::error::{Error, Result};
use crate::moments::{MomentEngine, TollSequence};

/// `(κ20, κ11, κ02)` with a per-entry spread between the extrapolated value
/// and the raw value at the largest size.
#[derive(Debug, Clone, Copy)]
pub struct KappaEstimate {
    pub k20: Complex64,
    pub k11: Complex64,
    pub k02: Complex64,
    pub uncertainty: [f64; 3],
    pub exponent: f64,
}

fn largest_attainable(engine: &MomentEngine, upto: usize) -> usize {
    let mut n = upto;
    while n > 1 && !engine.law().is_attainable(n) {
        n -= 1;
    }
    n
}

/// Estimate the limit covariances of `(X_n(α₁) − μ(α₁)n)/√n` and
/// `(X_n(α₂) − μ(α₂)n)/√n` from `E[F₁F₂ | T_n]/n` at `n = N` and `N/2`,
/// extrapolated in `n^{−η}` with `η = min(−Re α₁, −Re α₂, ½)`.
pub fn estimate_kappa_base(engine: &MomentEngine, a1: Complex64, a2: Complex64) -> Result<KappaEstimate> {
    if !(a1.re < 0.0 && a2.re < 0.0) {
        return Err(Error::Domain(format!("κ base estimation needs Re α < 0; got {a1}, {a2}")));
    }
    let law = engine.law();
    let eta = (-a1.re).min(-a2.re).min(0.5);
    let hi = largest_attainable(engine, engine.truncation());
    let lo = largest_attainable(engine, hi / 2);
    let t1 = TollSequence::centered_power(a1, mu_alpha(law, a1)?);
    let t2 = TollSequence::centered_power(a2, mu_alpha(law, a2)?);
    let w = 2f64.powf(eta);
    let one = |x: &TollSequence, y: &TollSequence| -> Result<(Complex64, f64)> {
        let v = engine.conditional_moments(&[lo, hi], &[x.clone(), y.clone()])?;
        let k_lo = v[0] / lo as f64;
        let k_hi = v[1] / hi as f64;
        // Treat the size ratio as exactly 2; the attainability shift is O(h/N).
        let ext = (k_hi * w - k_lo) / (w - 1.0);
        Ok((ext, (ext - k_hi).norm()))
    };
    let (k20, u20) = one(&t1, &t1)?;
    let (k11, u11) = one(&t1, &t2)?;
    let (k02, u02) = if a1 == a2 { (k20, u20) } else { one(&t2, &t2)? };
    Ok(KappaEstimate { k20, k11, k02, uncertainty: [u20, u11, u02], exponent: eta })
}

/// Which mean expansion to test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanTarget {
    /// `E X′_n(0) = μ′n − (√(2π)/σ) n^{1/2} + c ln n + O(1)`.
    Shape,
    /// `E X_n(α) = μ(α)n + Γ(α−½)/(√2 σ Γ(α)) n^{½+α} + …`.
    Power(Complex64),
}

/// One row of [`mean_expansion_check`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanResidual {
    pub n: usize,
    pub mean: (f64, f64),
    /// `mean − μ n`.
    pub remainder: (f64, f64),
    /// The predicted second-order part of the remainder.
    pub predicted: (f64, f64),
    /// `remainder − predicted`.
    pub residual: (f64, f64),
}

fn pair(z: Complex64) -> (f64, f64) {
    (z.re, z.im)
}

/// Exact means minus the terms of the asymptotic expansion.
pub fn mean_expansion_check(engine: &MomentEngine, target: MeanTarget, ns: &[usize]) -> Result<Vec<MeanResidual>> {
    let law = engine.law();
    let (toll, slope, predict): (TollSequence, Complex64, Box<dyn Fn(f64) -> Complex64>) = match target {
        MeanTarget::Shape => {
            let (a, b) = shape_mean_coeffs(law);
            (
                TollSequence::log(),
                Complex64::new(mu_prime(law), 0.0),
                Box::new(move |n: f64| Complex64::new(a * n.sqrt() + b * n.ln(), 0.0)),
            )
        }
        MeanTarget::Power(alpha) => {
            let c = mean2_coeff(law, alpha)?;
            (
                TollSequence::power(alpha),
                mu_alpha(law, alpha)?,
                Box::new(move |n: f64| c * ((alpha + 0.5) * n.ln()).exp()),
            )
        }
    };
    let means = engine.conditional_moments(ns, &[toll])?;
    Ok(ns
        .iter()
        .zip(means)
        .map(|(&n, m)| {
            let nf = n as f64;
            let rem = m - slope * nf;
            let p = predict(nf);
            MeanResidual { n, mean: pair(m), remainder: pair(rem), predicted: pair(p), residual: pair(rem - p) }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{k_identity_residual, kappa_hat_closed};
    use crate::offspring::OffspringLaw;

    #[test]
    fn kappa_base_properties() {
        let law = OffspringLaw::poisson();
        let e = MomentEngine::new(&law, 1024).unwrap();
        let a = Complex64::new(-0.75, 1.0);
        let k = estimate_kappa_base(&e, a, a.conj()).unwrap();
        assert!(k.k11.im.abs() < 1e-10 && k.k11.re > 0.0);
        assert!((k.k20 - k.k02.conj()).norm() < 1e-10);
        let s = estimate_kappa_base(&e, a, a).unwrap();
        assert_eq!(s.k20, s.k11);
        assert!(estimate_kappa_base(&e, Complex64::new(0.1, 0.0), a).is_err());
        // Rebuilt κ̂ table satisfies the K identity.
        let sigma = law.sigma();
        let t = kappa_hat_closed(k.k20, k.k11, k.k02, sigma, 40);
        let scale = 0.5 / (k.k20.norm() + 2.0 * k.k11.norm() + k.k02.norm()).sqrt();
        for &(x, y) in &[(0.3, 0.4), (-0.9, 0.2), (0.5, -0.5)] {
            let r = k_identity_residual(&t, k.k20, k.k11, k.k02, sigma, x * scale, y * scale);
            assert!(r < 1e-8, "{r}");
        }
    }

    #[test]
    fn binary_shape_log_coefficient_vanishes() {
        let law = OffspringLaw::binary();
        assert_eq!(shape_mean_coeffs(&law).1, 0.0);
        let e = MomentEngine::new(&law, 1024).unwrap();
        let rows = mean_expansion_check(&e, MeanTarget::Shape, &[256, 512, 1024]).unwrap();
        let r: Vec<f64> = rows.iter().map(|r| r.residual.0).collect();
        // Bounded: the O(1) residual changes little from n = 256 to 1024.
        assert!((r[2] - r[0]).abs() < 0.1, "{r:?}");
    }
}
