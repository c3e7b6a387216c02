//! Asymptotic constants: μ(α), μ′, variance constants and κ coefficients.

pub mod estimate;
pub mod kappa;
pub mod quadrature;
pub mod special;

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::offspring::{Family, OffspringLaw};
use crate::treesize::{TailModel, TreeSizeLaw};

pub use estimate::{estimate_kappa_base, mean_expansion_check, KappaEstimate, MeanResidual, MeanTarget};
pub use kappa::*;
pub use quadrature::{tanh_sinh, tanh_sinh_real, QuadResult, Quadrature};
pub use special::{
    digamma, gamma, gamma_complex, gamma_p, gamma_q, ln_gamma, upper_incomplete_gamma, EULER_GAMMA,
};

/// `4(1 − ln 2)`.
pub const SHAPE_VARIANCE_NUMERATOR: f64 = 4.0 * (1.0 - LN_2);

/// Largest real part of α accepted by [`mu_alpha`].
pub const MU_ALPHA_LIMIT: f64 = 0.5 - 1e-6;

fn quad_opts() -> Quadrature {
    Quadrature { min_level: 6, max_level: 12, abs_tol: 1e-13, rel_tol: 1e-13 }
}

/// Points where `log R` changes scale, as (left breaks in η, right breaks in u = 1 − η).
fn breakpoints(law: &OffspringLaw) -> (Vec<f64>, Vec<f64>) {
    let scales = [1e-2, 1e-1, 1.0, 1e1, 1e2];
    let inside = |v: &f64| *v > 0.0 && *v < 0.5;
    match *law.family() {
        Family::FullMary { m } | Family::Mixture { m, .. } if m >= 10 => {
            let u = scales.iter().map(|s| s / m as f64).filter(inside).collect();
            (Vec::new(), u)
        }
        Family::CFamily { c } if c < 0.1 => {
            let e = scales.iter().map(|s| s * c).filter(inside).collect();
            (e, Vec::new())
        }
        _ => (Vec::new(), Vec::new()),
    }
}

/// `∫_0^1 g(ln log R(η)) dη`, split at η = ½ with each half integrated in the
/// distance to its outer endpoint.
pub fn eta_integral<G>(law: &OffspringLaw, g: G) -> Complex64
where
    G: Fn(f64) -> Complex64,
{
    let (left, right) = breakpoints(law);
    let opts = quad_opts();
    let mut total = Complex64::new(0.0, 0.0);
    let mut edges = vec![0.0];
    edges.extend(left);
    edges.push(0.5);
    for w in edges.windows(2) {
        let a = w[0];
        total += tanh_sinh(|_, dl, _| { let eta = a + dl; g(law.ln_log_r(eta, 1.0 - eta)) }, a, w[1], opts).value;
    }
    let mut edges = vec![0.0];
    edges.extend(right);
    edges.push(0.5);
    for w in edges.windows(2) {
        let a = w[0];
        total += tanh_sinh(|_, dl, _| { let u = a + dl; g(law.ln_log_r(1.0 - u, u)) }, a, w[1], opts).value;
    }
    total
}

/// `μ(α) = E|T|^α = Γ(1 − α)^{-1} ∫_0^1 (log R(η))^{−α} dη` for `Re α < ½`.
pub fn mu_alpha(law: &OffspringLaw, alpha: Complex64) -> Result<Complex64> {
    if !(alpha.re < MU_ALPHA_LIMIT) {
        return Err(Error::Domain(format!(
            "μ(α) needs Re α < 1/2 (the defining sum diverges); got {alpha}"
        )));
    }
    if alpha == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let integral = eta_integral(law, |l| (-alpha * l).exp());
    Ok(integral / gamma_complex(1.0 - alpha)?)
}

/// Series route: `Σ_{n≤N} q_n n^α` plus the fitted tail beyond `N`.
pub fn mu_alpha_series(size: &TreeSizeLaw, alpha: Complex64) -> Result<Complex64> {
    if !(alpha.re < MU_ALPHA_LIMIT) {
        return Err(Error::Domain(format!("μ(α) needs Re α < 1/2; got {alpha}")));
    }
    let q = size.q_slice();
    let mut head = Complex64::new(0.0, 0.0);
    for (n, &qn) in q.iter().enumerate().skip(1) {
        if qn != 0.0 {
            head += (alpha * (n as f64).ln()).exp() * qn;
        }
    }
    let tail = TailModel::fit(size)?;
    Ok(head + tail.sum_shifted_power(alpha, 0.0))
}

/// `μ′ = E log|T| = −γ − ∫_0^1 ln log R(η) dη`.
pub fn mu_prime(law: &OffspringLaw) -> f64 {
    -EULER_GAMMA - eta_integral(law, |l| Complex64::new(l, 0.0)).re
}

/// Series route for μ′: `Σ q_n ln n` plus the tail, via the derivative of
/// the fitted tail sum at β = 0 (complex step in β).
pub fn mu_prime_series(size: &TreeSizeLaw) -> Result<f64> {
    let head: f64 = size
        .q_slice()
        .iter()
        .enumerate()
        .skip(2)
        .map(|(n, &q)| q * (n as f64).ln())
        .sum();
    let tail = TailModel::fit(size)?;
    let d = 1e-10;
    Ok(head + tail.sum_shifted_power(Complex64::new(0.0, d), 0.0).im / d)
}

/// `4(1 − ln 2) σ^{-2}`, the limiting variance of the shape functional on the
/// `n log n` scale.
pub fn shape_variance_const(law: &OffspringLaw) -> f64 {
    SHAPE_VARIANCE_NUMERATOR / law.variance()
}

/// `Re[Γ(it − ½)/Γ(it)]`.
pub fn imag_gamma_ratio(t: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::Domain("imaginary-power constants need t != 0".into()));
    }
    let z = Complex64::new(0.0, t);
    Ok((gamma_complex(z - 0.5)? / gamma_complex(z)?).re)
}

/// `E|ζ_t|² = (1/√π) Re[Γ(it − ½)/Γ(it)] σ^{-2}`.
pub fn imag_variance(law: &OffspringLaw, t: f64) -> Result<f64> {
    Ok(imag_gamma_ratio(t)? / (PI.sqrt() * law.variance()))
}

fn recip_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(1.0 / gamma_complex(z)?)
}

/// `Γ(α − ½) / (√2 σ Γ(α))`, the coefficient of `n^{½+α}` in `E X_n(α)`.
pub fn mean2_coeff(law: &OffspringLaw, alpha: Complex64) -> Result<Complex64> {
    let r = recip_gamma(alpha)?;
    if r == Complex64::new(0.0, 0.0) {
        return Ok(r);
    }
    Ok(gamma_complex(alpha - 0.5)? * r / (2f64.sqrt() * law.sigma()))
}

/// Coefficients of `n^{1/2}` and `ln n` in `E X′_n(0) − μ′ n`:
/// `(−√(2π)/σ, E[ξ(ξ−1)(ξ−2)]/(3σ⁴))`.
pub fn shape_mean_coeffs(law: &OffspringLaw) -> (f64, f64) {
    let s2 = law.variance();
    (-(2.0 * PI).sqrt() / law.sigma(), law.third_factorial_moment() / (3.0 * s2 * s2))
}

/// Constants of one law, evaluated at chosen α and t.
#[derive(Debug, Clone, Serialize)]
pub struct LimitConstants {
    pub law: String,
    pub sigma2: f64,
    pub mu_prime: f64,
    pub shape_var_const: f64,
    pub shape_mean_coeffs: (f64, f64),
}

impl LimitConstants {
    pub fn new(law: &OffspringLaw) -> Self {
        Self {
            law: law.name().to_string(),
            sigma2: law.variance(),
            mu_prime: mu_prime(law),
            shape_var_const: shape_variance_const(law),
            shape_mean_coeffs: shape_mean_coeffs(law),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn mu_alpha_anchor_values() {
        let b = OffspringLaw::binary();
        assert_eq!(mu_alpha(&b, c(0.0)).unwrap(), c(1.0));
        let v = mu_alpha(&b, c(-1.0)).unwrap();
        assert!((v.re - (2.0 * LN_2 - 1.0)).abs() < 1e-10, "{v}");
        assert!(v.im == 0.0);
        assert!(mu_alpha(&b, c(0.5)).is_err());
        assert!(mu_alpha(&b, Complex64::new(0.6, 1.0)).is_err());
    }

    #[test]
    fn mu_prime_binary_matches_cfam_half() {
        let b = mu_prime(&OffspringLaw::binary());
        let h = mu_prime(&OffspringLaw::cfam(0.5).unwrap());
        assert!((b - 2.0254).abs() < 5e-5, "{b}");
        assert!((b - h).abs() < 1e-10);
    }

    #[test]
    fn quadrature_against_series() {
        for law in [OffspringLaw::binary(), OffspringLaw::poisson(), OffspringLaw::geometric()] {
            let size = TreeSizeLaw::new(&law, 4096);
            for a in [c(-1.0), c(-0.4), c(0.25), Complex64::new(0.3, 0.1), Complex64::new(0.0, 1.0)] {
                let q = mu_alpha(&law, a).unwrap();
                let s = mu_alpha_series(&size, a).unwrap();
                assert!((q - s).norm() < 1e-8, "{} {a}: {q} vs {s}", law.name());
            }
            let d = (mu_prime(&law) - mu_prime_series(&size).unwrap()).abs();
            assert!(d < 1e-8, "{} μ′ routes differ by {d}", law.name());
        }
    }

    #[test]
    fn digamma_chain_for_shape_variance() {
        let psi = digamma(c(-0.5)).unwrap().re;
        assert!((2.0 * (EULER_GAMMA + psi) - SHAPE_VARIANCE_NUMERATOR).abs() < 1e-12);
        assert!((SHAPE_VARIANCE_NUMERATOR - 1.2274112777602189).abs() < 1e-15);
    }

    #[test]
    fn imag_variance_positive() {
        let law = OffspringLaw::poisson();
        for t in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, -1.0] {
            assert!(imag_variance(&law, t).unwrap() > 0.0, "t = {t}");
        }
        assert!(imag_variance(&law, 0.0).is_err());
    }

    #[test]
    fn mean2_coeff_values() {
        let law = OffspringLaw::poisson();
        assert_eq!(mean2_coeff(&law, c(0.0)).unwrap(), c(0.0));
        assert_eq!(mean2_coeff(&law, c(-2.0)).unwrap(), c(0.0));
        // α = 1: Γ(½)/(√2 Γ(1)) = √(π/2)
        let v = mean2_coeff(&law, c(1.0)).unwrap();
        assert!((v.re - (PI / 2.0).sqrt()).abs() < 1e-13);
        assert!(mean2_coeff(&law, c(0.5)).is_err());
    }

    #[test]
    fn shape_mean_coefficients() {
        let (a, b) = shape_mean_coeffs(&OffspringLaw::poisson());
        assert!((a + (2.0 * PI).sqrt()).abs() < 1e-14);
        assert!((b - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(shape_mean_coeffs(&OffspringLaw::binary()).1, 0.0);
    }

    #[test]
    fn mu_alpha_images() {
        for cv in [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0] {
            let law = OffspringLaw::cfam(cv).unwrap();
            let v = mu_alpha(&law, c(-1.0)).unwrap().re;
            assert!(v > 0.0 && v < 1.0, "c = {cv}: {v}");
            let v = mu_alpha(&law, c(0.25)).unwrap().re;
            assert!(v > 1.0, "c = {cv}: {v}");
        }
    }
}
