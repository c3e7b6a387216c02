//! The perturbation framework for counterexamples, and the Laplace-transform
//! remainder functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::offspring::{g_eps, g_eps_coeffs, OffspringLaw};

/// Number of pgf coefficients scanned for nonnegativity.
pub const SCAN_LEN: usize = 200;
const BISECTIONS: usize = 40;
const COEFF_TOL: f64 = 1e-15;

/// The base law, the largest admissible perturbation size and the interval
/// where the perturbation is negative.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationFramework {
    pub eps: f64,
    /// Largest `c₃` keeping every coefficient of `Φ + c₃ g_ε` up to
    /// `z^{200}` above `−1e−15`.
    pub c3_max: f64,
    /// `{t ∈ [0, 1) : g_ε(t) < 0}`, empty when `None`.
    pub interval: Option<(f64, f64)>,
}

impl PerturbationFramework {
    pub fn law(&self) -> OffspringLaw {
        OffspringLaw::counterexample()
    }

    /// The perturbed law with `c₃` set to `fraction · c3_max`.
    pub fn perturbed(&self, fraction: f64) -> Result<OffspringLaw> {
        OffspringLaw::counterexample_perturbed(self.eps, fraction * self.c3_max)
    }

    pub fn interval_len(&self) -> f64 {
        self.interval.map_or(0.0, |(a, b)| b - a)
    }

    /// `Φ̃_ε(t) = Φ(t) + c₃ g_ε(t)`.
    pub fn perturbed_pgf(&self, c3: f64, t: f64) -> f64 {
        self.law().pgf_real(t) + c3 * g_eps(self.eps, t)
    }
}

/// Build the framework for `ε ∈ [0, 1]`.
pub fn perturbation_framework(eps: f64) -> Result<PerturbationFramework> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("ε must lie in [0, 1], got {eps}")));
    }
    let base = OffspringLaw::counterexample();
    let g = g_eps_coeffs(eps, SCAN_LEN);
    let ok = |c: f64| (0..=SCAN_LEN).all(|k| base.pmf(k as u64) + c * g[k] >= -COEFF_TOL);
    let mut hi = 1e-8;
    while ok(hi) {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Divergence("no coefficient of g_ε is negative; c₃ is unbounded".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(PerturbationFramework { eps, c3_max: lo, interval: negative_interval(eps) })
}

/// Bracket the set where `g_ε < 0` by a grid scan plus bisection at both ends.
fn negative_interval(eps: f64) -> Option<(f64, f64)> {
    let grid = 20_000;
    let ts = (0..grid).map(|k| k as f64 / grid as f64);
    let neg: Vec<f64> = ts.filter(|&t| g_eps(eps, t) < 0.0).collect();
    let (&first, &last) = (neg.first()?, neg.last()?);
    let step = 1.0 / grid as f64;
    let refine = |mut inside: f64, mut outside: f64| {
        for _ in 0..60 {
            let mid = 0.5 * (inside + outside);
            if g_eps(eps, mid) < 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let a = if first == 0.0 { 0.0 } else { refine(first, first - step) };
    let b = refine(last, (last + step).min(1.0));
    Some((a, b))
}

/// `h(x) = (−1)^r x^{−r} [e^{−x} − Σ_{j<r} (−x)^j/j!]`, via
/// `(1/(r−1)!) ∫_0^1 v^{r−1} e^{−x(1−v)} dv` when `x < r`.
pub fn exp_remainder_h(x: f64, r: u32) -> Result<f64> {
    if !(x > 0.0) || r == 0 {
        return Err(Error::Domain(format!("h needs x > 0 and r >= 1, got x = {x}, r = {r}")));
    }
    let rf = f64::from(r);
    if x < rf {
        // Σ_k (−x)^k / (k! (r−1)!) B(r, k+1) = Σ_k (−x)^k / (r+k)!
        let mut term = 1.0 / (1..=r).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..200 {
            term *= -x / (rf + k as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return Ok(sum);
    }
    let mut partial = 0.0;
    let mut term = 1.0;
    for j in 0..r {
        if j > 0 {
            term *= -x / f64::from(j);
        }
        partial += term;
    }
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * x.powi(-(r as i32)) * ((-x).exp() - partial))
}

/// `g(t) = (−1)^r t^{−r} r! [f(t) − Σ_{j<r} (−1)^j m_j t^j/j!]` for the
/// Laplace transform `f(t) = E e^{−tξ}`, evaluated as `E[r! h(tξ) ξ^r]`.
pub fn laplace_remainder_g(law: &OffspringLaw, r: u32, t: f64) -> Result<f64> {
    let fact: f64 = (1..=r).map(f64::from).product();
    let mut acc = 0.0;
    for &(k, p) in law.support() {
        if k == 0 {
            continue;
        }
        let kf = k as f64;
        acc += p * fact * exp_remainder_h(t * kf, r)? * kf.powi(r as i32);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framework_examples() {
        for eps in [0.0, 1e-4, 1e-2, 0.5] {
            assert!(g_eps(eps, 1.0).abs() < 1e-15);
        }
        let f0 = perturbation_framework(0.0).unwrap();
        assert!(f0.c3_max > 0.0);
        assert!(f0.interval.is_none());
        assert!((0..=1000).all(|k| g_eps(0.0, k as f64 / 1000.0) >= -1e-15));
        let a = perturbation_framework(1e-2).unwrap();
        let b = perturbation_framework(1e-4).unwrap();
        for f in [&a, &b] {
            let (lo, hi) = f.interval.unwrap();
            assert!(lo < 1.0 / 6.0 && 1.0 / 6.0 < hi);
            assert!(f.perturbed(0.9).is_ok());
            assert!(f.perturbed(1.1).is_err());
        }
        let ratio = a.interval_len() / b.interval_len();
        assert!((5.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn remainder_h() {
        assert!((exp_remainder_h(1.0, 1).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        for r in 1..=4u32 {
            let fact: f64 = (1..=r).map(f64::from).product();
            assert!((exp_remainder_h(1e-9, r).unwrap() - 1.0 / fact).abs() < 1e-6);
            // Both evaluation branches agree around x = r.
            let lo = exp_remainder_h(f64::from(r) - 1e-9, r).unwrap();
            let hi = exp_remainder_h(f64::from(r) + 1e-9, r).unwrap();
            assert!((lo - hi).abs() < 1e-8 * lo);
            let xs: Vec<f64> = (0..=100).map(|i| 0.01 * 1000f64.powf(i as f64 / 100.0)).collect();
            let hs: Vec<f64> = xs.iter().map(|&x| exp_remainder_h(x, r).unwrap()).collect();
            assert!(hs.windows(2).all(|w| w[1] < w[0]), "r = {r}");
            assert!(hs.iter().all(|&h| h > 0.0));
        }
        assert!(exp_remainder_h(0.0, 1).is_err());
    }

    #[test]
    fn laplace_remainder_poisson() {
        let law = OffspringLaw::poisson();
        // Raw moments of Poisson(1): 1, 2, 5.
        for (r, m) in [(1, 1.0), (2, 2.0), (3, 5.0)] {
            let ts: Vec<f64> = (0..60).map(|i| 10f64.powf(1.0 - i as f64 / 10.0)).collect();
            let gs: Vec<f64> = ts.iter().map(|&t| laplace_remainder_g(&law, r, t).unwrap()).collect();
            assert!(gs.iter().all(|&g| g >= 0.0));
            assert!(gs.windows(2).all(|w| w[1] >= w[0]));
            assert!((gs.last().unwrap() - m).abs() < 1e-3, "r = {r}: {}", gs.last().unwrap());
        }
    }
}
