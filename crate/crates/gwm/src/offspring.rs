//! Critical offspring distributions.
//!
//! An [`OffspringLaw`] is a law of a nonnegative integer `ξ` with `E ξ = 1`
//! and finite positive variance. Laws with infinite support keep a closed-form
//! pgf and a pmf truncated where the remaining tail mass drops below `1e-15`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tail mass below which an infinite pmf is cut off.
pub const PMF_TAIL: f64 = 1e-15;

const SUM_TOL: f64 = 1e-12;

/// Offspring family, with the parameters needed for closed forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Bin(m, 1/m); `m = 2` is the binary law.
    Binomial { m: u64 },
    /// Po(1).
    Poisson,
    /// `m · Bernoulli(1/m)`; `m = 2` is the full binary law.
    FullMary { m: u64 },
    /// Ge(1/2) on {0, 1, 2, ...}.
    Geometric,
    /// `p0 = p2 = c/2`, `p1 = 1 - c`.
    CFamily { c: f64 },
    /// `λ Φ_{5,m} + (1 - λ) Φ_3`.
    Mixture { lambda: f64, m: u64 },
    /// The counterexample law with `p1 = 1/2`.
    Counterexample,
    /// The counterexample law plus `c3 · g_ε`.
    CounterexamplePerturbed { eps: f64, c3: f64 },
    /// A finite pmf given explicitly.
    Custom,
}

/// A validated critical offspring law.
#[derive(Debug, Clone)]
pub struct OffspringLaw {
    name: String,
    family: Family,
    support: Vec<(u64, f64)>,
    truncation: u64,
    variance: f64,
    third_factorial: f64,
    span: u64,
}

/// Frequency of the cosine in `g_ε`.
pub const G_FREQ: f64 = 12.0 * PI / 5.0;
/// Phase of the cosine in `g_ε`.
pub const G_PHASE: f64 = 8.0 * PI / 5.0;

/// The perturbation `g_ε(t) = ½[1 − cos(4π(3t/5 + 2/5))] − ε(1 − t)³`.
pub fn g_eps(eps: f64, t: f64) -> f64 {
    0.5 * (1.0 - (G_FREQ * t + G_PHASE).cos()) - eps * (1.0 - t).powi(3)
}

fn g_eps_complex(eps: f64, t: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (one - (t * G_FREQ + G_PHASE).cos()) * 0.5 - (one - t).powu(3) * eps
}

/// j-th derivative of `g_ε` at `t`.
pub fn g_eps_derivative(eps: f64, j: u32, t: Complex64) -> Complex64 {
    if j == 0 {
        return g_eps_complex(eps, t);
    }
    let arg = t * G_FREQ + G_PHASE + f64::from(j) * PI / 2.0;
    let trig = -arg.cos() * 0.5 * G_FREQ.powi(j as i32);
    let cubic = match j {
        1 => (Complex64::new(1.0, 0.0) - t).powu(2) * 3.0,
        2 => -(Complex64::new(1.0, 0.0) - t) * 6.0,
        3 => Complex64::new(6.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    };
    // d^j/dt^j of −ε(1−t)³ equals ε times the cubic column above.
    trig + cubic * eps
}

/// Taylor coefficients of `g_ε` about 0, indices `0..=n`.
pub fn g_eps_coeffs(eps: f64, n: usize) -> Vec<f64> {
    let (sb, cb) = G_PHASE.sin_cos();
    let mut out = Vec::with_capacity(n + 1);
    let mut ak = 1.0; // a^k / k!
    for k in 0..=n {
        if k > 0 {
            ak *= G_FREQ / k as f64;
        }
        let c = match k % 4 {
            0 => cb,
            1 => -sb,
            2 => -cb,
            _ => sb,
        };
        let mut g = -0.5 * ak * c;
        if k == 0 {
            g += 0.5;
        }
        g -= eps
            * match k {
                0 => 1.0,
                1 => -3.0,
                2 => 3.0,
                3 => -1.0,
                _ => 0.0,
            };
        out.push(g);
    }
    out
}

fn appxa_core() -> (f64, f64, f64) {
    let e3 = (-3.0f64).exp();
    let e11 = (-11.0f64).exp();
    (0.25 + 3.0 * e3 + 5.0 * e11, 0.5, 0.25 - 4.0 * e3 + 36.0 * e11)
}

fn appxa_pmf_terms(extra: impl Fn(usize) -> f64, bound: f64) -> Vec<f64> {
    let (p0, p1, p2) = appxa_core();
    let e11 = (-11.0f64).exp();
    let mut pmf = vec![p0 + extra(0), p1 + extra(1), p2 + extra(2)];
    let mut w = e11 * 32.0; // e^{-11} 8^k / k! at k = 2
    let mut b = bound * 32.0;
    let mut k = 3usize;
    loop {
        w *= 8.0 / k as f64;
        b *= 8.0 / k as f64;
        pmf.push(w + extra(k));
        if k >= 16 && 2.0 * b * 8.0 / (k + 1) as f64 <= PMF_TAIL * 1e-2 {
            break;
        }
        k += 1;
    }
    pmf
}

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// `(1 − v)^k − 1 + k v`, accurate for small `v`.
pub fn convex_gap(k: u64, v: f64) -> f64 {
    if k < 2 || v == 0.0 {
        return 0.0;
    }
    let kf = k as f64;
    if kf * v <= 0.5 {
        let mut term = kf * (kf - 1.0) / 2.0 * v * v;
        let mut sum = term;
        let mut j = 2u64;
        while j < k {
            term *= -v * (kf - j as f64) / (j as f64 + 1.0);
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            j += 1;
        }
        sum
    } else {
        (kf * (-v).ln_1p()).exp() - 1.0 + kf * v
    }
}

fn poisson_gap(u: f64) -> f64 {
    if u <= 0.5 {
        let mut term = u * u / 2.0;
        let mut sum = term;
        let mut j = 2.0;
        loop {
            term *= -u / (j + 1.0);
            sum += term;
            if term.abs() <= 1e-18 * sum {
                break;
            }
            j += 1.0;
        }
        sum
    } else {
        (-u).exp() - 1.0 + u
    }
}

impl OffspringLaw {
    /// Bin(2, ½).
    pub fn binary() -> Self {
        Self::mary(2).expect("binary law is valid")
    }

    /// Bin(m, 1/m), `m ≥ 2`.
    pub fn mary(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Validation(format!("mary requires m >= 2, got {m}")));
        }
        let mf = m as f64;
        let q = 1.0 / mf;
        let mut p = (mf * (-q).ln_1p()).exp();
        let mut pmf = vec![p];
        for k in 0..m {
            let ratio = (mf - k as f64) / (k as f64 + 1.0) * q / (1.0 - q);
            p *= ratio;
            pmf.push(p);
            let next = (mf - k as f64 - 1.0) / (k as f64 + 2.0) * q / (1.0 - q);
            if k >= 2 && next < 0.5 && p * next / (1.0 - next) < PMF_TAIL * 1e-2 {
                break;
            }
        }
        let name = if m == 2 { "binary".to_string() } else { format!("mary:{m}") };
        Self::finish(
            name,
            Family::Binomial { m },
            dense(&pmf),
            1.0 - q,
            (mf - 1.0) * (mf - 2.0) / (mf * mf),
        )
    }

    /// Po(1).
    pub fn poisson() -> Self {
        let mut p = (-1.0f64).exp();
        let mut pmf = vec![p];
        let mut k = 1.0;
        loop {
            p /= k;
            pmf.push(p);
            if k >= 2.0 && 2.0 * p / (k + 1.0) < PMF_TAIL * 1e-2 {
                break;
            }
            k += 1.0;
        }
        Self::finish("poisson".into(), Family::Poisson, dense(&pmf), 1.0, 1.0)
            .expect("poisson law is valid")
    }

    /// 2·Bernoulli(½).
    pub fn fullbinary() -> Self {
        Self::full_mary_any(2).expect("full binary law is valid")
    }

    /// m·Bernoulli(1/m), `m ≥ 3`.
    pub fn fullmary(m: u64) -> Result<Self> {
        if m < 3 {
            return Err(Error::Validation(format!(
                "fullmary requires m >= 3 (use fullbinary for m = 2), got {m}"
            )));
        }
        Self::full_mary_any(m)
    }

    fn full_mary_any(m: u64) -> Result<Self> {
        let mf = m as f64;
        let name = if m == 2 { "fullbinary".to_string() } else { format!("fullmary:{m}") };
        Self::finish(
            name,
            Family::FullMary { m },
            vec![(0, 1.0 - 1.0 / mf), (m, 1.0 / mf)],
            mf - 1.0,
            (mf - 1.0) * (mf - 2.0),
        )
    }

    /// Ge(½): `p_k = 2^{-k-1}`.
    pub fn geometric() -> Self {
        let mut pmf = Vec::new();
        let mut p = 0.5;
        loop {
            pmf.push(p);
            if pmf.len() > 2 && p < PMF_TAIL * 1e-2 {
                break;
            }
            p *= 0.5;
        }
        Self::finish("geometric".into(), Family::Geometric, dense(&pmf), 2.0, 6.0)
            .expect("geometric law is valid")
    }

    /// `p0 = p2 = c/2`, `p1 = 1 − c`, for `1e-9 < c ≤ 1`.
    pub fn cfam(c: f64) -> Result<Self> {
        if !(c > 1e-9 && c <= 1.0) {
            return Err(Error::Validation(format!("cfam requires 1e-9 < c <= 1, got {c}")));
        }
        Self::finish(
            format!("cfam:{c}"),
            Family::CFamily { c },
            dense(&[c / 2.0, 1.0 - c, c / 2.0]),
            c,
            0.0,
        )
    }

    /// `λ Φ_{5,m} + (1 − λ) Φ_3` with `λ ∈ [0,1]`, `m ≥ 2`.
    pub fn mixture(lambda: f64, m: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Validation(format!("mix requires 0 <= λ <= 1, got {lambda}")));
        }
        if m < 2 {
            return Err(Error::Validation(format!("mix requires m >= 2, got {m}")));
        }
        let mf = m as f64;
        let mut pmf = vec![(0u64, lambda * (1.0 - 1.0 / mf) + (1.0 - lambda) / 2.0)];
        if m == 2 {
            pmf.push((2, lambda / mf + (1.0 - lambda) / 2.0));
        } else {
            pmf.push((2, (1.0 - lambda) / 2.0));
            pmf.push((m, lambda / mf));
        }
        pmf.retain(|&(_, p)| p > 0.0);
        Self::finish(
            format!("mix:{lambda}:{m}"),
            Family::Mixture { lambda, m },
            pmf,
            lambda * (mf - 1.0) + (1.0 - lambda),
            lambda * (mf - 1.0) * (mf - 2.0),
        )
    }

    /// The counterexample law.
    pub fn counterexample() -> Self {
        let e3 = (-3.0f64).exp();
        let e11 = (-11.0f64).exp();
        let pmf = appxa_pmf_terms(|_| 0.0, e11);
        Self::finish(
            "appxa".into(),
            Family::Counterexample,
            dense(&pmf),
            0.5 + 56.0 * e3 + 8.0 * e11,
            512.0 * e3,
        )
        .expect("counterexample law is valid")
    }

    /// The counterexample law perturbed by `c3 · g_ε`.
    pub fn counterexample_perturbed(eps: f64, c3: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::Validation(format!("appxa requires 0 <= ε <= 1, got {eps}")));
        }
        if !(c3 >= 0.0 && c3.is_finite()) {
            return Err(Error::Validation(format!("appxa requires c3 >= 0, got {c3}")));
        }
        let e3 = (-3.0f64).exp();
        let e11 = (-11.0f64).exp();
        let g = g_eps_coeffs(eps, 400);
        let mut pmf = appxa_pmf_terms(|k| c3 * g[k], e11 + c3);
        for (k, p) in pmf.iter_mut().enumerate() {
            if *p < -PMF_TAIL {
                return Err(Error::Validation(format!(
                    "nonnegativity: coefficient {k} of the perturbed pgf is {p:e}"
                )));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        Self::finish(
            format!("appxa:{eps}:{c3}"),
            Family::CounterexamplePerturbed { eps, c3 },
            dense(&pmf),
            0.5 + 56.0 * e3 + 8.0 * e11 + c3 * G_FREQ * G_FREQ / 2.0,
            512.0 * e3 + c3 * 6.0 * eps,
        )
    }

    /// A finite pmf `p_0, p_1, ...`.
    pub fn custom(pmf: &[f64]) -> Result<Self> {
        if pmf.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Validation("nonnegativity: pmf entries must be >= 0".into()));
        }
        let sup = dense(pmf);
        let var: f64 = sup.iter().map(|&(k, p)| (k as f64) * (k as f64 - 1.0) * p).sum();
        let third: f64 = sup
            .iter()
            .map(|&(k, p)| {
                let k = k as f64;
                k * (k - 1.0) * (k - 2.0) * p
            })
            .sum();
        let list: Vec<String> = pmf.iter().map(|p| p.to_string()).collect();
        Self::finish(format!("custom:{}", list.join(",")), Family::Custom, sup, var, third)
    }

    fn finish(
        name: String,
        family: Family,
        support: Vec<(u64, f64)>,
        variance: f64,
        third_factorial: f64,
    ) -> Result<Self> {
        let total: f64 = support.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Validation(format!("normalization: Σ p_k = {total}")));
        }
        let mean: f64 = support.iter().map(|&(k, p)| k as f64 * p).sum();
        if (mean - 1.0).abs() > SUM_TOL {
            return Err(Error::Validation(format!("criticality: Σ k p_k = {mean}")));
        }
        let p0 = support.first().filter(|s| s.0 == 0).map_or(0.0, |s| s.1);
        if p0 <= 0.0 {
            return Err(Error::Validation("p0 > 0: the law has no mass at 0".into()));
        }
        if !support.iter().any(|&(k, p)| k >= 2 && p > 0.0) {
            return Err(Error::Validation("nondegeneracy: p_k = 0 for all k >= 2".into()));
        }
        let recomputed: f64 = support.iter().map(|&(k, p)| (k as f64) * (k as f64 - 1.0) * p).sum();
        if !(variance > 0.0) || (recomputed - variance).abs() > 1e-10 * variance.max(1.0) {
            return Err(Error::Validation(format!(
                "variance: stored {variance} but pmf gives {recomputed}"
            )));
        }
        let span = support.iter().fold(0, |g, &(k, _)| gcd(g, k));
        let truncation = support.last().map_or(0, |s| s.0);
        Ok(Self { name, family, support, truncation, variance, third_factorial, span })
    }

    /// Canonical descriptor, parseable by [`OffspringLaw::parse`].
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Nonzero pmf entries `(k, p_k)` in increasing `k`.
    pub fn support(&self) -> &[(u64, f64)] {
        &self.support
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.support
            .binary_search_by_key(&k, |s| s.0)
            .map_or(0.0, |i| self.support[i].1)
    }

    /// Largest `k` retained in the pmf.
    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    pub fn p0(&self) -> f64 {
        self.support[0].1
    }

    /// σ² = Var ξ.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }

    /// E[ξ(ξ−1)(ξ−2)].
    pub fn third_factorial_moment(&self) -> f64 {
        self.third_factorial
    }

    pub fn span(&self) -> u64 {
        self.span
    }

    /// Whether a tree with `n` vertices has positive probability.
    pub fn is_attainable(&self, n: usize) -> bool {
        n >= 1 && (n as u64 - 1).is_multiple_of(self.span)
    }

    /// Φ(t) for `|t| ≤ 1`.
    pub fn pgf(&self, t: Complex64) -> Result<Complex64> {
        check_disk(t)?;
        Ok(self.pgf_unchecked(t))
    }

    /// Φ(t) for real `t ∈ [0, 1]`.
    pub fn pgf_real(&self, t: f64) -> f64 {
        self.pgf_unchecked(Complex64::new(t, 0.0)).re
    }

    fn pgf_unchecked(&self, t: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self.family {
            Family::Binomial { m } if m <= u32::MAX as u64 => {
                (one + (t - 1.0) / m as f64).powu(m as u32)
            }
            Family::Poisson => (t - 1.0).exp(),
            Family::FullMary { m } if m <= u32::MAX as u64 => {
                (t.powu(m as u32) + (m as f64 - 1.0)) / m as f64
            }
            Family::Geometric => one / (2.0 - t),
            Family::CFamily { c } => t + (one - t) * (one - t) * (c / 2.0),
            Family::Mixture { lambda, m } if m <= u32::MAX as u64 => {
                let five = (t.powu(m as u32) + (m as f64 - 1.0)) / m as f64;
                five * lambda + (one + t * t) * (0.5 * (1.0 - lambda))
            }
            Family::Counterexample => appxa_pgf(t),
            Family::CounterexamplePerturbed { eps, c3 } => appxa_pgf(t) + g_eps_complex(eps, t) * c3,
            _ => horner(&self.support, t),
        }
    }

    /// m-th derivative Φ^{(m)}(t) for `|t| ≤ 1`.
    pub fn pgf_derivative(&self, m: u32, t: Complex64) -> Result<Complex64> {
        check_disk(t)?;
        if m == 0 {
            return Ok(self.pgf_unchecked(t));
        }
        let one = Complex64::new(1.0, 0.0);
        let falling = |n: u64| -> f64 { (0..u64::from(m)).map(|i| n as f64 - i as f64).product() };
        let v = match self.family {
            Family::Binomial { m: n } if n <= u32::MAX as u64 => {
                if u64::from(m) > n {
                    Complex64::new(0.0, 0.0)
                } else {
                    (one + (t - 1.0) / n as f64).powu((n - u64::from(m)) as u32)
                        * (falling(n) / (n as f64).powi(m as i32))
                }
            }
            Family::Poisson => (t - 1.0).exp(),
            Family::FullMary { m: n } if n <= u32::MAX as u64 => {
                if u64::from(m) > n {
                    Complex64::new(0.0, 0.0)
                } else {
                    t.powu((n - u64::from(m)) as u32) * (falling(n) / n as f64)
                }
            }
            Family::Geometric => {
                let fact: f64 = (1..=m).map(f64::from).product();
                (one / (2.0 - t)).powu(m + 1) * fact
            }
            Family::CFamily { c } => match m {
                1 => one - (one - t) * c,
                2 => Complex64::new(c, 0.0),
                _ => Complex64::new(0.0, 0.0),
            },
            Family::Counterexample => appxa_derivative(m, t),
            Family::CounterexamplePerturbed { eps, c3 } => {
                appxa_derivative(m, t) + g_eps_derivative(eps, m, t) * c3
            }
            _ => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(k, p) in &self.support {
                    if k >= u64::from(m) {
                        acc += t.powu((k - u64::from(m)) as u32) * (p * falling(k));
                    }
                }
                acc
            }
        };
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Divergence(format!(
                "derivative of order {m} of {} at {t} is not finite",
                self.name
            )));
        }
        Ok(v)
    }

    /// `Φ(1 − u) − (1 − u)` for `u ∈ [0, 1]`, without cancellation near `u = 0`.
    pub fn excess(&self, u: f64) -> f64 {
        match self.family {
            Family::Binomial { m } => convex_gap(m, u / m as f64),
            Family::Poisson => poisson_gap(u),
            Family::FullMary { m } => convex_gap(m, u) / m as f64,
            Family::Geometric => u * u / (1.0 + u),
            Family::CFamily { c } => 0.5 * c * u * u,
            Family::Mixture { lambda, m } => {
                lambda * convex_gap(m, u) / m as f64 + (1.0 - lambda) * 0.5 * u * u
            }
            _ => self.support.iter().map(|&(k, p)| p * convex_gap(k, u)).sum(),
        }
    }

    /// `1 − Φ′(1 − u)`, the derivative of [`excess`](Self::excess).
    pub fn excess_slope(&self, u: f64) -> f64 {
        let lu = (-u).ln_1p();
        self.support
            .iter()
            .filter(|s| s.0 >= 2)
            .map(|&(k, p)| -p * k as f64 * ((k as f64 - 1.0) * lu).exp_m1())
            .sum()
    }

    /// `ln(Φ(1 − u) − (1 − u))`, valid down to `u` far below the underflow of the gap.
    pub fn ln_excess(&self, u: f64) -> f64 {
        if u < 1e-30 {
            (0.5 * self.variance).ln() + 2.0 * u.ln()
        } else {
            self.excess(u).ln()
        }
    }

    /// `log R(η)` with `R(η) = Φ(η)/η`, given `η` and `u = 1 − η` separately.
    pub fn log_r(&self, eta: f64, u: f64) -> f64 {
        if eta < 1e-200 {
            return self.pgf_real(eta).ln() - eta.ln();
        }
        (self.excess(u) / eta).ln_1p()
    }

    /// `ln log R(η)`, accurate as `η → 1`.
    pub fn ln_log_r(&self, eta: f64, u: f64) -> f64 {
        if eta < 1e-200 {
            return self.log_r(eta, u).ln();
        }
        let lx = self.ln_excess(u) - eta.ln();
        if lx < -18.0 {
            let x = lx.exp();
            lx - 0.5 * x
        } else {
            lx.exp().ln_1p().ln()
        }
    }
}

fn check_disk(t: Complex64) -> Result<()> {
    if !(t.norm() <= 1.0 + 1e-14) {
        return Err(Error::Domain(format!("pgf argument {t} lies outside the unit disk")));
    }
    Ok(())
}

fn horner(support: &[(u64, f64)], t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(k, p) in support {
        acc += t.powu(k as u32) * p;
    }
    acc
}

fn appxa_pgf(t: Complex64) -> Complex64 {
    let (p0, p1, p2) = appxa_core();
    let e11 = (-11.0f64).exp();
    // e^{8t} − 1 − 8t − 32t² by its series when |8t| is small.
    let x = t * 8.0;
    let tail = if x.norm() < 1.0 {
        let mut term = x * x * x / 6.0;
        let mut sum = term;
        for j in 4..40 {
            term = term * x / j as f64;
            sum += term;
        }
        sum
    } else {
        x.exp() - 1.0 - x - x * x / 2.0
    };
    Complex64::new(p0, 0.0) + t * p1 + t * t * p2 + tail * e11
}

fn appxa_derivative(m: u32, t: Complex64) -> Complex64 {
    let (_, p1, p2) = appxa_core();
    let e11 = (-11.0f64).exp();
    let e8 = (t * 8.0).exp();
    match m {
        1 => Complex64::new(p1, 0.0) + t * (2.0 * p2) + (e8 * 8.0 - 8.0 - t * 64.0) * e11,
        2 => Complex64::new(2.0 * p2, 0.0) + (e8 * 64.0 - 64.0) * e11,
        _ => e8 * (8f64.powi(m as i32) * e11),
    }
}

fn dense(pmf: &[f64]) -> Vec<(u64, f64)> {
    pmf.iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(k, p)| (k as u64, *p))
        .collect()
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot read {what} from '{s}'")))
}

impl OffspringLaw {
    /// Parse a descriptor such as `binary`, `mary:5`, `cfam:0.5`, `mix:0.3:4`,
    /// `appxa:0.01:0.002` or `custom:0.25,0.5,0.25`.
    pub fn parse(desc: &str) -> Result<Self> {
        let desc = desc.trim();
        let (head, rest) = match desc.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (desc, None),
        };
        match (head, rest) {
            ("binary", None) => Ok(Self::binary()),
            ("mary", Some(m)) => Self::mary(parse_num(m, "m")?),
            ("poisson", None) => Ok(Self::poisson()),
            ("fullbinary", None) => Ok(Self::fullbinary()),
            ("fullmary", Some(m)) => Self::fullmary(parse_num(m, "m")?),
            ("geometric", None) => Ok(Self::geometric()),
            ("cfam", Some(c)) => Self::cfam(parse_num(c, "c")?),
            ("mix", Some(r)) => {
                let (l, m) = r
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("mix needs λ:m, got '{r}'")))?;
                Self::mixture(parse_num(l, "λ")?, parse_num(m, "m")?)
            }
            ("appxa", None) => Ok(Self::counterexample()),
            ("appxa", Some(r)) => {
                let (e, c) = r
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("appxa needs ε:c3, got '{r}'")))?;
                Self::counterexample_perturbed(parse_num(e, "ε")?, parse_num(c, "c3")?)
            }
            ("custom", Some(list)) => {
                let pmf = list
                    .split(',')
                    .map(|s| parse_num(s, "probability"))
                    .collect::<Result<Vec<f64>>>()?;
                Self::custom(&pmf)
            }
            _ => Err(Error::Parse(format!("unknown law descriptor '{desc}'"))),
        }
    }
}

impl FromStr for OffspringLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for OffspringLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn builtins() -> Vec<OffspringLaw> {
        [
            "binary", "mary:3", "mary:5", "mary:1000", "poisson", "fullbinary", "fullmary:3",
            "fullmary:1000000", "geometric", "cfam:0.5", "cfam:1e-6", "mix:0.3:4", "appxa",
            "appxa:0.01:0.00004", "custom:0.4,0.3,0.2,0.1",
        ]
        .iter()
        .map(|d| OffspringLaw::parse(d).unwrap())
        .collect()
    }

    #[test]
    fn binary_pmf_and_variance() {
        let b = OffspringLaw::binary();
        assert_eq!(b.support(), &[(0, 0.25), (1, 0.5), (2, 0.25)]);
        assert_eq!(b.variance(), 0.5);
        assert_eq!(b.span(), 1);
    }

    #[test]
    fn family_variances() {
        assert_eq!(OffspringLaw::fullmary(3).unwrap().variance(), 2.0);
        assert!((OffspringLaw::mary(5).unwrap().variance() - 0.8).abs() < 1e-15);
        assert_eq!(OffspringLaw::fullbinary().span(), 2);
        assert_eq!(OffspringLaw::fullmary(3).unwrap().span(), 3);
    }

    #[test]
    fn cfam_endpoints() {
        let half = OffspringLaw::cfam(0.5).unwrap();
        assert_eq!(half.support(), OffspringLaw::binary().support());
        let one = OffspringLaw::cfam(1.0).unwrap();
        assert_eq!(one.support(), OffspringLaw::fullbinary().support());
        assert!(OffspringLaw::cfam(1e-10).is_err());
    }

    #[test]
    fn mixture_zero_is_fullbinary() {
        let m = OffspringLaw::mixture(0.0, 4).unwrap();
        assert_eq!(m.support(), OffspringLaw::fullbinary().support());
    }

    #[test]
    fn counterexample_normalized() {
        let a = OffspringLaw::counterexample();
        let e3 = (-3.0f64).exp();
        let e11 = (-11.0f64).exp();
        assert_eq!(a.pmf(1), 0.5);
        assert!((a.pmf(0) - (0.25 + 3.0 * e3 + 5.0 * e11)).abs() < 1e-16);
        let s: f64 = a.support().iter().map(|s| s.1).sum();
        let m: f64 = a.support().iter().map(|s| s.0 as f64 * s.1).sum();
        assert!((s - 1.0).abs() < 1e-12 && (m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation_names_invariant() {
        let e = OffspringLaw::custom(&[0.5, 0.0, 0.5, 0.1]).unwrap_err();
        assert!(e.to_string().contains("normalization"), "{e}");
        let e = OffspringLaw::custom(&[0.5, 0.0, 0.0, 0.5]).unwrap_err();
        assert!(e.to_string().contains("criticality"), "{e}");
        let e = OffspringLaw::custom(&[0.0, 1.0]).unwrap_err();
        assert!(e.to_string().contains("p0"), "{e}");
        assert!(OffspringLaw::parse("appxa:0.5:10").unwrap_err().to_string().contains("nonneg"));
    }

    #[test]
    fn pgf_closed_forms_match_pmf() {
        for law in builtins() {
            for &t in &[0.0, 0.3, -0.7, 0.95] {
                let closed = law.pgf(c(t)).unwrap();
                let direct = horner(law.support(), c(t));
                assert!((closed - direct).norm() < 1e-13, "{} at {t}", law.name());
            }
            let z = Complex64::from_polar(0.9, 1.1);
            let closed = law.pgf(z).unwrap();
            let direct = horner(law.support(), z);
            assert!((closed - direct).norm() < 1e-13, "{}", law.name());
            assert!((law.pgf(c(1.0)).unwrap() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn pgf_examples() {
        let b = OffspringLaw::binary();
        let t = Complex64::new(0.2, 0.5);
        assert!((b.pgf(t).unwrap() - (t + 1.0) * (t + 1.0) * 0.25).norm() < 1e-15);
        assert!(b.pgf(c(1.5)).is_err());
        let cf = OffspringLaw::cfam(0.3).unwrap();
        assert!((cf.pgf_real(0.4) - (0.4 + 0.15 * 0.36)).abs() < 1e-15);
    }

    #[test]
    fn derivatives_at_one() {
        for law in builtins() {
            let d1 = law.pgf_derivative(1, c(1.0)).unwrap();
            assert!((d1 - 1.0).norm() < 1e-12, "{}", law.name());
            let d2 = law.pgf_derivative(2, c(1.0)).unwrap();
            assert!((d2.re - law.variance()).abs() < 1e-10 * law.variance(), "{}", law.name());
            let d3 = law.pgf_derivative(3, c(1.0)).unwrap();
            let rel = (d3.re - law.third_factorial_moment()).abs()
                / law.third_factorial_moment().max(1.0);
            assert!(rel < 1e-10, "{}", law.name());
        }
        let p = OffspringLaw::poisson();
        assert!((p.pgf_derivative(3, c(1.0)).unwrap() - 1.0).norm() < 1e-15);
        assert_eq!(OffspringLaw::binary().pgf_derivative(2, c(1.0)).unwrap().re, 0.5);
    }

    #[test]
    fn finite_difference_derivative() {
        let h = 1e-5;
        for law in builtins() {
            for i in 1..20 {
                let t = i as f64 / 20.0;
                let fd = (law.pgf_real(t + h) - law.pgf_real(t - h)) / (2.0 * h);
                let d = law.pgf_derivative(1, c(t)).unwrap().re;
                assert!((fd - d).abs() < 1e-7, "{} at {t}: {fd} vs {d}", law.name());
            }
        }
    }

    #[test]
    fn excess_matches_direct() {
        for law in builtins() {
            for &u in &[0.9, 0.5, 0.2] {
                let direct = law.pgf_real(1.0 - u) - (1.0 - u);
                assert!((law.excess(u) - direct).abs() < 1e-13, "{} at {u}", law.name());
            }
            let u = 1e-6;
            let lead = 0.5 * law.variance() * u * u;
            let rel = (law.excess(u) - lead).abs() / lead;
            let bound = 1e-6 * law.third_factorial_moment() / law.variance() + 1e-9;
            if !matches!(law.family(), Family::FullMary { m } if *m > 1000) {
                assert!(rel <= bound, "{}: {rel}", law.name());
            }
        }
    }

    #[test]
    fn excess_slope_is_derivative() {
        for law in builtins() {
            let (u, h) = (0.3, 1e-6);
            let fd = (law.excess(u + h) - law.excess(u - h)) / (2.0 * h);
            assert!((fd - law.excess_slope(u)).abs() < 1e-8, "{}", law.name());
        }
    }

    #[test]
    fn parse_round_trip() {
        for law in builtins() {
            let again = OffspringLaw::parse(law.name()).unwrap();
            assert_eq!(again.support(), law.support());
        }
        assert!(OffspringLaw::parse("trinary").is_err());
        assert!(OffspringLaw::parse("mary:x").is_err());
    }

    #[test]
    fn g_eps_properties() {
        for &eps in &[0.0, 1e-4, 0.01, 1.0] {
            assert!(g_eps(eps, 1.0).abs() < 1e-15);
            assert!(g_eps_derivative(eps, 1, c(1.0)).norm() < 1e-13);
            for i in 0..=100 {
                let g = g_eps(eps, i as f64 / 100.0);
                assert!(g >= -eps - 1e-15 && g <= 1.0 + 1e-15);
            }
        }
        let coeffs = g_eps_coeffs(0.01, 60);
        for &t in &[0.1, 0.5, 0.9] {
            let s: f64 = coeffs.iter().rev().fold(0.0, |acc, &g| acc * t + g);
            assert!((s - g_eps(0.01, t)).abs() < 1e-12);
        }
    }
}
