//! Law of the unconditioned tree size |T|.
//!
//! `q_n = P(|T| = n)` are the coefficients of `y(z) = z Φ(y(z))`. They are
//! computed online: `q_{n+1} = [z^n] Φ(y)` only needs `q_1..q_n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::offspring::{Family, OffspringLaw};
use crate::series::TruncatedSeries;

/// Tree-size law truncated at `N`.
#[derive(Debug, Clone)]
pub struct TreeSizeLaw {
    law: OffspringLaw,
    q: Vec<f64>,
}

impl TreeSizeLaw {
    /// `q_0..q_N`.
    pub fn new(law: &OffspringLaw, n: usize) -> Self {
        let n = n.max(1);
        // w[k] = [z^k] Φ(y(z)) = q_{k+1}
        let w = match law.family() {
            Family::Poisson => poisson_online(n),
            Family::Geometric => geometric_online(n),
            _ => {
                let maxdeg = law.support().iter().map(|s| s.0).filter(|&k| k as usize <= n).max();
                if maxdeg.unwrap_or(0) <= 64 {
                    power_chain_online(law, n)
                } else {
                    miller_online(law, n)
                }
            }
        };
        let mut q = vec![0.0; n + 1];
        q[1..].copy_from_slice(&w[..n]);
        Self { law: law.clone(), q }
    }

    pub fn law(&self) -> &OffspringLaw {
        &self.law
    }

    /// Truncation N.
    pub fn n_max(&self) -> usize {
        self.q.len() - 1
    }

    /// `q_n`; zero beyond the truncation is not implied, so this panics there.
    pub fn q(&self, n: usize) -> f64 {
        self.q[n]
    }

    pub fn q_slice(&self) -> &[f64] {
        &self.q
    }

    /// `y(z)` as a truncated series.
    pub fn series(&self) -> TruncatedSeries {
        TruncatedSeries::from_real(&self.q)
    }

    /// `Σ_{n ≤ N} q_n`.
    pub fn partial_sum(&self) -> f64 {
        self.q.iter().sum()
    }

    /// `q_n √(2π) σ n^{3/2} / h`, which tends to 1.
    pub fn q_asymptotic_ratio(&self, n: usize) -> Result<f64> {
        let span = self.law.span();
        if !self.law.is_attainable(n) {
            return Err(Error::Domain(format!(
                "size {n} is not attainable: the law has span {span}, so n must be 1 mod {span}"
            )));
        }
        if n > self.n_max() {
            return Err(Error::Domain(format!("n = {n} exceeds truncation {}", self.n_max())));
        }
        let nf = n as f64;
        Ok(self.q[n] * (2.0 * PI).sqrt() * self.law.sigma() * nf * nf.sqrt() / span as f64)
    }

    /// Largest coefficientwise residual of `y = z Φ(y)`, checked by direct
    /// power accumulation over the pmf.
    pub fn fixed_point_residual(&self) -> f64 {
        let n = self.n_max();
        let y = self.series();
        let mut phi = TruncatedSeries::zero(n);
        let mut pow = TruncatedSeries::constant(Complex64::new(1.0, 0.0), n);
        let mut k = 0u64;
        for &(deg, p) in self.law.support() {
            if deg as usize > n {
                break;
            }
            while k < deg {
                pow = pow.mul(&y);
                k += 1;
            }
            phi = phi.add(&pow.scale(Complex64::new(p, 0.0)));
        }
        let rhs = phi.shift_up();
        y.max_abs_diff(&rhs)
    }
}

fn poisson_online(n: usize) -> Vec<f64> {
    // W = e^{y−1}: k W_k = Σ_{j=1}^{k} j y_j W_{k−j}, with y_j = W_{j−1}.
    let mut w = vec![0.0; n];
    w[0] = (-1.0f64).exp();
    for k in 1..n {
        let mut s = 0.0;
        for j in 1..=k {
            s += j as f64 * w[j - 1] * w[k - j];
        }
        w[k] = s / k as f64;
    }
    w
}

fn geometric_online(n: usize) -> Vec<f64> {
    // W (2 − y) = 1: 2 W_k = Σ_{j=1}^{k} y_j W_{k−j}.
    let mut w = vec![0.0; n];
    w[0] = 0.5;
    for k in 1..n {
        let mut s = 0.0;
        for j in 1..=k {
            s += w[j - 1] * w[k - j];
        }
        w[k] = s / 2.0;
    }
    w
}

fn power_chain_online(law: &OffspringLaw, n: usize) -> Vec<f64> {
    let kmax = law
        .support()
        .iter()
        .map(|s| s.0 as usize)
        .filter(|&k| k <= n)
        .max()
        .unwrap_or(0);
    // pw[k][i] = [z^i] y^k for k = 1..kmax.
    let mut pw = vec![vec![0.0; n + 1]; kmax + 1];
    let mut y = vec![0.0; n + 1];
    let mut w = vec![0.0; n];
    let p: Vec<f64> = (0..=kmax as u64).map(|k| law.pmf(k)).collect();
    w[0] = p[0];
    for i in 1..n {
        y[i] = w[i - 1];
        pw[1][i] = y[i];
        for k in 2..=kmax.min(i) {
            let (lo, hi) = pw.split_at_mut(k);
            let prev = &lo[k - 1];
            let mut s = 0.0;
            for j in 1..=i + 1 - k {
                s += y[j] * prev[i - j];
            }
            hi[0][i] = s;
        }
        let mut acc = 0.0;
        for k in 1..=kmax.min(i) {
            acc += p[k] * pw[k][i];
        }
        w[i] = acc;
    }
    w
}

fn miller_online(law: &OffspringLaw, n: usize) -> Vec<f64> {
    // A = y/z with A_0 = p0; B^{(k)} = A^k by the J.C.P. Miller recurrence.
    let terms: Vec<(usize, f64)> = law
        .support()
        .iter()
        .filter(|s| s.0 >= 1 && s.0 as usize <= n)
        .map(|&(k, p)| (k as usize, p))
        .collect();
    let mut a = vec![0.0; n];
    let mut b: Vec<Vec<f64>> = terms.iter().map(|_| vec![0.0; n]).collect();
    let p0 = law.p0();
    a[0] = p0;
    for (bk, &(k, _)) in b.iter_mut().zip(&terms) {
        bk[0] = p0.powi(k as i32);
    }
    for i in 1..n {
        // W_i needs B^{(k)}_{i−k} for k ≤ i, all below index i.
        let mut acc = 0.0;
        for (bk, &(k, p)) in b.iter().zip(&terms) {
            if k > i {
                continue;
            }
            acc += p * bk[i - k];
        }
        a[i] = acc;
        // Extend every B^{(k)} to index i using A_1..A_i.
        for (bk, &(k, _)) in b.iter_mut().zip(&terms) {
            let kf = k as f64;
            let mut s = 0.0;
            for j in 1..=i {
                s += ((kf + 1.0) * j as f64 - i as f64) * a[j] * bk[i - j];
            }
            bk[i] = s / (i as f64 * p0);
        }
    }
    a
}

/// Smallest fixed point of `w ↦ tΦ(w)` in `[0, 1]`.
///
/// Newton's method on a convex function, started on the side that makes the
/// iterates monotone: from `w = 0` when the root is below ½, and from `u = 1`
/// in the variable `u = 1 − w` otherwise.
pub fn y_eval(law: &OffspringLaw, t: f64) -> Result<f64> {
    Ok(y_eval_pair(law, t)?.0)
}

/// `1 − y(t)`, accurate when `t` is close to 1.
pub fn y_eval_complement(law: &OffspringLaw, t: f64) -> Result<f64> {
    Ok(y_eval_pair(law, t)?.1)
}

/// `(y(t), 1 − y(t))`, each to full relative precision.
pub fn y_eval_pair(law: &OffspringLaw, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("y(t) needs 0 <= t <= 1, got {t}")));
    }
    if t == 1.0 {
        return Ok((1.0, 0.0));
    }
    if t == 0.0 {
        return Ok((0.0, 1.0));
    }
    if t * law.pgf_real(0.5) <= 0.5 {
        // g(w) = tΦ(w) − w is convex, positive at 0 and decreasing up to the root.
        let mut w = 0.0f64;
        for _ in 0..200 {
            let g = t * law.pgf_real(w) - w;
            let dg = t * law.pgf_derivative(1, Complex64::new(w, 0.0))?.re - 1.0;
            let next = (w - g / dg).max(w);
            let step = next - w;
            w = next;
            if step <= 1e-16 * w || g <= 0.0 {
                break;
            }
        }
        return Ok((w, 1.0 - w));
    }
    // h(u) = t·excess(u) − (1 − t)(1 − u) is increasing and convex in u.
    let s = 1.0 - t;
    let mut u = 0.5f64;
    for _ in 0..200 {
        let h = t * law.excess(u) - s * (1.0 - u);
        let dh = t * law.excess_slope(u) + s;
        let next = (u - h / dh).min(u);
        if next <= 0.0 {
            u *= 0.5;
            continue;
        }
        let step = u - next;
        u = next;
        if step <= 1e-16 * u || h <= 0.0 {
            break;
        }
    }
    Ok((1.0 - u, u))
}

/// `R(η) = Φ(η)/η`.
pub fn r_eval(law: &OffspringLaw, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("R(η) needs 0 < η <= 1, got {eta}")));
    }
    Ok(1.0 + law.excess(1.0 - eta) / eta)
}

/// Tail model `q_n ≈ (h / (√(2π) σ)) n^{-3/2} (a_0 + a_1/n + a_2/n² + a_3/n³)`
/// fitted to the last computed coefficients, for summing beyond `N`.
#[derive(Debug, Clone)]
pub struct TailModel {
    amplitude: f64,
    a: [f64; 4],
    first: f64,
    span: f64,
}

impl TailModel {
    /// Fit from four attainable sizes spread over the upper half of the range.
    pub fn fit(size: &TreeSizeLaw) -> Result<Self> {
        let law = size.law();
        let h = law.span() as usize;
        let n = size.n_max();
        let last = n - (n - 1) % h;
        if last < 64 {
            return Err(Error::Guard("tail fit needs a truncation of at least 64".into()));
        }
        let pts: Vec<usize> = [1.0, 0.8, 0.6, 0.4]
            .iter()
            .map(|f| {
                let m = (last as f64 * f) as usize;
                m - (m - 1) % h
            })
            .collect();
        let amplitude = h as f64 / ((2.0 * PI).sqrt() * law.sigma());
        let mut m = [[0.0; 5]; 4];
        for (row, &k) in m.iter_mut().zip(&pts) {
            let x = 1.0 / k as f64;
            let kf = k as f64;
            row[0] = 1.0;
            row[1] = x;
            row[2] = x * x;
            row[3] = x * x * x;
            row[4] = size.q(k) * kf * kf.sqrt() / amplitude;
        }
        let a = solve4(m);
        Ok(Self { amplitude, a, first: (last + h) as f64, span: h as f64 })
    }

    /// `Σ_{n > N, attainable} q̂_n (n + shift)^β`, with `Re β < 1/2`.
    pub fn sum_shifted_power(&self, beta: Complex64, shift: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut binom = Complex64::new(1.0, 0.0);
        for k in 0..10 {
            if k > 0 {
                binom = binom * (beta - (k - 1) as f64) / k as f64;
            }
            let sk = shift.powi(k);
            if k > 0 && sk == 0.0 {
                break;
            }
            for (i, &ai) in self.a.iter().enumerate() {
                let s = beta - 1.5 - i as f64 - k as f64;
                total += binom * sk * ai * hurwitz_tail(s, self.first, self.span);
            }
        }
        total * self.amplitude
    }

    /// Fitted coefficients `a_0..a_3`; `a_0` should be close to 1.
    pub fn coefficients(&self) -> [f64; 4] {
        self.a
    }
}

fn solve4(mut m: [[f64; 5]; 4]) -> [f64; 4] {
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        for r in 0..4 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..5 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    [m[0][4] / m[0][0], m[1][4] / m[1][1], m[2][4] / m[2][2], m[3][4] / m[3][3]]
}

const BERNOULLI_2K: [f64; 7] =
    [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];

/// `Σ_{j ≥ 0} (n0 + h j)^s` for `Re s < −1` and large `n0`, by Euler–Maclaurin.
pub fn hurwitz_tail(s: Complex64, n0: f64, h: f64) -> Complex64 {
    let ln0 = n0.ln();
    let f0 = (s * ln0).exp();
    let integral = -(f0 * n0) / ((s + 1.0) * h);
    let mut total = integral + f0 * 0.5;
    // f^{(m)}(0) = h^m s(s−1)…(s−m+1) n0^{s−m}
    let mut deriv = f0 * s * (h / n0); // m = 1
    let mut fact = 1.0; // (2k)!
    for (k, &b) in BERNOULLI_2K.iter().enumerate() {
        let m = 2 * k + 1;
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
        total -= deriv * (b / fact);
        deriv = deriv * (s - m as f64) * (s - (m + 1) as f64) * (h / n0) * (h / n0);
    }
    total
}
