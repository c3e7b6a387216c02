//! κ coefficients of the higher-moment recursions, their closed forms,
//! Gaussian limit moments and Wick pairings.

use std::f64::consts::{LN_2, PI, SQRT_2};

use num_complex::Complex64;

use super::special::gamma;
use super::{imag_gamma_ratio, imag_variance, shape_variance_const};
use crate::error::{Error, Result};
use crate::offspring::OffspringLaw;

/// Largest order accepted by the κ recursions.
pub const KAPPA_MAX_ORDER: usize = 12;

const TWO_M32: f64 = 0.353_553_390_593_273_8; // 2^{-3/2}
const TWO_P32: f64 = 2.828_427_124_746_190_3; // 2^{3/2}

fn guard(k: usize) -> Result<()> {
    if k == 0 || k > KAPPA_MAX_ORDER {
        return Err(Error::Guard(format!("κ order must be in 1..={KAPPA_MAX_ORDER}, got {k}")));
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `n!!` with `(−1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> f64 {
    if n <= 0 {
        return 1.0;
    }
    (1..=n).rev().step_by(2).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `κ̃_{2},…,κ̃_{2k}` of the shape functional by the quadratic recursion.
pub fn kappa_shape_recursive(k: usize) -> Result<Vec<f64>> {
    guard(k)?;
    let mut v = vec![0.0; k + 1];
    v[1] = TWO_P32 * (1.0 - LN_2);
    for j in 2..=k {
        v[j] = TWO_M32 * (1..j).map(|i| binomial(2 * j, 2 * i) * v[i] * v[j - i]).sum::<f64>();
    }
    Ok(v[1..].to_vec())
}

/// `κ̃_{2k} = 2^{3/2} (2k)!(2k−2)!/((k−1)! k!) d₁^k` with `d₁ = ½(1 − ln 2)`.
pub fn kappa_shape_closed(k: usize) -> Result<f64> {
    guard(k)?;
    let d1 = 0.5 * (1.0 - LN_2);
    Ok(TWO_P32 * factorial(2 * k) * factorial(2 * k - 2) / (factorial(k - 1) * factorial(k))
        * d1.powi(k as i32))
}

/// `κ̄_1,…,κ̄_ℓ` for `α = it` by the recursion with squared binomials.
pub fn kappa_imag_recursive(t: f64, l: usize) -> Result<Vec<f64>> {
    guard(l)?;
    let mut v = vec![0.0; l + 1];
    v[1] = imag_gamma_ratio(t)? / (2.0 * PI).sqrt();
    for j in 2..=l {
        v[j] = TWO_M32 * (1..j).map(|i| binomial(j, i).powi(2) * v[i] * v[j - i]).sum::<f64>();
    }
    Ok(v[1..].to_vec())
}

/// `κ̄_ℓ = 2^{3/2} ℓ!(2ℓ−2)!/(ℓ−1)! d₁^ℓ` with `d₁ = Re[Γ(it−½)/Γ(it)]/(4√π)`.
pub fn kappa_imag_closed(t: f64, l: usize) -> Result<f64> {
    guard(l)?;
    let d1 = imag_gamma_ratio(t)? / (4.0 * PI.sqrt());
    Ok(TWO_P32 * factorial(l) * factorial(2 * l - 2) / factorial(l - 1) * d1.powi(l as i32))
}

/// Which Gaussian limit a moment refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitKind {
    /// Shape functional on the `√(n log n)` scale; real normal.
    Shape,
    /// `X_n(it)` on the `√(n log n)` scale; symmetric complex normal.
    Imag(f64),
}

/// Limit of `E[F^ℓ F̄^r]/(n log n)^{(ℓ+r)/2}`. For [`LimitKind::Shape`] the
/// moment is `E F^{ℓ+r}` (F is real).
pub fn limit_moment(law: &OffspringLaw, kind: LimitKind, l: usize, r: usize) -> Result<f64> {
    match kind {
        LimitKind::Shape => {
            let order = l + r;
            if order % 2 == 1 {
                return Ok(0.0);
            }
            let k = order / 2;
            Ok(shape_variance_const(law).powi(k as i32) * double_factorial(2 * k as i64 - 1))
        }
        LimitKind::Imag(t) => {
            if l != r {
                return Ok(0.0);
            }
            Ok(imag_variance(law, t)?.powi(l as i32) * factorial(l))
        }
    }
}

/// The limit moment rebuilt from κ: `σ^{-2k} √(2π) κ_k / Γ(k − ½)`, with
/// `κ_k` the recursive κ̃_{2k} (shape) or κ̄_k (imaginary power).
pub fn limit_moment_from_kappa(law: &OffspringLaw, kind: LimitKind, k: usize) -> Result<f64> {
    let kappa = match kind {
        LimitKind::Shape => kappa_shape_recursive(k)?[k - 1],
        LimitKind::Imag(t) => kappa_imag_recursive(t, k)?[k - 1],
    };
    Ok(law.variance().powi(-(k as i32)) * (2.0 * PI).sqrt() * kappa / gamma(k as f64 - 0.5)?)
}

/// `E[Z₁^ℓ Z₂^r]` for centred jointly Gaussian `(Z₁, Z₂)` with
/// `E Z₁² = κ20`, `E Z₁Z₂ = κ11`, `E Z₂² = κ02`.
pub fn wick_mixed_moment(k20: Complex64, k11: Complex64, k02: Complex64, l: usize, r: usize) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if (l + r) % 2 == 1 {
        return zero;
    }
    let mut acc = zero;
    let mut j = l % 2;
    while j <= l.min(r) {
        let c = binomial(l, j)
            * binomial(r, j)
            * factorial(j)
            * double_factorial(l as i64 - j as i64 - 1)
            * double_factorial(r as i64 - j as i64 - 1);
        acc += k11.powu(j as u32) * k20.powu(((l - j) / 2) as u32) * k02.powu(((r - j) / 2) as u32) * c;
        j += 2;
    }
    acc
}

/// Oracle for [`wick_mixed_moment`]: sum over all perfect matchings of
/// `ℓ` slots of type 1 and `r` of type 2.
pub fn wick_matching_oracle(k20: Complex64, k11: Complex64, k02: Complex64, l: usize, r: usize) -> Complex64 {
    fn go(slots: &mut Vec<u8>, k: &[Complex64; 3]) -> Complex64 {
        if slots.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let first = slots.remove(0);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..slots.len() {
            let other = slots.remove(i);
            acc += k[(first + other) as usize] * go(slots, k);
            slots.insert(i, other);
        }
        slots.insert(0, first);
        acc
    }
    if (l + r) % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mut slots: Vec<u8> = std::iter::repeat_n(0, l).chain(std::iter::repeat_n(1, r)).collect();
    go(&mut slots, &[k20, k11, k02])
}

/// Table `κ̂_{ℓ,r}` for even `s = ℓ + r ≤ s_max`, indexed `[ℓ][r]`; odd `s`
/// and `s = 0` entries are zero.
pub type KappaHat = Vec<Vec<Complex64>>;

fn empty_table(s_max: usize) -> KappaHat {
    vec![vec![Complex64::new(0.0, 0.0); s_max + 1]; s_max + 1]
}

/// κ̂ from the quadratic recursion over ordered splits with both parts even.
pub fn kappa_hat_recursive(k20: Complex64, k11: Complex64, k02: Complex64, sigma: f64, s_max: usize) -> KappaHat {
    let mut t = empty_table(s_max);
    if s_max < 2 {
        return t;
    }
    let base = 1.0 / (SQRT_2 * sigma);
    t[2][0] = k20 * base;
    t[1][1] = k11 * base;
    t[0][2] = k02 * base;
    for s in (4..=s_max).step_by(2) {
        for l in 0..=s {
            let r = s - l;
            let mut acc = Complex64::new(0.0, 0.0);
            for l1 in 0..=l {
                for r1 in 0..=r {
                    let (l2, r2) = (l - l1, r - r1);
                    let (s1, s2) = (l1 + r1, l2 + r2);
                    if s1 == 0 || s2 == 0 || s1 % 2 == 1 || s2 % 2 == 1 {
                        continue;
                    }
                    acc += t[l1][r1] * t[l2][r2] * (binomial(l, l1) * binomial(r, r1));
                }
            }
            t[l][r] = acc * (TWO_M32 * sigma);
        }
    }
    t
}

/// κ̂ from the closed form `(s−3)!!/(σ 2^{(s−1)/2})` times the Wick sum.
pub fn kappa_hat_closed(k20: Complex64, k11: Complex64, k02: Complex64, sigma: f64, s_max: usize) -> KappaHat {
    let mut t = empty_table(s_max);
    for s in (2..=s_max).step_by(2) {
        let pre = double_factorial(s as i64 - 3) / (sigma * 2f64.powf((s as f64 - 1.0) / 2.0));
        for l in 0..=s {
            t[l][s - l] = wick_mixed_moment(k20, k11, k02, l, s - l) * pre;
        }
    }
    t
}

/// `K(x, y) = √2/σ − (1/σ)√(2 − Q)` with `Q = κ20 x² + 2κ11 xy + κ02 y²`.
pub fn k_closed(k20: Complex64, k11: Complex64, k02: Complex64, sigma: f64, x: f64, y: f64) -> Complex64 {
    let q = k20 * x * x + k11 * (2.0 * x * y) + k02 * y * y;
    (Complex64::new(SQRT_2, 0.0) - (2.0 - q).sqrt()) / sigma
}

/// `Σ κ̂_{ℓ,r} x^ℓ y^r/(ℓ! r!)` over the table.
pub fn k_series(table: &KappaHat, x: f64, y: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, row) in table.iter().enumerate() {
        for (r, v) in row.iter().enumerate() {
            if *v != Complex64::new(0.0, 0.0) {
                acc += v * (x.powi(l as i32) * y.powi(r as i32) / (factorial(l) * factorial(r)));
            }
        }
    }
    acc
}

/// Residual of `K = 2^{-3/2} σ K² + Q/(2^{3/2} σ)` with `K` the truncated
/// double series of the table.
pub fn k_identity_residual(
    table: &KappaHat,
    k20: Complex64,
    k11: Complex64,
    k02: Complex64,
    sigma: f64,
    x: f64,
    y: f64,
) -> f64 {
    let k = k_series(table, x, y);
    let q = k20 * x * x + k11 * (2.0 * x * y) + k02 * y * y;
    (k - k * k * (TWO_M32 * sigma) - q / (TWO_P32 * sigma)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn shape_routes_agree() {
        let rec = kappa_shape_recursive(12).unwrap();
        assert!((rec[0] - TWO_P32 * (1.0 - LN_2)).abs() < 1e-15);
        assert!((rec[1] - 6.0 * TWO_P32 * (1.0 - LN_2).powi(2)).abs() < 1e-14);
        for k in 1..=12 {
            let cl = kappa_shape_closed(k).unwrap();
            assert!((rec[k - 1] - cl).abs() <= 1e-12 * cl.abs(), "k = {k}");
        }
        assert!(kappa_shape_closed(13).is_err());
    }

    #[test]
    fn imag_routes_agree() {
        for t in [0.5, 1.0, 2.0, -3.0] {
            let rec = kappa_imag_recursive(t, 12).unwrap();
            for l in 1..=12 {
                let cl = kappa_imag_closed(t, l).unwrap();
                assert!((rec[l - 1] - cl).abs() <= 1e-12 * cl.abs(), "t = {t}, l = {l}");
            }
        }
        assert!(kappa_imag_recursive(0.0, 3).is_err());
    }

    #[test]
    fn limit_moments_match_kappa() {
        let law = OffspringLaw::poisson();
        let var = shape_variance_const(&law);
        assert_eq!(limit_moment(&law, LimitKind::Shape, 2, 0).unwrap(), var);
        assert_eq!(limit_moment(&law, LimitKind::Shape, 3, 0).unwrap(), 0.0);
        assert_eq!(limit_moment(&law, LimitKind::Imag(1.0), 2, 1).unwrap(), 0.0);
        for k in 1..=8 {
            let a = limit_moment(&law, LimitKind::Shape, 2 * k, 0).unwrap();
            let b = limit_moment_from_kappa(&law, LimitKind::Shape, k).unwrap();
            assert!((a - b).abs() <= 1e-12 * a, "shape k = {k}");
            let a = limit_moment(&law, LimitKind::Imag(1.0), k, k).unwrap();
            let b = limit_moment_from_kappa(&law, LimitKind::Imag(1.0), k).unwrap();
            assert!((a - b).abs() <= 1e-12 * a, "imag k = {k}");
        }
    }

    #[test]
    fn wick_small_cases() {
        let (a, b, d) = (c(2.0), Complex64::new(0.5, 0.25), c(3.0));
        assert_eq!(wick_mixed_moment(a, b, d, 1, 1), b);
        assert_eq!(wick_mixed_moment(a, b, d, 2, 0), a);
        assert_eq!(wick_mixed_moment(a, b, d, 2, 1), c(0.0));
        let want = b * b * 2.0 + a * d;
        assert!((wick_mixed_moment(a, b, d, 2, 2) - want).norm() < 1e-15);
        for l in 0..=6 {
            for r in 0..=6 {
                let f = wick_mixed_moment(a, b, d, l, r);
                let o = wick_matching_oracle(a, b, d, l, r);
                assert!((f - o).norm() <= 1e-12 * (1.0 + o.norm()), "({l},{r})");
            }
        }
    }

    #[test]
    fn kappa_hat_routes_and_k_identity() {
        let (a, b, d) = (Complex64::new(0.3, 0.1), c(0.4), Complex64::new(0.3, -0.1));
        let sigma = 1.3;
        let rec = kappa_hat_recursive(a, b, d, sigma, 40);
        let cl = kappa_hat_closed(a, b, d, sigma, 40);
        for l in 0..=40 {
            for r in 0..=40 - l {
                let diff = (rec[l][r] - cl[l][r]).norm();
                assert!(diff <= 1e-12 * (1.0 + cl[l][r].norm()), "({l},{r})");
            }
        }
        for &(x, y) in &[(0.3, 0.2), (-0.5, 0.4), (0.7, -0.1)] {
            let s = k_series(&cl, x, y);
            assert!((s - k_closed(a, b, d, sigma, x, y)).norm() < 1e-12);
            assert!(k_identity_residual(&cl, a, b, d, sigma, x, y) < 1e-12);
        }
    }
}
