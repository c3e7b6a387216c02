//! Truncated complex power series.
//!
//! A [`TruncatedSeries`] holds `c_0..c_N` of a power series modulo `z^{N+1}`.
//! Binary operations return a series truncated at the smaller of the two
//! operand truncations.

use std::fmt::Write as _;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Power series `Σ_{n ≤ N} c_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Series from coefficients `c_0..c_N`. Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![ZERO; n + 1])
    }

    /// The constant series `c`.
    pub fn constant(c: Complex64, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `z^k` (zero if `k > n`).
    pub fn monomial(k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Series whose n-th coefficient is `f(n)`.
    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self::new((0..=n).map(f).collect())
    }

    /// Truncation order N.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `c_n`, zero beyond the truncation.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Drop coefficients above `n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs[..=n.min(self.truncation())].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_fn(n, |i| self.coeffs[i] + other.coeffs[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_fn(n, |i| self.coeffs[i] - other.coeffs[i])
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * lambda).collect())
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let a = &self.coeffs[..=n];
        let b = &other.coeffs[..=n];
        // Skip leading zeros; many engine series start at z^1.
        let lo_a = a.iter().position(|c| *c != ZERO).unwrap_or(n + 1);
        let lo_b = b.iter().position(|c| *c != ZERO).unwrap_or(n + 1);
        let mut out = vec![ZERO; n + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(lo_a + lo_b) {
            let mut re = 0.0;
            let mut im = 0.0;
            for j in lo_a..=k - lo_b {
                let x = a[j];
                let y = b[k - j];
                re += x.re * y.re - x.im * y.im;
                im += x.re * y.im + x.im * y.re;
            }
            *slot = Complex64::new(re, im);
        }
        Self::new(out)
    }

    /// Coefficientwise product `Σ a_n b_n z^n`.
    pub fn hadamard(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_fn(n, |i| self.coeffs[i] * other.coeffs[i])
    }

    /// Multiply by `z`, keeping the truncation.
    pub fn shift_up(&self) -> Self {
        let n = self.truncation();
        Self::from_fn(n, |i| if i == 0 { ZERO } else { self.coeffs[i - 1] })
    }

    /// Quotient `a / b`. Common leading zeros are cancelled first; the result
    /// loses one truncation order per cancelled zero.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        let vb = other
            .coeffs
            .iter()
            .position(|c| *c != ZERO)
            .ok_or_else(|| Error::Division("divisor is identically zero".into()))?;
        let n = self.truncation().min(other.truncation());
        if vb > n {
            return Err(Error::Division("divisor vanishes up to the truncation".into()));
        }
        if let Some(va) = self.coeffs[..=n].iter().position(|c| *c != ZERO) {
            if va < vb {
                return Err(Error::Division(format!(
                    "dividend has order {va}, below the divisor order {vb}"
                )));
            }
        }
        let a = &self.coeffs[vb..=n];
        let b = &other.coeffs[vb..=n];
        let m = n - vb;
        let inv = Complex64::new(1.0, 0.0) / b[0];
        let mut c = vec![ZERO; m + 1];
        for k in 0..=m {
            let mut s = a[k];
            for j in 1..=k {
                s -= b[j] * c[k - j];
            }
            c[k] = s * inv;
        }
        Ok(Self::new(c))
    }

    /// Derivative; the truncation drops by one.
    pub fn differentiate(&self) -> Self {
        let n = self.truncation();
        if n == 0 {
            return Self::zero(0);
        }
        Self::from_fn(n - 1, |i| self.coeffs[i + 1] * (i as f64 + 1.0))
    }

    /// Value at a point inside the disk of convergence of the truncated sum.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Debug dump, one `n,re,im` row per coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{n},{:.17e},{:.17e}", c.re, c.im);
        }
        out
    }

    /// Maximum coefficient distance, over the common truncation.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.truncation().min(other.truncation());
        (0..=n).map(|i| (self.coeffs[i] - other.coeffs[i]).norm()).fold(0.0, f64::max)
    }
}

/// Coefficients of `Li_{α,r}(z) = Σ_{n≥1} (ln n)^r n^{−α} z^n`, with `c_0 = 0`.
///
/// `n^{−α}` is the principal branch `exp(−α ln n)`.
pub fn polylog_coeffs(alpha: Complex64, r: u32, n: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(n, |k| {
        if k == 0 {
            return ZERO;
        }
        let ln = (k as f64).ln();
        (-alpha * ln).exp() * ln.powi(r as i32)
    })
}

impl Index<usize> for TruncatedSeries {
    type Output = Complex64;
    fn index(&self, n: usize) -> &Complex64 {
        &self.coeffs[n]
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn add_and_scale() {
        let z = TruncatedSeries::monomial(1, 5);
        assert_eq!(z.add(&z), z.scale(c(2.0)));
        let l = polylog_coeffs(c(1.0), 0, 10);
        assert_eq!(l.scale(c(0.0)), TruncatedSeries::zero(10));
        let li0 = polylog_coeffs(c(0.0), 0, 10);
        assert_eq!(li0.add(&(-&li0)), TruncatedSeries::zero(10));
    }

    #[test]
    fn mul_examples() {
        let n = 12;
        let geo = TruncatedSeries::from_fn(n, |_| c(1.0));
        let mut om = vec![c(0.0); n + 1];
        om[0] = c(1.0);
        om[1] = c(-1.0);
        let prod = geo.mul(&TruncatedSeries::new(om));
        assert_eq!(prod, TruncatedSeries::constant(c(1.0), n));
        let z = TruncatedSeries::monomial(1, 4);
        assert_eq!(z.mul(&z), TruncatedSeries::monomial(2, 4));
    }

    #[test]
    fn truncation_is_min() {
        let a = TruncatedSeries::zero(7);
        let b = TruncatedSeries::zero(3);
        assert_eq!(a.mul(&b).truncation(), 3);
        assert_eq!(a.hadamard(&b).truncation(), 3);
        assert_eq!(a.add(&b).truncation(), 3);
    }

    #[test]
    fn hadamard_polylogs() {
        let n = 50;
        let one = c(1.0);
        let prod = polylog_coeffs(one, 0, n).hadamard(&polylog_coeffs(one, 0, n));
        assert!(prod.max_abs_diff(&polylog_coeffs(c(2.0), 0, n)) < 1e-15);
        let prod = polylog_coeffs(c(0.5), 1, n).hadamard(&polylog_coeffs(one, 1, n));
        assert!(prod.max_abs_diff(&polylog_coeffs(c(1.5), 2, n)) < 1e-14);
        let a = polylog_coeffs(Complex64::new(0.2, 1.0), 1, n);
        let k = TruncatedSeries::constant(c(3.0), n);
        assert_eq!(k.hadamard(&a), TruncatedSeries::zero(n));
    }

    #[test]
    fn polylog_values() {
        let l = polylog_coeffs(c(1.0), 0, 10);
        for k in 1..=10 {
            assert!((l[k] - 1.0 / k as f64).norm() < 1e-16);
        }
        let li0 = polylog_coeffs(c(0.0), 0, 10);
        assert_eq!(li0[0], c(0.0));
        assert!((1..=10).all(|k| li0[k] == c(1.0)));
        let i = Complex64::new(0.0, 1.0);
        let v = polylog_coeffs(i, 2, 5)[3];
        let l3 = 3f64.ln();
        let expect = (-i * l3).exp() * l3 * l3;
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn divide_and_differentiate() {
        let z2 = TruncatedSeries::monomial(2, 6);
        let z = TruncatedSeries::monomial(1, 6);
        let q = z2.divide(&z).unwrap();
        assert_eq!(q.coeff(1), c(1.0));
        assert_eq!(q.coeff(0), c(0.0));
        let l = polylog_coeffs(c(1.0), 0, 10);
        let d = l.differentiate();
        assert!((0..=9).all(|k| (d[k] - 1.0).norm() < 1e-15));
        assert!(z.divide(&TruncatedSeries::zero(6)).is_err());
        assert!(z.divide(&z2).is_err());
    }

    #[test]
    fn csv_dump() {
        let s = TruncatedSeries::from_real(&[1.0, 0.5]);
        let csv = s.to_csv();
        assert!(csv.starts_with("n,re,im\n0,"));
        assert_eq!(csv.lines().count(), 3);
    }
}
