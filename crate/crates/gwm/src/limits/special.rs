//! Gamma, digamma and incomplete gamma functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Γ(z) for complex `z`, Lanczos (g = 7, 9 terms) with reflection.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("Γ at {}", z.re)));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::new(PI, 0.0) / (s * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // √(2π) t^{z+½} e^{−t} x, with the power taken in log form.
    ((z + 0.5) * t.ln() - t).exp() * x * (2.0 * PI).sqrt()
}

/// Γ(x) for real `x`.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(gamma_complex(Complex64::new(x, 0.0))?.re)
}

/// ψ(z) = Γ′(z)/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("ψ at {}", z.re)));
    }
    if z.re < 0.5 {
        let cot = (z * PI).cos() / (z * PI).sin();
        return Ok(digamma(1.0 - z)? - cot * PI);
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 8.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    // ln z − 1/(2z) − Σ B_{2k} / (2k z^{2k})
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32_760.0))))));
    Ok(acc + z.ln() - 0.5 / z - series)
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    check_inc(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(inc_series(a, x))
    } else {
        Ok(1.0 - inc_fraction(a, x))
    }
}

/// Regularized upper incomplete gamma Q(a, x).
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    check_inc(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - inc_series(a, x))
    } else {
        Ok(inc_fraction(a, x))
    }
}

/// Upper incomplete gamma Γ(a, x) = ∫_x^∞ w^{a−1} e^{−w} dw.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(gamma_q(a, x)? * gamma(a)?)
}

fn check_inc(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::Domain(format!("incomplete gamma needs a > 0, x >= 0; got ({a}, {x})")));
    }
    Ok(())
}

fn ln_prefactor(a: f64, x: f64) -> f64 {
    a * x.ln() - x - ln_gamma(a)
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let mut s = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + s.ln()
}

fn inc_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..10_000 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * ln_prefactor(a, x).exp()
}

fn inc_fraction(a: f64, x: f64) -> f64 {
    // Modified Lentz on the continued fraction for Q(a, x).
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    ln_prefactor(a, x).exp() * h
}
