//! Comparing offspring laws: pointwise pgf order, orderings of μ, shifted
//! negative moments, complete monotonicity and the counterexample framework.

mod perturbation;

pub use perturbation::{perturbation_framework, exp_remainder_h, laplace_remainder_g, PerturbationFramework};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{eta_integral, gamma_p, mu_alpha, mu_prime};
use crate::offspring::OffspringLaw;
use crate::treesize::{TailModel, TreeSizeLaw};

/// Equality band for pgf comparisons.
pub const ORDER_TOL: f64 = 1e-13;

/// Relation found between two pgfs on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `Φ₁ ≤ Φ₂` with no grid point strictly below (equal within tolerance).
    Leq,
    /// `Φ₁ ≤ Φ₂` with strict inequality somewhere.
    Strict,
    /// `Φ₁ < Φ₂` at every interior grid point.
    PointwiseStrict,
    Incomparable,
}

/// Grid-certified verdict on `Φ₁` versus `Φ₂`. When `swapped` is set the
/// relation holds for `(Φ₂, Φ₁)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub swapped: bool,
    /// Up to two points `(t, Φ₁(t) − Φ₂(t))` witnessing the verdict.
    pub witness_points: Vec<(f64, f64)>,
    pub grid_size: usize,
}

impl OrderVerdict {
    /// Whether `Φ₁ ≤ Φ₂` holds on the grid.
    pub fn is_leq(&self) -> bool {
        self.relation != Relation::Incomparable && (!self.swapped || self.relation == Relation::Leq)
    }

    /// Whether `Φ₁ ≺ Φ₂`.
    pub fn is_pointwise_strict(&self) -> bool {
        self.relation == Relation::PointwiseStrict && !self.swapped
    }
}

/// Compare `Φ₁` and `Φ₂` on `t = k/grid_size`, `0 < k < grid_size`.
pub fn phi_order(law1: &OffspringLaw, law2: &OffspringLaw, grid_size: usize) -> Result<OrderVerdict> {
    if grid_size < 100 {
        return Err(Error::Domain(format!("grid_size must be at least 100, got {grid_size}")));
    }
    let mut max = (0.0, f64::NEG_INFINITY);
    let mut min = (0.0, f64::INFINITY);
    for k in 1..grid_size {
        let t = k as f64 / grid_size as f64;
        // Difference of excesses is the difference of pgfs, without the shared 1 − u.
        let u = 1.0 - t;
        let d = law1.excess(u) - law2.excess(u);
        if d > max.1 {
            max = (t, d);
        }
        if d < min.1 {
            min = (t, d);
        }
    }
    let (relation, swapped, witness) = if max.1 > ORDER_TOL && min.1 < -ORDER_TOL {
        (Relation::Incomparable, false, vec![max, min])
    } else if max.1 <= ORDER_TOL && min.1 >= -ORDER_TOL {
        (Relation::Leq, false, vec![])
    } else if max.1 <= ORDER_TOL {
        let rel = if max.1 < -ORDER_TOL { Relation::PointwiseStrict } else { Relation::Strict };
        (rel, false, vec![min, max])
    } else {
        let rel = if min.1 > ORDER_TOL { Relation::PointwiseStrict } else { Relation::Strict };
        (rel, true, vec![max, min])
    };
    Ok(OrderVerdict { relation, swapped, witness_points: witness, grid_size })
}

/// Which μ to compare.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MuArg {
    Alpha(f64),
    Prime,
}

/// Values of μ along a chain and whether they move in the predicted direction.
#[derive(Debug, Clone, Serialize)]
pub struct MuOrderReport {
    pub arg: MuArg,
    pub laws: Vec<String>,
    pub values: Vec<f64>,
    /// Predicted direction along the chain.
    pub increasing: bool,
    /// Smallest step in the predicted direction; positive iff the chain is strict.
    pub min_margin: f64,
    pub passed: bool,
}

/// For a chain `Φ₁ ≤ Φ₂ ≤ …`, μ(α) should increase for α < 0 and decrease for
/// 0 < α < ½; μ′ should decrease.
pub fn mu_order_check(laws: &[OffspringLaw], arg: MuArg) -> Result<MuOrderReport> {
    let (values, increasing) = match arg {
        MuArg::Alpha(a) => {
            if a == 0.0 || !(a < 0.5) {
                return Err(Error::Domain(format!("μ ordering needs α < 1/2, α != 0; got {a}")));
            }
            let v = laws
                .iter()
                .map(|l| mu_alpha(l, Complex64::new(a, 0.0)).map(|z| z.re))
                .collect::<Result<Vec<_>>>()?;
            (v, a < 0.0)
        }
        MuArg::Prime => (laws.iter().map(mu_prime).collect(), false),
    };
    let min_margin = values
        .windows(2)
        .map(|w| if increasing { w[1] - w[0] } else { w[0] - w[1] })
        .fold(f64::INFINITY, f64::min);
    Ok(MuOrderReport {
        arg,
        laws: laws.iter().map(|l| l.name().to_string()).collect(),
        values,
        increasing,
        min_margin,
        passed: min_margin > 0.0,
    })
}

/// `E(|T| − 1 + t)^α` by two routes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShiftedMoment {
    pub alpha: f64,
    pub t: f64,
    /// `Σ q_n (n − 1 + t)^α` plus the fitted tail.
    pub series: f64,
    /// The incomplete-gamma integral (`t > 1`) or μ(α) (`t = 1`).
    pub integral: Option<f64>,
}

impl ShiftedMoment {
    pub fn discrepancy(&self) -> Option<f64> {
        self.integral.map(|v| (v - self.series).abs())
    }
}

fn shifted_series(size: &TreeSizeLaw, tail: &TailModel, alpha: f64, t: f64) -> f64 {
    let head: f64 = size
        .q_slice()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &q)| q != 0.0)
        .map(|(n, &q)| q * (n as f64 - 1.0 + t).powf(alpha))
        .sum();
    head + tail.sum_shifted_power(Complex64::new(alpha, 0.0), t - 1.0).re
}

/// `E(|T| − 1 + t)^α` for `α < 0`, `t > 0`.
pub fn shifted_negative_moment(size: &TreeSizeLaw, alpha: f64, t: f64) -> Result<ShiftedMoment> {
    if !(alpha < 0.0) {
        return Err(Error::Domain(format!("shifted moments need α < 0, got {alpha}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("shifted moments need t > 0, got {t}")));
    }
    let law = size.law();
    let tail = TailModel::fit(size)?;
    let series = shifted_series(size, &tail, alpha, t);
    let integral = if t > 1.0 {
        let a = -alpha;
        let s = t - 1.0;
        let v = eta_integral(law, |llr| {
            let x = s * llr.exp();
            Complex64::new(gamma_p(a, x).unwrap_or(f64::NAN), 0.0)
        });
        Some(s.powf(alpha) * v.re)
    } else if t == 1.0 {
        Some(mu_alpha(law, Complex64::new(alpha, 0.0))?.re)
    } else {
        None
    };
    Ok(ShiftedMoment { alpha, t, series, integral })
}

/// One entry `(−1)^r h^{(r)}(t)` of a complete-monotonicity check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CmEntry {
    pub r: u32,
    pub t: f64,
    pub signed_derivative: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CmReport {
    pub laws: (String, String),
    pub entries: Vec<CmEntry>,
    pub min_signed: f64,
    pub passed: bool,
}

/// Slack allowed below zero in [`complete_monotonicity_check`].
pub const CM_SLACK: f64 = 1e-10;

/// `h(t) = E(|T₂| − 1 + t)^{-1} − E(|T₁| − 1 + t)^{-1}` and its derivatives,
/// term by term in `n`. Requires `Φ₁ ≤ Φ₂`.
pub fn complete_monotonicity_check(
    size1: &TreeSizeLaw,
    size2: &TreeSizeLaw,
    r_max: u32,
    t_grid: &[f64],
) -> Result<CmReport> {
    if r_max > 3 {
        return Err(Error::Guard(format!("r_max must be at most 3, got {r_max}")));
    }
    let verdict = phi_order(size1.law(), size2.law(), 10_000)?;
    if !verdict.is_leq() {
        return Err(Error::Precondition(format!(
            "complete monotonicity needs Φ({}) <= Φ({}) on [0, 1]",
            size1.law().name(),
            size2.law().name()
        )));
    }
    let n = size1.n_max().min(size2.n_max());
    let tail1 = TailModel::fit(size1)?;
    let tail2 = TailModel::fit(size2)?;
    let mut entries = Vec::new();
    for r in 0..=r_max {
        let fact: f64 = (1..=r).map(f64::from).product();
        let beta = -1.0 - f64::from(r);
        for &t in t_grid {
            if !(t > 0.0) {
                return Err(Error::Domain(format!("t must be positive, got {t}")));
            }
            // (−1)^r h^{(r)}(t) = r! Σ (q2 − q1) (n − 1 + t)^{−r−1}
            let mut acc = 0.0;
            for k in 1..=n {
                let dq = size2.q(k) - size1.q(k);
                if dq != 0.0 {
                    acc += dq * (k as f64 - 1.0 + t).powf(beta);
                }
            }
            let b = Complex64::new(beta, 0.0);
            acc += (tail2.sum_shifted_power(b, t - 1.0) - tail1.sum_shifted_power(b, t - 1.0)).re;
            entries.push(CmEntry { r, t, signed_derivative: fact * acc });
        }
    }
    let min_signed = entries.iter().map(|e| e.signed_derivative).fold(f64::INFINITY, f64::min);
    Ok(CmReport {
        laws: (size1.law().name().to_string(), size2.law().name().to_string()),
        entries,
        min_signed,
        passed: min_signed >= -CM_SLACK,
    })
}
