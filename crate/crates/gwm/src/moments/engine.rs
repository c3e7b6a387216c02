//! Generating-function route to conditional moments.
//!
//! For a multiset `A` of tolls, `M_A(z) = Σ_n q_n E[∏_{i∈A} F_{b_i}(T_n)] z^n`
//! satisfies
//!
//! ```text
//! M_A = (z y′/y) Σ_{I₀ ⊆ A} B_{I₀} ⊙ [ z Σ_{π partition of A∖I₀} ∏_{J∈π} M_J · Φ^{(|π|)}(y) ]
//! ```
//!
//! where the term `I₀ = ∅, π = {A}` is left out and `B_{I₀}` is the
//! Hadamard product of the toll series in `I₀`.

use std::collections::HashMap;

use num_complex::Complex64;

use super::toll::TollSequence;
use crate::error::{Error, Result};
use crate::offspring::{Family, OffspringLaw};
use crate::series::TruncatedSeries;
use crate::treesize::TreeSizeLaw;

/// Largest number of tolls in one moment.
pub const MAX_TOLLS: usize = 6;

/// `Φ^{(m)}(y(z))` for `m = 0..=m_max` by the derivative ladder, truncated at `n`.
///
/// `m = 0` is `y/z`; each step applies `Φ^{(m+1)}(y) = (d/dz Φ^{(m)}(y)) / y′`.
/// `size` must be truncated at `n + m_max + 1` or more. Each rung amplifies
/// rounding error by roughly a factor `n`, so this is only suitable for small
/// truncations; [`phi_of_y`] composes directly and is what the engine uses.
pub fn phi_ladder(size: &TreeSizeLaw, m_max: usize, n: usize) -> Result<Vec<TruncatedSeries>> {
    if size.n_max() < n + m_max + 1 {
        return Err(Error::Guard(format!(
            "ladder to order {m_max} at truncation {n} needs q up to {}",
            n + m_max + 1
        )));
    }
    let y = size.series().truncate(n + m_max + 1);
    let z = TruncatedSeries::monomial(1, y.truncation());
    let yp = y.differentiate();
    let mut cur = y.divide(&z)?;
    let mut out = vec![cur.truncate(n)];
    for _ in 0..m_max {
        cur = cur.differentiate().divide(&yp)?;
        out.push(cur.truncate(n));
    }
    Ok(out)
}

/// `a^e` by repeated squaring.
pub fn series_pow(a: &TruncatedSeries, e: u64) -> TruncatedSeries {
    let n = a.truncation();
    let mut result = TruncatedSeries::constant(Complex64::new(1.0, 0.0), n);
    let mut base = a.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

fn falling(k: u64, j: usize) -> f64 {
    (0..j as u64).map(|i| (k - i) as f64).product()
}

/// `Φ^{(m)}(y(z))` for `m = 0..=m_max`, by composing the closed form of each
/// derivative with `y`. The result is truncated at `size.n_max() − 1`, since
/// `y/z` needs `q_{N+1}`.
pub fn phi_of_y(size: &TreeSizeLaw, m_max: usize) -> Vec<TruncatedSeries> {
    let law = size.law();
    let n = size.n_max() - 1;
    let y = size.series().truncate(n);
    let v = TruncatedSeries::from_fn(n, |k| Complex64::new(size.q(k + 1), 0.0));
    let c = |x: f64| Complex64::new(x, 0.0);
    let one = TruncatedSeries::constant(c(1.0), n);
    let zero = TruncatedSeries::zero(n);
    let y_pow = |e: u64| series_pow(&y, e);
    let mut out = vec![v.clone()];
    for j in 1..=m_max {
        let s = match *law.family() {
            Family::Poisson => v.clone(),
            Family::Geometric => series_pow(&v, j as u64 + 1).scale(c(falling(j as u64, j))),
            Family::Binomial { m } => {
                if j as u64 > m {
                    zero.clone()
                } else {
                    let mf = m as f64;
                    let base = y.scale(c(1.0 / mf)).add(&TruncatedSeries::constant(c(1.0 - 1.0 / mf), n));
                    series_pow(&base, m - j as u64).scale(c(falling(m, j) / mf.powi(j as i32)))
                }
            }
            Family::FullMary { m } => {
                if j as u64 > m {
                    zero.clone()
                } else {
                    y_pow(m - j as u64).scale(c(falling(m, j) / m as f64))
                }
            }
            Family::CFamily { c: cc } => match j {
                1 => one.sub(&one.sub(&y).scale(c(cc))),
                2 => one.scale(c(cc)),
                _ => zero.clone(),
            },
            Family::Mixture { lambda, m } => {
                let five = if j as u64 > m {
                    zero.clone()
                } else {
                    y_pow(m - j as u64).scale(c(falling(m, j) / m as f64))
                };
                let three = match j {
                    1 => y.clone(),
                    2 => one.clone(),
                    _ => zero.clone(),
                };
                five.scale(c(lambda)).add(&three.scale(c(1.0 - lambda)))
            }
            _ => power_chain(law, &y, j),
        };
        out.push(s);
    }
    out
}

/// `Σ_k p_k k(k−1)…(k−j+1) y^{k−j}`.
fn power_chain(law: &OffspringLaw, y: &TruncatedSeries, j: usize) -> TruncatedSeries {
    let n = y.truncation();
    let mut acc = TruncatedSeries::zero(n);
    let mut pow = TruncatedSeries::constant(Complex64::new(1.0, 0.0), n);
    let mut e = 0u64;
    for &(k, p) in law.support() {
        if k < j as u64 || (k - j as u64) as usize > n + j {
            continue;
        }
        while e < k - j as u64 {
            pow = pow.mul(y);
            e += 1;
        }
        acc = acc.add(&pow.scale(Complex64::new(p * falling(k, j), 0.0)));
    }
    acc
}

/// Exact conditional moments by the series recursion, at truncation `N`.
#[derive(Debug, Clone)]
pub struct MomentEngine {
    law: OffspringLaw,
    n: usize,
    q: Vec<f64>,
    y: TruncatedSeries,
    zyy: TruncatedSeries,
    ladder: Vec<TruncatedSeries>,
}

impl MomentEngine {
    /// Engine for sizes up to `n`.
    pub fn new(law: &OffspringLaw, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Guard("engine truncation must be at least 2".into()));
        }
        let size = TreeSizeLaw::new(law, n + 1);
        let y = size.series().truncate(n);
        let ladder = phi_of_y(&size, MAX_TOLLS);
        // z y′/y = 1/(1 − z Φ′(y)); the divisor has nonpositive coefficients
        // after the first, so the division has no cancellation.
        let one = TruncatedSeries::constant(Complex64::new(1.0, 0.0), n);
        let zyy = one.divide(&one.sub(&ladder[1].shift_up()))?;
        Ok(Self { law: law.clone(), n, q: size.q_slice()[..=n].to_vec(), y, zyy, ladder })
    }

    pub fn law(&self) -> &OffspringLaw {
        &self.law
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn q(&self, n: usize) -> f64 {
        self.q[n]
    }

    pub fn y(&self) -> &TruncatedSeries {
        &self.y
    }

    /// `Φ^{(m)}(y(z))`.
    pub fn phi_of_y(&self, m: usize) -> &TruncatedSeries {
        &self.ladder[m]
    }

    /// `z y′(z)/y(z)`.
    pub fn zyy(&self) -> &TruncatedSeries {
        &self.zyy
    }

    /// `M_A(z)` for the toll multiset `A`.
    pub fn moment_series(&self, tolls: &[TollSequence]) -> Result<TruncatedSeries> {
        let l = tolls.len();
        if l > MAX_TOLLS {
            return Err(Error::Guard(format!(
                "at most {MAX_TOLLS} tolls per moment (cost grows like 3^l); got {l}"
            )));
        }
        if l == 0 {
            return Ok(self.y.clone());
        }
        let bs: Vec<TruncatedSeries> = tolls.iter().map(|t| t.series(self.n)).collect();
        let full = (1usize << l) - 1;
        let mut m: Vec<Option<TruncatedSeries>> = vec![None; full + 1];
        let mut memo: HashMap<(usize, usize), TruncatedSeries> = HashMap::new();
        // Bottom-up over subsets by popcount so every proper subset is ready.
        let mut order: Vec<usize> = (1..=full).collect();
        order.sort_by_key(|s| s.count_ones());
        for set in order {
            let v = self.subset_series(set, &bs, &m, &mut memo);
            m[set] = Some(v);
        }
        Ok(m[full].take().unwrap())
    }

    fn subset_series(
        &self,
        set: usize,
        bs: &[TruncatedSeries],
        m: &[Option<TruncatedSeries>],
        memo: &mut HashMap<(usize, usize), TruncatedSeries>,
    ) -> TruncatedSeries {
        let n = self.n;
        let mut total = TruncatedSeries::zero(n);
        // I₀ runs over all subsets of `set`, from `set` down to ∅.
        let mut i0 = set;
        loop {
            let rest = set & !i0;
            let mut bracket = TruncatedSeries::zero(n);
            for parts in 0..=rest.count_ones() as usize {
                if i0 == 0 && parts == 1 {
                    // π = {A}: the term moved to the left-hand side.
                    continue;
                }
                if let Some(p) = self.partition_products(rest, parts, m, memo) {
                    bracket = bracket.add(&p.mul(&self.ladder[parts]));
                }
            }
            let mut term = bracket.shift_up();
            let mut bits = i0;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                term = term.hadamard(&bs[i]);
                bits &= bits - 1;
            }
            total = total.add(&term);
            if i0 == 0 {
                break;
            }
            i0 = (i0 - 1) & set;
        }
        self.zyy.mul(&total)
    }

    /// `Σ_{π partition of s into k blocks} ∏_{J∈π} M_J`; `None` when there is
    /// no such partition. Every block must already be in `m`.
    fn partition_products(
        &self,
        s: usize,
        k: usize,
        m: &[Option<TruncatedSeries>],
        memo: &mut HashMap<(usize, usize), TruncatedSeries>,
    ) -> Option<TruncatedSeries> {
        if s == 0 {
            return (k == 0).then(|| TruncatedSeries::constant(Complex64::new(1.0, 0.0), self.n));
        }
        if k == 0 || k > s.count_ones() as usize {
            return None;
        }
        if k == 1 {
            return m[s].clone();
        }
        if let Some(v) = memo.get(&(s, k)) {
            return Some(v.clone());
        }
        let low = s & s.wrapping_neg();
        let others = s & !low;
        let mut acc: Option<TruncatedSeries> = None;
        // The block holding the lowest element is low ∪ sub, sub ⊊ others.
        let mut sub = others;
        loop {
            let block = low | sub;
            if block != s {
                if let Some(tail) = self.partition_products(s & !block, k - 1, m, memo) {
                    let mb = m[block].as_ref().expect("proper subsets are computed first");
                    let p = mb.mul(&tail);
                    acc = Some(match acc {
                        Some(a) => a.add(&p),
                        None => p,
                    });
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        if let Some(v) = &acc {
            memo.insert((s, k), v.clone());
        }
        acc
    }

    /// `E[∏ F_{b_i}(T_n)]` = `[z^n] M_A / q_n`.
    pub fn conditional_moment(&self, n: usize, tolls: &[TollSequence]) -> Result<Complex64> {
        let series = self.moment_series(tolls)?;
        self.extract(&series, n)
    }

    /// Conditional moments at several sizes from one series.
    pub fn conditional_moments(&self, ns: &[usize], tolls: &[TollSequence]) -> Result<Vec<Complex64>> {
        let series = self.moment_series(tolls)?;
        ns.iter().map(|&n| self.extract(&series, n)).collect()
    }

    /// `[z^n] series / q_n`.
    pub fn extract(&self, series: &TruncatedSeries, n: usize) -> Result<Complex64> {
        if n > self.n {
            return Err(Error::Guard(format!("n = {n} exceeds engine truncation {}", self.n)));
        }
        if !self.law.is_attainable(n) || self.q[n] == 0.0 {
            return Err(Error::Unattainable { n, span: self.law.span() });
        }
        Ok(series.coeff(n) / self.q[n])
    }
}
