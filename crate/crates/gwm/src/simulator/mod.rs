//! Monte Carlo sampling of conditioned trees and batch statistics of
//! additive functionals.

mod tree;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::TollSequence;
use crate::offspring::OffspringLaw;

pub use tree::{
    cycle_lemma_rotate, sample_conditioned_tree, subtree_sizes, DegreeSequence, TreeSampler, REJECTION_BUDGET,
};

/// Generator behind every stream; reproducibility is keyed on this name and the seed.
pub const GENERATOR: &str = "ChaCha8";
pub const MIN_BATCHES: usize = 20;
pub const MIN_REPS: usize = 1000;

/// Exponents `(ℓ, r)` with `ℓ + r ≤ 4`, in a fixed order.
const PAIRS: [(usize, usize); 15] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
];

fn pair_index(l: usize, r: usize) -> usize {
    PAIRS.iter().position(|&p| p == (l, r)).expect("ℓ + r ≤ 4")
}

/// The stream for replicate `r` under `seed`.
pub fn replicate_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

/// `Σ_v b_{|T_v|}`.
pub fn functional_eval(sizes: &[u32], toll: &TollSequence) -> Complex64 {
    let table = toll.table(sizes.len());
    sizes.iter().map(|&s| table[s as usize - 1]).sum()
}

#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: Complex64,
    c: Complex64,
}

impl Kahan {
    fn add(&mut self, x: Complex64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Power sums of shifted values `d = F − shift` for one batch.
#[derive(Debug, Clone)]
struct BatchSums {
    count: usize,
    /// `[functional][pair] = Σ d^ℓ d̄^r`
    powers: Vec<[Complex64; 15]>,
    /// `[j·k + k']` for all ordered functional pairs: `Σ d_j d̄_k` and `Σ d_j d_k`.
    herm: Vec<Complex64>,
    pseudo: Vec<Complex64>,
}

impl BatchSums {
    fn zero(m: usize) -> Self {
        Self {
            count: 0,
            powers: vec![[Complex64::default(); 15]; m],
            herm: vec![Complex64::default(); m * m],
            pseudo: vec![Complex64::default(); m * m],
        }
    }

    fn add_assign(&mut self, o: &Self, sign: f64) {
        if sign > 0.0 {
            self.count += o.count;
        } else {
            self.count -= o.count;
        }
        for (a, b) in self.powers.iter_mut().zip(&o.powers) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * sign;
            }
        }
        for (x, y) in self.herm.iter_mut().zip(&o.herm) {
            *x += y * sign;
        }
        for (x, y) in self.pseudo.iter_mut().zip(&o.pseudo) {
            *x += y * sign;
        }
    }
}

/// Serializable complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Cplx> for Complex64 {
    fn from(z: Cplx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Standard errors of the headline statistics of one functional.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionalSe {
    pub mean: Cplx,
    pub var: f64,
    pub pseudo_var: Cplx,
    pub m4: f64,
    pub abs2: f64,
}

/// Empirical statistics of one functional `F`.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionalSummary {
    pub toll: String,
    pub mean: Cplx,
    /// `E|F − EF|²`
    pub var: f64,
    /// `E(F − EF)²`
    pub pseudo_var: Cplx,
    /// `E|F − EF|⁴`
    pub m4: f64,
    /// `E|F|²`
    pub abs2: f64,
    /// Central `E[(F−EF)^ℓ conj(F−EF)^r]`, keyed `"ℓ,r"`, `2 ≤ ℓ + r ≤ 4`.
    pub mixed: BTreeMap<String, Cplx>,
    /// Skewness and excess kurtosis of `Re F`.
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub se: FunctionalSe,
}

impl FunctionalSummary {
    pub fn mean(&self) -> Complex64 {
        self.mean.into()
    }

    pub fn mixed(&self, l: usize, r: usize) -> Option<Complex64> {
        self.mixed.get(&format!("{l},{r}")).map(|&z| z.into())
    }
}

/// Correlations between two functionals `F_a`, `F_b`.
#[derive(Debug, Clone, Serialize)]
pub struct PairSummary {
    pub a: usize,
    pub b: usize,
    /// `E[(F_a−EF_a) conj(F_b−EF_b)] / √(var_a var_b)`
    pub corr: Cplx,
    /// `E[(F_a−EF_a)(F_b−EF_b)] / √(var_a var_b)`, the correlation of `F_a` with `conj F_b`.
    pub corr_conj: Cplx,
    pub corr_se: f64,
    pub corr_conj_se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalSummary {
    pub law: String,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub generator: String,
    pub batches: usize,
    pub results: Vec<FunctionalSummary>,
    pub pairs: Vec<PairSummary>,
}

/// Options for [`monte_carlo_with`].
#[derive(Debug, Clone)]
pub struct McOptions {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// Defaults to `clamp(reps / 50, 20, 100)`.
    pub batches: Option<usize>,
    /// Worker threads; `None` uses the ambient rayon pool. The result does
    /// not depend on this.
    pub threads: Option<usize>,
}

/// Sample `reps` trees of size `n` and summarize each toll.
pub fn monte_carlo(
    law: &OffspringLaw,
    n: usize,
    reps: usize,
    tolls: &[TollSequence],
    seed: u64,
) -> Result<EmpiricalSummary> {
    monte_carlo_with(law, tolls, &McOptions { n, reps, seed, batches: None, threads: None })
}

pub fn monte_carlo_with(law: &OffspringLaw, tolls: &[TollSequence], opts: &McOptions) -> Result<EmpiricalSummary> {
    let &McOptions { n, reps, seed, .. } = opts;
    if reps < MIN_REPS {
        return Err(Error::Domain(format!("reps must be at least {MIN_REPS}, got {reps}")));
    }
    if tolls.is_empty() {
        return Err(Error::Domain("at least one toll is required".into()));
    }
    let batches = opts.batches.unwrap_or((reps / 50).clamp(MIN_BATCHES, 100));
    if batches < MIN_BATCHES || batches > reps {
        return Err(Error::Domain(format!("batch count {batches} must lie in [{MIN_BATCHES}, reps]")));
    }
    let sampler = TreeSampler::new(law, n)?;
    let tables: Vec<Vec<Complex64>> = tolls.iter().map(|t| t.table(n)).collect();
    let m = tolls.len();

    let eval = |r: usize, buf: &mut Vec<u32>, out: &mut Vec<Complex64>| -> Result<()> {
        let mut rng = replicate_rng(seed, r as u64);
        sampler.sample_into(&mut rng, buf)?;
        let sizes = tree_sizes(buf);
        out.clear();
        for t in &tables {
            let mut acc = Complex64::default();
            for &s in &sizes {
                acc += t[s as usize - 1];
            }
            out.push(acc);
        }
        Ok(())
    };

    // Replicate 0 fixes the shift, which keeps the power sums well conditioned.
    let mut shift = Vec::new();
    eval(0, &mut Vec::new(), &mut shift)?;

    let run_batch = |b: usize| -> Result<BatchSums> {
        let lo = b * reps / batches;
        let hi = (b + 1) * reps / batches;
        let mut powers = vec![[Kahan::default(); 15]; m];
        let mut herm = vec![Kahan::default(); m * m];
        let mut pseudo = vec![Kahan::default(); m * m];
        let mut buf = Vec::with_capacity(n);
        let mut vals = Vec::with_capacity(m);
        let mut d = vec![Complex64::default(); m];
        for r in lo..hi {
            eval(r, &mut buf, &mut vals)?;
            for j in 0..m {
                d[j] = vals[j] - shift[j];
                let mut pw = [Complex64::new(1.0, 0.0); 5];
                let mut pc = [Complex64::new(1.0, 0.0); 5];
                for k in 1..5 {
                    pw[k] = pw[k - 1] * d[j];
                    pc[k] = pc[k - 1] * d[j].conj();
                }
                for (slot, &(l, rr)) in powers[j].iter_mut().zip(PAIRS.iter()) {
                    slot.add(pw[l] * pc[rr]);
                }
            }
            for j in 0..m {
                for k in 0..m {
                    herm[j * m + k].add(d[j] * d[k].conj());
                    pseudo[j * m + k].add(d[j] * d[k]);
                }
            }
        }
        Ok(BatchSums {
            count: hi - lo,
            powers: powers.iter().map(|p| std::array::from_fn(|i| p[i].sum)).collect(),
            herm: herm.iter().map(|k| k.sum).collect(),
            pseudo: pseudo.iter().map(|k| k.sum).collect(),
        })
    };

    let collect = || -> Result<Vec<BatchSums>> { (0..batches).into_par_iter().map(run_batch).collect() };
    let parts = match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Sampling(format!("thread pool: {e}")))?
            .install(collect)?,
        None => collect()?,
    };

    let mut total = BatchSums::zero(m);
    for p in &parts {
        total.add_assign(p, 1.0);
    }
    let full = Estimates::from_sums(&total, &shift);
    let jack: Vec<Vec<f64>> = parts
        .iter()
        .map(|p| {
            let mut loo = total.clone();
            loo.add_assign(p, -1.0);
            Estimates::from_sums(&loo, &shift).flat()
        })
        .collect();
    let se = jackknife_se(&jack);
    Ok(full.into_summary(law, opts, batches, tolls, &se))
}

fn tree_sizes(degrees: &[u32]) -> Vec<u32> {
    let n = degrees.len();
    let mut sizes = vec![0u32; n];
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut s = 1u32;
        for _ in 0..degrees[i] {
            s += stack.pop().expect("cycle lemma output is a tree");
        }
        sizes[i] = s;
        stack.push(s);
    }
    sizes
}

fn jackknife_se(jack: &[Vec<f64>]) -> Vec<f64> {
    let b = jack.len() as f64;
    let k = jack[0].len();
    (0..k)
        .map(|i| {
            let mean = jack.iter().map(|v| v[i]).sum::<f64>() / b;
            let ss: f64 = jack.iter().map(|v| (v[i] - mean).powi(2)).sum();
            ((b - 1.0) / b * ss).sqrt()
        })
        .collect()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct FunctionalEstimate {
    mean: Complex64,
    central: [Complex64; 15],
    abs2: f64,
}

impl FunctionalEstimate {
    fn var(&self) -> f64 {
        self.central[pair_index(1, 1)].re
    }
    fn pseudo(&self) -> Complex64 {
        self.central[pair_index(2, 0)]
    }
    fn m4(&self) -> f64 {
        self.central[pair_index(2, 2)].re
    }
    /// `E[(Re(F − EF))^k]` from the mixed central moments.
    fn re_moment(&self, k: usize) -> f64 {
        (0..=k)
            .map(|i| binom(k, i) * self.central[pair_index(i, k - i)].re)
            .sum::<f64>()
            / 2f64.powi(k as i32)
    }
}

struct Estimates {
    f: Vec<FunctionalEstimate>,
    /// `(corr, corr_conj)` for `a < b`.
    pairs: Vec<(usize, usize, Complex64, Complex64)>,
}

impl Estimates {
    fn from_sums(s: &BatchSums, shift: &[Complex64]) -> Self {
        let m = shift.len();
        let inv = 1.0 / s.count as f64;
        let f: Vec<FunctionalEstimate> = (0..m)
            .map(|j| {
                let raw: Vec<Complex64> = s.powers[j].iter().map(|x| x * inv).collect();
                let delta = raw[pair_index(1, 0)];
                let mut central = [Complex64::default(); 15];
                for (slot, &(l, r)) in central.iter_mut().zip(PAIRS.iter()) {
                    let mut acc = Complex64::default();
                    for i in 0..=l {
                        for k in 0..=r {
                            acc += binom(l, i)
                                * binom(r, k)
                                * (-delta).powu((l - i) as u32)
                                * (-delta.conj()).powu((r - k) as u32)
                                * raw[pair_index(i, k)];
                        }
                    }
                    *slot = acc;
                }
                // The centered variance is numerically exact at zero; keep it so.
                if raw[pair_index(1, 1)].re == 0.0 {
                    central = [Complex64::default(); 15];
                    central[0] = Complex64::new(1.0, 0.0);
                }
                let mean = shift[j] + delta;
                let abs2 = shift[j].norm_sqr() + 2.0 * (shift[j].conj() * delta).re + raw[pair_index(1, 1)].re;
                FunctionalEstimate { mean, central, abs2 }
            })
            .collect();
        let mut pairs = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let (da, db) = (f[a].mean - shift[a], f[b].mean - shift[b]);
                let herm = s.herm[a * m + b] * inv - da * db.conj();
                let pseudo = s.pseudo[a * m + b] * inv - da * db;
                let norm = (f[a].var() * f[b].var()).sqrt();
                let (c, cc) = if norm > 0.0 { (herm / norm, pseudo / norm) } else { Default::default() };
                pairs.push((a, b, c, cc));
            }
        }
        Self { f, pairs }
    }

    /// Layout: per functional `[mean.re, mean.im, var, pseudo.re, pseudo.im, m4, abs2]`,
    /// then per pair `[|corr|, |corr_conj|]`.
    fn flat(&self) -> Vec<f64> {
        let mut v = Vec::new();
        for e in &self.f {
            let p = e.pseudo();
            v.extend([e.mean.re, e.mean.im, e.var(), p.re, p.im, e.m4(), e.abs2]);
        }
        for &(_, _, c, cc) in &self.pairs {
            v.extend([c.norm(), cc.norm()]);
        }
        v
    }

    fn into_summary(
        self,
        law: &OffspringLaw,
        opts: &McOptions,
        batches: usize,
        tolls: &[TollSequence],
        se: &[f64],
    ) -> EmpiricalSummary {
        let results = self
            .f
            .iter()
            .zip(tolls)
            .enumerate()
            .map(|(j, (e, t))| {
                let s = &se[7 * j..7 * j + 7];
                let mixed = PAIRS
                    .iter()
                    .zip(e.central.iter())
                    .filter(|(&(l, r), _)| l + r >= 2)
                    .map(|(&(l, r), &z)| (format!("{l},{r}"), z.into()))
                    .collect();
                let v2 = e.re_moment(2);
                let (skewness, excess_kurtosis) = if v2 > 0.0 {
                    (e.re_moment(3) / v2.powf(1.5), e.re_moment(4) / (v2 * v2) - 3.0)
                } else {
                    (0.0, 0.0)
                };
                FunctionalSummary {
                    toll: t.label(),
                    mean: e.mean.into(),
                    var: e.var(),
                    pseudo_var: e.pseudo().into(),
                    m4: e.m4(),
                    abs2: e.abs2,
                    mixed,
                    skewness,
                    excess_kurtosis,
                    se: FunctionalSe {
                        mean: Cplx { re: s[0], im: s[1] },
                        var: s[2],
                        pseudo_var: Cplx { re: s[3], im: s[4] },
                        m4: s[5],
                        abs2: s[6],
                    },
                }
            })
            .collect();
        let base = 7 * self.f.len();
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b, c, cc))| PairSummary {
                a,
                b,
                corr: c.into(),
                corr_conj: cc.into(),
                corr_se: se[base + 2 * i],
                corr_conj_se: se[base + 2 * i + 1],
            })
            .collect();
        EmpiricalSummary {
            law: law.name().to_string(),
            n: opts.n,
            reps: opts.reps,
            seed: opts.seed,
            generator: GENERATOR.into(),
            batches,
            results,
            pairs,
        }
    }
}
