//! Size-conditioned tree sampling via the cycle lemma.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::offspring::{Family, OffspringLaw};
use crate::treesize::TreeSizeLaw;

/// Trials allowed for one rejection sample.
pub const REJECTION_BUDGET: u64 = 1_000_000;

/// Sizes up to this are checked against the exact size law before sampling.
const SMALL_N_CHECK: usize = 256;

/// Preorder out-degrees of an ordered tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

impl DegreeSequence {
    /// Validate the Łukasiewicz condition.
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        let mut s: i64 = 0;
        let n = degrees.len();
        for (i, &d) in degrees.iter().enumerate() {
            s += i64::from(d) - 1;
            if s < 0 && i + 1 < n {
                return Err(Error::Domain(format!("not a tree: the walk drops below 0 at step {}", i + 1)));
            }
        }
        if n == 0 || s != -1 {
            return Err(Error::Domain(format!("not a tree: degrees sum to {} for {n} vertices", s + n as i64)));
        }
        Ok(Self { degrees })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Fringe subtree sizes in preorder.
    pub fn subtree_sizes(&self) -> Vec<u32> {
        sizes_unchecked(&self.degrees)
    }
}

/// Fringe subtree sizes for a preorder degree sequence.
pub fn subtree_sizes(degrees: &[u32]) -> Result<Vec<u32>> {
    DegreeSequence::new(degrees.to_vec())?;
    Ok(sizes_unchecked(degrees))
}

fn sizes_unchecked(degrees: &[u32]) -> Vec<u32> {
    let n = degrees.len();
    let mut sizes = vec![0u32; n];
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut s = 1u32;
        for _ in 0..degrees[i] {
            s += stack.pop().expect("valid sequence");
        }
        sizes[i] = s;
        stack.push(s);
    }
    sizes
}

/// Rotate a step sequence with `Σ(d_i − 1) = −1` so that it encodes a tree:
/// start right after the first position of the minimum of the walk.
pub fn cycle_lemma_rotate(xs: &mut [u32]) {
    let mut s: i64 = 0;
    let mut best = i64::MAX;
    let mut at = 0;
    for (i, &d) in xs.iter().enumerate() {
        s += i64::from(d) - 1;
        if s < best {
            best = s;
            at = i;
        }
    }
    xs.rotate_left((at + 1) % xs.len());
}

#[derive(Debug, Clone)]
enum Strategy {
    /// `n − 1` balls into `n` equally likely cells.
    Poisson,
    /// Uniform weak composition of `n − 1` into `n` parts.
    Geometric,
    /// Multinomial counts over the support, accepted when `Σ k N_k = n − 1`.
    Counts { support: Vec<(u32, f64)> },
}

/// Exact sampler of `T_n` for one law and size.
#[derive(Debug, Clone)]
pub struct TreeSampler {
    n: usize,
    strategy: Strategy,
}

impl TreeSampler {
    pub fn new(law: &OffspringLaw, n: usize) -> Result<Self> {
        if !law.is_attainable(n) {
            return Err(Error::Unattainable { n, span: law.span() });
        }
        let strategy = match law.family() {
            Family::Poisson => Strategy::Poisson,
            Family::Geometric => Strategy::Geometric,
            _ => {
                // Conditional probabilities for sequential binomial draws.
                let mut rest = 1.0;
                let mut support = Vec::new();
                for &(k, p) in law.support() {
                    if k as usize >= n {
                        break;
                    }
                    support.push((k as u32, if rest > 0.0 { (p / rest).min(1.0) } else { 0.0 }));
                    rest -= p;
                }
                Strategy::Counts { support }
            }
        };
        // Supports with gaps can make q_n vanish for small attainable n.
        if n <= SMALL_N_CHECK && TreeSizeLaw::new(law, n).q(n) == 0.0 {
            return Err(Error::Unattainable { n, span: law.span() });
        }
        Ok(Self { n, strategy })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// One sample of the preorder degree sequence, written into `buf`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, buf: &mut Vec<u32>) -> Result<()> {
        let n = self.n;
        buf.clear();
        buf.resize(n, 0);
        match &self.strategy {
            Strategy::Poisson => {
                for _ in 0..n - 1 {
                    buf[rng.gen_range(0..n)] += 1;
                }
            }
            Strategy::Geometric => {
                // 2n − 2 slots holding n − 1 stars and n − 1 bars.
                let m = 2 * n - 2;
                let mut slots: Vec<bool> = (0..m).map(|i| i < n - 1).collect();
                slots.shuffle(rng);
                let mut cell = 0;
                for is_bar in slots {
                    if is_bar {
                        cell += 1;
                    } else {
                        buf[cell] += 1;
                    }
                }
            }
            Strategy::Counts { support } => {
                let target = (n - 1) as u64;
                let mut trials = 0u64;
                let counts = loop {
                    trials += 1;
                    if trials > REJECTION_BUDGET {
                        return Err(Error::Sampling(format!(
                            "no degree vector with sum {target} after {REJECTION_BUDGET} trials (n = {n})"
                        )));
                    }
                    let mut left = n as u64;
                    let mut total = 0u64;
                    let mut counts = Vec::with_capacity(support.len());
                    for &(k, p) in support {
                        let c = if left == 0 || p <= 0.0 {
                            0
                        } else if p >= 1.0 {
                            left
                        } else {
                            Binomial::new(left, p).expect("valid binomial").sample(rng)
                        };
                        left -= c;
                        total += c * u64::from(k);
                        counts.push(c);
                        if total > target {
                            break;
                        }
                    }
                    if left == 0 && total == target {
                        break counts;
                    }
                };
                let mut i = 0;
                for (&(k, _), &c) in support.iter().zip(&counts) {
                    for _ in 0..c {
                        buf[i] = k;
                        i += 1;
                    }
                }
                buf.shuffle(rng);
            }
        }
        cycle_lemma_rotate(buf);
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DegreeSequence> {
        let mut buf = Vec::with_capacity(self.n);
        self.sample_into(rng, &mut buf)?;
        Ok(DegreeSequence { degrees: buf })
    }
}

/// One sample of `T_n`.
pub fn sample_conditioned_tree<R: Rng + ?Sized>(law: &OffspringLaw, n: usize, rng: &mut R) -> Result<DegreeSequence> {
    TreeSampler::new(law, n)?.sample(rng)
}
