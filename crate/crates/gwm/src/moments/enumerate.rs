//! Brute-force moments over all ordered trees of a small size.

use std::collections::HashMap;

use num_complex::Complex64;

use super::toll::TollSequence;
use crate::error::{Error, Result};
use crate::offspring::OffspringLaw;

/// Largest size handled by enumeration (C_8 = 1430 shapes).
pub const MAX_ENUM_SIZE: usize = 9;

/// One ordered tree: its preorder degree sequence, Galton–Watson weight
/// `∏_v p_{deg v}`, and the fringe subtree size of each vertex (preorder).
#[derive(Debug, Clone)]
pub struct WeightedTree {
    pub degrees: Vec<usize>,
    pub weight: f64,
    pub sizes: Vec<usize>,
}

/// All ordered trees with `n` vertices and positive weight.
pub fn enumerate_trees(law: &OffspringLaw, n: usize) -> Result<Vec<WeightedTree>> {
    if n == 0 || n > MAX_ENUM_SIZE {
        return Err(Error::Guard(format!("enumeration needs 1 <= n <= {MAX_ENUM_SIZE}, got {n}")));
    }
    let mut memo = HashMap::new();
    Ok(trees(law, n, &mut memo))
}

fn trees(law: &OffspringLaw, n: usize, memo: &mut HashMap<usize, Vec<WeightedTree>>) -> Vec<WeightedTree> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    for k in 0..n {
        let pk = law.pmf(k as u64);
        if pk == 0.0 {
            continue;
        }
        for parts in compositions(n - 1, k) {
            // Cartesian product of child trees.
            let mut partial = vec![WeightedTree { degrees: vec![k], weight: pk, sizes: vec![n] }];
            for &c in &parts {
                let kids = trees(law, c, memo);
                let mut next = Vec::with_capacity(partial.len() * kids.len());
                for p in &partial {
                    for kid in &kids {
                        let mut d = p.degrees.clone();
                        d.extend_from_slice(&kid.degrees);
                        let mut s = p.sizes.clone();
                        s.extend_from_slice(&kid.sizes);
                        next.push(WeightedTree { degrees: d, weight: p.weight * kid.weight, sizes: s });
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
    }
    memo.insert(n, out.clone());
    out
}

/// Compositions of `total` into `k` positive parts.
fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < k {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 1..=total - (k - 1) {
        for mut rest in compositions(total - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Σ_v b_{|T_v|}` for a list of fringe subtree sizes.
pub fn functional_of_sizes(sizes: &[usize], toll: &TollSequence) -> Complex64 {
    sizes.iter().map(|&s| toll.eval(s)).sum()
}

/// `E[∏ F_{b_i}(T_n)]` by weighted enumeration, together with the total
/// weight `q_n`.
pub fn enumerate_moment_with_mass(law: &OffspringLaw, n: usize, tolls: &[TollSequence]) -> Result<(Complex64, f64)> {
    let all = enumerate_trees(law, n)?;
    let mass: f64 = all.iter().map(|t| t.weight).sum();
    if mass == 0.0 {
        return Err(Error::Unattainable { n, span: law.span() });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for t in &all {
        let prod: Complex64 = tolls.iter().map(|b| functional_of_sizes(&t.sizes, b)).product();
        acc += prod * t.weight;
    }
    Ok((acc / mass, mass))
}

/// `E[∏ F_{b_i}(T_n)]` by weighted enumeration, `n ≤ 9`.
pub fn enumerate_moment(law: &OffspringLaw, n: usize, tolls: &[TollSequence]) -> Result<Complex64> {
    Ok(enumerate_moment_with_mass(law, n, tolls)?.0)
}
