//! Sample conditioned trees and compare empirical moments with exact ones.

use gwm::moments::{MomentEngine, TollSequence, TollSpec};
use gwm::simulator::{monte_carlo_with, replicate_rng, sample_conditioned_tree, McOptions};
use gwm::OffspringLaw;
use num_complex::Complex64;

fn main() -> gwm::Result<()> {
    let law = OffspringLaw::poisson();
    let mut rng = replicate_rng(42, 0);
    let tree = sample_conditioned_tree(&law, 12, &mut rng)?;
    println!("one tree: degrees {:?}", tree.degrees());
    println!("          sizes   {:?}", tree.subtree_sizes());

    let n = 1024;
    let clog = TollSpec::CLog.resolve(&law)?;
    let pi = TollSequence::power(Complex64::new(0.0, 1.0));
    let opts = McOptions { n, reps: 20_000, seed: 7, batches: None, threads: None };
    let t = std::time::Instant::now();
    let s = monte_carlo_with(&law, &[clog.clone(), pi.clone()], &opts)?;
    println!("{} replicates in {:.2?} ({} batches, {})", s.reps, t.elapsed(), s.batches, s.generator);

    let engine = MomentEngine::new(&law, n)?;
    let m1 = engine.conditional_moment(n, std::slice::from_ref(&clog))?.re;
    let m2 = engine.conditional_moment(n, &[clog.clone(), clog])?.re;
    let r = &s.results[0];
    println!("clog mean     {:>12.4} ± {:.4}   exact {:>12.4}", r.mean.re, r.se.mean.re, m1);
    println!("clog variance {:>12.2} ± {:.2}   exact {:>12.2}", r.var, r.se.var, m2 - m1 * m1);
    println!("clog skewness {:+.4}  excess kurtosis {:+.4}", r.skewness, r.excess_kurtosis);

    let a2 = engine.conditional_moment(n, &[pi.clone(), pi.conj()])?.re;
    let r = &s.results[1];
    println!("pow:i E|F|²   {:>12.2} ± {:.2}   exact {:>12.2}", r.abs2, r.se.abs2, a2);
    println!("pow:i E(F−EF)² / E|F−EF|² = {:.4}", Complex64::from(r.pseudo_var).norm() / r.var);
    Ok(())
}
