//! Exact finite-n moments from the generating-function engine, compared
//! with the large-n expansions.

use gwm::limits::{mean_expansion_check, shape_variance_const, MeanTarget};
use gwm::moments::{MomentEngine, TollSequence, TollSpec};
use gwm::OffspringLaw;
use num_complex::Complex64;

fn main() -> gwm::Result<()> {
    let law = OffspringLaw::poisson();
    let ns = [256, 512, 1024, 2048, 4096];
    let t = std::time::Instant::now();
    let engine = MomentEngine::new(&law, 4096)?;
    println!("engine built in {:.2?}", t.elapsed());

    // Second moment of the centered shape functional against c n ln n.
    let clog = TollSpec::CLog.resolve(&law)?;
    let m2 = engine.conditional_moments(&ns, &[clog.clone(), clog])?;
    let c = shape_variance_const(&law);
    for (n, m) in ns.iter().zip(&m2) {
        let nf = *n as f64;
        println!("n = {n:>4}  E F² = {:>14.4}  (E F² − c n ln n)/n = {:+.5}", m.re, (m.re - c * nf * nf.ln()) / nf);
    }

    // Mean of X_n(i) minus μ(i) n and the n^{1/2+i} term.
    for row in mean_expansion_check(&engine, MeanTarget::Power(Complex64::new(0.0, 1.0)), &ns)? {
        println!("n = {:>4}  residual = {:+.4} {:+.4}i", row.n, row.residual.0, row.residual.1);
    }

    // A mixed moment: E[X_n(0.3) · ln-functional · X_n(−1)] at n = 20.
    let tolls = [
        TollSequence::power(Complex64::new(0.3, 0.0)),
        TollSequence::log(),
        TollSequence::power(Complex64::new(-1.0, 0.0)),
    ];
    println!("E[F F F] at n = 20: {:.12}", engine.conditional_moment(20, &tolls)?.re);
    Ok(())
}
