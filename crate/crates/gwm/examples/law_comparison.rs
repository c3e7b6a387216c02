//! Pgf orderings, the induced ordering of μ, and complete monotonicity.

use gwm::comparison::{complete_monotonicity_check, mu_order_check, phi_order, shifted_negative_moment, MuArg};
use gwm::{OffspringLaw, TreeSizeLaw};

fn main() -> gwm::Result<()> {
    let chain: Vec<OffspringLaw> = ["binary", "poisson", "fullbinary", "geometric", "fullmary:3"]
        .iter()
        .map(|d| OffspringLaw::parse(d))
        .collect::<gwm::Result<_>>()?;
    for w in chain.windows(2) {
        let v = phi_order(&w[0], &w[1], 10_000)?;
        println!("{} vs {}: {:?} (swapped: {})", w[0].name(), w[1].name(), v.relation, v.swapped);
    }
    for arg in [MuArg::Alpha(-1.0), MuArg::Alpha(0.25), MuArg::Prime] {
        let r = mu_order_check(&chain, arg)?;
        println!("{arg:?}: {:?} strict = {} (smallest step {:.3e})", r.values, r.passed, r.min_margin);
    }

    let a = TreeSizeLaw::new(&chain[0], 4096);
    let b = TreeSizeLaw::new(&chain[1], 4096);
    let cm = complete_monotonicity_check(&a, &b, 3, &[0.5, 1.0, 2.0, 5.0])?;
    println!("complete monotonicity binary/poisson: min signed derivative {:.3e}", cm.min_signed);

    for (alpha, t) in [(-0.5, 1.5), (-1.0, 3.0), (-2.0, 10.0), (-1.0, 1.0)] {
        let m = shifted_negative_moment(&b, alpha, t)?;
        println!("poisson E(|T|−1+{t})^{alpha}: series {:.14} integral {:?}", m.series, m.integral);
    }
    Ok(())
}
