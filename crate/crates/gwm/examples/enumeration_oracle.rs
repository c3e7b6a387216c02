//! Brute-force enumeration of small trees as an independent check on the engine.

use gwm::moments::{enumerate_moment, enumerate_trees, MomentEngine, TollSequence};
use gwm::OffspringLaw;
use num_complex::Complex64;

fn main() -> gwm::Result<()> {
    let law = OffspringLaw::geometric();
    let trees = enumerate_trees(&law, 3)?;
    for t in &trees {
        println!("degrees {:?} weight {:.4} sizes {:?}", t.degrees, t.weight, t.sizes);
    }

    let a = Complex64::new(0.0, 1.0);
    let tolls = [TollSequence::power(a), TollSequence::power(a.conj())];
    let engine = MomentEngine::new(&law, 8)?;
    for n in 1..=8 {
        let e = engine.conditional_moment(n, &tolls)?;
        let o = enumerate_moment(&law, n, &tolls)?;
        println!("n = {n}  E|X_n(i)|²  engine {:.14}  enumeration {:.14}  diff {:.1e}", e.re, o.re, (e - o).norm());
    }
    Ok(())
}
