//! The size law q_n = P(|T| = n) and its n^{-3/2} asymptotics.

use gwm::{OffspringLaw, TreeSizeLaw};

fn main() -> gwm::Result<()> {
    let n_max = 10_000;
    for desc in ["binary", "poisson", "geometric", "fullbinary"] {
        let law = OffspringLaw::parse(desc)?;
        let size = TreeSizeLaw::new(&law, n_max);
        println!("{desc}: residual of y = zΦ(y) = {:.2e}", size.fixed_point_residual());
        println!("  mass up to {n_max}: {:.8}", size.partial_sum());
        for n in [1usize, 2, 3, 10, 100, 1000, 9999] {
            if law.is_attainable(n) {
                println!("  q_{n:<5} = {:.10e}  ratio to asymptotic = {:.6}", size.q(n), size.q_asymptotic_ratio(n)?);
            }
        }
    }

    // q_n is the coefficient series of y(z); sum it at z = 1/2.
    let size = TreeSizeLaw::new(&OffspringLaw::binary(), 200);
    let y = size.series().eval(num_complex::Complex64::new(0.5, 0.0));
    println!("binary y(1/2) = {:.12}", y.re);
    println!("closed form   = {:.12}", gwm::treesize::y_eval(&OffspringLaw::binary(), 0.5)?);
    Ok(())
}
