//! Parse a few offspring laws and look at their pgfs.

use gwm::OffspringLaw;

fn main() -> gwm::Result<()> {
    for desc in ["binary", "poisson", "fullbinary", "geometric", "mary:3", "cfam:0.25", "mix:0.5:3", "appxa"] {
        let law = OffspringLaw::parse(desc)?;
        println!(
            "{:<12} σ² = {:<8.5} span = {} p0 = {:.5}  Φ(½) = {:.6}  excess(½) = {:.3e}",
            law.name(),
            law.variance(),
            law.span(),
            law.p0(),
            law.pgf_real(0.5),
            law.excess(0.5),
        );
    }

    // Sizes with n ≢ 1 mod span never occur.
    let fb = OffspringLaw::parse("fullbinary")?;
    for n in 1..=6 {
        println!("fullbinary: n = {n} attainable: {}", fb.is_attainable(n));
    }

    match OffspringLaw::parse("custom:0.5,0.4,0.1") {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("rejected a subcritical law: {e}"),
    }
    Ok(())
}
