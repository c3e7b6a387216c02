//! μ(α), μ′ and the Gaussian limit constants for a handful of laws.

use gwm::limits::{imag_variance, mu_alpha, mu_prime, LimitConstants};
use gwm::OffspringLaw;
use num_complex::Complex64;

fn main() -> gwm::Result<()> {
    println!("{:<18} {:>14} {:>14} {:>14}", "law", "mu_prime", "mu(-1)", "mu(0.25)");
    for desc in [
        "binary",
        "poisson",
        "fullbinary",
        "geometric",
        "mary:3",
        "mary:1000",
        "fullmary:3",
        "fullmary:4",
        "fullmary:1000000",
        "cfam:0.000001",
        "cfam:0.99",
    ] {
        let law = OffspringLaw::parse(desc)?;
        let t = std::time::Instant::now();
        let mp = mu_prime(&law);
        let m1 = mu_alpha(&law, Complex64::new(-1.0, 0.0))?.re;
        let m2 = mu_alpha(&law, Complex64::new(0.25, 0.0))?.re;
        println!("{desc:<18} {mp:>14.10} {m1:>14.10} {m2:>14.10}   ({:.1?})", t.elapsed());
    }

    let law = OffspringLaw::poisson();
    let z = mu_alpha(&law, Complex64::new(0.0, 1.0))?;
    println!("poisson μ(i) = {:.12} {:+.12}i", z.re, z.im);
    for t in [0.1, 1.0, 10.0] {
        println!("poisson limit variance of X_n(i{t}) / (n log n) = {:.10}", imag_variance(&law, t)?);
    }
    println!("{}", serde_json::to_string_pretty(&LimitConstants::new(&law)).expect("json"));
    Ok(())
}
