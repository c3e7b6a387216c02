//! The perturbed counterexample law and the Laplace-transform remainders.

use gwm::comparison::{perturbation_framework, exp_remainder_h, laplace_remainder_g, phi_order};
use gwm::OffspringLaw;

fn main() -> gwm::Result<()> {
    for eps in [0.0, 1e-4, 1e-2] {
        let f = perturbation_framework(eps)?;
        println!("ε = {eps:<6} c3_max = {:.6e} negative interval = {:?}", f.c3_max, f.interval);
    }
    let f = perturbation_framework(1e-2)?;
    let base = f.law();
    let pert = f.perturbed(0.5)?;
    let v = phi_order(&base, &pert, 20_000)?;
    println!("base vs perturbed: {:?}, witnesses {:?}", v.relation, v.witness_points);

    for r in 1..=3 {
        let hs: Vec<String> = [1e-6, 0.5, 2.0, 10.0]
            .iter()
            .map(|&x| format!("{:.6}", exp_remainder_h(x, r).unwrap()))
            .collect();
        println!("h_{r} at 1e-6, 0.5, 2, 10: {}", hs.join(", "));
    }
    let p = OffspringLaw::poisson();
    for t in [1.0, 0.1, 0.001] {
        println!("poisson g_2({t}) = {:.8}", laplace_remainder_g(&p, 2, t)?);
    }
    Ok(())
}
