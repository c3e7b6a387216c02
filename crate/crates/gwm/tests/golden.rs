//! Limit constants against values frozen from an independent
//! arbitrary-precision evaluation of the same integrals.

use gwm::limits::{mu_alpha, mu_prime};
use gwm::OffspringLaw;
use num_complex::Complex64;
use serde::Deserialize;

#[derive(Deserialize)]
struct Golden {
    laws: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    law: String,
    mu_prime: f64,
    mu: Vec<MuValue>,
}

#[derive(Deserialize)]
struct MuValue {
    alpha: [f64; 2],
    value: [f64; 2],
}

const TOL: f64 = 1e-9;

fn golden() -> Golden {
    serde_json::from_str(include_str!("../data/constants.json")).unwrap()
}

#[test]
fn mu_prime_matches_frozen() {
    for e in golden().laws {
        let law = OffspringLaw::parse(&e.law).unwrap();
        let got = mu_prime(&law);
        assert!((got - e.mu_prime).abs() <= TOL * e.mu_prime.abs().max(1.0), "{}: {got} vs {}", e.law, e.mu_prime);
    }
}

#[test]
fn mu_alpha_matches_frozen() {
    for e in golden().laws {
        let law = OffspringLaw::parse(&e.law).unwrap();
        for m in &e.mu {
            let alpha = Complex64::new(m.alpha[0], m.alpha[1]);
            let want = Complex64::new(m.value[0], m.value[1]);
            let got = mu_alpha(&law, alpha).unwrap();
            assert!((got - want).norm() <= TOL * want.norm().max(1.0), "{} α={alpha}: {got} vs {want}", e.law);
        }
    }
}
