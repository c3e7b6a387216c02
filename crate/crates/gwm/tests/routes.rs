//! Generating-function engine against brute-force enumeration.

use gwm::moments::{enumerate_moment, enumerate_trees, MomentEngine, MomentTable, Route, TollSequence, TollSpec};
use gwm::OffspringLaw;
use num_complex::Complex64;

fn pool() -> Vec<TollSequence> {
    vec![
        TollSequence::power(Complex64::new(-1.0, 0.0)),
        TollSequence::power(Complex64::new(0.3, 0.0)),
        TollSequence::power(Complex64::new(0.0, 1.0)),
        TollSequence::power(Complex64::new(0.0, -1.0)),
        TollSequence::log(),
    ]
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-3)
}

#[test]
fn engine_matches_enumeration_to_order_three() {
    let p = pool();
    for desc in ["binary", "poisson", "fullbinary", "geometric", "mary:3", "cfam:0.3", "mix:0.4:3"] {
        let law = OffspringLaw::parse(desc).unwrap();
        let engine = MomentEngine::new(&law, 8).unwrap();
        // q_n can vanish for attainable n when the support has gaps (mix:λ:3 at n = 2).
        for n in (1..=8).filter(|&n| engine.q(n) > 0.0) {
            for i in 0..p.len() {
                for j in i..p.len() {
                    for k in j..p.len() {
                        let set = [p[i].clone(), p[j].clone(), p[k].clone()];
                        let a = engine.conditional_moment(n, &set).unwrap();
                        let b = enumerate_moment(&law, n, &set).unwrap();
                        assert!(rel(a, b) < 1e-9, "{desc} n = {n}: {a} vs {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn zero_probability_sizes_are_rejected() {
    let law = OffspringLaw::parse("mix:0.4:3").unwrap();
    let engine = MomentEngine::new(&law, 4).unwrap();
    assert_eq!(engine.q(2), 0.0);
    assert!(engine.conditional_moment(2, &[TollSequence::log()]).is_err());
    assert!(gwm::simulator::TreeSampler::new(&law, 2).is_err());
}

#[test]
fn engine_matches_enumeration_at_order_four_and_size_nine() {
    let law = OffspringLaw::poisson();
    let engine = MomentEngine::new(&law, 9).unwrap();
    let a = Complex64::new(-0.5, 2.0);
    let set = [TollSequence::power(a), TollSequence::power(a.conj()), TollSequence::log(), TollSequence::log()];
    let x = engine.conditional_moment(9, &set).unwrap();
    let y = enumerate_moment(&law, 9, &set).unwrap();
    assert!(rel(x, y) < 1e-9, "{x} vs {y}");
}

#[test]
fn enumeration_masses_are_size_probabilities() {
    for desc in ["binary", "geometric", "fullbinary"] {
        let law = OffspringLaw::parse(desc).unwrap();
        let engine = MomentEngine::new(&law, 9).unwrap();
        for n in 1..=9 {
            let mass: f64 = enumerate_trees(&law, n).unwrap().iter().map(|t| t.weight).sum();
            assert!((mass - engine.q(n)).abs() < 1e-15, "{desc} n = {n}");
        }
    }
}

#[test]
fn table_routes_agree() {
    let law = OffspringLaw::parse("mary:4").unwrap();
    let specs = TollSpec::parse_list("cpow:0.2-0.7i,clog").unwrap();
    let ns: Vec<usize> = (1..=8).collect();
    let s = MomentTable::compute(&law, &specs, &ns, 0, Route::Series).unwrap();
    let e = MomentTable::compute(&law, &specs, &ns, 0, Route::Enumeration).unwrap();
    for n in ns {
        assert!(rel(s.get(n).unwrap(), e.get(n).unwrap()) < 1e-9);
    }
}

#[test]
fn small_tree_closed_forms() {
    // n = 3: geometric gives a path and a cherry with equal weight.
    let law = OffspringLaw::geometric();
    let engine = MomentEngine::new(&law, 3).unwrap();
    for a in [-1.0, 0.3, 2.0] {
        let v = engine.conditional_moment(3, &[TollSequence::power(Complex64::new(a, 0.0))]).unwrap().re;
        let want = 1.5 + 0.5 * 2f64.powf(a) + 3f64.powf(a);
        assert!((v - want).abs() < 1e-13);
    }
    // Full binary at n = 3 is the cherry, with X_3(α) = 2 + 3^α.
    let law = OffspringLaw::parse("fullbinary").unwrap();
    let engine = MomentEngine::new(&law, 3).unwrap();
    let v = engine.conditional_moment(3, &[TollSequence::power(Complex64::new(1.0, 0.0))]).unwrap().re;
    assert!((v - 5.0).abs() < 1e-13);
}
