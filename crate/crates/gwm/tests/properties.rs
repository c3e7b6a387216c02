//! Property tests for the series kernel, laws, tolls and tree encodings.

use gwm::limits::mu_alpha;
use gwm::moments::{format_complex, parse_complex, TollSpec};
use gwm::simulator::{cycle_lemma_rotate, subtree_sizes, DegreeSequence};
use gwm::{OffspringLaw, TreeSizeLaw, TruncatedSeries};
use num_complex::Complex64;
use proptest::prelude::*;

fn series(n: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n + 1)
        .prop_map(|v| TruncatedSeries::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
}

fn close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol
}

fn builtin() -> impl Strategy<Value = OffspringLaw> {
    prop_oneof![
        Just("binary".to_string()),
        Just("poisson".to_string()),
        Just("fullbinary".to_string()),
        Just("geometric".to_string()),
        (2u64..12).prop_map(|m| format!("mary:{m}")),
        (3u64..12).prop_map(|m| format!("fullmary:{m}")),
        (0.01f64..1.0).prop_map(|c| format!("cfam:{c}")),
        ((0.05f64..0.95), (2u64..6)).prop_map(|(l, m)| format!("mix:{l}:{m}")),
    ]
    .prop_map(|d| OffspringLaw::parse(&d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in series(12), b in series(12), c in series(12)) {
        prop_assert!(close(&a.mul(&b), &b.mul(&a), 1e-12));
        prop_assert!(close(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)), 1e-9));
        prop_assert!(close(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)), 1e-10));
        prop_assert!(close(&a.hadamard(&b), &b.hadamard(&a), 0.0));
        prop_assert!(close(&a.sub(&a), &TruncatedSeries::zero(12), 0.0));
    }

    #[test]
    fn divide_round_trip(a in series(10), mut b in series(10)) {
        let mut c = b.coeffs().to_vec();
        c[0] = Complex64::new(1.0 + c[0].norm(), 0.5);
        b = TruncatedSeries::new(c);
        let q = a.divide(&b).unwrap();
        let scale = 1.0 + q.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(close(&q.mul(&b), &a, 1e-11 * scale * scale));
    }

    #[test]
    fn pgf_convex_and_above_diagonal(law in builtin(), t in 0.0f64..1.0, s in 0.0f64..1.0) {
        let (t, s) = (t.min(s), t.max(s));
        let m = 0.5 * (t + s);
        let (ft, fs, fm) = (law.pgf_real(t), law.pgf_real(s), law.pgf_real(m));
        prop_assert!(fm <= 0.5 * (ft + fs) + 1e-13);
        // Critical: Φ(t) ≥ t, with equality only at 1.
        prop_assert!(ft >= t - 1e-15);
        prop_assert!(law.excess(1.0 - t) >= -1e-15);
        let mass: f64 = law.support().iter().map(|p| p.1).sum();
        let mean: f64 = law.support().iter().map(|p| p.0 as f64 * p.1).sum();
        prop_assert!((mass - 1.0).abs() < 1e-12 && (mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn size_law_is_subprobability(law in builtin()) {
        let s = TreeSizeLaw::new(&law, 300);
        prop_assert!(s.q_slice().iter().all(|&q| q >= 0.0));
        prop_assert!(s.partial_sum() <= 1.0 + 1e-12);
        prop_assert!(s.fixed_point_residual() < 1e-12);
        for n in 1..=300 {
            if !law.is_attainable(n) {
                prop_assert_eq!(s.q(n), 0.0);
            }
        }
    }

    #[test]
    fn complex_text_round_trip(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        let spec = TollSpec::Pow(z);
        prop_assert_eq!(spec.to_string().parse::<TollSpec>().unwrap(), spec);
    }

    #[test]
    fn cycle_lemma_and_sizes(counts in prop::collection::vec(0u32..4, 1..40)) {
        // Any sequence with Σ(d − 1) = −1: pad with leaves until it balances.
        let mut xs = counts;
        let mut s: i64 = xs.iter().map(|&d| i64::from(d) - 1).sum();
        while s > -1 {
            xs.push(0);
            s -= 1;
        }
        while s < -1 {
            let i = xs.iter().position(|&d| d == 0).unwrap();
            xs[i] = 1 + u32::try_from((-1 - s).min(3)).unwrap();
            s = xs.iter().map(|&d| i64::from(d) - 1).sum();
            while s > -1 {
                xs.push(0);
                s -= 1;
            }
        }
        let n = xs.len();
        let valid = (0..n).filter(|&k| {
            let mut ys = xs.clone();
            ys.rotate_left(k);
            DegreeSequence::new(ys).is_ok()
        }).count();
        prop_assert_eq!(valid, 1);
        cycle_lemma_rotate(&mut xs);
        let sizes = subtree_sizes(&xs).unwrap();
        prop_assert_eq!(sizes[0] as usize, n);
        let leaves = xs.iter().filter(|&&d| d == 0).count();
        prop_assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), leaves);
        // Σ sizes = Σ depths + n.
        prop_assert!(sizes.iter().all(|&s| s >= 1 && s as usize <= n));
    }

    #[test]
    fn mu_increases_in_alpha(law in builtin(), a in -3.0f64..0.4, d in 0.01f64..0.09) {
        let lo = mu_alpha(&law, Complex64::new(a, 0.0)).unwrap().re;
        let hi = mu_alpha(&law, Complex64::new(a + d, 0.0)).unwrap().re;
        prop_assert!(hi > lo, "{} {} {}", law.name(), lo, hi);
        prop_assert!(lo > 0.0);
    }
}
