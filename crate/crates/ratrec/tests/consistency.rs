//! Cross-module invariants: classified behavior against long float orbits,
//! exact/float agreement, and the product/certificate identities that tie
//! the closed form, the orbit, and the classifier together.

use num_traits::Signed;
use ratrec::classifier::{classify, limit_periodic_point, Behavior};
use ratrec::orbit::{even_odd_split, iterate, partial_products, Termination};
use ratrec::{alpha_of, Exact, Float, Params, Scalar, SeedPair};

fn er(n: i64, d: i64) -> Exact {
    Exact::from_ratio(n, d)
}

/// SplitMix64, for a deterministic corpus.
struct Rng(u64);

impl Rng {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[test]
fn classified_behavior_matches_long_float_orbits() {
    let mut rng = Rng(0xc0ffee);
    let mut checked = 0;
    while checked < 60 {
        let a = rng.sign() * (0.05 + 2.5 * rng.unit());
        let b = rng.sign();
        let x_prev = rng.sign() * (0.2 + 2.0 * rng.unit());
        let x_zero = rng.sign() * (0.2 + 2.0 * rng.unit());
        let params = Params::new(a, b).unwrap();
        let seed = SeedPair::new(x_prev, x_zero).unwrap();
        let alpha = alpha_of(&params, &seed);
        // keep clear of the singular rays so the class is stable under floats
        if (alpha - (1.0 - a)).abs() < 1e-3 || alpha.abs() < 1e-3 || (a.abs() - 1.0).abs() < 0.02
        {
            continue;
        }
        let orbit = iterate(&params, &seed, 10_000);
        match classify(&params, &seed) {
            Behavior::ConvergesToZero => {
                assert_eq!(orbit.termination, Termination::Completed);
                assert!(
                    orbit.term(10_000).unwrap().abs() < 1e-6,
                    "zero limit violated at a={a}, alpha={alpha}"
                );
            }
            Behavior::ConvergesToTwoPeriodic { p, q, .. } => {
                assert_eq!(orbit.termination, Termination::Completed);
                let x_odd = orbit.term(9_999).unwrap();
                let x_even = orbit.term(10_000).unwrap();
                assert!((x_odd - p).abs() < 1e-5, "odd limit off at a={a}");
                assert!((x_even - q).abs() < 1e-5, "even limit off at a={a}");
                assert!(
                    (p * q - (1.0 - a) / b).abs() < 1e-6,
                    "pq product off at a={a}"
                );
            }
            Behavior::NotAdmissible { .. } => continue,
            other => {
                // remaining classes here are the unbounded ones
                let max = orbit
                    .terms()
                    .iter()
                    .fold(0.0f64, |m, x| m.max(x.abs()));
                assert!(max > 1e6, "{other:?} but orbit stayed below 1e6 at a={a}");
            }
        }
        checked += 1;
    }
}

#[test]
fn exact_and_float_classifications_agree() {
    let cases: Vec<((i64, i64), i64, (i64, i64), (i64, i64))> = vec![
        ((1, 2), 1, (1, 1), (1, 1)),
        ((-1, 2), 1, (2, 1), (3, 1)),
        ((2, 1), -1, (1, 1), (2, 1)),
        ((3, 1), -1, (1, 1), (2, 1)),
        ((-1, 1), 1, (1, 1), (3, 1)),
        ((-1, 1), 1, (0, 1), (2, 1)),
        ((0, 1), 1, (2, 1), (3, 1)),
        ((1, 1), 1, (1, 1), (1, 1)),
        ((1, 2), 1, (0, 1), (2, 1)),
        ((1, 2), 0, (3, 1), (-2, 1)),
    ];
    for (a, b, x, y) in cases {
        let pe = Params::new(er(a.0, a.1), er(b, 1)).unwrap();
        let se = SeedPair::new(er(x.0, x.1), er(y.0, y.1)).unwrap();
        let pf: Params<Float> =
            Params::new(a.0 as f64 / a.1 as f64, b as f64).unwrap();
        let sf = SeedPair::new(
            x.0 as f64 / x.1 as f64,
            y.0 as f64 / y.1 as f64,
        )
        .unwrap();
        let exact_class = classify(&pe, &se).class_name();
        let float_class = classify(&pf, &sf).class_name();
        assert_eq!(exact_class, float_class, "modes disagree at a={a:?}");
    }
}

#[test]
fn partial_products_telescope_exactly() {
    // P_k Q_k = (1-a)/u(2k+2) with u(m) = a^m (1-a) + alpha (1 - a^m)
    let params = Params::new(er(2, 3), er(-1, 1)).unwrap();
    let seed = SeedPair::new(er(3, 2), er(-1, 1)).unwrap();
    let alpha = alpha_of(&params, &seed);
    let pp = partial_products(&params, &seed, 40).unwrap();
    let one = Exact::from_int(1);
    let a = params.a().clone();
    for k in 0..=40u32 {
        let m = 2 * k + 2;
        let t = a.powi(m);
        let u = t.clone() * (one.clone() - a.clone()) + alpha.clone() * (one.clone() - t);
        let lhs = pp.even[k as usize].clone() * pp.odd[k as usize].clone();
        assert_eq!(lhs, (one.clone() - a.clone()) / u);
    }
}

#[test]
fn limit_certificate_bounds_distance_to_far_orbit() {
    // |p - x[2K+1]| <= |x[-1]| P_K (e^B - 1): the reported point *is* the
    // truncated product, so the certificate must cover the gap to values
    // much deeper in the orbit.
    for (a, seed) in [(0.4f64, (1.0, 1.0)), (-0.55, (2.0, -0.7)), (0.85, (0.5, 1.5))] {
        let params = Params::new(a, 1.0).unwrap();
        let s = SeedPair::new(seed.0, seed.1).unwrap();
        for tol in [1e-4f64, 1e-8] {
            let pp = limit_periodic_point(&params, &s, &tol).unwrap();
            let orbit = iterate(&params, &s, 60_001);
            let far_odd = orbit.term(59_999).unwrap();
            let far_even = orbit.term(60_000).unwrap();
            assert!(
                (pp.p - far_odd).abs() <= pp.error_bound + 1e-11,
                "odd certificate violated at a={a}, tol={tol}"
            );
            assert!(
                (pp.q - far_even).abs() <= pp.error_bound + 1e-11,
                "even certificate violated at a={a}, tol={tol}"
            );
        }
    }
}

#[test]
fn structure_across_a_minus_one_with_alpha_two() {
    // seed (1, -2) with b = -1 has alpha = 2: exactly 2-periodic at a = -1,
    // a bounded 2-periodic limit just to the right, and a zero limit just
    // to the left. That one-sided structure is what a magnified diagram
    // around a = -1 displays.
    let seed = SeedPair::new(1.0, -2.0).unwrap();

    let at = Params::new(-1.0, -1.0).unwrap();
    assert_eq!(
        classify(&at, &seed),
        Behavior::ExactlyTwoPeriodic { p: 1.0, q: -2.0 }
    );

    let right = Params::new(-0.99, -1.0).unwrap();
    match classify(&right, &seed) {
        Behavior::ConvergesToTwoPeriodic { p, q, .. } => {
            assert!((p * q - (1.0 - -0.99) / -1.0).abs() < 1e-9);
            assert!(p.abs() < 10.0 && q.abs() < 10.0);
        }
        b => panic!("expected a 2-periodic limit on the right, got {b:?}"),
    }

    let left = Params::new(-1.01, -1.0).unwrap();
    assert_eq!(classify(&left, &seed), Behavior::ConvergesToZero);
    let orbit = iterate(&left, &seed, 5_000);
    assert!(orbit.term(5_000).unwrap().abs() < 1e-2);
}

#[test]
fn subsequences_of_two_periodic_limits_flatten() {
    // |x[n+2] - x[n]| -> 0 along a regular orbit with 0 < |a| < 1
    let params = Params::new(-0.7, 1.0).unwrap();
    let seed = SeedPair::new(1.3, 0.4).unwrap();
    let orbit = iterate(&params, &seed, 10_000);
    let (even, odd) = even_odd_split(&orbit);
    for seq in [even, odd] {
        let tail_gap = (seq[seq.len() - 1] - seq[seq.len() - 2]).abs();
        assert!(tail_gap < 1e-9);
    }
}
