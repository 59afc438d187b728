mod common;

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regluing::branch::Tower;
use regluing::engine::{forward_orbit, rat_states, EngineConfig, PolyState, RatState};
use regluing::family::{eval_rat, rat_inverse_square};
use regluing::{chordal_distance, ExtComplex, QuadMap, RatParam, SampledCurve};

use common::*;

fn example() -> &'static [PolyState] {
    static STATES: OnceLock<Vec<PolyState>> = OnceLock::new();
    STATES.get_or_init(|| example_states(4))
}

fn rational() -> &'static [RatState] {
    static STATES: OnceLock<Vec<RatState>> = OnceLock::new();
    STATES.get_or_init(|| {
        let r = RatParam::new(3.0.into(), 2.0.into()).unwrap();
        let alpha0 = SampledCurve::symmetric_segment(Complex64::new(0.0, 0.2), 16);
        rat_states(r, alpha0, 4, &EngineConfig::default()).expect("rational run")
    })
}

fn example_tower() -> &'static Tower {
    &example().last().unwrap().tower
}

fn point() -> impl Strategy<Value = Complex64> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(x, y)| Complex64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chordal_metric_is_symmetric_and_bounded(a in point(), b in point(), c in point()) {
        let (a, b, c) = (ExtComplex::Finite(a), ExtComplex::Finite(b), ExtComplex::Finite(c));
        prop_assert!((chordal_distance(a, b) - chordal_distance(b, a)).abs() < 1e-15);
        prop_assert!(chordal_distance(a, c) <= chordal_distance(a, b) + chordal_distance(b, c) + 1e-12);
        prop_assert!(chordal_distance(a, ExtComplex::Infinity) <= 2.0);
    }

    #[test]
    fn rational_inverse_square_inverts(w in point(), a in 1.5..5.0f64, b in -3.0..0.9f64) {
        let r = RatParam::new(a.into(), b.into()).unwrap();
        let w = ExtComplex::Finite(w);
        let z = rat_inverse_square(r, w).sqrt();
        prop_assert!(chordal_distance(eval_rat(r, z), w) < 1e-9);
        prop_assert!(chordal_distance(eval_rat(r, z.neg()), w) < 1e-9);
    }

    #[test]
    fn preimages_map_back(c in -2.5..0.5f64, w in point()) {
        let map = QuadMap::poly(Complex64::new(c, 0.3));
        let w = ExtComplex::Finite(w);
        let (z1, z2) = map.preimages(w);
        prop_assert!(chordal_distance(map.eval(z1), w) < 1e-12);
        prop_assert!(chordal_distance(z1, z2.neg()) < 1e-12);
    }

    #[test]
    fn tower_branches_square_to_pullbacks(z in point(), n in 0usize..=4) {
        let t = example_tower();
        let z = ExtComplex::Finite(z);
        if let (Ok(j), Ok(f)) = (t.eval_j(n, z), t.eval_f(n, z)) {
            let pulled = t.stage(n).unwrap().map.inverse_square(f);
            prop_assert!(chordal_distance(j.square(), pulled) < 1e-8);
        }
    }

    #[test]
    fn tower_semiconjugacy(z in point(), n in 0usize..=3) {
        let t = example_tower();
        let z = ExtComplex::Finite(z);
        if let (Ok(lhs), Ok(rhs)) = (
            t.eval_j(n, z).and_then(|w| t.eval_f(n + 1, w)),
            t.eval_f(n, z).and_then(|w| t.eval_j(n, w)),
        ) {
            prop_assert!(chordal_distance(lhs, rhs) < 1e-7);
        }
    }

    #[test]
    fn branches_are_odd(z in point(), n in 0usize..=4) {
        let t = example_tower();
        let z = ExtComplex::Finite(z);
        if let (Ok(p), Ok(m)) = (t.eval_j(n, z), t.eval_j(n, z.neg())) {
            prop_assert!(chordal_distance(p, m.neg()) < 1e-8);
        }
    }

    #[test]
    fn loops_return_to_start(seed in any::<u64>(), n in 0usize..=4) {
        let t = example_tower();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let route = random_loop(&mut rng, t.cuts(n).unwrap(), 3.5);
        let start = t.levels_at(n, ExtComplex::Finite(route.waypoints[0])).unwrap();
        let end = t.continue_along(n, &route, start.clone()).unwrap();
        prop_assert!(chordal_distance(start[n], end[n]) < 1e-8);
    }

    #[test]
    fn rational_branches_fix_zero_and_infinity(z in point(), n in 1usize..=4) {
        let t = &rational().last().unwrap().tower;
        prop_assert_eq!(t.eval_j(n, ExtComplex::ZERO).unwrap(), ExtComplex::ZERO);
        prop_assert_eq!(t.eval_j(n, ExtComplex::Infinity).unwrap(), ExtComplex::Infinity);
        let z = ExtComplex::Finite(z);
        if let (Ok(lhs), Ok(rhs)) = (
            t.eval_j(n - 1, z).and_then(|w| t.eval_f(n, w)),
            t.eval_f(n - 1, z).and_then(|w| t.eval_j(n - 1, w)),
        ) {
            prop_assert!(chordal_distance(lhs, rhs) < 1e-7);
        }
    }
}

#[test]
fn engine_orbits_match_tower_iteration() {
    for s in example() {
        let oracle = tower_orbit(&s.tower, s.n, 6);
        for (m, (&o, &e)) in s.orbit.iter().zip(&oracle).enumerate() {
            assert!(chordal_distance(o, e) < 1e-8, "stage {} entry {m}", s.n);
        }
    }
}

#[test]
fn rational_orbits_match_tower_iteration() {
    for s in rational() {
        let mut z = ExtComplex::ONE;
        for m in 0..5 {
            z = s.tower.eval_f(s.n, z).unwrap();
            let expected = if m == 0 { ExtComplex::Infinity } else { s.orbit_inf[m - 1] };
            assert!(chordal_distance(z, expected) < 1e-8, "stage {} entry {m}", s.n);
        }
    }
}

#[test]
fn cut_sets_double_and_stay_disjoint() {
    for s in example() {
        let cuts = s.cut_set().unwrap();
        assert_eq!(cuts.len(), 1 << s.n);
        assert!(cuts.pairwise_disjoint(1e-9));
    }
}

#[test]
fn forward_orbit_of_periodic_point_stays_exact() {
    let map = QuadMap::poly(Complex64::new(-6.0, 0.0));
    let orbit = forward_orbit(&map, ExtComplex::real(3.0), 40);
    assert!(orbit.iter().all(|&z| z == ExtComplex::real(3.0)));
}
