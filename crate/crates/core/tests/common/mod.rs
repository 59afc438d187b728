#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regluing::branch::{PathRoute, Tower};
use regluing::engine::{example_input, poly_states, EngineConfig, PolyState};
use regluing::{CurveFamily, ExtComplex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// States `1..=n` of the worked example.
pub fn example_states(n: usize) -> Vec<PolyState> {
    let (c, alpha0) = example_input();
    poly_states(c, alpha0, n, &EngineConfig::default()).expect("example run")
}

pub fn random_point(rng: &mut ChaCha8Rng, half: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

/// Closed polygon with 3 to 5 random vertices whose edges cross no cut.
pub fn random_loop(rng: &mut ChaCha8Rng, cuts: &CurveFamily, half: f64) -> PathRoute {
    loop {
        let k = rng.gen_range(3..=5);
        let mut waypoints: Vec<Complex64> = (0..k).map(|_| random_point(rng, half)).collect();
        waypoints.push(waypoints[0]);
        let route = PathRoute { waypoints };
        if route.avoids(cuts) && !cuts.is_near(ExtComplex::Finite(route.waypoints[0]), 1e-3) {
            return route;
        }
    }
}

/// Random points at which every listed evaluation succeeds.
pub fn admissible_probes<F>(rng: &mut ChaCha8Rng, count: usize, half: f64, ok: F) -> Vec<ExtComplex>
where
    F: Fn(ExtComplex) -> bool,
{
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = ExtComplex::Finite(random_point(rng, half));
        if ok(z) {
            out.push(z);
        }
    }
    out
}

/// Values `f_n^m(0)`, `m = 1..=len`, iterated through the tower.
pub fn tower_orbit(t: &Tower, n: usize, len: usize) -> Vec<ExtComplex> {
    let mut z = ExtComplex::ZERO;
    (0..len)
        .map(|_| {
            z = t.eval_f(n, z).expect("tower evaluation");
            z
        })
        .collect()
}
