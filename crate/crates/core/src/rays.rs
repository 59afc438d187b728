//! Green's function, external rays of quadratic polynomials, and regluing
//! paths built from a pair of rays that crash into the critical point.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::curve::{fmt17, SampledCurve, POINT_TOL};
use crate::error::{Error, Result};
use crate::family::{PolyParam, QuadMap};
use crate::par::Exec;
use crate::sphere::{chordal_distance, ExtComplex, Infinity};

/// Orbit points closer than this (chordally) to the path violate
/// admissibility.
pub const ADMISSIBILITY_TOL: f64 = 1e-6;

const POTENTIAL_FACTOR: f64 = 0.85;
const MAX_SAMPLE_GAP: f64 = 0.1;
const MAX_TURN: f64 = std::f64::consts::PI / 6.0;
const MIN_RELATIVE_STEP: f64 = 1e-14;
const CRASH_RADIUS: f64 = 1e-6;
const NEWTON_ITERS: usize = 60;
const RAY_BUDGET: usize = 20_000;
/// Rays are entered at this potential or above, where the Böttcher
/// coordinate is close to the identity.
const ENTRY_POTENTIAL: f64 = 8.0;
/// Escape level `2^n G` used for the Newton equation.
const ESCAPE_LEVEL: f64 = 12.0;

/// `G(z) = lim 2^-n log|p_c^n(z)|`, evaluated at the first escape past
/// `r_escape` and refined by iterating further while that stays finite.
pub fn green_value(c: PolyParam, z: ExtComplex, n_max: usize, r_escape: f64) -> f64 {
    let mut z = match z {
        Infinity => return f64::INFINITY,
        ExtComplex::Finite(z) => z,
    };
    let r = r_escape.max(4.0 + c.c.norm());
    let mut scale = 1.0;
    for _ in 0..n_max.max(1) {
        if z.norm() > r {
            // refine until the correction log|1 + c / z^2| is negligible
            for _ in 0..8 {
                if z.norm() > 1e12 {
                    break;
                }
                z = z * z + c.c;
                scale *= 0.5;
            }
            return scale * z.norm().ln();
        }
        z = z * z + c.c;
        scale *= 0.5;
    }
    0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Landed,
    Crashed,
    Budget,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Landed => "landed",
            Termination::Crashed => "crashed",
            Termination::Budget => "budget",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "landed" => Ok(Termination::Landed),
            "crashed" => Ok(Termination::Crashed),
            "budget" => Ok(Termination::Budget),
            _ => Err(Error::Parse(format!("unknown ray termination {s}"))),
        }
    }
}

/// Samples of an external ray ordered by decreasing potential.
#[derive(Debug, Clone, PartialEq)]
pub struct RayTrace {
    pub angle: f64,
    pub samples: Vec<(f64, ExtComplex)>,
    pub terminated: Termination,
}

impl RayTrace {
    pub fn last_point(&self) -> Option<ExtComplex> {
        self.samples.last().map(|s| s.1)
    }

    /// Text form: a header line then one `G re im` line per sample.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "ray angle={} terminated={} n={}\n",
            fmt17(self.angle),
            self.terminated.as_str(),
            self.samples.len()
        );
        for (g, z) in &self.samples {
            let z = z.finite().unwrap_or(Complex64::new(f64::INFINITY, 0.0));
            let _ = writeln!(s, "{} {} {}", fmt17(*g), fmt17(z.re), fmt17(z.im));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty ray file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("ray") {
            return Err(Error::Parse("missing ray header".into()));
        }
        let (mut angle, mut term, mut n) = (None, None, None);
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {f}")))?;
            match k {
                "angle" => angle = v.parse::<f64>().ok(),
                "terminated" => term = Some(Termination::parse(v)?),
                "n" => n = v.parse::<usize>().ok(),
                _ => return Err(Error::Parse(format!("unknown header field {k}"))),
            }
        }
        let (angle, terminated, n) = match (angle, term, n) {
            (Some(a), Some(t), Some(n)) => (a, t, n),
            _ => return Err(Error::Parse("incomplete ray header".into())),
        };
        let mut samples = Vec::with_capacity(n);
        for line in lines {
            let v: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t}"))))
                .collect::<Result<_>>()?;
            if v.len() != 3 {
                return Err(Error::Parse(format!("expected `G re im`, got {line:?}")));
            }
            let z = ExtComplex::new(Complex64::new(v[1], v[2])).map_err(|e| Error::Parse(e.to_string()))?;
            samples.push((v[0], z));
        }
        if samples.len() != n {
            return Err(Error::Parse(format!("header announces {n} samples, found {}", samples.len())));
        }
        Ok(RayTrace {
            angle,
            samples,
            terminated,
        })
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Angle `2^n θ` mod 1, doubling exactly for dyadic inputs.
fn doubled_angle(theta: f64, n: u32) -> f64 {
    let mut t = theta.rem_euclid(1.0);
    for _ in 0..n {
        t = (2.0 * t).rem_euclid(1.0);
    }
    t
}

/// Solves `p_c^n(z) = exp(2^n (G + 2πiθ))` by Newton's method from `z0`.
/// Returns the root and the smallest orbit modulus `min_k<n |p^k(z)|`.
fn solve_ray_point(c: Complex64, theta: f64, g: f64, z0: Complex64) -> Option<(Complex64, f64)> {
    let mut n = 1u32;
    while 2f64.powi(n as i32) * g < ESCAPE_LEVEL && n < 60 {
        n += 1;
    }
    let scaled = 2f64.powi(n as i32) * g;
    let target = Complex64::from_polar(scaled.exp(), std::f64::consts::TAU * doubled_angle(theta, n));
    let mut z = z0;
    let mut converged = false;
    let mut last = f64::INFINITY;
    for it in 0..NEWTON_ITERS {
        let (mut w, mut dw) = (z, Complex64::new(1.0, 0.0));
        for _ in 0..n {
            dw = 2.0 * w * dw;
            w = w * w + c;
        }
        if !w.is_finite() || !dw.is_finite() || dw.norm() == 0.0 {
            return None;
        }
        let step = (w - target) / dw;
        z -= step;
        let (size, scale) = (step.norm(), z.norm().max(1e-12));
        // near precritical points the step stalls at the rounding floor,
        // which grows like eps |c| / |z| close to the critical point
        let floor = 1e-6 * scale + 1e-14 * (1.0 + c.norm()) / scale;
        if size <= 1e-13 * scale || (it >= 3 && size >= 0.5 * last && size <= floor) {
            converged = true;
            break;
        }
        last = size;
    }
    if !converged || !z.is_finite() {
        return None;
    }
    let mut w = z;
    let mut min_mod = f64::INFINITY;
    for _ in 0..n {
        min_mod = min_mod.min(w.norm());
        w = w * w + c;
    }
    let err = (w.norm().ln() - scaled).abs().max((w / target).arg().abs());
    (err < 1e-3).then_some((z, min_mod))
}

/// Traces the ray of angle `theta` (in turns) from potential `g_hi` down
/// to `g_lo` by Newton continuation in geometric potential steps.
///
/// Rays can only crash at the potentials `G(0) / 2^k` of precritical
/// points; each such level is approached through `G(0) / 2^k (1 + δ)` with
/// shrinking `δ` and the ray is declared crashed if it ends on a
/// precritical point.
pub fn trace_ray(c: PolyParam, theta: f64, g_hi: f64, g_lo: f64) -> RayTrace {
    let mut trace = RayTrace {
        angle: theta.rem_euclid(1.0),
        samples: Vec::new(),
        terminated: Termination::Budget,
    };
    if !(g_lo > 0.0 && g_lo < g_hi) {
        return trace;
    }
    let mut g = g_hi.max(ENTRY_POTENTIAL);
    let mut z = Complex64::from_polar(g.exp(), std::f64::consts::TAU * trace.angle);
    match solve_ray_point(c.c, trace.angle, g, z) {
        Some((w, _)) => z = w,
        None => return trace,
    }
    // descend to g_hi without recording
    while g > g_hi {
        let next = (g * POTENTIAL_FACTOR).max(g_hi);
        match solve_ray_point(c.c, trace.angle, next, z) {
            Some((w, _)) => {
                z = w;
                g = next;
            }
            None => return trace,
        }
    }
    trace.samples.push((g, ExtComplex::Finite(z)));

    let g_crit = green_value(c, ExtComplex::ZERO, 4000, 0.0);
    let mut levels: Vec<f64> = Vec::new();
    if g_crit > 0.0 {
        let mut l = g_crit;
        while l > g_lo {
            if l < g {
                levels.push(l);
            }
            l *= 0.5;
        }
    }
    let mut levels = levels.into_iter().peekable();
    let mut tangent: Option<Complex64> = None;
    let mut factor = POTENTIAL_FACTOR;
    // 0 while descending freely, k > 0 while approaching a crash level
    let mut approach = 0i32;
    for _ in 0..RAY_BUDGET {
        if g <= g_lo {
            trace.terminated = Termination::Landed;
            return trace;
        }
        let mut next = (g * factor).max(g_lo);
        if let Some(&l) = levels.peek() {
            if approach == 0 && next <= l * (1.0 + 1e-3) {
                approach = 1;
            }
            if approach > 0 {
                next = l * (1.0 + 1e-3 * 0.25f64.powi(approach - 1));
                // entered already inside the approach window
                while next >= g && approach < APPROACH_STEPS {
                    approach += 1;
                    next = l * (1.0 + 1e-3 * 0.25f64.powi(approach - 1));
                }
            }
        }
        let accepted = solve_ray_point(c.c, trace.angle, next, z).filter(|&(w, _)| {
            let d = w - z;
            let turn = tangent.map_or(0.0, |t| (d / t).arg().abs());
            let tiny = d.norm() <= 1e-9 * z.norm().max(1e-6);
            chordal_distance(ExtComplex::Finite(w), ExtComplex::Finite(z)) <= MAX_SAMPLE_GAP
                && (turn <= MAX_TURN || tiny)
        });
        match accepted {
            Some((w, min_mod)) => {
                if (w - z).norm() > 1e-9 * z.norm().max(1e-6) {
                    tangent = Some(w - z);
                }
                z = w;
                g = next;
                trace.samples.push((g, ExtComplex::Finite(z)));
                factor = (1.0 - (1.0 - factor) * 1.5).max(POTENTIAL_FACTOR);
                if approach > 0 && min_mod < CRASH_RADIUS {
                    trace.terminated = Termination::Crashed;
                    return trace;
                }
                if approach == APPROACH_STEPS {
                    // this level is passed away from precritical points
                    levels.next();
                    approach = 0;
                } else if approach > 0 {
                    approach += 1;
                }
            }
            None if approach > 0 => return trace,
            None => {
                // halve the potential decrement
                factor = 1.0 - (1.0 - factor) * 0.5;
                if 1.0 - factor < MIN_RELATIVE_STEP {
                    return trace;
                }
            }
        }
    }
    trace
}

/// Approach potentials `level * (1 + 1e-3 / 4^(k-1))`, k = 1..=21; each
/// step halves the distance to a precritical point.
const APPROACH_STEPS: i32 = 21;

/// Regluing path through the critical point built from the rays of the
/// two given angles, both traced down from potential `rho`.
pub fn build_alpha0(c: PolyParam, angles: (f64, f64), rho: f64) -> Result<SampledCurve> {
    let g_lo = rho * 1e-9;
    let traces = Exec::default().map(&[angles.0, angles.1], |&t| trace_ray(c, t, rho, g_lo));
    let (plus, minus) = (&traces[0], &traces[1]);
    for t in [plus, minus] {
        let miss = t
            .last_point()
            .map_or(f64::INFINITY, |z| chordal_distance(z, ExtComplex::ZERO));
        if t.terminated != Termination::Crashed || miss > 1e-6 {
            return Err(Error::RaysDontMeetCritical(miss));
        }
    }
    // match the minus ray onto the plus ray's potentials
    let mut half = Vec::with_capacity(plus.samples.len());
    let mut mismatch = 0.0f64;
    for &(g, z) in &plus.samples {
        let p = z.finite().expect("ray samples are finite");
        let q = interpolate(&minus.samples, g).ok_or(Error::RaysDontMeetCritical(f64::INFINITY))?;
        mismatch = mismatch.max((p + q).norm());
        half.push((p - q) * 0.5);
    }
    if mismatch > 1e-6 {
        return Err(Error::AsymmetryTooLarge(mismatch));
    }
    // nearest-to-0 first, dropping samples that coincide
    half.reverse();
    let mut kept: Vec<Complex64> = Vec::with_capacity(half.len());
    for z in half {
        let last = kept.last().copied().unwrap_or(Complex64::new(0.0, 0.0));
        if (z - last).norm() > 1e3 * POINT_TOL {
            kept.push(z);
        }
    }
    if kept.is_empty() {
        return Ok(SampledCurve::point(Complex64::new(0.0, 0.0)));
    }
    let mut points: Vec<ExtComplex> = kept.iter().rev().map(|&z| ExtComplex::Finite(-z)).collect();
    points.push(ExtComplex::ZERO);
    points.extend(kept.iter().map(|&z| ExtComplex::Finite(z)));
    SampledCurve::new(points, false, true)
}

/// Point at potential `g` on a ray, linear in potential between samples.
fn interpolate(samples: &[(f64, ExtComplex)], g: f64) -> Option<Complex64> {
    let pt = |i: usize| samples[i].1.finite();
    for i in 0..samples.len() {
        let (gi, _) = samples[i];
        if gi == g {
            return pt(i);
        }
        if i + 1 < samples.len() {
            let (gj, _) = samples[i + 1];
            if gi > g && g > gj {
                let t = (gi - g) / (gi - gj);
                return Some(pt(i)? + (pt(i + 1)? - pt(i)?) * t);
            }
        }
    }
    None
}

/// First `n` in `1..=horizon` where `f^n(start)` comes within `tol` of the
/// curve, with that distance.
pub fn first_violation(
    map: &QuadMap,
    start: ExtComplex,
    curve: &SampledCurve,
    horizon: usize,
    tol: f64,
) -> Option<(usize, f64)> {
    let mut z = start;
    for n in 1..=horizon {
        z = map.eval(z);
        let d = curve.chordal_distance_to(z);
        if d <= tol {
            return Some((n, d));
        }
    }
    None
}

/// Outcome of the admissibility check; `violation` holds the first
/// offending iterate and its distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub violation: Option<(usize, f64)>,
}

/// Whether the forward orbit of `alpha0(1)` stays away from `alpha0` for
/// `n = 1..=horizon`.
pub fn check_admissible(c: PolyParam, alpha0: &SampledCurve, horizon: usize) -> Admissibility {
    let violation = first_violation(&QuadMap::Poly(c), alpha0.endpoint(), alpha0, horizon, ADMISSIBILITY_TOL);
    Admissibility {
        admissible: violation.is_none(),
        violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: f64) -> PolyParam {
        PolyParam::from_complex(c.into())
    }

    fn green_brute(c: f64, z: Complex64) -> f64 {
        // iterate to a huge radius, where the correction is below 1e-30
        let mut z = z;
        let mut scale = 1.0;
        for _ in 0..10_000 {
            if z.norm() > 1e40 {
                return scale * z.norm().ln();
            }
            z = z * z + c;
            scale *= 0.5;
        }
        0.0
    }

    #[test]
    fn green_examples() {
        let z = ExtComplex::Finite(Complex64::from_polar(std::f64::consts::E, 0.7));
        assert!((green_value(poly(0.0), z, 100, 4.0) - 1.0).abs() < 1e-6);
        assert_eq!(green_value(poly(-6.0), ExtComplex::real(3.0), 500, 14.0), 0.0);
        let g = green_value(poly(-6.0), ExtComplex::real(4.0), 500, 14.0);
        assert!((g - green_brute(-6.0, Complex64::new(4.0, 0.0))).abs() < 1e-6);
    }

    #[test]
    fn rays_of_z_squared_are_radial() {
        let t = trace_ray(poly(0.0), 0.0, 1.0, 0.01);
        assert_eq!(t.terminated, Termination::Landed);
        for (g, z) in &t.samples {
            let z = z.finite().unwrap();
            assert!(z.im.abs() < 1e-9 && (z.re - g.exp()).abs() < 1e-9);
        }
        assert!(t.samples.windows(2).all(|w| w[1].0 < w[0].0));
    }

    #[test]
    fn zero_ray_of_example_lands_at_three() {
        let t = trace_ray(poly(-6.0), 0.0, 1.0, 1e-4);
        assert_eq!(t.terminated, Termination::Landed);
        let z = t.last_point().unwrap().finite().unwrap();
        assert!((z - 3.0).norm() < 0.01, "{z}");
    }

    #[test]
    fn quarter_ray_crashes_into_critical_point() {
        let t = trace_ray(poly(-6.0), 0.25, 1.5, 1e-3);
        assert_eq!(t.terminated, Termination::Crashed);
        let z = t.last_point().unwrap();
        assert!(chordal_distance(z, ExtComplex::ZERO) < 1e-5);
        for w in t.samples.windows(2) {
            assert!(w[1].0 < w[0].0);
            assert!(chordal_distance(w[0].1, w[1].1) <= MAX_SAMPLE_GAP);
        }
    }

    #[test]
    fn ray_text_round_trip() {
        let t = trace_ray(poly(0.0), 0.125, 1.0, 0.5);
        assert_eq!(RayTrace::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn alpha0_from_crashing_rays() {
        let c = poly(-6.0);
        let g0 = green_value(c, ExtComplex::ZERO, 500, 14.0);
        let a = build_alpha0(c, (0.25, 0.75), 1.2).unwrap();
        assert!(a.is_symmetric());
        let tip = a.endpoint().finite().unwrap();
        assert!(tip.re.abs() < 1e-9 && tip.im > 0.0);
        assert!((green_value(c, a.endpoint(), 500, 14.0) - 1.2).abs() < 1e-9);
        // shrinks toward the critical point as the potential drops to G(0)
        let small = build_alpha0(c, (0.25, 0.75), g0 * (1.0 + 1e-6)).unwrap();
        assert!(small.diameter() < 0.05 && small.diameter() < a.diameter());
        assert!(matches!(build_alpha0(c, (0.0, 0.5), 1.2), Err(Error::RaysDontMeetCritical(_))));
    }

    #[test]
    fn admissibility_examples() {
        let s3 = 3f64.sqrt();
        let a = SampledCurve::symmetric_segment(Complex64::new(s3, 0.0), 16);
        assert!(check_admissible(poly(-6.0), &a, 100).admissible);
        assert!(check_admissible(poly(-6.0), &a, 0).admissible);
        let wide = SampledCurve::symmetric_segment(Complex64::new(3.0, 0.0), 16);
        let r = check_admissible(poly(-6.0), &wide, 10);
        assert!(!r.admissible);
        assert_eq!(r.violation.unwrap().0, 1);
    }

    proptest! {
        #[test]
        fn green_functional_equation(re in -5.0f64..5.0, im in -5.0f64..5.0, c in -3.0f64..1.0) {
            let z = Complex64::new(re, im);
            let p = poly(c);
            let g = green_value(p, ExtComplex::Finite(z), 2000, 8.0);
            prop_assume!(g > 1e-3);
            let g1 = green_value(p, ExtComplex::Finite(z * z + c), 2000, 8.0);
            prop_assert!((g1 - 2.0 * g).abs() < 1e-6);
        }

        #[test]
        fn admissibility_monotone_in_horizon(x in 0.1f64..3.5, n in 0usize..40) {
            let a = SampledCurve::symmetric_segment(Complex64::new(x, 0.0), 8);
            let big = check_admissible(poly(-6.0), &a, n + 5);
            let small = check_admissible(poly(-6.0), &a, n);
            prop_assert!(!big.admissible || small.admissible);
        }
    }
}
