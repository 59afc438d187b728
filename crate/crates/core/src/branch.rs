//! Square-root branches continued along routes that avoid cut curves, and
//! evaluation of the regluing tower built from them.
//!
//! A point `x` of plane `p` (the domain of `f_p`) determines the chain
//! `y_p = x`, `y_{i-1} = R_{i-1}(y_i)` down to plane 0. The values
//! `u_i = j_i(y_i)` satisfy `u_0^2 = (y_0^2 - a^2) / s` (with `a` the
//! endpoint of the regluing path and `s` the normalizer) and
//! `u_i^2 = R_i^*(u_{i-1})`, where `R^*(w)` is the common value of `z^2` on
//! the fiber `R^{-1}(w)`. Hence `j_p(x) = u_p` and `f_p(x) = u_{p-1}`.
//! All levels are continued together from a normalization point, so the
//! cost is linear in `p`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::curve::{CurveFamily, SampledCurve};
use crate::error::{Error, Result};
use crate::family::{PolyParam, QuadMap, RatParam};
use crate::par::Exec;
use crate::sphere::{chordal_distance, nearest_root, ExtComplex, Infinity};

/// Square-root arguments below this modulus count as branch points.
pub const ZERO_TOL: f64 = 1e-10;
/// Candidate roots closer to equidistant than this ratio are ambiguous.
pub const AMBIGUITY_RATIO: f64 = 1.05;
/// Points within this chordal distance of a cut are off the domain.
pub const CUT_CLEARANCE: f64 = 1e-9;

const MAX_REL_STEP: f64 = 0.3;
const MAX_STEP: f64 = 0.25;
const MIN_STEP: f64 = 1e-13;
const MAX_SAMPLES: usize = 2_000_000;
/// Above this modulus polynomial levels are evaluated in ratio form.
const RATIO_MODE: f64 = 1e30;
const REFERENCE_RADIUS: f64 = 1e6;
const ROUTE_RETRIES: u32 = 8;
const ROUTE_DEPTH: u32 = 12;
const ROUTE_MIN_OFFSET: f64 = 0.05;
const SEED_RADII: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Continues `sqrt(g)` along the samples `g_values` starting from `w0`.
pub fn continue_sqrt(g_values: &[ExtComplex], w0: ExtComplex) -> Result<ExtComplex> {
    let gs: Vec<Complex64> = g_values
        .iter()
        .map(|g| {
            g.finite()
                .ok_or_else(|| Error::InvalidParameter("continuation samples must be finite".into()))
        })
        .collect::<Result<_>>()?;
    let first = *gs
        .first()
        .ok_or_else(|| Error::InvalidParameter("no continuation samples".into()))?;
    let mut w = w0
        .finite()
        .ok_or_else(|| Error::InvalidParameter("initial branch value must be finite".into()))?;
    if (w * w - first).norm() > 1e-8 * first.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidParameter(
            "initial branch value is not a square root of the first sample".into(),
        ));
    }
    for (i, &g) in gs.iter().enumerate() {
        if g.norm() < ZERO_TOL {
            return Err(Error::ZeroCrossing(g.norm()));
        }
        if i == 0 {
            continue;
        }
        let (r, ratio) = nearest_root(g, w);
        if ratio < AMBIGUITY_RATIO {
            return Err(Error::AmbiguousStep(ratio));
        }
        w = r;
    }
    Ok(ExtComplex::Finite(w))
}

/// A polygonal path through finite waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRoute {
    pub waypoints: Vec<Complex64>,
}

impl PathRoute {
    pub fn legs(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn avoids(&self, cuts: &CurveFamily) -> bool {
        self.legs().all(|(a, b)| !cuts.is_crossed_by(a, b))
    }
}

/// A route from `from` to `to` whose segments cross none of `cuts`.
pub fn route_path(from: ExtComplex, to: ExtComplex, cuts: &CurveFamily) -> Result<PathRoute> {
    plan_route(from, to, cuts, 0)
}

fn plan_route(from: ExtComplex, to: ExtComplex, cuts: &CurveFamily, stage: usize) -> Result<PathRoute> {
    let (a, b) = match (from.finite(), to.finite()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParameter("route endpoints must be finite".into())),
    };
    if cuts.is_near(from, CUT_CLEARANCE) || cuts.is_near(to, CUT_CLEARANCE) {
        return Err(Error::OnCutCurve { stage });
    }
    let mut waypoints = vec![a];
    if a != b {
        detour(a, b, cuts, 0, &mut waypoints)?;
    }
    Ok(PathRoute { waypoints })
}

fn detour(a: Complex64, b: Complex64, cuts: &CurveFamily, depth: u32, out: &mut Vec<Complex64>) -> Result<()> {
    let crossed = cuts.crossed_by(a, b);
    if crossed.is_empty() {
        out.push(b);
        return Ok(());
    }
    if depth >= ROUTE_DEPTH {
        return Err(Error::Unroutable);
    }
    let base = cuts
        .bbox_of(&crossed)
        .map_or(0.0, |bb| bb.diagonal())
        .max(ROUTE_MIN_OFFSET);
    let normal = Complex64::i() * (b - a) / (b - a).norm();
    let mid = (a + b) * 0.5;
    let mut best: Option<(usize, Complex64)> = None;
    for retry in 0..ROUTE_RETRIES {
        let d = base * f64::from(1u32 << retry);
        for anchor in [b, a, mid] {
            for sign in [1.0, -1.0] {
                let w = anchor + normal * (sign * d);
                if w == a || w == b || cuts.is_near(ExtComplex::Finite(w), 1e3 * CUT_CLEARANCE) {
                    continue;
                }
                let hits = cuts.crossed_by(a, w).len() + cuts.crossed_by(w, b).len();
                if hits == 0 {
                    out.push(w);
                    out.push(b);
                    return Ok(());
                }
                if best.is_none_or(|(h, _)| hits < h) {
                    best = Some((hits, w));
                }
            }
        }
    }
    match best {
        Some((_, w)) => {
            detour(a, w, cuts, depth + 1, out)?;
            detour(w, b, cuts, depth + 1, out)
        }
        None => Err(Error::Unroutable),
    }
}

/// One stage of the tower: the straightened map `R_n` and the cut set
/// `Γ_n` bounding the domain of `j_n`. Cut sets beyond the materialized
/// depth are `None`.
#[derive(Debug, Clone)]
pub struct TowerStage {
    pub map: QuadMap,
    pub cuts: Option<CurveFamily>,
    seed: OnceLock<Result<Seed>>,
}

impl TowerStage {
    pub fn new(map: QuadMap, cuts: Option<CurveFamily>) -> Self {
        TowerStage {
            map,
            cuts,
            seed: OnceLock::new(),
        }
    }
}

/// Normalization data for a plane: a point and every level value there.
#[derive(Debug, Clone)]
struct Seed {
    point: Complex64,
    levels: Vec<ExtComplex>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Poly,
    Rat,
}

/// The base map with its regluing path and the straightened stages.
#[derive(Debug, Clone)]
pub struct Tower {
    base: QuadMap,
    alpha0: SampledCurve,
    endpoint_sq: Complex64,
    normalizer: Complex64,
    kind: Kind,
    stages: Vec<TowerStage>,
}

struct Sample {
    u: Vec<ExtComplex>,
    min_g: f64,
    max_rel: f64,
    min_ratio: f64,
}

impl Tower {
    /// Tower over `base` reglued along `alpha0`, holding stage 0:
    /// `R_0 = p_{c + a^2}` or `R_{f(inf), f(a)}` with cut set `{alpha0}`.
    pub fn new(base: QuadMap, alpha0: SampledCurve) -> Result<Self> {
        if !alpha0.is_symmetric() {
            return Err(Error::InvalidCurve("regluing path must be symmetric under z -> -z".into()));
        }
        let a = alpha0
            .endpoint()
            .finite()
            .ok_or_else(|| Error::InvalidCurve("regluing path must be finite".into()))?;
        let endpoint_sq = a * a;
        let (kind, normalizer, stage0) = match base {
            QuadMap::Poly(p) => (Kind::Poly, Complex64::new(1.0, 0.0), QuadMap::poly(p.c + endpoint_sq)),
            QuadMap::Rat(r) => {
                let (ra, rb) = match (r.a.finite(), r.b.finite()) {
                    (Some(ra), Some(rb)) => (ra, rb),
                    _ => {
                        return Err(Error::InvalidParameter(
                            "rational regluing needs finite critical values a and b".into(),
                        ))
                    }
                };
                let s = Complex64::new(1.0, 0.0) - endpoint_sq;
                if s.norm() < 1e-10 {
                    return Err(Error::DegenerateNormalizer(s.norm()));
                }
                let b0 = (rb - ra * endpoint_sq) / s;
                let m = RatParam::new(ExtComplex::Finite(ra), ExtComplex::from(b0))?;
                (Kind::Rat, s, QuadMap::Rat(m))
            }
        };
        let cuts = CurveFamily::new(vec![alpha0.clone()]);
        Ok(Tower {
            base,
            alpha0,
            endpoint_sq,
            normalizer,
            kind,
            stages: vec![TowerStage::new(stage0, Some(cuts))],
        })
    }

    pub fn base(&self) -> &QuadMap {
        &self.base
    }

    pub fn alpha0(&self) -> &SampledCurve {
        &self.alpha0
    }

    /// `alpha0(1)^2`.
    pub fn endpoint_sq(&self) -> Complex64 {
        self.endpoint_sq
    }

    /// `1 - alpha0(1)^2` for rational towers, `1` for polynomial ones.
    pub fn normalizer(&self) -> Complex64 {
        self.normalizer
    }

    pub fn is_rational(&self) -> bool {
        self.kind == Kind::Rat
    }

    pub fn stages(&self) -> &[TowerStage] {
        &self.stages
    }

    pub fn stage(&self, n: usize) -> Result<&TowerStage> {
        self.stages
            .get(n)
            .ok_or_else(|| Error::InvalidParameter(format!("tower has no stage {n}")))
    }

    /// Highest stage index present.
    pub fn depth(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn push_stage(&mut self, stage: TowerStage) {
        self.stages.push(stage);
    }

    pub fn cuts(&self, n: usize) -> Result<&CurveFamily> {
        self.stage(n)?
            .cuts
            .as_ref()
            .ok_or(Error::CutsNotMaterialized { stage: n })
    }

    fn map(&self, i: usize) -> &QuadMap {
        &self.stages[i].map
    }

    /// `y_p..y_0` for `x` in plane `p`.
    pub fn descend(&self, p: usize, x: ExtComplex) -> Vec<ExtComplex> {
        let mut y = vec![x; p + 1];
        for i in (0..p).rev() {
            y[i] = self.map(i).eval(y[i + 1]);
        }
        y
    }

    fn base_square(&self, y0: ExtComplex) -> ExtComplex {
        match y0 {
            Infinity => Infinity,
            ExtComplex::Finite(v) => ExtComplex::from((v * v - self.endpoint_sq) / self.normalizer),
        }
    }

    /// Level values at `x` in plane `p`, each root chosen nearest to the
    /// corresponding entry of `prev`. Without `prev` (polynomial seeding)
    /// roots are chosen nearest to `y_i`, i.e. tangent to the identity.
    fn sample(&self, p: usize, x: Complex64, prev: Option<&[ExtComplex]>) -> Result<Sample> {
        let mut u = vec![Infinity; p + 1];
        let mut out = Sample {
            u: Vec::new(),
            min_g: f64::INFINITY,
            max_rel: 0.0,
            min_ratio: f64::INFINITY,
        };
        let first_direct;
        let mut yc = vec![Complex64::new(0.0, 0.0); p + 1];
        let mut ys = vec![Infinity; p + 1];
        match self.kind {
            Kind::Poly => {
                yc[p] = x;
                let mut switch = (x.norm() > RATIO_MODE).then_some(p);
                if switch.is_none() {
                    for i in (0..p).rev() {
                        let c = self.poly_c(i);
                        yc[i] = yc[i + 1] * yc[i + 1] + c;
                        if yc[i].norm() > RATIO_MODE {
                            switch = Some(i);
                            break;
                        }
                    }
                }
                first_direct = match switch {
                    Some(h) => {
                        // u_i / y_i in terms of s_i = 1 / y_i, principal roots
                        let mut s = vec![Complex64::new(0.0, 0.0); h + 1];
                        s[h] = yc[h].finv();
                        for i in (1..=h).rev() {
                            let s2 = s[i] * s[i];
                            s[i - 1] = s2 / (1.0 + self.poly_c(i - 1) * s2);
                        }
                        let mut r = (1.0 - self.endpoint_sq * s[0] * s[0]).sqrt();
                        for i in 1..=h {
                            let s2 = s[i] * s[i];
                            r = ((1.0 + self.poly_c(i - 1) * s2) * r - self.poly_c(i) * s2).sqrt();
                        }
                        u[h] = ExtComplex::from(yc[h] * r);
                        if let Some(pv) = prev.and_then(|pv| pv[h].finite()) {
                            let v = u[h].finite().expect("ratio-mode level is finite");
                            out.max_rel = out.max_rel.max((v - pv).norm() / pv.norm());
                        }
                        h + 1
                    }
                    None => 0,
                };
                for i in first_direct..=p {
                    ys[i] = ExtComplex::Finite(yc[i]);
                }
            }
            Kind::Rat => {
                ys = self.descend(p, ExtComplex::Finite(x));
                first_direct = 0;
            }
        }

        for i in first_direct..=p {
            let g = if i == 0 {
                self.base_square(ys[0])
            } else {
                self.map(i).inverse_square(u[i - 1])
            };
            let g = match g {
                Infinity => {
                    if prev.is_some_and(|pv| !pv[i].is_infinite()) {
                        out.max_rel = f64::INFINITY;
                    }
                    u[i] = Infinity;
                    continue;
                }
                ExtComplex::Finite(g) => g,
            };
            out.min_g = out.min_g.min(g.norm());
            let anchor = match prev.map(|pv| pv[i]) {
                Some(ExtComplex::Finite(a)) => Some(a),
                _ => None,
            };
            let r = match anchor {
                Some(a) => {
                    let (r, ratio) = nearest_root(g, a);
                    out.min_ratio = out.min_ratio.min(ratio);
                    let rel = if a == Complex64::new(0.0, 0.0) {
                        if r == a { 0.0 } else { f64::INFINITY }
                    } else {
                        (r - a).norm() / a.norm()
                    };
                    out.max_rel = out.max_rel.max(rel);
                    r
                }
                None if self.kind == Kind::Poly => nearest_root(g, yc[i]).0,
                None => {
                    // leaving infinity: no sign information
                    out.max_rel = f64::INFINITY;
                    out.min_ratio = 1.0;
                    g.sqrt()
                }
            };
            u[i] = ExtComplex::Finite(r);
        }
        out.u = u;
        Ok(out)
    }

    fn poly_c(&self, i: usize) -> Complex64 {
        match self.map(i) {
            QuadMap::Poly(PolyParam { c }) => *c,
            QuadMap::Rat(_) => unreachable!("polynomial tower"),
        }
    }

    /// Continues all level values of plane `p` along `route`, starting
    /// from `start` (the values at the first waypoint).
    pub fn continue_along(&self, p: usize, route: &PathRoute, start: Vec<ExtComplex>) -> Result<Vec<ExtComplex>> {
        if start.len() != p + 1 {
            return Err(Error::InvalidParameter(format!(
                "plane {p} needs {} level values, got {}",
                p + 1,
                start.len()
            )));
        }
        let mut cur = start;
        let legs: Vec<_> = route.legs().collect();
        let mut samples = 0usize;
        for (k, &(a, b)) in legs.iter().enumerate() {
            let last_leg = k + 1 == legs.len();
            let (mut t, mut h) = (0.0f64, MAX_STEP);
            while t < 1.0 {
                samples += 1;
                if samples > MAX_SAMPLES {
                    return Err(Error::AmbiguousStep(1.0));
                }
                let t1 = if t + h >= 1.0 { 1.0 } else { t + h };
                let x = if t1 == 1.0 { b } else { a + (b - a) * t1 };
                // the midpoint catches steps passing symmetrically by a
                // pair of branch points, where the end values alone agree
                let mid = self.sample(p, a + (b - a) * (0.5 * (t + t1)), Some(&cur))?;
                let s = self.sample(p, x, Some(&mid.u))?;
                let at_target = last_leg && t1 == 1.0;
                if mid.min_g < ZERO_TOL || (s.min_g < ZERO_TOL && !at_target) {
                    return Err(Error::ZeroCrossing(mid.min_g.min(s.min_g)));
                }
                let landing_on_zero = at_target && s.min_g < ZERO_TOL;
                let max_rel = mid.max_rel.max(s.max_rel);
                if (max_rel <= MAX_REL_STEP) || (landing_on_zero && mid.max_rel <= MAX_REL_STEP) {
                    cur = s.u;
                    t = t1;
                    h = (h * 1.5).min(MAX_STEP);
                } else if h <= MIN_STEP {
                    let ratio = mid.min_ratio.min(s.min_ratio);
                    if ratio < AMBIGUITY_RATIO {
                        return Err(Error::AmbiguousStep(ratio));
                    }
                    cur = s.u;
                    t = t1;
                } else {
                    h *= 0.5;
                }
            }
        }
        Ok(cur)
    }

    /// Normalization point of plane `p` for polynomial towers: a far point
    /// where every branch is seeded tangent to the identity.
    fn poly_seed(&self, p: usize) -> Result<Seed> {
        let cuts = self.cuts(p)?;
        for k in 0..=10 {
            let point = Complex64::new(REFERENCE_RADIUS, 10.0 * f64::from(k));
            if cuts.is_near(ExtComplex::Finite(point), 1e-6) {
                continue;
            }
            let s = self.sample(p, point, None)?;
            return Ok(Seed { point, levels: s.u });
        }
        Err(Error::Unroutable)
    }

    /// Normalization of plane `p` for rational towers: `j_p(1) = 1`, seeded
    /// at a point next to 1 whose lower levels come from plane `p - 1`.
    fn rat_seed(&self, p: usize) -> Result<Seed> {
        let cuts = self.cuts(p)?;
        let one = Complex64::new(1.0, 0.0);
        if cuts.is_near(ExtComplex::ONE, CUT_CLEARANCE) {
            return Err(Error::OnCutCurve { stage: p });
        }
        if p == 0 {
            return Ok(Seed {
                point: one,
                levels: vec![ExtComplex::ONE],
            });
        }
        let mut last_err = Error::Unroutable;
        for eps in SEED_RADII {
            for k in 0..8 {
                let dir = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * f64::from(k));
                let point = one + dir * eps;
                if cuts.is_near(ExtComplex::Finite(point), CUT_CLEARANCE) || cuts.is_crossed_by(one, point) {
                    continue;
                }
                let below = self.map(p - 1).eval(ExtComplex::Finite(point));
                let mut levels = match self.levels_at(p - 1, below) {
                    Ok(l) => l,
                    Err(e) => {
                        last_err = e;
                        continue;
                    }
                };
                let g = match self.map(p).inverse_square(levels[p - 1]) {
                    ExtComplex::Finite(g) => g,
                    Infinity => continue,
                };
                let (r, ratio) = nearest_root(g, one);
                if ratio < 2.0 {
                    continue;
                }
                levels.push(ExtComplex::Finite(r));
                return Ok(Seed { point, levels });
            }
        }
        Err(last_err)
    }

    fn seed(&self, p: usize) -> Result<Seed> {
        let stage = self.stage(p)?;
        stage
            .seed
            .get_or_init(|| match self.kind {
                Kind::Poly => self.poly_seed(p),
                Kind::Rat => self.rat_seed(p),
            })
            .clone()
    }

    /// Every level value `u_0..u_p` at `w` in plane `p`.
    pub fn levels_at(&self, p: usize, w: ExtComplex) -> Result<Vec<ExtComplex>> {
        self.stage(p)?;
        let z = match w {
            Infinity if self.kind == Kind::Poly => return Ok(vec![Infinity; p + 1]),
            Infinity => {
                if p == 0 {
                    return Ok(vec![Infinity]);
                }
                let mut l = self.levels_at(p - 1, self.map(p - 1).eval(Infinity))?;
                l.push(Infinity);
                return Ok(l);
            }
            ExtComplex::Finite(z) => z,
        };
        if p >= 1 && z == Complex64::new(0.0, 0.0) {
            // j_p(0) = 0 for every p >= 1
            let mut l = self.levels_at(p - 1, self.map(p - 1).eval(w))?;
            l.push(ExtComplex::ZERO);
            return Ok(l);
        }
        if self.kind == Kind::Rat && p >= 1 && (z.re.abs() == 1.0 && z.im == 0.0) {
            // poles of R_{p-1}; j_p is odd with j_p(1) = 1
            let mut l = self.levels_at(p - 1, Infinity)?;
            l.push(ExtComplex::real(z.re));
            return Ok(l);
        }
        let cuts = self.cuts(p)?;
        if cuts.is_near(w, CUT_CLEARANCE) {
            return Err(Error::OnCutCurve { stage: p });
        }
        if self.kind == Kind::Poly && z.norm() >= REFERENCE_RADIUS && cuts_radius(cuts) < 0.1 * z.norm() {
            // the far region is where the seed rule itself applies
            return Ok(self.sample(p, z, None)?.u);
        }
        let seed = self.seed(p)?;
        let route = plan_route(ExtComplex::Finite(seed.point), w, cuts, p)?;
        self.continue_along(p, &route, seed.levels)
    }

    /// Level values at the normalization point of plane `p` together with
    /// that point.
    pub fn seed_levels(&self, p: usize) -> Result<(Complex64, Vec<ExtComplex>)> {
        self.seed(p).map(|s| (s.point, s.levels))
    }

    /// `j_n(w)`.
    pub fn eval_j(&self, n: usize, w: ExtComplex) -> Result<ExtComplex> {
        Ok(self.levels_at(n, w)?[n])
    }

    /// `f_n(z) = j_{n-1}(R_{n-1}(z))`; `f_0` is the base map.
    pub fn eval_f(&self, n: usize, z: ExtComplex) -> Result<ExtComplex> {
        if n == 0 {
            return Ok(self.base.eval(z));
        }
        self.stage(n - 1)?;
        let w = self.map(n - 1).eval(z);
        self.eval_j(n - 1, w).map_err(|e| match e {
            Error::OnCutCurve { .. } => Error::OnCutCurve { stage: n },
            e => e,
        })
    }

    /// `Φ_0(z), ..., Φ_n(z)` with `Φ_k = j_k ∘ Φ_{k-1}` and `Φ_0 = j`.
    pub fn phi_sequence(&self, n: usize, z: ExtComplex) -> Result<Vec<ExtComplex>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut v = z;
        for k in 0..=n {
            v = self.eval_j(k, v).map_err(|e| e.at_stage(k))?;
            out.push(v);
        }
        Ok(out)
    }

    pub fn eval_phi(&self, n: usize, z: ExtComplex) -> Result<ExtComplex> {
        Ok(*self.phi_sequence(n, z)?.last().expect("n + 1 values"))
    }

    /// For each `n < n_max`, the sup over probes of the chordal distance
    /// between `Φ_{n+1}` and `Φ_n`.
    pub fn estimate_phi_convergence(&self, probes: &[ExtComplex], n_max: usize, exec: Exec) -> Result<Vec<f64>> {
        if n_max == 0 {
            return Ok(Vec::new());
        }
        let seqs = exec.map(probes, |&z| self.phi_sequence(n_max, z));
        let mut sup = vec![0.0f64; n_max];
        for seq in seqs {
            let seq = seq?;
            for (n, s) in sup.iter_mut().enumerate() {
                *s = s.max(chordal_distance(seq[n + 1], seq[n]));
            }
        }
        Ok(sup)
    }
}

/// Largest modulus of a cut sample.
fn cuts_radius(cuts: &CurveFamily) -> f64 {
    cuts.iter()
        .flat_map(|c| c.points().iter())
        .map(|p| p.norm())
        .fold(0.0, f64::max)
}

pub fn eval_tower_j(t: &Tower, n: usize, w: ExtComplex) -> Result<ExtComplex> {
    t.eval_j(n, w)
}

pub fn eval_tower_f(t: &Tower, n: usize, z: ExtComplex) -> Result<ExtComplex> {
    t.eval_f(n, z)
}

pub fn eval_phi(t: &Tower, n: usize, z: ExtComplex) -> Result<ExtComplex> {
    t.eval_phi(n, z)
}

pub fn estimate_phi_convergence(t: &Tower, probes: &[ExtComplex], n_max: usize) -> Result<Vec<f64>> {
    t.estimate_phi_convergence(probes, n_max, Exec::default())
}
