//! The regluing iteration: straighten the reglued map to a member of its
//! quadratic family, pull the cut set back, advance the critical orbits
//! and repeat.

use num_complex::Complex64;

use crate::branch::{Tower, TowerStage};
use crate::curve::{CurveFamily, SampledCurve};
use crate::error::{Error, Result};
use crate::family::{pullback_curve, PolyParam, QuadMap, RatParam};
use crate::par::Exec;
use crate::rays::{first_violation, ADMISSIBILITY_TOL};
use crate::report::{Param, RegluingReport, StageRecord, Status};
use crate::sphere::{chordal_distance, nearest_root, ExtComplex, Infinity};

/// Parameters beyond this modulus count as divergence.
pub const DIVERGENCE_RADIUS: f64 = 1e8;
/// Tolerance of the periodicity test on orbit tails.
pub const PERIOD_TOL: f64 = 1e-9;
/// Longest orbit period recognized for extension.
pub const MAX_PERIOD: usize = 8;
/// Separation required between pulled-back cut curves.
pub const CUT_SEPARATION: f64 = 1e-9;
/// Orbit values this close to a critical value of the stage map are
/// degenerate unless they sit exactly on the fixed points 0 or infinity.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Last stage at which orbit signs always come from full continuation.
pub const FULL_CONTINUATION_STAGES: usize = 2;
/// Minimum ratio of candidate distances for the nearest-root shortcut.
pub const HEURISTIC_RATIO: f64 = 2.0;
/// Probes at least this far apart whose `Φ_n` images come within
/// [`COLLISION_TOL`] count as a collision.
pub const PROBE_SEPARATION: f64 = 1e-6;
pub const COLLISION_TOL: f64 = 1e-9;

/// Which recurrence drives the polynomial orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `f_{n+1} = j_n ∘ p_{c_n}`.
    #[default]
    Standard,
    /// `f_{n+1} = j_n^{-1} ∘ p_{c_n}` with `j_n^{-1}` read as the inverse of
    /// the square root, `u ↦ u^2 + c_n`. Kept only to exercise the oracle
    /// comparison.
    Misprint,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::Misprint => "misprint",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Absolute tolerance on parameter increments.
    pub tol: f64,
    pub max_stages: usize,
    /// Number of orbit entries tracked per critical point.
    pub orbit_len: usize,
    /// Admissibility horizon.
    pub horizon: usize,
    /// Cut sets are pulled back up to this stage; later stages rely on the
    /// nearest-root shortcut alone.
    pub cut_stages: usize,
    /// Probe points for the `Φ_n` Cauchy estimate; empty to skip it.
    pub probes: Vec<ExtComplex>,
    pub convention: Convention,
    pub exec: Exec,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            tol: 1e-12,
            max_stages: 30,
            orbit_len: 20,
            horizon: 100,
            cut_stages: 12,
            probes: Vec::new(),
            convention: Convention::Standard,
            exec: Exec::default(),
        }
    }
}

/// Stage `n` of a polynomial run: `c_n` and the orbit `f_n^m(0)`,
/// `m = 1..`, with the tower holding stages `0..=n`.
#[derive(Debug, Clone)]
pub struct PolyState {
    pub n: usize,
    pub c: Complex64,
    pub orbit: Vec<ExtComplex>,
    /// `c_0, ..., c_n`.
    pub history: Vec<Complex64>,
    pub tower: Tower,
    pub stats: StepStats,
}

/// Stage `n` of a rational run: `R_n = R_{a_n, b_n}` and the orbits of
/// `0` and infinity under `f_n`.
#[derive(Debug, Clone)]
pub struct RatState {
    pub n: usize,
    pub a: ExtComplex,
    pub b: ExtComplex,
    pub orbit0: Vec<ExtComplex>,
    pub orbit_inf: Vec<ExtComplex>,
    /// `(a_0, b_0), ..., (a_n, b_n)`.
    pub history: Vec<(ExtComplex, ExtComplex)>,
    pub tower: Tower,
    pub stats: StepStats,
}

/// Diagnostics of the step that produced a state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    /// Largest chordal move of an orbit entry.
    pub orbit_drift: f64,
    /// Entries whose sign needed full continuation.
    pub continued: usize,
    /// Whether the orbit was extended by periodicity.
    pub extended: bool,
}

impl PolyState {
    pub fn cut_set(&self) -> Option<&CurveFamily> {
        self.tower.stages()[self.n].cuts.as_ref()
    }
}

impl RatState {
    pub fn cut_set(&self) -> Option<&CurveFamily> {
        self.tower.stages()[self.n].cuts.as_ref()
    }
}

/// `-2^(1 - 2^-n) 3^(2^-n)`, the stage-`n` parameter of the reglued
/// `z^2 - 6`.
pub fn closed_form_example(n: u32) -> ExtComplex {
    let e = 0.5f64.powi(n as i32);
    ExtComplex::real(-(2f64.powf(1.0 - e)) * 3f64.powf(e))
}

/// The worked example: `z^2 - 6` reglued along `[-√3, √3]`.
pub fn example_input() -> (PolyParam, SampledCurve) {
    (
        PolyParam::from_complex(Complex64::new(-6.0, 0.0)),
        SampledCurve::symmetric_segment(Complex64::new(3f64.sqrt(), 0.0), 16),
    )
}

fn check_orbit(map: &QuadMap, start: ExtComplex, alpha0: &SampledCurve, horizon: usize) -> Result<()> {
    match first_violation(map, start, alpha0, horizon, ADMISSIBILITY_TOL) {
        Some((n, distance)) => Err(Error::Inadmissible { n, distance }),
        None => Ok(()),
    }
}

/// `f^m(start)` for `m = 1..=len`. Once the orbit returns within
/// [`PERIOD_TOL`] of an earlier point it is continued as an exact cycle;
/// iterating a repelling cycle in floating point would drift off it.
pub fn forward_orbit(map: &QuadMap, start: ExtComplex, len: usize) -> Vec<ExtComplex> {
    let mut points: Vec<ExtComplex> = Vec::with_capacity(len);
    let mut z = start;
    let mut period = None;
    while points.len() < len {
        let k = points.len();
        z = match period {
            Some(p) => points[k - p],
            None => map.eval(z),
        };
        if period.is_none() {
            period = (1..=MAX_PERIOD.min(k)).find(|&p| chordal_distance(z, points[k - p]) < PERIOD_TOL);
            if let Some(p) = period {
                z = points[k - p];
            }
        }
        points.push(z);
    }
    points
}

/// `j(f^m(start))` for `m = 1..=len`.
fn base_orbit(tower: &Tower, start: ExtComplex, len: usize, exec: Exec) -> Result<Vec<ExtComplex>> {
    let points = forward_orbit(tower.base(), start, len);
    exec.map(&points, |&z| tower.eval_j(0, z)).into_iter().collect()
}

fn pull_back_cuts(map: &QuadMap, cuts: &CurveFamily, stage: usize, exec: Exec) -> Result<CurveFamily> {
    let pairs = exec.map(cuts.iter().as_slice(), |c| pullback_curve(map, c));
    let mut curves = Vec::with_capacity(2 * cuts.len());
    for p in pairs {
        let (a, b) = p.map_err(|e| e.at_stage(stage))?;
        curves.push(a);
        curves.push(b);
    }
    let family = CurveFamily::new(curves);
    if !family.pairwise_disjoint(CUT_SEPARATION) {
        return Err(Error::CutCollision { stage });
    }
    Ok(family)
}

/// Cut set of stage `n + 1`, if it is to be materialized.
fn next_cuts(tower: &Tower, n: usize, cfg: &EngineConfig) -> Result<Option<CurveFamily>> {
    let stage = &tower.stages()[n];
    match &stage.cuts {
        Some(cuts) if n < cfg.cut_stages => pull_back_cuts(&stage.map, cuts, n + 1, cfg.exec).map(Some),
        _ => Ok(None),
    }
}

/// `j_n` along an orbit of `f_n`: entry `m` becomes the root of
/// `R_n^*(orbit[m + 1])` whose sign agrees with `j_n(orbit[m])`.
fn advance_orbit(tower: &Tower, n: usize, orbit: &[ExtComplex], exec: Exec) -> Result<(Vec<ExtComplex>, usize)> {
    let map = tower.stages()[n].map;
    let crit = map.critical_values();
    let out = exec.map_range(orbit.len().saturating_sub(1), |m| -> Result<(ExtComplex, bool)> {
        let (v, next) = (orbit[m], orbit[m + 1]);
        match v {
            Infinity => return Ok((Infinity, false)),
            ExtComplex::Finite(z) if z == Complex64::new(0.0, 0.0) => return Ok((ExtComplex::ZERO, false)),
            _ => {}
        }
        if let Some(cv) = crit.iter().find(|&&cv| chordal_distance(cv, next) < DEGENERACY_TOL) {
            return Err(Error::Degeneracy(format!(
                "orbit entry {} maps to the critical value {cv} of stage {n}",
                m + 1
            )));
        }
        let g = map.inverse_square(next).finite().ok_or_else(|| {
            Error::Degeneracy(format!("orbit entry {} maps to a pole of stage {n}", m + 1))
        })?;
        let root = |target: Complex64| nearest_root(g, target);
        if n > FULL_CONTINUATION_STAGES {
            if let ExtComplex::Finite(z) = v {
                let (r, ratio) = root(z);
                if ratio >= HEURISTIC_RATIO {
                    return Ok((ExtComplex::Finite(r), false));
                }
            }
        }
        let w = tower.eval_j(n, v)?;
        let r = match w.finite() {
            Some(w) => root(w).0,
            None => g.sqrt(),
        };
        Ok((ExtComplex::Finite(r), true))
    });
    let mut values = Vec::with_capacity(out.len());
    let mut continued = 0;
    for r in out {
        let (v, c) = r.map_err(|e| e.at_stage(n))?;
        values.push(v);
        continued += c as usize;
    }
    Ok((values, continued))
}

/// Smallest period `p <= MAX_PERIOD` of the tail of `orbit`, checked over
/// its last `2p` entries.
fn tail_period(orbit: &[ExtComplex]) -> Option<usize> {
    (1..=MAX_PERIOD).find(|&p| {
        let len = orbit.len();
        len >= 3 * p && (len - 2 * p..len).all(|i| chordal_distance(orbit[i], orbit[i - p]) < PERIOD_TOL)
    })
}

fn extend_periodic(orbit: &mut Vec<ExtComplex>, target: usize) -> bool {
    if orbit.len() >= target {
        return false;
    }
    match tail_period(orbit) {
        Some(p) => {
            while orbit.len() < target {
                orbit.push(orbit[orbit.len() - p]);
            }
            true
        }
        None => false,
    }
}

fn max_drift(old: &[ExtComplex], new: &[ExtComplex]) -> f64 {
    old.iter()
        .zip(new)
        .map(|(&a, &b)| chordal_distance(a, b))
        .fold(0.0, f64::max)
}

pub fn init_poly(c: PolyParam, alpha0: SampledCurve, cfg: &EngineConfig) -> Result<PolyState> {
    let base = QuadMap::Poly(c);
    let mut tower = Tower::new(base, alpha0.clone())?;
    check_orbit(&base, alpha0.endpoint(), &alpha0, cfg.horizon)?;
    let c0 = c.c + tower.endpoint_sq();
    let orbit = base_orbit(&tower, alpha0.endpoint(), cfg.orbit_len, cfg.exec)?;
    let c1 = orbit
        .first()
        .ok_or(Error::OrbitExhausted)?
        .finite()
        .ok_or_else(|| Error::Degeneracy("critical value of stage 1 is infinite".into()))?;
    let cuts = next_cuts(&tower, 0, cfg)?;
    tower.push_stage(TowerStage::new(QuadMap::poly(c1), cuts));
    Ok(PolyState {
        n: 1,
        c: c1,
        orbit,
        history: vec![c0, c1],
        tower,
        stats: StepStats::default(),
    })
}

pub fn step_poly(s: &PolyState, cfg: &EngineConfig) -> Result<PolyState> {
    if s.orbit.len() < 2 {
        return Err(Error::OrbitExhausted.at_stage(s.n));
    }
    let (mut orbit, continued) = match cfg.convention {
        Convention::Standard => advance_orbit(&s.tower, s.n, &s.orbit, cfg.exec)?,
        Convention::Misprint => {
            let next = s.orbit[1..]
                .iter()
                .map(|&v| match v {
                    Infinity => Infinity,
                    ExtComplex::Finite(u) => ExtComplex::from(u * u + s.c),
                })
                .collect();
            (next, 0)
        }
    };
    let extended = extend_periodic(&mut orbit, cfg.orbit_len);
    let c = orbit[0].finite().ok_or_else(|| {
        Error::Degeneracy(format!("critical value of stage {} is infinite", s.n + 1))
    })?;
    let cuts = next_cuts(&s.tower, s.n, cfg)?;
    let mut tower = s.tower.clone();
    tower.push_stage(TowerStage::new(QuadMap::poly(c), cuts));
    let mut history = s.history.clone();
    history.push(c);
    Ok(PolyState {
        n: s.n + 1,
        c,
        stats: StepStats {
            orbit_drift: max_drift(&s.orbit, &orbit),
            continued,
            extended,
        },
        orbit,
        history,
        tower,
    })
}

pub fn init_rat(r: RatParam, alpha0: SampledCurve, cfg: &EngineConfig) -> Result<RatState> {
    if cfg.convention != Convention::Standard {
        return Err(Error::InvalidParameter("rational runs support only the standard recurrence".into()));
    }
    let base = QuadMap::Rat(r);
    let mut tower = Tower::new(base, alpha0.clone())?;
    // the orbit of 1 passes through infinity
    check_orbit(&base, alpha0.endpoint(), &alpha0, cfg.horizon)?;
    check_orbit(&base, ExtComplex::ONE, &alpha0, cfg.horizon)?;
    let orbit0 = base_orbit(&tower, alpha0.endpoint(), cfg.orbit_len, cfg.exec)?;
    let orbit_inf = base_orbit(&tower, Infinity, cfg.orbit_len, cfg.exec)?;
    let (a1, b1) = match (orbit_inf.first(), orbit0.first()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::OrbitExhausted),
    };
    let stage1 = RatParam::new(a1, b1).map_err(|_| Error::Degeneracy("a_1 = b_1".into()))?;
    let (a0, b0) = match tower.stages()[0].map {
        QuadMap::Rat(m) => (m.a, m.b),
        QuadMap::Poly(_) => unreachable!("rational tower"),
    };
    let cuts = next_cuts(&tower, 0, cfg)?;
    tower.push_stage(TowerStage::new(QuadMap::Rat(stage1), cuts));
    Ok(RatState {
        n: 1,
        a: a1,
        b: b1,
        orbit0,
        orbit_inf,
        history: vec![(a0, b0), (a1, b1)],
        tower,
        stats: StepStats::default(),
    })
}

pub fn step_rat(s: &RatState, cfg: &EngineConfig) -> Result<RatState> {
    if s.orbit0.len() < 2 || s.orbit_inf.len() < 2 {
        return Err(Error::OrbitExhausted.at_stage(s.n));
    }
    let (mut orbit0, c0) = advance_orbit(&s.tower, s.n, &s.orbit0, cfg.exec)?;
    let (mut orbit_inf, c1) = advance_orbit(&s.tower, s.n, &s.orbit_inf, cfg.exec)?;
    let e0 = extend_periodic(&mut orbit0, cfg.orbit_len);
    let e1 = extend_periodic(&mut orbit_inf, cfg.orbit_len);
    let (a, b) = (orbit_inf[0], orbit0[0]);
    let param = RatParam::new(a, b)
        .map_err(|_| Error::Degeneracy(format!("a_{0} = b_{0}", s.n + 1)).at_stage(s.n + 1))?;
    let cuts = next_cuts(&s.tower, s.n, cfg)?;
    let mut tower = s.tower.clone();
    tower.push_stage(TowerStage::new(QuadMap::Rat(param), cuts));
    let mut history = s.history.clone();
    history.push((a, b));
    Ok(RatState {
        n: s.n + 1,
        a,
        b,
        stats: StepStats {
            orbit_drift: max_drift(&s.orbit0, &orbit0).max(max_drift(&s.orbit_inf, &orbit_inf)),
            continued: c0 + c1,
            extended: e0 || e1,
        },
        orbit0,
        orbit_inf,
        history,
        tower,
    })
}

/// Increment of the parameter between consecutive stages.
fn increments<T>(history: &[T], dist: impl Fn(&T, &T) -> f64) -> Vec<f64> {
    history.windows(2).map(|w| dist(&w[0], &w[1])).collect()
}

fn settled(deltas: &[f64], tol: f64) -> bool {
    deltas.len() >= 3 && deltas[deltas.len() - 3..].iter().all(|&d| d < tol)
}

fn escaped(z: ExtComplex) -> bool {
    match z {
        Infinity => true,
        ExtComplex::Finite(z) => !z.is_finite() || z.norm() > DIVERGENCE_RADIUS,
    }
}

fn diff(a: ExtComplex, b: ExtComplex) -> f64 {
    match (a.finite(), b.finite()) {
        (Some(a), Some(b)) => (a - b).norm(),
        _ if a == b => 0.0,
        _ => f64::INFINITY,
    }
}

/// A run in progress, abstracting over the two families.
trait RunState: Sized {
    fn stage(&self) -> usize;
    fn deltas(&self) -> Vec<f64>;
    fn escaped(&self) -> bool;
    fn params(&self) -> Vec<Param>;
    fn tower(&self) -> &Tower;
    fn stats(&self) -> StepStats;
    fn orbit_len(&self) -> usize;
    fn step(&self, cfg: &EngineConfig) -> Result<Self>;
}

impl RunState for PolyState {
    fn stage(&self) -> usize {
        self.n
    }
    fn deltas(&self) -> Vec<f64> {
        increments(&self.history, |a, b| (a - b).norm())
    }
    fn escaped(&self) -> bool {
        escaped(ExtComplex::new(self.c).unwrap_or(Infinity))
    }
    fn params(&self) -> Vec<Param> {
        self.history.iter().map(|&c| Param::Poly(ExtComplex::Finite(c))).collect()
    }
    fn tower(&self) -> &Tower {
        &self.tower
    }
    fn stats(&self) -> StepStats {
        self.stats
    }
    fn orbit_len(&self) -> usize {
        self.orbit.len()
    }
    fn step(&self, cfg: &EngineConfig) -> Result<Self> {
        step_poly(self, cfg)
    }
}

impl RunState for RatState {
    fn stage(&self) -> usize {
        self.n
    }
    fn deltas(&self) -> Vec<f64> {
        increments(&self.history, |p, q| diff(p.0, q.0).max(diff(p.1, q.1)))
    }
    fn escaped(&self) -> bool {
        escaped(self.a) || escaped(self.b)
    }
    fn params(&self) -> Vec<Param> {
        self.history.iter().map(|&(a, b)| Param::Rat(a, b)).collect()
    }
    fn tower(&self) -> &Tower {
        &self.tower
    }
    fn stats(&self) -> StepStats {
        self.stats
    }
    fn orbit_len(&self) -> usize {
        self.orbit0.len().min(self.orbit_inf.len())
    }
    fn step(&self, cfg: &EngineConfig) -> Result<Self> {
        step_rat(self, cfg)
    }
}

fn stage_record<S: RunState>(s: &S, params: &[Param], deltas: &[f64]) -> StageRecord {
    let n = s.stage();
    let cuts = s.tower().stages()[n].cuts.as_ref();
    let stats = s.stats();
    StageRecord {
        n,
        param: params[n],
        delta: n.checked_sub(1).map(|k| deltas[k]),
        orbit_drift: (n >= 2).then_some(stats.orbit_drift),
        orbit_len: s.orbit_len(),
        continued: stats.continued,
        extended: stats.extended,
        cut_count: cuts.map(|c| c.len()),
        max_cut_diameter: cuts.map(|c| c.max_diameter()),
    }
}

fn initial_record(tower: &Tower, param: Param) -> StageRecord {
    let cuts = tower.stages()[0].cuts.as_ref();
    StageRecord {
        n: 0,
        param,
        delta: None,
        orbit_drift: None,
        orbit_len: 0,
        continued: 0,
        extended: false,
        cut_count: cuts.map(|c| c.len()),
        max_cut_diameter: cuts.map(|c| c.max_diameter()),
    }
}

fn drive<S: RunState>(init: S, cfg: &EngineConfig) -> RegluingReport {
    let mut state = init;
    let params = state.params();
    let deltas = state.deltas();
    let mut stages = vec![
        initial_record(state.tower(), params[0]),
        stage_record(&state, &params, &deltas),
    ];
    let mut failure = None;
    let status = loop {
        let deltas = state.deltas();
        if state.escaped() {
            break Status::Diverged;
        }
        if settled(&deltas, cfg.tol) {
            break Status::Converged;
        }
        if state.stage() >= cfg.max_stages {
            break Status::BudgetExhausted;
        }
        match state.step(cfg) {
            Ok(next) => {
                state = next;
                let (params, deltas) = (state.params(), state.deltas());
                stages.push(stage_record(&state, &params, &deltas));
            }
            Err(e) => {
                let stage = match &e {
                    Error::AtStage { stage, .. } => *stage,
                    _ => state.stage() + 1,
                };
                failure = Some((stage, e.root().to_string()));
                break Status::Ambiguous;
            }
        }
    };
    let params = state.params();
    let limit = (status == Status::Converged).then(|| *params.last().expect("stage 1 exists"));
    let mut report = RegluingReport {
        status,
        convention: cfg.convention,
        limit,
        stages,
        failure,
        phi_convergence: Vec::new(),
        phi_collisions: None,
        phi_error: None,
    };
    if !cfg.probes.is_empty() {
        let t = state.tower();
        let depth = (0..=t.depth())
            .take_while(|&k| t.stages()[k].cuts.is_some())
            .last()
            .unwrap_or(0);
        let images = cfg.exec.map(&cfg.probes, |&z| t.eval_phi(depth, z));
        match t.estimate_phi_convergence(&cfg.probes, depth, cfg.exec) {
            Ok(v) => {
                report.phi_convergence = v;
                let images: Vec<Option<ExtComplex>> = images.into_iter().map(|w| w.ok()).collect();
                report.phi_collisions = Some(count_collisions(&cfg.probes, &images));
            }
            Err(e) => report.phi_error = Some(e.to_string()),
        }
    }
    report
}

/// Pairs of distinct probes whose images under `Φ_n` coincide. Nonzero
/// counts hint that the limit is not injective.
fn count_collisions(probes: &[ExtComplex], images: &[Option<ExtComplex>]) -> usize {
    let mut count = 0;
    for (i, (&p, &w)) in probes.iter().zip(images).enumerate() {
        for (&q, &v) in probes.iter().zip(images).skip(i + 1) {
            if let (Some(w), Some(v)) = (w, v) {
                if chordal_distance(p, q) > PROBE_SEPARATION && chordal_distance(w, v) < COLLISION_TOL {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Runs the polynomial iteration. Errors are limited to invalid input;
/// failures during the iteration end the run with status ambiguous.
pub fn run_poly(c: PolyParam, alpha0: SampledCurve, cfg: &EngineConfig) -> Result<RegluingReport> {
    let s = init_poly(c, alpha0, cfg)?;
    Ok(drive(s, cfg))
}

pub fn run_rat(r: RatParam, alpha0: SampledCurve, cfg: &EngineConfig) -> Result<RegluingReport> {
    let s = init_rat(r, alpha0, cfg)?;
    Ok(drive(s, cfg))
}

/// States `1..=n` of the polynomial iteration, for callers that need the
/// towers themselves.
pub fn poly_states(c: PolyParam, alpha0: SampledCurve, n: usize, cfg: &EngineConfig) -> Result<Vec<PolyState>> {
    let mut out = vec![init_poly(c, alpha0, cfg)?];
    while out.len() < n {
        let next = step_poly(out.last().expect("non-empty"), cfg)?;
        out.push(next);
    }
    Ok(out)
}

pub fn rat_states(r: RatParam, alpha0: SampledCurve, n: usize, cfg: &EngineConfig) -> Result<Vec<RatState>> {
    let mut out = vec![init_rat(r, alpha0, cfg)?];
    while out.len() < n {
        let next = step_rat(out.last().expect("non-empty"), cfg)?;
        out.push(next);
    }
    Ok(out)
}
