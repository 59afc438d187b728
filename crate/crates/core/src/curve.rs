//! Sampled curves on the sphere and families of them.
//!
//! Curves are polylines; their samples are treated as ground truth.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sphere::{chordal_distance, ExtComplex, Infinity};

/// Coincidence tolerance for samples and symmetry checks.
pub const POINT_TOL: f64 = 1e-12;

/// Axis-aligned bounding box `[xmin, xmax, ymin, ymax]` of the finite samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox(pub [f64; 4]);

impl BBox {
    fn empty() -> Self {
        BBox([f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY])
    }

    fn grow(&mut self, z: Complex64) {
        let b = &mut self.0;
        b[0] = b[0].min(z.re);
        b[1] = b[1].max(z.re);
        b[2] = b[2].min(z.im);
        b[3] = b[3].max(z.im);
    }

    pub fn of_segment(a: Complex64, b: Complex64) -> Self {
        let mut bb = BBox::empty();
        bb.grow(a);
        bb.grow(b);
        bb
    }

    pub fn overlaps(&self, other: &BBox, pad: f64) -> bool {
        let (a, b) = (&self.0, &other.0);
        a[0] - pad <= b[1] && b[0] - pad <= a[1] && a[2] - pad <= b[3] && b[2] - pad <= a[3]
    }

    pub fn contains(&self, z: Complex64, pad: f64) -> bool {
        let a = &self.0;
        z.re >= a[0] - pad && z.re <= a[1] + pad && z.im >= a[2] - pad && z.im <= a[3] + pad
    }

    pub fn union(&self, other: &BBox) -> BBox {
        let (a, b) = (&self.0, &other.0);
        BBox([a[0].min(b[0]), a[1].max(b[1]), a[2].min(b[2]), a[3].max(b[3])])
    }

    /// Euclidean length of the diagonal.
    pub fn diagonal(&self) -> f64 {
        let a = &self.0;
        (a[1] - a[0]).hypot(a[3] - a[2])
    }
}

/// An ordered polyline approximation of a simple curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    points: Vec<ExtComplex>,
    closed: bool,
    symmetric: bool,
    bbox: BBox,
}

impl SampledCurve {
    /// Validates and builds a curve. Open curves must be finite; a
    /// symmetric curve must equal its reversed negation within
    /// [`POINT_TOL`].
    pub fn new(points: Vec<ExtComplex>, closed: bool, symmetric: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidCurve(format!(
                "a curve needs at least 2 samples, got {}",
                points.len()
            )));
        }
        for (i, w) in points.windows(2).enumerate() {
            if chordal_distance(w[0], w[1]) == 0.0 {
                return Err(Error::InvalidCurve(format!("samples {} and {} coincide", i, i + 1)));
            }
        }
        if !closed && points.iter().any(|p| p.is_infinite()) {
            return Err(Error::InvalidCurve("open curves must be finite".into()));
        }
        if symmetric {
            let asym = symmetry_defect(&points);
            if asym > POINT_TOL {
                return Err(Error::InvalidCurve(format!(
                    "curve flagged symmetric but reversed negation differs by {asym:e}"
                )));
            }
        }
        Ok(Self::build(points, closed, symmetric))
    }

    fn build(points: Vec<ExtComplex>, closed: bool, symmetric: bool) -> Self {
        let mut bbox = BBox::empty();
        for z in points.iter().filter_map(|p| p.finite()) {
            bbox.grow(z);
        }
        SampledCurve {
            points,
            closed,
            symmetric,
            bbox,
        }
    }

    /// A degenerate curve consisting of one point. Used for the trivial
    /// regluing path collapsed to the origin and for its pullbacks.
    pub fn point(z: Complex64) -> Self {
        Self::build(vec![ExtComplex::from(z)], false, z == Complex64::new(0.0, 0.0))
    }

    /// `2k + 1` samples `t * endpoint` for `t = -1, -(k-1)/k, ..., 1`.
    /// The result is symmetric exactly. A zero endpoint gives the
    /// degenerate point curve at the origin.
    pub fn symmetric_segment(endpoint: Complex64, k: usize) -> Self {
        if endpoint == Complex64::new(0.0, 0.0) {
            return Self::point(endpoint);
        }
        let k = k.max(1) as i64;
        let points = (-k..=k)
            .map(|i| {
                if i == 0 {
                    ExtComplex::ZERO
                } else {
                    ExtComplex::from(endpoint * (i as f64 / k as f64))
                }
            })
            .collect();
        Self::build(points, false, true)
    }

    /// `k + 1` equally spaced samples from `a` to `b`.
    pub fn segment(a: Complex64, b: Complex64, k: usize) -> Result<Self> {
        let k = k.max(1);
        let points = (0..=k)
            .map(|i| ExtComplex::from(a + (b - a) * (i as f64 / k as f64)))
            .collect();
        let symmetric = (a + b).norm() <= POINT_TOL;
        Self::new(points, false, symmetric)
    }

    pub fn points(&self) -> &[ExtComplex] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.points.len() == 1
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    /// The last sample; for a regluing path this is `alpha0(1)`.
    pub fn endpoint(&self) -> ExtComplex {
        *self.points.last().expect("curves are nonempty")
    }

    /// The negated curve `-c` (order preserved).
    pub fn negated(&self) -> Self {
        Self::build(
            self.points.iter().map(|p| p.neg()).collect(),
            self.closed,
            self.symmetric,
        )
    }

    /// Finite polyline edges, including the closing edge of closed curves.
    pub fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n.saturating_sub(1) };
        (0..count).filter_map(move |i| {
            let a = self.points[i].finite()?;
            let b = self.points[(i + 1) % n].finite()?;
            Some((a, b))
        })
    }

    /// Maximum chordal distance over all sample pairs.
    pub fn diameter(&self) -> f64 {
        let p = &self.points;
        let mut best = 0.0f64;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                best = best.max(chordal_distance(p[i], p[j]));
            }
        }
        best
    }

    /// Nearest point of the polyline to `z` in the Euclidean sense.
    fn nearest_point(&self, z: Complex64) -> Option<Complex64> {
        if self.points.len() == 1 {
            return self.points[0].finite();
        }
        let mut best: Option<(f64, Complex64)> = None;
        for (a, b) in self.edges() {
            let q = project_to_segment(z, a, b);
            let d = (q - z).norm();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, q));
            }
        }
        best.map(|(_, q)| q)
    }

    /// Chordal distance from `z` to the polyline (to its nearest point in
    /// the plane).
    pub fn chordal_distance_to(&self, z: ExtComplex) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.points {
            best = best.min(chordal_distance(*p, z));
        }
        if let ExtComplex::Finite(w) = z {
            if let Some(q) = self.nearest_point(w) {
                best = best.min(chordal_distance(ExtComplex::from(q), z));
            }
        }
        best
    }

    /// Whether the closed segment `[a, b]` meets the polyline (inclusive,
    /// within [`POINT_TOL`]).
    pub fn crosses_segment(&self, a: Complex64, b: Complex64) -> bool {
        if !BBox::of_segment(a, b).overlaps(&self.bbox, POINT_TOL) {
            return false;
        }
        if self.points.len() == 1 {
            return match self.points[0].finite() {
                Some(p) => point_segment_distance(p, a, b) <= POINT_TOL,
                None => false,
            };
        }
        self.edges()
            .any(|(c, d)| segment_distance(a, b, c, d) <= POINT_TOL)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "curve closed={} symmetric={} n={}\n",
            self.closed as u8,
            self.symmetric as u8,
            self.points.len()
        );
        for p in &self.points {
            s.push_str(&format_point(*p));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty curve file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("curve") {
            return Err(Error::Parse(format!("bad curve header: {header}")));
        }
        let (mut closed, mut symmetric, mut n) = (None, None, None);
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {f}")))?;
            match k {
                "closed" => closed = Some(parse_flag(v)?),
                "symmetric" => symmetric = Some(parse_flag(v)?),
                "n" => n = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
                _ => return Err(Error::Parse(format!("unknown header field {k}"))),
            }
        }
        let (closed, symmetric, n) = match (closed, symmetric, n) {
            (Some(c), Some(s), Some(n)) => (c, s, n),
            _ => return Err(Error::Parse("curve header is missing fields".into())),
        };
        let points = lines
            .map(|l| parse_point(l.split_whitespace()))
            .collect::<Result<Vec<_>>>()?;
        if points.len() != n {
            return Err(Error::Parse(format!("expected {n} samples, found {}", points.len())));
        }
        if n == 1 && !closed {
            return match points[0] {
                ExtComplex::Finite(z) => Ok(Self::point(z)),
                Infinity => Err(Error::InvalidCurve("open curves must be finite".into())),
            };
        }
        Self::new(points, closed, symmetric)
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn symmetry_defect(points: &[ExtComplex]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| match (points[i], points[n - 1 - i]) {
            (Infinity, Infinity) => 0.0,
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => (a + b).norm(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn parse_flag(v: &str) -> Result<bool> {
    match v {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::Parse(format!("flag must be 0 or 1, got {v}"))),
    }
}

/// Formats a number with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn format_point(p: ExtComplex) -> String {
    match p {
        ExtComplex::Finite(z) => format!("{} {}", fmt17(z.re), fmt17(z.im)),
        Infinity => "inf".to_string(),
    }
}

pub(crate) fn parse_point<'a>(mut tok: impl Iterator<Item = &'a str>) -> Result<ExtComplex> {
    let first = tok.next().ok_or_else(|| Error::Parse("missing sample".into()))?;
    if first == "inf" {
        return Ok(Infinity);
    }
    let re: f64 = first.parse().map_err(|_| Error::Parse(format!("bad number {first}")))?;
    let second = tok.next().ok_or_else(|| Error::Parse("missing imaginary part".into()))?;
    let im: f64 = second.parse().map_err(|_| Error::Parse(format!("bad number {second}")))?;
    ExtComplex::new(Complex64::new(re, im)).map_err(|e| Error::Parse(e.to_string()))
}

pub(crate) fn project_to_segment(z: Complex64, a: Complex64, b: Complex64) -> Complex64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return a;
    }
    let t = ((z - a) * d.conj()).re / l2;
    a + d * t.clamp(0.0, 1.0)
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a - o).re * (b - o).im - (a - o).im * (b - o).re
}

/// Euclidean distance between segments `[a, b]` and `[c, d]`.
pub(crate) fn segment_distance(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let d1 = cross(a, b, c);
    let d2 = cross(a, b, d);
    let d3 = cross(c, d, a);
    let d4 = cross(c, d, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return 0.0;
    }
    let p = point_segment_distance;
    p(a, c, d).min(p(b, c, d)).min(p(c, a, b)).min(p(d, a, b))
}

/// Distance from `z` to `[s, e]`. Interior projections use the cross
/// product, which stays exact for collinear points far from each other.
pub(crate) fn point_segment_distance(z: Complex64, s: Complex64, e: Complex64) -> f64 {
    let d = e - s;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - s).norm();
    }
    let t = ((z - s) * d.conj()).re / l2;
    if t <= 0.0 {
        (z - s).norm()
    } else if t >= 1.0 {
        (z - e).norm()
    } else {
        cross(s, e, z).abs() / l2.sqrt()
    }
}

/// Whether the straight segment `[a, b]` meets the curve.
pub fn segment_crosses_curve(a: ExtComplex, b: ExtComplex, c: &SampledCurve) -> bool {
    match (a.finite(), b.finite()) {
        (Some(a), Some(b)) => c.crosses_segment(a, b),
        _ => false,
    }
}

/// Maximum chordal distance over all sample pairs of `c`.
pub fn curve_diameter(c: &SampledCurve) -> f64 {
    c.diameter()
}

/// An unordered collection of sampled curves, optionally labelled by stage.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveFamily {
    pub curves: Vec<SampledCurve>,
    pub labels: Option<Vec<i64>>,
}

impl CurveFamily {
    pub fn new(curves: Vec<SampledCurve>) -> Self {
        CurveFamily {
            curves,
            labels: None,
        }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SampledCurve> {
        self.curves.iter()
    }

    /// Number of curves whose diameter exceeds `eps`.
    pub fn count_exceeding(&self, eps: f64) -> usize {
        self.curves.iter().filter(|c| c.diameter() > eps).count()
    }

    pub fn max_diameter(&self) -> f64 {
        self.curves.iter().map(|c| c.diameter()).fold(0.0, f64::max)
    }

    /// Indices of curves met by the segment `[a, b]`.
    pub fn crossed_by(&self, a: Complex64, b: Complex64) -> Vec<usize> {
        self.curves
            .iter()
            .enumerate()
            .filter(|(_, c)| c.crosses_segment(a, b))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_crossed_by(&self, a: Complex64, b: Complex64) -> bool {
        self.curves.iter().any(|c| c.crosses_segment(a, b))
    }

    /// Chordal distance from `z` to the nearest curve (`inf` when empty).
    pub fn chordal_distance_to(&self, z: ExtComplex) -> f64 {
        self.curves
            .iter()
            .map(|c| c.chordal_distance_to(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `z` lies within chordal distance `tol` of some curve.
    pub fn is_near(&self, z: ExtComplex, tol: f64) -> bool {
        match z {
            ExtComplex::Finite(w) => {
                // chordal <= tol forces a Euclidean gap below this pad
                let pad = tol * (1.0 + w.norm_sqr()) * 4.0 + POINT_TOL;
                self.curves
                    .iter()
                    .any(|c| c.bbox().contains(w, pad) && c.chordal_distance_to(z) <= tol)
            }
            Infinity => self.chordal_distance_to(z) <= tol,
        }
    }

    /// Union bounding box of the given curves.
    pub fn bbox_of(&self, indices: &[usize]) -> Option<BBox> {
        indices
            .iter()
            .map(|&i| self.curves[i].bbox())
            .reduce(|a, b| a.union(&b))
    }

    /// Whether all curves are pairwise at Euclidean distance above `tol`.
    pub fn pairwise_disjoint(&self, tol: f64) -> bool {
        let mut order: Vec<usize> = (0..self.curves.len()).collect();
        order.sort_by(|&i, &j| {
            self.curves[i].bbox().0[0].total_cmp(&self.curves[j].bbox().0[0])
        });
        for (k, &i) in order.iter().enumerate() {
            let bi = self.curves[i].bbox();
            for &j in &order[k + 1..] {
                let bj = self.curves[j].bbox();
                if bj.0[0] > bi.0[1] + tol {
                    break;
                }
                if bi.overlaps(&bj, tol) && curves_too_close(&self.curves[i], &self.curves[j], tol) {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn curves_too_close(a: &SampledCurve, b: &SampledCurve, tol: f64) -> bool {
    let pts = |c: &SampledCurve| -> Vec<(Complex64, Complex64)> {
        if c.len() == 1 {
            c.points()[0].finite().map(|p| vec![(p, p)]).unwrap_or_default()
        } else {
            c.edges().collect()
        }
    };
    let (ea, eb) = (pts(a), pts(b));
    ea.iter().any(|&(p, q)| {
        let sb = BBox::of_segment(p, q);
        eb.iter().any(|&(r, s)| {
            sb.overlaps(&BBox::of_segment(r, s), tol) && segment_distance(p, q, r, s) <= tol
        })
    })
}

/// Renders a family in the curve text format, one block per curve.
pub fn family_to_text(f: &CurveFamily) -> String {
    let mut s = String::new();
    for c in &f.curves {
        let _ = write!(s, "{}", c.to_text());
    }
    s
}
