//! The normalized quadratic families `p_c(z) = z^2 + c` and
//! `R_{a,b}(z) = (a z^2 - b) / (z^2 - 1)`.

use num_complex::Complex64;

use crate::curve::{curves_too_close, SampledCurve};
use crate::error::{Error, Result};
use crate::sphere::{chordal_distance, ExtComplex, Infinity};

/// Chordal clearance required between a curve and the critical values of
/// the map it is pulled back by.
pub const CRITICAL_CLEARANCE: f64 = 1e-9;
/// Maximum chordal gap between consecutive preimage samples.
pub const PULLBACK_STEP: f64 = 0.05;
/// Local refinement budget per input edge.
pub const PULLBACK_HALVINGS: u32 = 12;
/// Inputs beyond this modulus are treated as infinity: squaring them
/// would overflow.
const HUGE: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyParam {
    pub c: Complex64,
}

impl PolyParam {
    pub fn new(c: ExtComplex) -> Result<Self> {
        c.finite()
            .map(|c| PolyParam { c })
            .ok_or_else(|| Error::InvalidParameter("polynomial parameter must be finite".into()))
    }

    pub fn from_complex(c: Complex64) -> Self {
        PolyParam { c }
    }
}

/// Parameters of `R_{a,b}`; `a` and `b` are its critical values at
/// infinity and at zero. Infinite values select the degenerate forms
/// `z^2 + b` (a = inf) and `z^-2 + a` (b = inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatParam {
    pub a: ExtComplex,
    pub b: ExtComplex,
}

impl RatParam {
    pub fn new(a: ExtComplex, b: ExtComplex) -> Result<Self> {
        if chordal_distance(a, b) == 0.0 {
            return Err(Error::InvalidParameter(
                "R_{a,b} needs distinct critical values a != b".into(),
            ));
        }
        Ok(RatParam { a, b })
    }
}

pub fn eval_poly(p: PolyParam, z: ExtComplex) -> ExtComplex {
    match z {
        Infinity => Infinity,
        ExtComplex::Finite(z) if z.norm() > HUGE => Infinity,
        ExtComplex::Finite(z) => ExtComplex::from(z * z + p.c),
    }
}

pub fn eval_rat(r: RatParam, z: ExtComplex) -> ExtComplex {
    // beyond HUGE the correction (a - b) / z^2 is below double resolution
    let z = match z {
        ExtComplex::Finite(w) if w.norm() > HUGE => Infinity,
        z => z,
    };
    match (r.a, r.b) {
        (Infinity, b) => {
            // z^2 + b
            match (z, b) {
                (Infinity, _) | (_, Infinity) => Infinity,
                (ExtComplex::Finite(z), ExtComplex::Finite(b)) => ExtComplex::from(z * z + b),
            }
        }
        (ExtComplex::Finite(a), Infinity) => match z {
            Infinity => ExtComplex::Finite(a),
            ExtComplex::Finite(z) if z == Complex64::new(0.0, 0.0) => Infinity,
            ExtComplex::Finite(z) => ExtComplex::from((z * z).finv() + a),
        },
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) => match z {
            Infinity => ExtComplex::Finite(a),
            ExtComplex::Finite(z) => {
                let z2 = z * z;
                let den = z2 - 1.0;
                if den == Complex64::new(0.0, 0.0) {
                    Infinity
                } else {
                    ExtComplex::from((a * z2 - b).fdiv(den))
                }
            }
        },
    }
}

/// Value of `z^2` over the fiber `R^{-1}(w)`.
pub fn rat_inverse_square(r: RatParam, w: ExtComplex) -> ExtComplex {
    match (r.a, r.b) {
        (Infinity, b) => match (w, b) {
            (Infinity, _) => Infinity,
            (ExtComplex::Finite(w), ExtComplex::Finite(b)) => ExtComplex::from(w - b),
            (ExtComplex::Finite(_), Infinity) => unreachable!("a != b"),
        },
        (ExtComplex::Finite(a), Infinity) => match w {
            Infinity => ExtComplex::ZERO,
            ExtComplex::Finite(w) if w == a => Infinity,
            ExtComplex::Finite(w) => ExtComplex::from((w - a).finv()),
        },
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) => match w {
            Infinity => ExtComplex::ONE,
            ExtComplex::Finite(w) if w == a => Infinity,
            ExtComplex::Finite(w) => ExtComplex::from((w - b).fdiv(w - a)),
        },
    }
}

fn root_pair(g: ExtComplex) -> (ExtComplex, ExtComplex) {
    let r = g.sqrt();
    (r, r.neg())
}

/// Both solutions of `z^2 + c = w`, principal root first.
pub fn preimages_poly(p: PolyParam, w: ExtComplex) -> (ExtComplex, ExtComplex) {
    match w {
        Infinity => (Infinity, Infinity),
        ExtComplex::Finite(w) => root_pair(ExtComplex::Finite(w - p.c)),
    }
}

/// Both solutions of `R_{a,b}(z) = w`, principal root first.
pub fn preimages_rat(r: RatParam, w: ExtComplex) -> (ExtComplex, ExtComplex) {
    root_pair(rat_inverse_square(r, w))
}

/// A member of either quadratic family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadMap {
    Poly(PolyParam),
    Rat(RatParam),
}

impl QuadMap {
    pub fn poly(c: Complex64) -> Self {
        QuadMap::Poly(PolyParam { c })
    }

    pub fn eval(&self, z: ExtComplex) -> ExtComplex {
        match *self {
            QuadMap::Poly(p) => eval_poly(p, z),
            QuadMap::Rat(r) => eval_rat(r, z),
        }
    }

    /// `z^2` for `z` in the fiber over `w`.
    pub fn inverse_square(&self, w: ExtComplex) -> ExtComplex {
        match *self {
            QuadMap::Poly(p) => match w {
                Infinity => Infinity,
                ExtComplex::Finite(w) => ExtComplex::Finite(w - p.c),
            },
            QuadMap::Rat(r) => rat_inverse_square(r, w),
        }
    }

    pub fn preimages(&self, w: ExtComplex) -> (ExtComplex, ExtComplex) {
        match *self {
            QuadMap::Poly(p) => preimages_poly(p, w),
            QuadMap::Rat(r) => preimages_rat(r, w),
        }
    }

    /// Finite critical values: `c` for polynomials, `a` and `b` for
    /// rational maps (infinity included when a parameter is infinite).
    pub fn critical_values(&self) -> Vec<ExtComplex> {
        match *self {
            QuadMap::Poly(p) => vec![ExtComplex::Finite(p.c)],
            QuadMap::Rat(r) => vec![r.a, r.b],
        }
    }

    pub fn iterate(&self, z: ExtComplex, n: usize) -> ExtComplex {
        (0..n).fold(z, |z, _| self.eval(z))
    }
}

/// Pulls a curve back by an even quadratic map.
///
/// The first component continues one square-root branch along the samples
/// (nearest-sign rule, principal seed), refining edges whose preimage
/// samples are more than [`PULLBACK_STEP`] apart; the second component is
/// its negation.
pub fn pullback_curve(map: &QuadMap, curve: &SampledCurve) -> Result<(SampledCurve, SampledCurve)> {
    for v in map.critical_values() {
        if curve.chordal_distance_to(v) <= CRITICAL_CLEARANCE {
            return Err(Error::CriticalValueOnCurve);
        }
    }
    if curve.is_degenerate() {
        let (p, _) = map.preimages(curve.points()[0]);
        let z = p
            .finite()
            .ok_or_else(|| Error::InvalidCurve("pullback of a point curve at infinity".into()))?;
        return Ok((SampledCurve::point(z), SampledCurve::point(-z)));
    }

    let ws: Vec<Complex64> = curve
        .points()
        .iter()
        .map(|p| {
            p.finite()
                .ok_or_else(|| Error::InvalidCurve("pullback of curves through infinity".into()))
        })
        .collect::<Result<_>>()?;
    let g = |w: Complex64| -> Result<Complex64> {
        map.inverse_square(ExtComplex::Finite(w))
            .finite()
            .ok_or(Error::CriticalValueOnCurve)
    };

    let mut out = Vec::with_capacity(ws.len());
    let mut prev = g(ws[0])?.sqrt();
    out.push(prev);
    let n = ws.len();
    let edges = if curve.is_closed() { n } else { n - 1 };
    for i in 0..edges {
        let (wa, wb) = (ws[i], ws[(i + 1) % n]);
        refine_edge(&g, wa, wb, &mut prev, PULLBACK_HALVINGS, &mut out)?;
    }
    if curve.is_closed() {
        // back at the first sample: the branch must close up
        let last = out.pop().expect("closed curve produced samples");
        if (last - out[0]).norm() > (last + out[0]).norm() {
            return Err(Error::CriticalValueOnCurve);
        }
    }

    let first: Vec<ExtComplex> = out.iter().map(|&z| ExtComplex::Finite(z)).collect();
    let second: Vec<ExtComplex> = out.iter().map(|&z| ExtComplex::Finite(-z)).collect();
    let a = SampledCurve::new(first, curve.is_closed(), false)?;
    let b = SampledCurve::new(second, curve.is_closed(), false)?;
    if a.bbox().overlaps(&b.bbox(), CRITICAL_CLEARANCE)
        && curves_too_close(&a, &b, CRITICAL_CLEARANCE)
    {
        return Err(Error::CriticalValueOnCurve);
    }
    Ok((a, b))
}

fn refine_edge(
    g: &impl Fn(Complex64) -> Result<Complex64>,
    wa: Complex64,
    wb: Complex64,
    prev: &mut Complex64,
    budget: u32,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    let gb = g(wb)?;
    let (rb, _) = crate::sphere::nearest_root(gb, *prev);
    let gap = chordal_distance(ExtComplex::Finite(*prev), ExtComplex::Finite(rb));
    if gap > PULLBACK_STEP && budget > 0 {
        let wm = (wa + wb) * 0.5;
        refine_edge(g, wa, wm, prev, budget - 1, out)?;
        return refine_edge(g, wm, wb, prev, budget - 1, out);
    }
    *prev = rb;
    out.push(rb);
    Ok(())
}
