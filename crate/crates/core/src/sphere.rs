//! Points of the Riemann sphere and the chordal metric.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SphereError {
    #[error("NaN is not a point of the sphere")]
    NotANumber,
    #[error("infinity + infinity is undefined")]
    InfPlusInf,
    #[error("0 * infinity is undefined")]
    ZeroTimesInf,
    #[error("infinity / infinity is undefined")]
    InfOverInf,
    #[error("0 / 0 is undefined")]
    ZeroOverZero,
}

/// A point of the extended complex plane: a finite value or the single
/// point at infinity.
#[derive(Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

pub use ExtComplex::Infinity;

// fallible arithmetic: the operator traits would have to panic on inf - inf
#[allow(clippy::should_implement_trait)]
impl ExtComplex {
    pub const ZERO: ExtComplex = ExtComplex::Finite(Complex64::new(0.0, 0.0));
    pub const ONE: ExtComplex = ExtComplex::Finite(Complex64::new(1.0, 0.0));

    /// Wraps a complex number. Components that overflowed to ±inf collapse
    /// to the canonical infinity; NaN is rejected.
    pub fn new(z: Complex64) -> Result<Self, SphereError> {
        if z.re.is_nan() || z.im.is_nan() {
            Err(SphereError::NotANumber)
        } else if z.re.is_infinite() || z.im.is_infinite() {
            Ok(Infinity)
        } else {
            Ok(ExtComplex::Finite(z))
        }
    }

    pub fn real(x: f64) -> Self {
        Self::from(Complex64::new(x, 0.0))
    }

    pub fn from_parts(re: f64, im: f64) -> Self {
        Self::from(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            ExtComplex::Finite(z) => Some(z),
            Infinity => None,
        }
    }

    /// Modulus, `+inf` at infinity.
    pub fn norm(&self) -> f64 {
        match self {
            ExtComplex::Finite(z) => z.norm(),
            Infinity => f64::INFINITY,
        }
    }

    pub fn add(self, rhs: Self) -> Result<Self, SphereError> {
        match (self, rhs) {
            (Infinity, Infinity) => Err(SphereError::InfPlusInf),
            (Infinity, _) | (_, Infinity) => Ok(Infinity),
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => Self::new(a + b),
        }
    }

    pub fn sub(self, rhs: Self) -> Result<Self, SphereError> {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: Self) -> Result<Self, SphereError> {
        match (self, rhs) {
            (Infinity, Infinity) => Ok(Infinity),
            (Infinity, ExtComplex::Finite(z)) | (ExtComplex::Finite(z), Infinity) => {
                if z == Complex64::new(0.0, 0.0) {
                    Err(SphereError::ZeroTimesInf)
                } else {
                    Ok(Infinity)
                }
            }
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => Self::new(a * b),
        }
    }

    pub fn div(self, rhs: Self) -> Result<Self, SphereError> {
        match (self, rhs) {
            (Infinity, Infinity) => Err(SphereError::InfOverInf),
            (Infinity, ExtComplex::Finite(_)) => Ok(Infinity),
            (ExtComplex::Finite(_), Infinity) => Ok(Self::ZERO),
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => {
                if b == Complex64::new(0.0, 0.0) {
                    if a == Complex64::new(0.0, 0.0) {
                        Err(SphereError::ZeroOverZero)
                    } else {
                        Ok(Infinity)
                    }
                } else {
                    Self::new(a.fdiv(b))
                }
            }
        }
    }

    pub fn neg(self) -> Self {
        match self {
            ExtComplex::Finite(z) => ExtComplex::Finite(-z),
            Infinity => Infinity,
        }
    }

    /// `1/z` with `1/0 = inf` and `1/inf = 0`.
    pub fn recip(self) -> Self {
        match self {
            Infinity => Self::ZERO,
            ExtComplex::Finite(z) if z == Complex64::new(0.0, 0.0) => Infinity,
            ExtComplex::Finite(z) => Self::from(z.finv()),
        }
    }

    pub fn square(self) -> Self {
        match self {
            Infinity => Infinity,
            ExtComplex::Finite(z) => Self::from(z * z),
        }
    }

    /// Principal square root; `sqrt(inf) = inf`.
    pub fn sqrt(self) -> Self {
        match self {
            Infinity => Infinity,
            ExtComplex::Finite(z) => ExtComplex::Finite(z.sqrt()),
        }
    }
}

impl From<Complex64> for ExtComplex {
    /// Panics on NaN; overflowed components become infinity.
    fn from(z: Complex64) -> Self {
        ExtComplex::new(z).expect("NaN passed as a point of the sphere")
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::real(x)
    }
}

impl fmt::Debug for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn chordal_finite(a: Complex64, b: Complex64) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na > 1.0 && nb > 1.0 {
        // inversion is an isometry of the chordal metric
        return chordal_finite(a.finv(), b.finv());
    }
    let (big, small, nbig, nsmall) = if na >= nb { (a, b, na, nb) } else { (b, a, nb, na) };
    if nbig > 1.0 {
        // |big - small| / sqrt(1 + |big|^2) = |1 - small/big| / sqrt(1 + 1/|big|^2)
        let num = (Complex64::new(1.0, 0.0) - small.fdiv(big)).norm();
        let inv = 1.0 / nbig;
        2.0 * num / ((1.0 + inv * inv).sqrt() * (1.0 + nsmall * nsmall).sqrt())
    } else {
        2.0 * (big - small).norm() / ((1.0 + nbig * nbig).sqrt() * (1.0 + nsmall * nsmall).sqrt())
    }
}

/// Chordal distance on the Riemann sphere of diameter 2.
pub fn chordal_distance(p: ExtComplex, q: ExtComplex) -> f64 {
    match (p, q) {
        (Infinity, Infinity) => 0.0,
        (Infinity, ExtComplex::Finite(z)) | (ExtComplex::Finite(z), Infinity) => {
            let n = z.norm();
            if n > 1.0 {
                2.0 / (n * (1.0 + 1.0 / (n * n)).sqrt())
            } else {
                2.0 / (1.0 + n * n).sqrt()
            }
        }
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) => chordal_finite(a, b),
    }
}

/// Picks the square root of `g` nearest to `prev`.
///
/// Returns the chosen root together with the ratio `d_far / d_near` of the
/// distances from `prev` to the rejected and chosen roots (`inf` when the
/// choice is exact).
pub fn nearest_root(g: Complex64, prev: Complex64) -> (Complex64, f64) {
    let v = g.sqrt();
    let dp = (v - prev).norm();
    let dm = (-v - prev).norm();
    if dp <= dm {
        (v, if dp == 0.0 { f64::INFINITY } else { dm / dp })
    } else {
        (-v, if dm == 0.0 { f64::INFINITY } else { dp / dm })
    }
}
