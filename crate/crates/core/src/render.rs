//! Escape-time images, curve overlays and scatter plots of `Φ_n`, written
//! as binary PPM.

use std::path::Path;

use num_complex::Complex64;

use crate::branch::Tower;
use crate::curve::CurveFamily;
use crate::error::{Error, Result};
use crate::family::{PolyParam, QuadMap};
use crate::par::Exec;
use crate::sphere::{chordal_distance, ExtComplex};

pub const MAX_PIXELS: usize = 100_000_000;
/// Chordal distance at which a rational orbit counts as captured.
pub const ATTRACTION_TOL: f64 = 1e-6;
pub const MAX_CYCLE: usize = 64;
/// Critical orbit iterations before looking for a cycle.
const CYCLE_SETTLE: usize = 4000;

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub center: Complex64,
    pub half_width: f64,
    pub width: usize,
    pub height: usize,
}

impl Viewport {
    pub fn new(center: Complex64, half_width: f64, width: usize, height: usize) -> Result<Self> {
        if !(center.is_finite() && half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(
                "viewport needs a finite center and a positive half-width".into(),
            ));
        }
        if width == 0 || height == 0 || width.saturating_mul(height) > MAX_PIXELS {
            return Err(Error::InvalidParameter(format!(
                "viewport size {width}x{height} must be positive with at most {MAX_PIXELS} pixels"
            )));
        }
        Ok(Viewport {
            center,
            half_width,
            width,
            height,
        })
    }

    pub fn half_height(&self) -> f64 {
        self.half_width * self.height as f64 / self.width as f64
    }

    /// Point at the center of pixel `(x, y)`, row 0 at the top. Offsets
    /// are computed from exact integers so that a viewport centered at 0
    /// samples symmetric points.
    pub fn pixel_center(&self, x: usize, y: usize) -> Complex64 {
        let (w, h) = (self.width as i64, self.height as i64);
        let u = (2 * x as i64 + 1 - w) as f64 / w as f64;
        let v = (h - 2 * y as i64 - 1) as f64 / h as f64;
        self.center + Complex64::new(self.half_width * u, self.half_height() * v)
    }

    /// Continuous pixel coordinates of `z`; pixel centers are integers.
    pub fn to_pixel(&self, z: Complex64) -> (f64, f64) {
        let d = z - self.center;
        let px = (d.re / self.half_width + 1.0) * self.width as f64 / 2.0 - 0.5;
        let py = (1.0 - d.im / self.half_height()) * self.height as f64 / 2.0 - 0.5;
        (px, py)
    }

    /// Pixel containing `z`, if it is in view.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let (px, py) = self.to_pixel(z);
        let (x, y) = (px.round(), py.round());
        (x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64).then_some((x as usize, y as usize))
    }
}

/// Row-major 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize) -> Self {
        Image {
            width,
            height,
            pixels: vec![0; 3 * width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (y * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        let i = 3 * (y * self.width + x);
        self.pixels[i..i + 3].copy_from_slice(&c);
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

const fn triangle(i: usize, shift: usize) -> u8 {
    let v = (i * 3 + shift) % 512;
    (if v < 256 { v } else { 511 - v }) as u8
}

const PALETTE: [Rgb; 256] = {
    let mut t = [[0u8; 3]; 256];
    let mut i = 0;
    while i < 256 {
        // three out-of-phase triangle waves; blue never drops below 32
        let b = triangle(i, 340);
        t[i] = [triangle(i, 0), triangle(i, 170), if b < 32 { 32 } else { b }];
        i += 1;
    }
    t
};

/// Color of iteration count `k`. No entry is black.
pub fn palette(k: usize) -> Rgb {
    PALETTE[k % 256]
}

/// Attracting cycles reached by the critical orbits of a rational map.
fn attracting_cycles(map: &QuadMap) -> Vec<ExtComplex> {
    let mut points: Vec<ExtComplex> = Vec::new();
    for start in map.critical_values() {
        let mut z = map.iterate(start, CYCLE_SETTLE);
        let orbit: Vec<ExtComplex> = (0..=MAX_CYCLE)
            .map(|_| {
                let v = z;
                z = map.eval(z);
                v
            })
            .collect();
        if let Some(p) = (1..=MAX_CYCLE).find(|&p| chordal_distance(orbit[0], orbit[p]) < ATTRACTION_TOL) {
            points.extend_from_slice(&orbit[..p]);
        }
    }
    points
}

fn escape_time(p: PolyParam, z: Complex64, radius: f64, max_iter: usize) -> Option<usize> {
    let mut z = z;
    for k in 0..max_iter {
        if z.norm() > radius {
            return Some(k);
        }
        z = z * z + p.c;
    }
    None
}

fn capture_time(map: &QuadMap, cycle: &[ExtComplex], z: Complex64, max_iter: usize) -> Option<usize> {
    let mut z = ExtComplex::Finite(z);
    for k in 0..max_iter {
        if cycle.iter().any(|&q| chordal_distance(q, z) < ATTRACTION_TOL) {
            return Some(k);
        }
        z = map.eval(z);
    }
    None
}

/// Escape-time image: polynomial pixels are colored by the iteration at
/// which `|z| > 8 + |c|`, rational ones by the iteration at which the orbit
/// comes within [`ATTRACTION_TOL`] of an attracting cycle found from the
/// critical orbits. Other pixels are black.
pub fn render_julia(map: &QuadMap, v: &Viewport, max_iter: usize, exec: Exec) -> Image {
    let mut img = Image::new(v.width, v.height);
    let cycle = match map {
        QuadMap::Poly(_) => Vec::new(),
        QuadMap::Rat(_) => attracting_cycles(map),
    };
    let row = 3 * v.width;
    exec.fill_chunks(&mut img.pixels, row, |start, out| {
        let y = start / row;
        for x in 0..v.width {
            let z = v.pixel_center(x, y);
            let k = match map {
                QuadMap::Poly(p) => escape_time(*p, z, 8.0 + p.c.norm(), max_iter),
                QuadMap::Rat(_) => capture_time(map, &cycle, z, max_iter),
            };
            let c = k.map_or(BLACK, palette);
            out[3 * x..3 * x + 3].copy_from_slice(&c);
        }
    });
    img
}

/// Clips a segment in pixel coordinates to `[-0.5, xmax] x [-0.5, ymax]`
/// (Liang-Barsky).
fn clip(a: (f64, f64), b: (f64, f64), xmax: f64, ymax: f64) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let checks = [
        (-dx, a.0 + 0.5),
        (dx, xmax - a.0),
        (-dy, a.1 + 0.5),
        (dy, ymax - a.1),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some(((a.0 + t0 * dx, a.1 + t0 * dy), (a.0 + t1 * dx, a.1 + t1 * dy)))
}

fn draw_line(img: &mut Image, a: (i64, i64), b: (i64, i64), color: Rgb) {
    let (mut x, mut y) = a;
    let (dx, dy) = ((b.0 - x).abs(), -(b.1 - y).abs());
    let (sx, sy) = (if x < b.0 { 1 } else { -1 }, if y < b.1 { 1 } else { -1 });
    let mut err = dx + dy;
    loop {
        if x >= 0 && y >= 0 && (x as usize) < img.width && (y as usize) < img.height {
            img.set(x as usize, y as usize, color);
        }
        if (x, y) == b {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Draws every curve of `fam` as a 1-pixel polyline.
pub fn overlay_curves(img: &Image, v: &Viewport, fam: &CurveFamily, color: Rgb) -> Image {
    let mut out = img.clone();
    let (xmax, ymax) = (v.width as f64 - 0.5, v.height as f64 - 0.5);
    let snap = |p: (f64, f64)| (p.0.round() as i64, p.1.round() as i64);
    for curve in fam.iter() {
        if curve.len() == 1 {
            if let Some((x, y)) = curve.points()[0].finite().and_then(|z| v.pixel_of(z)) {
                out.set(x, y, color);
            }
            continue;
        }
        for (a, b) in curve.edges() {
            if let Some((p, q)) = clip(v.to_pixel(a), v.to_pixel(b), xmax, ymax) {
                draw_line(&mut out, snap(p), snap(q), color);
            }
        }
    }
    out
}

/// Scatter plot of `Φ_n` over sample points, with counts of the samples
/// that could not be evaluated and of values outside the view.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiRender {
    pub image: Image,
    pub plotted: usize,
    pub skipped: usize,
    pub off_view: usize,
}

pub fn render_phi_image(t: &Tower, n: usize, samples: &[ExtComplex], v: &Viewport, exec: Exec) -> PhiRender {
    let values = exec.map(samples, |&z| t.eval_phi(n, z));
    let mut out = PhiRender {
        image: Image::new(v.width, v.height),
        plotted: 0,
        skipped: 0,
        off_view: 0,
    };
    for value in values {
        match value.map(|w| w.finite().and_then(|w| v.pixel_of(w))) {
            Ok(Some((x, y))) => {
                out.image.set(x, y, [255, 255, 255]);
                out.plotted += 1;
            }
            Ok(None) => out.off_view += 1,
            Err(_) => out.skipped += 1,
        }
    }
    out
}

/// Backward orbit points of the `α` fixed point of `p_c`, i.e. points of
/// its Julia set. Sample `k` takes the branch signs from a hash of `k`.
pub fn julia_samples(p: PolyParam, count: usize, depth: usize) -> Vec<ExtComplex> {
    let alpha = (1.0 - (1.0 - 4.0 * p.c).sqrt()) / 2.0;
    (0..count as u64)
        .map(|k| {
            let mut bits = k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut z = alpha;
            for i in 0..depth {
                if i % 64 == 0 && i > 0 {
                    bits = bits.rotate_left(29).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                }
                let r = (z - p.c).sqrt();
                z = if (bits >> (i % 64)) & 1 == 1 { r } else { -r };
            }
            ExtComplex::Finite(z)
        })
        .collect()
}

pub fn write_ppm(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, img.to_ppm())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::SampledCurve;
    use crate::family::RatParam;

    fn vp(w: usize, h: usize, hw: f64) -> Viewport {
        Viewport::new(Complex64::new(0.0, 0.0), hw, w, h).unwrap()
    }

    #[test]
    fn julia_examples() {
        let m = QuadMap::poly((-6.0).into());
        let v = vp(1, 1, 1e-3);
        let at = |z: f64| render_julia(&m, &Viewport { center: Complex64::new(z, 0.0), ..v }, 200, Exec::Sequential);
        assert_eq!(at(3.0).get(0, 0), BLACK);
        assert_eq!(at(10.0).get(0, 0), palette(1));
        let disk = render_julia(&QuadMap::poly(0.0.into()), &vp(41, 41, 0.7), 100, Exec::Sequential);
        assert!(disk.pixels.iter().all(|&b| b == 0));
    }

    #[test]
    fn julia_is_even_and_deterministic() {
        let v = vp(64, 48, 3.5);
        for m in [
            QuadMap::poly(Complex64::new(-0.7, 0.3)),
            QuadMap::Rat(RatParam::new(3.0.into(), 2.0.into()).unwrap()),
        ] {
            let a = render_julia(&m, &v, 60, Exec::Parallel);
            let b = render_julia(&m, &v, 60, Exec::Sequential);
            assert_eq!(a, b);
            for y in 0..v.height {
                for x in 0..v.width {
                    assert_eq!(a.get(x, y), a.get(v.width - 1 - x, v.height - 1 - y));
                }
            }
        }
    }

    #[test]
    fn palette_avoids_black() {
        assert!((0..256).all(|k| palette(k) != BLACK));
    }

    #[test]
    fn overlay_examples() {
        let v = vp(21, 11, 2.0);
        let img = Image::new(21, 11);
        let red = [255, 0, 0];
        assert_eq!(overlay_curves(&img, &v, &CurveFamily::new(vec![]), red), img);
        let far = SampledCurve::segment(Complex64::new(10.0, 10.0), Complex64::new(12.0, 10.0), 4).unwrap();
        assert_eq!(overlay_curves(&img, &v, &CurveFamily::new(vec![far]), red), img);
        let line = SampledCurve::segment(Complex64::new(-5.0, 0.0), Complex64::new(5.0, 0.0), 4).unwrap();
        let out = overlay_curves(&img, &v, &CurveFamily::new(vec![line]), red);
        for y in 0..11 {
            for x in 0..21 {
                assert_eq!(out.get(x, y), if y == 5 { red } else { BLACK });
            }
        }
    }

    #[test]
    fn ppm_bytes() {
        assert_eq!(Image::new(1, 1).to_ppm(), b"P6\n1 1\n255\n\0\0\0".to_vec());
        let mut img = Image::new(2, 1);
        img.set(1, 0, [1, 2, 3]);
        assert_eq!(&img.to_ppm()[11..], &[0, 0, 0, 1, 2, 3]);
        let dir = std::env::temp_dir().join(format!("regluing-ppm-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a.ppm");
        write_ppm(&img, &path).unwrap();
        let first = std::fs::read(&path).unwrap();
        write_ppm(&img, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn viewport_validation() {
        assert!(Viewport::new(Complex64::new(0.0, 0.0), 1.0, 0, 5).is_err());
        assert!(Viewport::new(Complex64::new(0.0, 0.0), 0.0, 5, 5).is_err());
        assert!(Viewport::new(Complex64::new(0.0, 0.0), 1.0, 20_000, 20_000).is_err());
        let v = vp(4, 2, 1.0);
        assert_eq!(v.pixel_center(0, 0), Complex64::new(-0.75, 0.25));
        assert_eq!(v.pixel_of(Complex64::new(-0.75, 0.25)), Some((0, 0)));
    }

    #[test]
    fn julia_samples_are_bounded() {
        let p = PolyParam::from_complex((-6.0).into());
        let pts = julia_samples(p, 50, 40);
        for z in pts {
            let z = z.finite().unwrap();
            assert!(z.im.abs() < 1e-12 && z.re.abs() <= 3.0 + 1e-12);
            let mut w = z;
            for _ in 0..20 {
                w = w * w + p.c;
            }
            assert!(w.norm() < 8.0);
        }
    }

    #[test]
    fn phi_render_examples() {
        let t = crate::branch::tests::example_tower(1);
        let v = vp(101, 101, 12.0);
        let circle: Vec<ExtComplex> = (0..32)
            .map(|k| ExtComplex::Finite(Complex64::from_polar(10.0, 0.2 + k as f64 * 0.19)))
            .collect();
        for &z in &circle {
            let w = t.eval_phi(0, z).unwrap().norm();
            assert!((w - 10.0).abs() < 0.2);
        }
        let r = render_phi_image(&t, 0, &circle, &v, Exec::Parallel);
        assert_eq!(r.plotted + r.off_view, 32);
        let empty = render_phi_image(&t, 0, &[], &v, Exec::Parallel);
        assert_eq!(empty.image, Image::new(101, 101));
        let on_cut = render_phi_image(&t, 0, &[ExtComplex::real(0.5)], &v, Exec::Parallel);
        assert_eq!(on_cut.skipped, 1);
    }
}
