//! Tile-parallel rasterization of `M`, `J(P_c)` and decorated sets.
//!
//! Every pixel is classified from its center alone, so the output does not
//! depend on the tile size or on how many workers share the tiles.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoration::{DecorationModel, MembershipKind};
use crate::error::{Error, Result};

/// Smallest pixel size double precision resolves reliably.
pub const PRECISION_CAP: f64 = 1e-13;
pub const DEFAULT_TILE: usize = 64;
pub const THREADS_ENV: &str = "MANDELDECOR_THREADS";
const ESCAPE_RADIUS_SQ: f64 = 16.0;
const BAILOUT_SQ: f64 = 1e16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: Complex64,
    /// Width in complex-plane units.
    pub width: f64,
    pub pixels_x: usize,
    pub pixels_y: usize,
}

impl Viewport {
    pub fn new(center: Complex64, width: f64, pixels_x: usize, pixels_y: usize) -> Result<Self> {
        let vp = Self {
            center,
            width,
            pixels_x,
            pixels_y,
        };
        vp.validate()?;
        Ok(vp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::invalid("viewport width must be positive"));
        }
        if self.pixels_x == 0 || self.pixels_y == 0 {
            return Err(Error::invalid("viewport needs at least one pixel"));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(Error::invalid("viewport center must be finite"));
        }
        let pixel = self.pixel_size();
        if !(pixel > PRECISION_CAP) {
            return Err(Error::PrecisionCap {
                pixel,
                cap: PRECISION_CAP,
            });
        }
        Ok(())
    }

    pub fn pixel_size(&self) -> f64 {
        self.width / self.pixels_x as f64
    }

    pub fn height(&self) -> f64 {
        self.pixel_size() * self.pixels_y as f64
    }

    /// Center of pixel `(x, y)`; row 0 is the top edge.
    pub fn pixel_center(&self, x: usize, y: usize) -> Complex64 {
        let s = self.pixel_size();
        Complex64::new(
            self.center.re + (x as f64 + 0.5 - self.pixels_x as f64 / 2.0) * s,
            self.center.im - (y as f64 + 0.5 - self.pixels_y as f64 / 2.0) * s,
        )
    }
}

/// Row-major 8-bit RGB pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![0; 3 * width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = 3 * (y * self.width + x);
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSettings {
    pub max_iter: usize,
    /// Worker threads; `None` reads `MANDELDECOR_THREADS`, else all cores.
    pub workers: Option<usize>,
    pub tile_size: usize,
    /// Exterior pixels closer than this many pixels to the set are drawn as
    /// boundary.
    pub boundary_band: f64,
    /// Half-width of decorations, in pixels.
    pub decoration_thickness: f64,
}

impl Default for RenderSettings {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            workers: None,
            tile_size: DEFAULT_TILE,
            boundary_band: 0.5,
            decoration_thickness: 0.5,
        }
    }
}

/// What a pixel shows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PixelClass {
    Interior,
    Boundary,
    /// Escaping pixel with its potential.
    Exterior(f64),
    Decoration(u32),
}

/// Pixel counts by class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub interior: usize,
    pub boundary: usize,
    pub exterior: usize,
    /// Decoration pixels by level.
    pub levels: Vec<usize>,
}

impl ClassCounts {
    pub fn tally(classes: &[PixelClass]) -> Self {
        let mut counts = Self::default();
        for class in classes {
            counts.add(class);
        }
        counts
    }

    fn add(&mut self, class: &PixelClass) {
        match *class {
            PixelClass::Interior => self.interior += 1,
            PixelClass::Boundary => self.boundary += 1,
            PixelClass::Exterior(_) => self.exterior += 1,
            PixelClass::Decoration(m) => {
                let m = m as usize;
                if self.levels.len() <= m {
                    self.levels.resize(m + 1, 0);
                }
                self.levels[m] += 1;
            }
        }
    }

    pub fn level(&self, m: usize) -> usize {
        self.levels.get(m).copied().unwrap_or(0)
    }
}

/// Worker count from the settings, then `MANDELDECOR_THREADS`, then the
/// number of cores.
pub fn resolve_workers(settings: &RenderSettings) -> usize {
    if let Some(w) = settings.workers {
        return w.max(1);
    }
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|w| *w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Evaluates `f` at every pixel center, tile by tile on a worker pool.
pub fn classify_grid<K, F>(vp: &Viewport, settings: &RenderSettings, f: F) -> Result<Vec<K>>
where
    K: Copy + Send + Sync + Default,
    F: Fn(Complex64) -> K + Sync,
{
    vp.validate()?;
    let tile = settings.tile_size.max(1);
    let (w, h) = (vp.pixels_x, vp.pixels_y);
    let tiles: Vec<(usize, usize)> = (0..h)
        .step_by(tile)
        .flat_map(|y0| (0..w).step_by(tile).map(move |x0| (x0, y0)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_workers(settings))
        .build()
        .map_err(|e| Error::invalid(format!("worker pool: {e}")))?;
    let blocks: Vec<Vec<K>> = pool.install(|| {
        tiles
            .par_iter()
            .map(|&(x0, y0)| {
                let (x1, y1) = ((x0 + tile).min(w), (y0 + tile).min(h));
                let mut out = Vec::with_capacity((x1 - x0) * (y1 - y0));
                for y in y0..y1 {
                    for x in x0..x1 {
                        out.push(f(vp.pixel_center(x, y)));
                    }
                }
                out
            })
            .collect()
    });
    let mut grid = vec![K::default(); w * h];
    for (&(x0, y0), block) in tiles.iter().zip(&blocks) {
        let x1 = (x0 + tile).min(w);
        let span = x1 - x0;
        for (row, chunk) in block.chunks(span).enumerate() {
            let start = (y0 + row) * w + x0;
            grid[start..start + span].copy_from_slice(chunk);
        }
    }
    Ok(grid)
}

impl Default for PixelClass {
    fn default() -> Self {
        PixelClass::Interior
    }
}

/// Parameter-plane classification of `c` with boundary band `band`.
pub fn classify_mandelbrot_point(c: Complex64, max_iter: usize, band: f64) -> PixelClass {
    let mut z = c;
    let mut dc = Complex64::new(1.0, 0.0);
    let mut scale = 1.0;
    let mut escaped = false;
    let mut i = 1;
    loop {
        if !escaped && i > max_iter {
            return PixelClass::Interior;
        }
        let r2 = z.norm_sqr();
        if r2 > ESCAPE_RADIUS_SQ {
            escaped = true;
        }
        if escaped && r2 > BAILOUT_SQ {
            break;
        }
        dc = dc * z * 2.0 + 1.0;
        z = z * z + c;
        scale *= 0.5;
        i += 1;
    }
    exterior_class(z, dc, scale, band)
}

/// Dynamical-plane classification of `z` under `P_c`.
pub fn classify_julia_point(c: Complex64, z0: Complex64, max_iter: usize, band: f64) -> PixelClass {
    let mut z = z0;
    let mut dz = Complex64::new(1.0, 0.0);
    let mut scale = 1.0;
    let mut escaped = false;
    let mut i = 0;
    loop {
        let r2 = z.norm_sqr();
        if r2 > ESCAPE_RADIUS_SQ {
            escaped = true;
        }
        if escaped && r2 > BAILOUT_SQ {
            break;
        }
        if !escaped && i >= max_iter {
            return PixelClass::Interior;
        }
        dz = dz * z * 2.0;
        z = z * z + c;
        scale *= 0.5;
        i += 1;
    }
    exterior_class(z, dz, scale, band)
}

fn exterior_class(z: Complex64, dz: Complex64, scale: f64, band: f64) -> PixelClass {
    let r = z.norm();
    let distance = r * r.ln() / dz.norm();
    if distance < band {
        PixelClass::Boundary
    } else {
        PixelClass::Exterior(r.ln() * scale)
    }
}

pub fn classify_mandelbrot(vp: &Viewport, settings: &RenderSettings) -> Result<Vec<PixelClass>> {
    let band = settings.boundary_band * vp.pixel_size();
    classify_grid(vp, settings, |c| classify_mandelbrot_point(c, settings.max_iter, band))
}

pub fn classify_julia(c: Complex64, vp: &Viewport, settings: &RenderSettings) -> Result<Vec<PixelClass>> {
    let band = settings.boundary_band * vp.pixel_size();
    classify_grid(vp, settings, |z| classify_julia_point(c, z, settings.max_iter, band))
}

/// Decorated-set classification; decorations are `decoration_thickness`
/// pixels wide.
pub fn classify_decorated(model: &DecorationModel<f64>, vp: &Viewport, settings: &RenderSettings) -> Result<Vec<PixelClass>> {
    let pixel = vp.pixel_size();
    let band = settings.boundary_band * pixel;
    let thickness = settings.decoration_thickness * pixel;
    classify_grid(vp, settings, |c| {
        let cls = model.classify(c, settings.max_iter, Some(thickness));
        match cls.verdict.kind {
            MembershipKind::InM => PixelClass::Interior,
            MembershipKind::OnDecoration(m) => PixelClass::Decoration(m),
            MembershipKind::Outside => match cls.distance {
                Some(d) if d < band => PixelClass::Boundary,
                _ => PixelClass::Exterior(cls.verdict.witness_potential),
            },
        }
    })
}

const INTERIOR_RGB: [u8; 3] = [0, 0, 0];
const BOUNDARY_RGB: [u8; 3] = [24, 24, 40];
/// Decoration colors by level, repeating past the end.
pub const LEVEL_PALETTE: [[u8; 3]; 8] = [
    [230, 40, 40],
    [250, 160, 20],
    [240, 230, 40],
    [60, 200, 70],
    [30, 190, 220],
    [60, 90, 240],
    [170, 70, 230],
    [240, 90, 190],
];

/// Color of a pixel class.
pub fn class_color(class: PixelClass) -> [u8; 3] {
    match class {
        PixelClass::Interior => INTERIOR_RGB,
        PixelClass::Boundary => BOUNDARY_RGB,
        PixelClass::Decoration(m) => LEVEL_PALETTE[m as usize % LEVEL_PALETTE.len()],
        PixelClass::Exterior(g) => {
            // Smooth bands in log2 of the potential, pale toward the set.
            let t = -g.max(1e-300).log2();
            let phase = (t * 0.35).rem_euclid(1.0);
            let shade = |offset: f64| {
                let v = 0.5 + 0.5 * (std::f64::consts::TAU * (phase + offset)).cos();
                (120.0 + 110.0 * v) as u8
            };
            [shade(0.0), shade(0.1), shade(0.2)]
        }
    }
}

pub fn colorize(vp: &Viewport, classes: &[PixelClass]) -> Raster {
    let mut raster = Raster::new(vp.pixels_x, vp.pixels_y);
    for (px, class) in raster.pixels.chunks_mut(3).zip(classes) {
        px.copy_from_slice(&class_color(*class));
    }
    raster
}

pub fn render_mandelbrot(vp: &Viewport, settings: &RenderSettings) -> Result<Raster> {
    Ok(colorize(vp, &classify_mandelbrot(vp, settings)?))
}

pub fn render_julia(c: Complex64, vp: &Viewport, settings: &RenderSettings) -> Result<Raster> {
    Ok(colorize(vp, &classify_julia(c, vp, settings)?))
}

pub fn render_decorated(model: &DecorationModel<f64>, vp: &Viewport, settings: &RenderSettings) -> Result<Raster> {
    Ok(colorize(vp, &classify_decorated(model, vp, settings)?))
}

/// Boundary pixels whose centers lie within `radius` of `center`.
pub fn boundary_pixels_within(vp: &Viewport, classes: &[PixelClass], center: Complex64, radius: f64) -> usize {
    (0..vp.pixels_y)
        .flat_map(|y| (0..vp.pixels_x).map(move |x| (x, y)))
        .zip(classes)
        .filter(|((x, y), class)| {
            **class == PixelClass::Boundary && (vp.pixel_center(*x, *y) - center).norm() <= radius
        })
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
        match ext.as_str() {
            "ppm" => Ok(Self::Ppm),
            "png" => Ok(Self::Png),
            _ => Err(Error::invalid(format!("unsupported image format for {}", path.display()))),
        }
    }
}

/// Binary PPM: `P6\n<w> <h>\n255\n` followed by the RGB bytes.
pub fn encode_ppm(raster: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", raster.width, raster.height).into_bytes();
    out.extend_from_slice(&raster.pixels);
    out
}

pub fn write_image(raster: &Raster, path: &Path, format: ImageFormat) -> Result<()> {
    if raster.pixels.len() != 3 * raster.width * raster.height {
        return Err(Error::invalid("raster length does not match its size"));
    }
    match format {
        ImageFormat::Ppm => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            w.write_all(&encode_ppm(raster)).map_err(|e| Error::io(path, e))?;
            w.flush().map_err(|e| Error::io(path, e))
        }
        ImageFormat::Png => {
            let img = image::RgbImage::from_raw(raster.width as u32, raster.height as u32, raster.pixels.clone())
                .ok_or_else(|| Error::invalid("raster length does not match its size"))?;
            img.save_with_format(path, image::ImageFormat::Png).map_err(|e| match e {
                image::ImageError::IoError(io) => Error::io(path, io),
                other => Error::Format {
                    path: path.to_path_buf(),
                    message: other.to_string(),
                },
            })
        }
    }
}

/// Reads a binary PPM with maxval 255.
pub fn read_ppm(path: &Path) -> Result<Raster> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?)
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path, e))?;
    decode_ppm(&bytes).map_err(|message| Error::Format {
        path: path.to_path_buf(),
        message,
    })
}

fn decode_ppm(bytes: &[u8]) -> std::result::Result<Raster, String> {
    let mut pos = 0;
    let mut token = || -> std::result::Result<String, String> {
        while pos < bytes.len() {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else if bytes[pos].is_ascii_whitespace() {
                pos += 1;
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if token()? != "P6" {
        return Err("not a binary PPM".into());
    }
    let mut number = || -> std::result::Result<usize, String> { token()?.parse().map_err(|_| "bad header number".to_string()) };
    let (width, height, maxval) = (number()?, number()?, number()?);
    if maxval != 255 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    let data = &bytes[pos + 1..];
    if data.len() != 3 * width * height {
        return Err(format!("expected {} pixel bytes, found {}", 3 * width * height, data.len()));
    }
    Ok(Raster {
        width,
        height,
        pixels: data.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn settings(workers: usize) -> RenderSettings {
        RenderSettings {
            workers: Some(workers),
            max_iter: 500,
            ..RenderSettings::default()
        }
    }

    #[test]
    fn viewport_validation() {
        assert!(Viewport::new(c64(0.0, 0.0), 4.0, 10, 10).is_ok());
        assert!(Viewport::new(c64(0.0, 0.0), 0.0, 10, 10).is_err());
        assert!(Viewport::new(c64(0.0, 0.0), 4.0, 0, 10).is_err());
        let err = Viewport::new(c64(-0.75, 0.1), 1e-11, 1000, 1000).unwrap_err();
        assert!(matches!(err, Error::PrecisionCap { .. }));
        let vp = Viewport::new(c64(1.0, 1.0), 2.0, 2, 2).unwrap();
        assert_eq!(vp.pixel_center(0, 0), c64(0.5, 1.5));
        assert_eq!(vp.pixel_center(1, 1), c64(1.5, 0.5));
    }

    #[test]
    fn origin_is_interior() {
        let vp = Viewport::new(c64(0.0, 0.0), 4.0, 101, 101).unwrap();
        let classes = classify_mandelbrot(&vp, &settings(1)).unwrap();
        assert_eq!(classes[50 * 101 + 50], PixelClass::Interior);
        let raster = render_mandelbrot(&vp, &settings(1)).unwrap();
        assert_eq!(raster.get(50, 50), INTERIOR_RGB);
        assert_eq!(raster.pixels.len(), 3 * 101 * 101);
    }

    #[test]
    fn worker_count_and_tile_size_do_not_change_bytes() {
        let vp = Viewport::new(c64(-0.5, 0.0), 3.0, 150, 97).unwrap();
        let a = render_mandelbrot(&vp, &settings(1)).unwrap();
        let b = render_mandelbrot(&vp, &settings(8)).unwrap();
        let c = render_mandelbrot(&vp, &RenderSettings { tile_size: 17, ..settings(3) }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn interior_pixels_do_not_escape() {
        let vp = Viewport::new(c64(-0.6, 0.3), 2.5, 120, 120).unwrap();
        let s = settings(2);
        let classes = classify_mandelbrot(&vp, &s).unwrap();
        for y in 0..vp.pixels_y {
            for x in 0..vp.pixels_x {
                let interior = classes[y * vp.pixels_x + x] == PixelClass::Interior;
                let c = vp.pixel_center(x, y);
                let esc = crate::dynamics::escape_time(c, c64(0.0, 0.0), s.max_iter, 4.0).escaped;
                assert_eq!(interior, !esc, "c = {c}");
            }
        }
    }

    #[test]
    fn boundary_near_window_center() {
        let vp = Viewport::new(c64(-1.25, -std::f64::consts::PI / 80.0), 0.02, 200, 200).unwrap();
        let counts = ClassCounts::tally(&classify_mandelbrot(&vp, &settings(2)).unwrap());
        assert!(counts.boundary > 0);
    }

    #[test]
    fn julia_examples() {
        let vp = Viewport::new(c64(0.0, 0.0), 4.0, 201, 201).unwrap();
        let s = settings(2);
        let disk = classify_julia(c64(0.0, 0.0), &vp, &s).unwrap();
        for y in 0..201 {
            for x in 0..201 {
                let z = vp.pixel_center(x, y);
                let class = disk[y * 201 + x];
                if class == PixelClass::Boundary {
                    assert!((z.norm() - 1.0).abs() < 0.03, "z = {z}");
                }
                if (z.norm() - 1.0).abs() > 0.03 {
                    assert_ne!(class, PixelClass::Boundary);
                }
            }
        }
        assert!(ClassCounts::tally(&disk).boundary > 100);

        // J(P_-2) = [-2, 2] has no interior; its own pixels never escape.
        let seg = classify_julia(c64(-2.0, 0.0), &vp, &s).unwrap();
        let mut on_set = 0;
        for y in 0..201 {
            for x in 0..201 {
                let z = vp.pixel_center(x, y);
                if matches!(seg[y * 201 + x], PixelClass::Boundary | PixelClass::Interior) {
                    assert!(z.im.abs() < 0.05 && z.re.abs() < 2.05, "z = {z}");
                    on_set += 1;
                }
            }
        }
        assert!(on_set > 90, "{on_set}");

        let dust = ClassCounts::tally(&classify_julia(c64(-0.77, 0.18), &vp, &s).unwrap());
        assert_eq!(dust.interior, 0);
        assert!(dust.boundary > 0);
    }

    #[test]
    fn decorated_render_levels_and_moduli() {
        let model = DecorationModel::new(c64(-0.77, 0.18), 1.1, 2000, 7, 1e-6).unwrap();
        let vp = Viewport::new(c64(0.0, 0.0), 48.0, 200, 200).unwrap();
        let s = settings(2);
        let classes = classify_decorated(&model, &vp, &s).unwrap();
        let counts = ClassCounts::tally(&classes);
        assert!(counts.interior > 0);
        assert!(counts.level(0) > 0 && counts.level(1) > 0 && counts.level(2) > 0, "{counts:?}");
        let r2 = model.r * model.r;
        for y in 0..vp.pixels_y {
            for x in 0..vp.pixels_x {
                if let PixelClass::Decoration(_) = classes[y * vp.pixels_x + x] {
                    let w = crate::boettcher::phi_m(vp.pixel_center(x, y)).unwrap();
                    assert!(w.norm() > 1.0 && w.norm() <= r2 * (1.0 + 1e-9));
                }
            }
        }
        let again = classify_decorated(&model, &vp, &settings(5)).unwrap();
        assert_eq!(colorize(&vp, &classes), colorize(&vp, &again));
    }

    #[test]
    fn ppm_is_bit_exact() {
        let raster = Raster {
            width: 1,
            height: 1,
            pixels: vec![255, 255, 255],
        };
        assert_eq!(encode_ppm(&raster), b"P6\n1 1\n255\n\xff\xff\xff".to_vec());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("white.ppm");
        write_image(&raster, &path, ImageFormat::Ppm).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 14);
        assert_eq!(read_ppm(&path).unwrap(), raster);
    }

    #[test]
    fn image_roundtrips_and_format_errors() {
        let vp = Viewport::new(c64(-0.5, 0.0), 3.0, 40, 30).unwrap();
        let raster = render_mandelbrot(&vp, &settings(1)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let ppm = dir.path().join("m.ppm");
        write_image(&raster, &ppm, ImageFormat::from_path(&ppm).unwrap()).unwrap();
        assert_eq!(read_ppm(&ppm).unwrap(), raster);
        let png = dir.path().join("m.png");
        write_image(&raster, &png, ImageFormat::from_path(&png).unwrap()).unwrap();
        let back = image::open(&png).unwrap().to_rgb8();
        assert_eq!(back.into_raw(), raster.pixels);
        assert!(ImageFormat::from_path(Path::new("x.bmp")).is_err());
        let err = write_image(&raster, Path::new("/nonexistent-dir/m.ppm"), ImageFormat::Ppm).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/m.ppm"));
    }
}
