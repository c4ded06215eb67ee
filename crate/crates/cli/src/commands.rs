//! Subcommand arguments and handlers.
//!
//! Every argument struct doubles as the schema of the flat config file: the
//! keys are the flag names with underscores.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use mandeldecor::atlas::{expected_slope, find_center_sequence, fit_center_law, read_center_csv, write_center_csv};
use mandeldecor::parabolic::{
    default_entry, default_exit, detect_parabolic_data, find_parabolic_data, gate_transit_count, predict_window_center,
    TransitRow,
};
use mandeldecor::render::{
    boundary_pixels_within, classify_decorated, classify_julia, classify_mandelbrot, colorize, write_image, ClassCounts,
    ImageFormat, PixelClass, RenderSettings, Viewport,
};
use mandeldecor::{format_complex, CenterRecord, ComplexValue, DecorationModel, SectorConstants};
use serde::{Deserialize, Serialize};

use crate::config::{complex, echo, merge, positive, range, reals, require};

macro_rules! or_default {
    ($args:ident . $field:ident, $value:expr) => {
        if $args.$field.is_none() {
            $args.$field = Some($value);
        }
    };
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn settings(max_iter: usize, threads: Option<usize>, band: f64, thickness: f64) -> RenderSettings {
    RenderSettings {
        max_iter,
        workers: threads,
        boundary_band: band,
        decoration_thickness: thickness,
        ..RenderSettings::default()
    }
}

fn save(classes: &[PixelClass], vp: &Viewport, out: &Path) -> Result<()> {
    let format = ImageFormat::from_path(out)?;
    write_image(&colorize(vp, classes), out, format)?;
    Ok(())
}

fn report_counts(counts: &ClassCounts) {
    eprintln!(
        "pixels: interior {} boundary {} exterior {} decoration levels {:?}",
        counts.interior, counts.boundary, counts.exterior, counts.levels
    );
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderMandelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub pixels_x: Option<usize>,
    #[arg(long)]
    pub pixels_y: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Boundary band width in pixels.
    #[arg(long)]
    pub band: Option<f64>,
    /// Worker threads (default: MANDELDECOR_THREADS or all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn render_mandel(flags: &RenderMandelArgs, file: Option<&Path>) -> Result<()> {
    let mut a = merge(flags, file)?;
    or_default!(a.center, "-0.5+0i".into());
    or_default!(a.width, 3.0);
    or_default!(a.pixels_x, 800);
    or_default!(a.pixels_y, a.pixels_x.unwrap());
    or_default!(a.max_iter, 1000);
    or_default!(a.band, 0.5);
    let out = require("out", &a.out)?.clone();
    let vp = Viewport::new(
        complex("center", a.center.as_ref().unwrap())?,
        positive("width", a.width.unwrap())?,
        a.pixels_x.unwrap(),
        a.pixels_y.unwrap(),
    )?;
    ImageFormat::from_path(&out)?;
    echo("render-mandel", &a)?;
    let s = settings(a.max_iter.unwrap(), a.threads, a.band.unwrap(), 0.5);
    let classes = classify_mandelbrot(&vp, &s)?;
    report_counts(&ClassCounts::tally(&classes));
    save(&classes, &vp, &out)
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderJuliaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub pixels_x: Option<usize>,
    #[arg(long)]
    pub pixels_y: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub band: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn render_julia(flags: &RenderJuliaArgs, file: Option<&Path>) -> Result<()> {
    let mut a = merge(flags, file)?;
    let c = complex("c", require("c", &a.c)?)?;
    or_default!(a.center, "0+0i".into());
    or_default!(a.width, 4.0);
    or_default!(a.pixels_x, 800);
    or_default!(a.pixels_y, a.pixels_x.unwrap());
    or_default!(a.max_iter, 1000);
    or_default!(a.band, 0.5);
    let out = require("out", &a.out)?.clone();
    let vp = Viewport::new(
        complex("center", a.center.as_ref().unwrap())?,
        positive("width", a.width.unwrap())?,
        a.pixels_x.unwrap(),
        a.pixels_y.unwrap(),
    )?;
    ImageFormat::from_path(&out)?;
    echo("render-julia", &a)?;
    let s = settings(a.max_iter.unwrap(), a.threads, a.band.unwrap(), 0.5);
    let classes = classify_julia(c, &vp, &s)?;
    report_counts(&ClassCounts::tally(&classes));
    save(&classes, &vp, &out)
}

/// Settings that define a decoration model.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderDecoratedArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Containment margin for R (> 1).
    #[arg(long)]
    pub margin: Option<f64>,
    /// Explicit R instead of the sampled choice.
    #[arg(long)]
    pub r: Option<f64>,
    /// Julia sample size.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub proximity_tol: Option<f64>,
    /// Load the model from a TOML file instead.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Write the model used to a TOML file.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Viewport width; default 2.5 R.
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub pixels_x: Option<usize>,
    #[arg(long)]
    pub pixels_y: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub band: Option<f64>,
    /// Decoration half-width in pixels.
    #[arg(long)]
    pub thickness: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn model_defaults(a: &mut RenderDecoratedArgs) {
    or_default!(a.sigma, "-0.77+0.18i".into());
    or_default!(a.margin, 1.1);
    or_default!(a.samples, 10_000);
    or_default!(a.seed, 0);
    or_default!(a.proximity_tol, 1e-3);
}

fn build_model(a: &RenderDecoratedArgs) -> Result<DecorationModel> {
    if let Some(path) = &a.model {
        return Ok(DecorationModel::load(path)?);
    }
    let sigma = complex("sigma", a.sigma.as_ref().unwrap())?;
    let (samples, seed, tol) = (a.samples.unwrap(), a.seed.unwrap(), a.proximity_tol.unwrap());
    let model = match a.r {
        Some(r) => DecorationModel::with_radius(sigma, r, samples, seed, tol, mandeldecor::decoration::DEFAULT_M_MAX)?,
        None => DecorationModel::new(sigma, a.margin.unwrap(), samples, seed, tol)?,
    };
    Ok(model)
}

pub fn render_decorated(flags: &RenderDecoratedArgs, file: Option<&Path>) -> Result<()> {
    let mut a = merge(flags, file)?;
    model_defaults(&mut a);
    let model = build_model(&a)?;
    or_default!(a.center, "0+0i".into());
    or_default!(a.width, 2.5 * model.r);
    or_default!(a.pixels_x, 1000);
    or_default!(a.pixels_y, a.pixels_x.unwrap());
    or_default!(a.max_iter, 1000);
    or_default!(a.band, 0.5);
    or_default!(a.thickness, 0.5);
    let out = require("out", &a.out)?.clone();
    let vp = Viewport::new(
        complex("center", a.center.as_ref().unwrap())?,
        positive("width", a.width.unwrap())?,
        a.pixels_x.unwrap(),
        a.pixels_y.unwrap(),
    )?;
    ImageFormat::from_path(&out)?;
    echo("render-decorated", &a)?;
    eprintln!("# model\n{}", model.to_toml());
    if let Some(path) = &a.model_out {
        model.save(path)?;
    }
    let s = settings(a.max_iter.unwrap(), a.threads, a.band.unwrap(), a.thickness.unwrap());
    let classes = classify_decorated(&model, &vp, &s)?;
    report_counts(&ClassCounts::tally(&classes));
    save(&classes, &vp, &out)
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZoomCopyArgs {
    /// Explicit zoom center.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Center CSV from find-centers; used with --n.
    #[arg(long)]
    pub centers: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Parabolic parameter; sets the default width from the window radius.
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long)]
    pub width: Option<f64>,
    /// Render M only, without decorations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub plain: Option<bool>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub pixels_x: Option<usize>,
    #[arg(long)]
    pub pixels_y: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub band: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Zoom width `2 |s - c1|^{5/4}`, the diameter of the guard disk.
fn window_width(s: ComplexValue, c1: ComplexValue) -> f64 {
    2.0 * (s - c1).norm().powf(mandeldecor::parabolic::GUARD_EXPONENT)
}

pub fn zoom_copy(flags: &ZoomCopyArgs, file: Option<&Path>) -> Result<()> {
    let mut a = merge(flags, file)?;
    let center = match (&a.center, &a.centers) {
        (Some(c), _) => complex("center", c)?,
        (None, Some(path)) => {
            let n = *require("n", &a.n)?;
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let records = read_center_csv(f)?;
            let rec = records
                .iter()
                .find(|r| r.n == n)
                .ok_or_else(|| anyhow!("no record with n = {n} in {}", path.display()))?;
            a.center = Some(format_complex(rec.value));
            rec.value
        }
        (None, None) => bail!("zoom-copy needs --center or --centers with --n"),
    };
    if a.width.is_none() {
        let c1 = complex("c1", require("c1 (or --width)", &a.c1)?)?;
        a.width = Some(window_width(center, c1));
    }
    or_default!(a.plain, false);
    or_default!(a.sigma, "-0.77+0.18i".into());
    or_default!(a.margin, 1.1);
    or_default!(a.samples, 10_000);
    or_default!(a.seed, 0);
    or_default!(a.pixels_x, 500);
    or_default!(a.pixels_y, a.pixels_x.unwrap());
    or_default!(a.max_iter, 5000);
    or_default!(a.band, 0.5);
    let out = require("out", &a.out)?.clone();
    let vp = Viewport::new(center, positive("width", a.width.unwrap())?, a.pixels_x.unwrap(), a.pixels_y.unwrap())?;
    ImageFormat::from_path(&out)?;
    echo("zoom-copy", &a)?;
    let s = settings(a.max_iter.unwrap(), a.threads, a.band.unwrap(), 0.5);
    let classes = if a.plain.unwrap() {
        classify_mandelbrot(&vp, &s)?
    } else {
        let sigma = complex("sigma", a.sigma.as_ref().unwrap())?;
        let model = DecorationModel::new(sigma, a.margin.unwrap(), a.samples.unwrap(), a.seed.unwrap(), 1e-3)?;
        classify_decorated(&model, &vp, &s)?
    };
    report_counts(&ClassCounts::tally(&classes));
    let inside = boundary_pixels_within(&vp, &classes, center, a.width.unwrap() / 2.0);
    eprintln!("boundary pixels within the window radius: {inside}");
    save(&classes, &vp, &out)
}

/// Parabolic data from `--constants`, or detected at `--c1`/`--p`.
fn load_or_fit_constants(constants: &Option<PathBuf>, c1: &Option<String>, p: Option<usize>, q: &Option<String>) -> Result<SectorConstants> {
    if let Some(path) = constants {
        let s = SectorConstants::load(path)?;
        if !s.is_complete() {
            bail!("{} lacks the fitted A0/B0", path.display());
        }
        return Ok(s);
    }
    let c1 = complex("c1", require("c1", c1)?)?;
    let p = *require("p", &p)?;
    let detected = match q {
        Some(q) => detect_parabolic_data(c1, p, complex("q", q)?)?,
        None => find_parabolic_data(c1, p)?,
    };
    Ok(detected.completed()?.0)
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConstantsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    /// Seed near the parabolic cycle point; searched for when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Sector radius in multiplier space.
    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn fit_constants(flags: &FitConstantsArgs, file: Option<&Path>) -> Result<()> {
    let a = merge(flags, file)?;
    let c1 = complex("c1", require("c1", &a.c1)?)?;
    let p = *require("p", &a.p)?;
    echo("fit-constants", &a)?;
    let detected = match &a.q {
        Some(q) => detect_parabolic_data(c1, p, complex("q", q)?)?,
        None => find_parabolic_data(c1, p)?,
    };
    let (mut constants, fit) = detected.completed()?;
    if let Some(r0) = a.r0 {
        constants.r0 = positive("r0", r0)?;
    }
    eprintln!("fit residual {:e}", fit.residual);
    let mut w = out_writer(&a.out)?;
    w.write_all(constants.to_toml().as_bytes())?;
    w.flush()?;
    Ok(())
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FindCentersArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Sector constants file from fit-constants.
    #[arg(long)]
    pub constants: Option<PathBuf>,
    /// Window indices, e.g. 5..20.
    #[arg(long)]
    pub n_range: Option<String>,
    /// Candidate periods, e.g. 10..120.
    #[arg(long)]
    pub periods: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let workers = mandeldecor::render::resolve_workers(&RenderSettings {
        workers: threads,
        ..RenderSettings::default()
    });
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(f))
}

pub fn find_centers(flags: &FindCentersArgs, file: Option<&Path>) -> Result<()> {
    let mut a = merge(flags, file)?;
    or_default!(a.n_range, "5..20".into());
    or_default!(a.periods, "10..120".into());
    or_default!(a.tol, 1e-10);
    let n_range = range("n_range", a.n_range.as_ref().unwrap())?;
    let periods = range("periods", a.periods.as_ref().unwrap())?;
    let tol = positive("tol", a.tol.unwrap())?;
    echo("find-centers", &a)?;
    let constants = load_or_fit_constants(&a.constants, &a.c1, a.p, &a.q)?;
    let records = with_threads(a.threads, || find_center_sequence(&constants, n_range, periods, tol))??;
    eprintln!("{} records", records.len());
    write_center_csv(out_writer(&a.out)?, &records)?;
    Ok(())
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseLawArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    /// P-iterates per counted step.
    #[arg(long)]
    pub p: Option<usize>,
    /// Comma-separated offsets eps; c = c1 + eps.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn phase_law(flags: &PhaseLawArgs, file: Option<&Path>) -> Result<()> {
    let mut a = merge(flags, file)?;
    or_default!(a.c1, "0.25".into());
    or_default!(a.p, 1);
    or_default!(a.eps, "1e-2,1e-4,1e-6".into());
    or_default!(a.max_iter, 10_000_000);
    let c1 = complex("c1", a.c1.as_ref().unwrap())?;
    let eps = reals("eps", a.eps.as_ref().unwrap())?;
    for e in &eps {
        positive("eps", *e)?;
    }
    echo("phase-law", &a)?;
    let mut rows = Vec::new();
    for e in eps {
        let transit = gate_transit_count(c1 + e, a.p.unwrap(), default_entry, default_exit, a.max_iter.unwrap())?;
        rows.push(TransitRow {
            eps: e,
            transit,
            transit_sqrt_eps: transit as f64 * e.sqrt(),
        });
    }
    mandeldecor::parabolic::write_transit_csv(out_writer(&a.out)?, &rows)?;
    Ok(())
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CenterLawArgs {
    /// Center CSV from find-centers.
    #[arg(long)]
    pub centers: Option<PathBuf>,
    #[arg(long)]
    pub constants: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CenterLawReport {
    records: usize,
    slope: [f64; 2],
    intercept: [f64; 2],
    max_relative_residual: f64,
    expected_slope: [f64; 2],
    slope_relative_error: f64,
}

pub fn center_law(flags: &CenterLawArgs, file: Option<&Path>) -> Result<()> {
    let a = merge(flags, file)?;
    let path = require("centers", &a.centers)?;
    echo("center-law", &a)?;
    let constants = load_or_fit_constants(&a.constants, &a.c1, a.p, &a.q)?;
    let records: Vec<CenterRecord> = read_center_csv(File::open(path).with_context(|| format!("opening {}", path.display()))?)?;
    let fit = fit_center_law(&constants, &records)?;
    let expect = expected_slope(&constants)?;
    let report = CenterLawReport {
        records: records.len(),
        slope: [fit.slope.re, fit.slope.im],
        intercept: [fit.intercept.re, fit.intercept.im],
        max_relative_residual: fit.max_relative_residual,
        expected_slope: [expect.re, expect.im],
        slope_relative_error: (fit.slope - expect).norm() / expect.norm(),
    };
    let mut w = out_writer(&a.out)?;
    w.write_all(toml::to_string(&report)?.as_bytes())?;
    w.flush()?;
    Ok(())
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Figure1Args {
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pixels per side of panel (i).
    #[arg(long)]
    pub pixels: Option<usize>,
    /// Pixels per side of panels (ii) and (iii).
    #[arg(long)]
    pub panel_pixels: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub satellite_c1: Option<String>,
    #[arg(long)]
    pub satellite_p: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub primitive_c1: Option<String>,
    #[arg(long)]
    pub primitive_p: Option<usize>,
    /// Window index of the zoomed copies.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

pub fn figure1(flags: &Figure1Args, file: Option<&Path>) -> Result<()> {
    let mut a = merge(flags, file)?;
    or_default!(a.sigma, "-0.77+0.18i".into());
    or_default!(a.margin, 1.1);
    or_default!(a.samples, 10_000);
    or_default!(a.seed, 0);
    or_default!(a.pixels, 1000);
    or_default!(a.panel_pixels, 500);
    or_default!(a.max_iter, 2000);
    or_default!(a.satellite_c1, "-1.25".into());
    or_default!(a.satellite_p, 2);
    or_default!(a.primitive_c1, "-1.75".into());
    or_default!(a.primitive_p, 3);
    or_default!(a.n, 8);
    let dir = require("out_dir", &a.out_dir)?.clone();
    let sigma = complex("sigma", a.sigma.as_ref().unwrap())?;
    let n = *a.n.as_ref().unwrap();
    if n < 5 {
        bail!("n must be at least 5");
    }
    echo("figure1", &a)?;
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let model = DecorationModel::new(sigma, a.margin.unwrap(), a.samples.unwrap(), a.seed.unwrap(), 1e-3)?;
    model.save(&dir.join("model.toml"))?;
    let s = settings(a.max_iter.unwrap(), a.threads, 0.5, 0.5);
    let px = a.pixels.unwrap();
    let vp = Viewport::new(ComplexValue::new(0.0, 0.0), 2.5 * model.r, px, px)?;
    let classes = classify_decorated(&model, &vp, &s)?;
    eprint!("panel (i): ");
    report_counts(&ClassCounts::tally(&classes));
    save(&classes, &vp, &dir.join("fig1_i.ppm"))?;

    // Same scans as find-centers: n 5..20 over periods 10..120 at the
    // satellite, n 5..12 over 10..60 at the primitive cusp.
    let panels = [
        ("ii", a.satellite_c1.clone().unwrap(), a.satellite_p.unwrap(), 5..=20.max(n), 10..=120),
        ("iii", a.primitive_c1.clone().unwrap(), a.primitive_p.unwrap(), 5..=12.max(n), 10..=60),
    ];
    for (tag, c1, p, ns, periods) in panels {
        let constants = load_or_fit_constants(&None, &Some(c1.clone()), Some(p), &None)?;
        constants.save(&dir.join(format!("constants_{tag}.toml")))?;
        let records = with_threads(a.threads, || find_center_sequence(&constants, ns, periods, 1e-10))??;
        write_center_csv(File::create(dir.join(format!("centers_{tag}.csv")))?, &records)?;
        let rec = records
            .iter()
            .find(|r| r.n == n)
            .ok_or_else(|| anyhow!("panel ({tag}): no center found for n = {n} near c1 = {c1}"))?;
        let pred = predict_window_center(&constants, n)?;
        let width = 2.0 * pred.guard_radius();
        let pp = a.panel_pixels.unwrap();
        let zvp = Viewport::new(rec.value, width, pp, pp)?;
        let zs = settings(a.max_iter.unwrap().max(5000), a.threads, 0.5, 0.5);
        let zclasses = classify_decorated(&model, &zvp, &zs)?;
        let inside = boundary_pixels_within(&zvp, &zclasses, rec.value, pred.guard_radius());
        eprint!("panel ({tag}): s_{n} = {} period {}; ", format_complex(rec.value), rec.period);
        report_counts(&ClassCounts::tally(&zclasses));
        eprintln!("panel ({tag}): boundary pixels within the window radius: {inside}");
        save(&zclasses, &zvp, &dir.join(format!("fig1_{tag}.ppm")))?;
    }
    Ok(())
}
