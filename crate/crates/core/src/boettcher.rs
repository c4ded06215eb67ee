//! Green's functions and Boettcher coordinates for quadratic Julia sets and
//! for the complement of the Mandelbrot set.
//!
//! `phi_c` (the Boettcher map of `P_c`) is evaluated exactly on the region
//! `|z| >= r_safe(c)` by the product formula, where every factor
//! `1 + c / z_j^2` has positive real part. Closer to the filled Julia set the
//! value is obtained by taking square roots back along the orbit.
//!
//! `Phi_M(c) = phi_c(c)` needs a branch that is continuous in `c` on the
//! whole complement of `M`. The principal-branch product formula is wrong by
//! a root of unity inside some fjords, so [`phi_m`] walks up the gradient of
//! `G_M` to the region `|c| >= 2` (where the product formula is exact) and
//! selects the square-root branch by continuity on the way back.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dynamics::escape_time;
use crate::error::{Error, Result};
use crate::scalar::{is_finite, to_c64, Real};

/// Default iteration budget for escape and potential computations.
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Smallest `G_M` accepted by [`phi_m`].
pub const POTENTIAL_FLOOR: f64 = 1e-5;
/// Orbits are followed until `|z|` exceeds this before reading off `G`.
const BAILOUT: f64 = 1e8;
/// Step along the gradient path, as a fraction of the distance estimate.
const PATH_STEP_FRACTION: f64 = 0.2;
const MAX_PATH_STEPS: usize = 4000;

/// Green's function value with the Boettcher coordinate and gradient when
/// they are defined.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialResult<T> {
    pub green: T,
    pub boettcher: Option<Complex<T>>,
    /// Gradient of the potential written as a complex number.
    pub gradient: Option<Complex<T>>,
}

/// Radius beyond which the orbit of `P_c` increases monotonically and every
/// factor `1 + c/z^2` lies in the right half plane.
pub fn safe_radius<T: Real>(c: Complex<T>) -> T {
    let one = T::one();
    let four = T::lit(4.0);
    let r = (one + (one + four * c.norm()).sqrt()) / T::lit(2.0);
    r.max(T::lit(2.0)) * (one + T::lit(1e-9))
}

/// `log phi_c(z)` by the product formula. Only valid for `|z| >= safe_radius(c)`.
fn log_boettcher_tail<T: Real>(c: Complex<T>, z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let mut acc = z.ln();
    let mut weight = T::lit(0.5);
    let mut zj = z;
    let tiny = T::epsilon() * T::lit(0.01);
    for _ in 0..64 {
        let ratio = c / (zj * zj);
        acc = acc + (one + ratio).ln() * weight;
        if ratio.norm() * weight < tiny || zj.norm() > T::overflow_guard() {
            break;
        }
        weight = weight * T::lit(0.5);
        zj = zj * zj + c;
    }
    acc
}

/// `G_c(z) = lim 2^-n log|P_c^n(z)|`; zero when `z` does not escape within `max_iter`.
pub fn green_julia<T: Real>(c: Complex<T>, z: Complex<T>, max_iter: usize) -> T {
    let bail2 = T::lit(BAILOUT * BAILOUT);
    let mut zn = z;
    let mut scale = T::one();
    for _ in 0..=max_iter {
        let r2 = zn.norm_sqr();
        if r2 > bail2 {
            // One correction term of the product formula.
            let corr = (Complex::new(T::one(), T::zero()) + c / (zn * zn)).norm().ln() * T::lit(0.5);
            return (r2.ln() * T::lit(0.5) + corr) * scale;
        }
        zn = zn * zn + c;
        scale = scale * T::lit(0.5);
    }
    T::zero()
}

/// `G_M(c) = G_c(c)` with the default iteration budget.
pub fn green_m<T: Real>(c: Complex<T>) -> T {
    green_m_with(c, DEFAULT_MAX_ITER)
}

pub fn green_m_with<T: Real>(c: Complex<T>, max_iter: usize) -> T {
    green_julia(c, c, max_iter)
}

/// Escaping orbit data: potential and the complex gradient `d/dz log phi`.
struct Escaped<T> {
    green: T,
    /// `d/dz0 log P^n(z0) / 2^n` at bailout (for `z`) or `d/dc` (for parameters).
    log_derivative: Complex<T>,
}

fn escape_with_log_derivative<T: Real>(
    c: Complex<T>,
    z0: Complex<T>,
    parameter: bool,
    max_iter: usize,
) -> Option<Escaped<T>> {
    let two = T::lit(2.0);
    let bail2 = T::lit(BAILOUT * BAILOUT);
    let mut z = z0;
    // z_0 = z0 (or c), so both derivatives start at 1.
    let mut d = Complex::new(T::one(), T::zero());
    let mut scale = T::one();
    for _ in 0..=max_iter {
        if z.norm_sqr() > bail2 {
            let green = z.norm().ln() * scale;
            let log_derivative = d / z * scale;
            return Some(Escaped { green, log_derivative });
        }
        d = if parameter { d * z * two + T::one() } else { d * z * two };
        z = z * z + c;
        scale = scale * T::lit(0.5);
    }
    None
}

/// Distance estimate `G / |grad G|` from `z` to `J(P_c)`.
///
/// The true distance lies within a factor 2 of this value for small
/// potentials (Koebe quarter theorem); the contract only promises a factor 4.
pub fn julia_distance_estimate<T: Real>(c: Complex<T>, z: Complex<T>) -> Result<T> {
    julia_distance_estimate_with(c, z, DEFAULT_MAX_ITER)
}

pub fn julia_distance_estimate_with<T: Real>(c: Complex<T>, z: Complex<T>, max_iter: usize) -> Result<T> {
    match escape_with_log_derivative(c, z, false, max_iter) {
        Some(e) if e.log_derivative.norm() > T::zero() => Ok(e.green / e.log_derivative.norm()),
        Some(_) => Ok(T::infinity()),
        None => Err(Error::invalid(format!(
            "z = {} does not escape under P_c, c = {}",
            to_c64(z),
            to_c64(c)
        ))),
    }
}

/// Boettcher coordinate `phi_c(z)` for a point with `G_c(z) > G_c(0)`.
///
/// Square roots are taken back from the first orbit point beyond
/// [`safe_radius`]; each root is the one on the same side as the orbit point
/// it represents. The choice is exact once the orbit is away from the
/// critical point, which is the case for every caller in this crate.
pub fn boettcher_julia<T: Real>(c: Complex<T>, z: Complex<T>, max_iter: usize) -> Result<Complex<T>> {
    let r_safe = safe_radius(c);
    let mut orbit = vec![z];
    let mut zn = z;
    while zn.norm() < r_safe {
        if orbit.len() > max_iter {
            return Err(Error::invalid(format!(
                "z = {} does not escape under P_c, c = {}",
                to_c64(z),
                to_c64(c)
            )));
        }
        zn = zn * zn + c;
        orbit.push(zn);
    }
    let mut log_w = log_boettcher_tail(c, zn);
    for zj in orbit.iter().rev().skip(1) {
        let half = log_w * T::lit(0.5);
        let w = half.exp();
        // Candidates w and -w; keep the one aligned with the orbit point.
        log_w = if (w * zj.conj()).re >= T::zero() {
            half
        } else {
            half + Complex::new(T::zero(), T::PI())
        };
    }
    Ok(log_w.exp())
}

/// Green's function, Boettcher coordinate and gradient of `G_c` at `z`.
pub fn potential_julia<T: Real>(c: Complex<T>, z: Complex<T>, max_iter: usize) -> PotentialResult<T> {
    let Some(e) = escape_with_log_derivative(c, z, false, max_iter) else {
        return PotentialResult {
            green: T::zero(),
            boettcher: None,
            gradient: None,
        };
    };
    let g0 = green_julia(c, Complex::new(T::zero(), T::zero()), max_iter);
    // Branch-safety: phi_c is defined where G exceeds G(0); keep a margin.
    let boettcher = if e.green > g0 * T::lit(1.5) {
        boettcher_julia(c, z, max_iter).ok()
    } else {
        None
    };
    PotentialResult {
        green: e.green,
        boettcher,
        gradient: Some(e.log_derivative.conj()),
    }
}

/// `G_M`, `Phi_M` (when above the potential floor) and the gradient of `G_M`.
pub fn potential_m<T: Real>(c: Complex<T>) -> PotentialResult<T> {
    let Some(e) = escape_with_log_derivative(c, c, true, DEFAULT_MAX_ITER) else {
        return PotentialResult {
            green: T::zero(),
            boettcher: None,
            gradient: None,
        };
    };
    PotentialResult {
        green: e.green,
        boettcher: phi_m(c).ok(),
        gradient: Some(e.log_derivative.conj()),
    }
}

/// Point on the gradient path of `G_M`.
struct PathNode<T> {
    /// First index with `|z_n| >= safe_radius(c)` along `z_0 = c`.
    safe_index: u32,
    /// `log phi_c(z_{safe_index})`, exact.
    log_tail: Complex<T>,
}

fn probe_parameter<T: Real>(c: Complex<T>, max_iter: usize) -> Option<(PathNode<T>, Escaped<T>)> {
    let r_safe = safe_radius(c);
    let mut z = c;
    let mut n = 0u32;
    while z.norm() < r_safe {
        if n as usize > max_iter {
            return None;
        }
        z = z * z + c;
        n += 1;
    }
    let node = PathNode {
        safe_index: n,
        log_tail: log_boettcher_tail(c, z),
    };
    let esc = escape_with_log_derivative(c, c, true, max_iter)?;
    Some((node, esc))
}

/// `log Phi_M(c)` by gradient-path continuation. Returns the log and the
/// largest relative branch-selection mismatch seen on the way back.
fn log_phi_m_path<T: Real>(c: Complex<T>, step_fraction: T) -> Result<(Complex<T>, T)> {
    let mut nodes = Vec::new();
    let mut cc = c;
    loop {
        let Some((node, esc)) = probe_parameter(cc, DEFAULT_MAX_ITER) else {
            return Err(Error::InsideSet {
                c: to_c64(cc),
                max_iter: DEFAULT_MAX_ITER,
            });
        };
        let done = node.safe_index == 0;
        nodes.push(node);
        if done {
            break;
        }
        if nodes.len() > MAX_PATH_STEPS {
            return Err(Error::NoConvergence {
                solver: "gradient path",
                steps: nodes.len(),
                residual: esc.green.as_f64(),
            });
        }
        let grad = esc.log_derivative.conj();
        let gnorm = grad.norm();
        if !(gnorm > T::zero()) || !is_finite(grad) {
            return Err(Error::Diverged {
                solver: "gradient path",
                step: nodes.len(),
            });
        }
        let de = esc.green / gnorm;
        cc = cc + grad / gnorm * (de * step_fraction);
    }
    let mut nodes = nodes.into_iter().rev();
    let mut log_w = nodes.next().expect("path has an end").log_tail;
    let mut worst = T::zero();
    let two_pi = T::PI() * T::lit(2.0);
    for node in nodes {
        let scale = T::lit(0.5).powi(node.safe_index as i32);
        let base = node.log_tail * scale;
        let spacing = two_pi * scale;
        let k = ((log_w.im - base.im) / spacing).round();
        let im = base.im + k * spacing;
        worst = worst.max(((log_w.im - im) / spacing).abs());
        log_w = Complex::new(base.re, im);
    }
    Ok((log_w, worst))
}

/// Boettcher coordinate of the Mandelbrot set, `Phi_M(c) = phi_c(c)`.
pub fn phi_m<T: Real>(c: Complex<T>) -> Result<Complex<T>> {
    log_phi_m(c).map(|l| l.exp())
}

/// `log Phi_M(c)`; the real part is `G_M(c)`.
pub fn log_phi_m<T: Real>(c: Complex<T>) -> Result<Complex<T>> {
    let floor = T::lit(POTENTIAL_FLOOR);
    if !escape_time(c, c, DEFAULT_MAX_ITER, T::lit(2.0)).escaped {
        return Err(Error::InsideSet {
            c: to_c64(c),
            max_iter: DEFAULT_MAX_ITER,
        });
    }
    let g = green_m(c);
    if g < floor {
        return Err(Error::PotentialTooSmall {
            c: to_c64(c),
            potential: g.as_f64(),
            floor: POTENTIAL_FLOOR,
        });
    }
    let mut fraction = T::lit(PATH_STEP_FRACTION);
    let mut last = None;
    for _ in 0..4 {
        let (log_w, worst) = log_phi_m_path(c, fraction)?;
        if worst < T::lit(0.25) {
            return Ok(log_w);
        }
        last = Some(log_w);
        fraction = fraction * T::lit(0.5);
    }
    Ok(last.expect("at least one attempt"))
}

fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::PI() * T::lit(2.0);
    a - two_pi * ((a + T::PI()) / two_pi).floor()
}

/// Newton on `log Phi_M(c) = log w`. The derivative of `log Phi_M` is the
/// limit of `(dz_n/dc) / (2^n z_n)`, read off the escaping orbit.
fn newton_inverse<T: Real>(target: Complex<T>, seed: Complex<T>, tol: T, max_steps: usize) -> Option<Complex<T>> {
    let mut c = seed;
    for _ in 0..max_steps {
        let log_w = log_phi_m(c).ok()?;
        let resid = Complex::new(log_w.re - target.re, wrap_angle(log_w.im - target.im));
        if resid.norm() < tol * T::lit(0.1) {
            return Some(c);
        }
        let esc = escape_with_log_derivative(c, c, true, DEFAULT_MAX_ITER)?;
        let deriv = esc.log_derivative;
        if !(deriv.norm() > T::zero()) {
            return None;
        }
        let mut step = resid / deriv;
        // Never step further than half the distance estimate towards M.
        let limit = esc.green / deriv.norm() * T::lit(0.5);
        if step.norm() > limit {
            step = step * (limit / step.norm());
        }
        c = c - step;
    }
    let log_w = log_phi_m(c).ok()?;
    let resid = Complex::new(log_w.re - target.re, wrap_angle(log_w.im - target.im));
    (resid.norm() < tol).then_some(c)
}

/// Inverse of [`phi_m`]: the parameter `c` outside `M` with `Phi_M(c) = w`.
///
/// Newton is tried from `c = w` first, then along the external ray of
/// argument `arg w` (continuation from potential `max(log|w|, 2)` down),
/// then from a circle of 16 seeds.
pub fn phi_m_inverse<T: Real>(w: Complex<T>, tol: T) -> Result<Complex<T>> {
    let floor = T::one() + T::lit(1e-4);
    if !(w.norm() > floor) {
        return Err(Error::invalid(format!(
            "|w| = {} must exceed 1 + 1e-4",
            w.norm().as_f64()
        )));
    }
    let target = w.ln();
    // tol is on |Phi_M(c) - w|; Newton works on logs.
    let log_tol = tol / w.norm();
    let mut tried = 1;
    let accept = |c: Complex<T>| -> bool { phi_m(c).map(|v| (v - w).norm() < tol).unwrap_or(false) };
    if let Some(c) = newton_inverse(target, w, log_tol, 60) {
        if accept(c) {
            return Ok(c);
        }
    }

    // Ray continuation.
    tried += 1;
    let g_target = target.re;
    let mut g = g_target.max(T::lit(2.0));
    let mut c = Complex::new(g, target.im).exp();
    let ratio = T::lit(0.5).powf(T::lit(0.25));
    let mut ok = true;
    loop {
        let stage = Complex::new(g, target.im);
        let stage_tol = if g == g_target { log_tol } else { T::lit(1e-6) };
        match newton_inverse(stage, c, stage_tol, 60) {
            Some(next) => c = next,
            None => {
                ok = false;
                break;
            }
        }
        if g == g_target {
            break;
        }
        g = (g * ratio).max(g_target);
    }
    if ok && accept(c) {
        return Ok(c);
    }

    let two_pi = T::PI() * T::lit(2.0);
    let radius = T::one() + (w.norm() - T::one()) * T::lit(2.0);
    for k in 0..16 {
        tried += 1;
        let angle = two_pi * T::from_count(k) / T::lit(16.0);
        let seed = Complex::from_polar(radius.max(T::lit(2.0)), angle);
        if let Some(c) = newton_inverse(target, seed, log_tol, 80) {
            if accept(c) {
                return Ok(c);
            }
        }
    }
    Err(Error::InverseFailed {
        w: to_c64(w),
        seeds_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn green_julia_examples() {
        assert!((green_julia(c64(0.0, 0.0), c64(4.0, 0.0), 1000) - 4f64.ln()).abs() < 1e-12);
        assert_eq!(green_julia(c64(0.0, 0.0), c64(0.5, 0.0), 1000), 0.0);
        let c = c64(-0.77, 0.18);
        let z = c64(2.5, 0.0);
        let g = green_julia(c, z, 1000);
        assert!(g > 0.0);
        assert!((green_julia(c, z * z + c, 1000) - 2.0 * g).abs() < 1e-9);
    }

    #[test]
    fn green_julia_grows_with_modulus() {
        let c = c64(-0.77, 0.18);
        let mut prev = 0.0;
        for r in [3.0, 5.0, 10.0, 100.0, 1e4] {
            let g = green_julia(c, c64(0.0, r), 1000);
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn green_m_examples() {
        assert_eq!(green_m(c64(0.0, 0.0)), 0.0);
        let big = green_m(c64(1e6, 0.0));
        assert!((big - 1e6f64.ln()).abs() < 1e-4 * 1e6f64.ln());
        let c = c64(0.26, 0.0);
        let g = green_m(c);
        assert!(g > 0.0);
        // G_c(P_c(c)) = 2 G_c(c)
        assert!((green_julia(c, c * c + c, DEFAULT_MAX_ITER) - 2.0 * g).abs() < 1e-9);
    }

    #[test]
    fn phi_m_examples() {
        let w = phi_m(c64(1e6, 0.0)).unwrap();
        assert!((w - c64(1e6, 0.0)).norm() < 1e-5 * 1e6);

        let w = phi_m(c64(0.3, 0.0)).unwrap();
        assert!(w.norm() > 1.0);
        assert!((w.norm().ln() - green_julia(c64(0.3, 0.0), c64(0.3, 0.0), DEFAULT_MAX_ITER)).abs() < 1e-9);

        let w = phi_m(c64(-2.5, 0.0)).unwrap();
        assert!(w.re < -1.0);
        assert!(w.im.abs() < 1e-12 * w.norm());
    }

    #[test]
    fn phi_m_rejects_points_of_m() {
        assert!(matches!(phi_m(c64(0.0, 0.0)), Err(Error::InsideSet { .. })));
        assert!(matches!(phi_m(c64(-0.5, 0.3)), Err(Error::InsideSet { .. })));
        // Just outside the cusp, the potential is below the floor.
        assert!(matches!(
            phi_m(c64(0.25 + 1e-12, 0.0)),
            Err(Error::PotentialTooSmall { .. }) | Err(Error::InsideSet { .. })
        ));
    }

    #[test]
    fn phi_m_is_conjugation_symmetric() {
        for c in [c64(0.4, 0.6), c64(-1.3, 0.3), c64(-1.8, 0.02), c64(0.45, -0.3), c64(-0.08, 1.1)] {
            let a = phi_m(c).unwrap_or_else(|e| panic!("c = {c}: {e}"));
            let b = phi_m(c.conj()).unwrap();
            assert!((a.conj() - b).norm() < 1e-12 * a.norm(), "c = {c}: {a} vs {b}");
        }
    }

    #[test]
    fn phi_m_matches_ray_traced_branch() {
        // Parameters where the principal-branch product formula is off by a
        // root of unity; the reference values come from external-ray
        // continuation started at |w| = e^8.
        let cases = [
            (c64(-0.07376558985061686, -0.9794402022817422), 8.34e-05, -1.2313),
            (c64(-0.07429426208681894, -0.9835386016590881), 5.0e-4, -1.2313),
            (c64(0.4145540774490957, 0.6178572561097497), 4.0e-05, 0.5924),
        ];
        for (c, g, theta) in cases {
            let w = phi_m(c).unwrap();
            let expected = Complex64::from_polar(f64::exp(g), theta);
            assert!((w - expected).norm() < 1e-6, "c = {c}: {w} vs {expected}");
        }
    }

    #[test]
    fn phi_m_inverse_examples() {
        let c0 = c64(0.5, 0.6);
        let w = phi_m(c0).unwrap();
        let c = phi_m_inverse(w, 1e-10).unwrap();
        assert!((c - c0).norm() < 1e-8);

        let c = phi_m_inverse(c64(1e6, 0.0), 1e-6).unwrap();
        assert!((c - c64(1e6, 0.0)).norm() < 1e-4 * 1e6);

        let c = phi_m_inverse(c64(0.2f64.exp(), 0.0), 1e-10).unwrap();
        assert!(c.im.abs() < 1e-10);
        assert!(c.re > 0.25);
    }

    #[test]
    fn phi_m_inverse_rejects_unit_disk() {
        assert!(phi_m_inverse(c64(1.0, 0.0), 1e-8).is_err());
        assert!(phi_m_inverse(c64(0.3, 0.2), 1e-8).is_err());
    }

    #[test]
    fn distance_estimate_examples() {
        let d = julia_distance_estimate(c64(0.0, 0.0), c64(2.0, 0.0)).unwrap();
        assert!((0.25..=4.0).contains(&d), "d = {d}");
        let d = julia_distance_estimate(c64(0.0, 0.0), c64(1.0001, 0.0)).unwrap();
        assert!(d < 1e-3 && d > 0.0);
        assert!(julia_distance_estimate(c64(0.0, 0.0), c64(0.5, 0.0)).is_err());
    }

    #[test]
    fn potential_result_consistency() {
        let c = c64(-0.77, 0.18);
        for z in [c64(1.5, 0.3), c64(0.2, 1.4), c64(-3.0, -2.0)] {
            let p = potential_julia(c, z, 10_000);
            let b = p.boettcher.expect("far from the critical level");
            assert!((b.norm().ln() - p.green).abs() < 1e-9);
        }
        let p = potential_m(c64(0.4, 0.6));
        assert!((p.boettcher.unwrap().norm().ln() - p.green).abs() < 1e-9);
        let p = potential_m(c64(0.0, 0.0));
        assert_eq!(p.green, 0.0);
        assert!(p.boettcher.is_none());
    }

    #[test]
    fn boettcher_julia_circle_case() {
        // For c = 0, phi is the identity.
        let z = c64(0.6, 0.9);
        let w = boettcher_julia(c64(0.0, 0.0), z, 1000).unwrap();
        assert!((w - z).norm() < 1e-12);
    }
}
