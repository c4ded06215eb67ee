//! Parabolic parameters of the quadratic family and the asymptotics of the
//! windows accumulating on them.
//!
//! At a parabolic parameter `c1` the renormalized map `f = P^p` has a cycle
//! point `q` whose multiplier is a root of unity `e^{2 pi i nu'/nu}`. Nearby
//! the multiplier of `f^k` at the continued point expands as
//! `1 + A0 sqrt(c - c1)` when `nu = 1` and `mu_{c1} (1 + B0 (c - c1))` when
//! `nu >= 2`. Those constants fix the leading term of the lifted phase and
//! the location of the windows `c_n`.

use std::io::Write;
use std::path::Path;

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dynamics::{minimal_cycle_period, newton_periodic_point, proper_divisors};
use crate::error::{Error, Result};
use crate::scalar::{is_finite, to_c64, Real};

/// Largest petal count tried when matching a multiplier to a root of unity.
pub const MAX_PETALS: usize = 64;
pub const ROOT_OF_UNITY_TOL: f64 = 1e-6;
/// Default sector radius in multiplier space.
pub const DEFAULT_R0: f64 = 0.05;
/// Half-opening of the multiplier sector around the imaginary direction.
pub const SECTOR_HALF_ANGLE: f64 = std::f64::consts::PI / 8.0;
const MAX_RENORMALIZED_PERIOD: usize = 16;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_STEPS: usize = 400;
/// Exponent `1 + beta` of the Rouche guard disk around a predicted center.
pub const GUARD_EXPONENT: f64 = 1.25;

/// Data attached to a parabolic parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorConstants<T> {
    pub c1: Complex<T>,
    /// Renormalization period.
    pub p: usize,
    /// Period of `q` under `f = P^p`.
    pub k: usize,
    pub nu: usize,
    pub nu_prime: usize,
    /// `e^{2 pi i nu'/nu}`.
    pub mu_c1: Complex<T>,
    #[serde(rename = "A0", default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<Complex<T>>,
    #[serde(rename = "B0", default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<Complex<T>>,
    pub r0: T,
    /// Parabolic periodic point.
    pub q: Complex<T>,
    /// Period of `q` under `P` itself.
    pub cycle_period: usize,
    /// Multiplier of `f^k` at `q`; `mu_{c1}` raised to `p k / cycle_period`.
    pub return_multiplier: Complex<T>,
}

impl<T: Real> SectorConstants<T> {
    /// Number of `P`-iterates in one return `f^{k nu}` through the gate.
    pub fn gate_period(&self) -> usize {
        self.p * self.k * self.nu
    }

    pub fn is_complete(&self) -> bool {
        match self.nu {
            1 => self.a0.is_some() && self.b0.is_none(),
            _ => self.b0.is_some() && self.a0.is_none(),
        }
    }

    fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::invalid("sector constants lack the fitted A0/B0"))
        }
    }

    /// Fits A0 (`nu = 1`) or B0 (`nu >= 2`) with the default step lists.
    pub fn completed(mut self) -> Result<(Self, ConstantFit<T>)> {
        let fit = if self.nu == 1 {
            let fit = fit_a0(&self, &default_u_steps())?;
            self.a0 = Some(fit.value);
            fit
        } else {
            let fit = fit_b0(&self, &default_h_steps())?;
            self.b0 = Some(fit.value);
            fit
        };
        Ok((self, fit))
    }

    /// Multiplier of `f^k` at the continued point, normalized by its value at
    /// `c1`, for a parameter-side cycle point `z`.
    fn normalized_multiplier(&self, c: Complex<T>, z: Complex<T>) -> Complex<T> {
        let lambda = cycle_multiplier(c, z, self.cycle_period);
        lambda.powi((self.p * self.k / self.cycle_period) as i32) / self.return_multiplier
    }
}

impl<T: Real + Serialize + DeserializeOwned> SectorConstants<T> {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sector constants serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// An extrapolated constant and the change caused by the last sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantFit<T> {
    pub value: Complex<T>,
    pub residual: T,
}

/// Predicted window center `c_n` and its scale `r_n = |c_n - c1|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowPrediction<T> {
    pub n: usize,
    pub center: Complex<T>,
    pub radius: T,
}

impl<T: Real> WindowPrediction<T> {
    /// Radius `r_n^{1+beta}` of the disk in which the actual center is sought.
    pub fn guard_radius(&self) -> T {
        self.radius.powf(T::lit(GUARD_EXPONENT))
    }
}

fn newton_tol<T: Real>() -> T {
    T::lit(NEWTON_TOL).max(T::epsilon() * T::lit(100.0))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cycle_multiplier<T: Real>(c: Complex<T>, z: Complex<T>, period: usize) -> Complex<T> {
    crate::dynamics::compose_with_derivative(c, z, period).1
}

fn unit_root<T: Real>(num: usize, den: usize) -> Complex<T> {
    let angle = T::TAU() * T::from_count(num) / T::from_count(den);
    Complex::new(angle.cos(), angle.sin())
}

/// Smallest `nu <= max_order` and coprime `nu'` with
/// `|multiplier - e^{2 pi i nu'/nu}| < tol`.
pub fn match_root_of_unity<T: Real>(multiplier: Complex<T>, tol: T, max_order: usize) -> Result<(usize, usize)> {
    let mut turn = multiplier.arg() / T::TAU();
    if turn < T::zero() {
        turn = turn + T::one();
    }
    for nu in 1..=max_order {
        let nu_prime = (turn * T::from_count(nu)).round().to_usize().unwrap_or(0) % nu;
        if gcd(nu_prime, nu) != 1 {
            continue;
        }
        if (multiplier - unit_root::<T>(nu_prime, nu)).norm() < tol {
            return Ok((nu, nu_prime));
        }
    }
    Err(Error::NotRootOfUnity {
        multiplier: to_c64(multiplier),
        tol: tol.as_f64(),
        max_order,
    })
}

/// Finds the parabolic cycle point near `q_seed` and its petal data.
///
/// The returned constants have neither A0 nor B0; see
/// [`SectorConstants::completed`].
pub fn detect_parabolic_data<T: Real>(c1: Complex<T>, p: usize, q_seed: Complex<T>) -> Result<SectorConstants<T>> {
    if p == 0 {
        return Err(Error::invalid("renormalization period must be at least 1"));
    }
    let tol = newton_tol::<T>();
    let mut last_err = None;
    for k_try in 1..=MAX_RENORMALIZED_PERIOD {
        let period = p * k_try;
        let point = match newton_periodic_point(c1, period, q_seed, tol, NEWTON_STEPS) {
            Ok(pt) => pt,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        // The Newton root is only as accurate as the root multiplicity
        // allows, so the true period is found by re-solving at each divisor.
        let near = T::lit(1e-3);
        let mut cycle = (period, point.location);
        for d in proper_divisors(period) {
            if let Ok(pt) = newton_periodic_point(c1, d, point.location, tol, NEWTON_STEPS) {
                if (pt.location - point.location).norm() < near {
                    cycle = (d, pt.location);
                    break;
                }
            }
        }
        let (d, q) = cycle;
        let lambda = cycle_multiplier(c1, q, d);
        let (nu, nu_prime) = match_root_of_unity(lambda, T::lit(ROOT_OF_UNITY_TOL), MAX_PETALS)?;
        let k = d / gcd(d, p);
        let mu_c1 = unit_root::<T>(nu_prime, nu);
        let return_multiplier = mu_c1.powi((p * k / d) as i32);
        return Ok(SectorConstants {
            c1,
            p,
            k,
            nu,
            nu_prime,
            mu_c1,
            a0: None,
            b0: None,
            r0: T::lit(DEFAULT_R0),
            q,
            cycle_period: d,
            return_multiplier,
        });
    }
    Err(last_err.unwrap_or(Error::NoConvergence {
        solver: "parabolic point",
        steps: NEWTON_STEPS,
        residual: f64::NAN,
    }))
}

/// Searches a seed grid over `D(2)` for a cycle point of `P^p` at `c1` whose
/// multiplier is a root of unity, then runs [`detect_parabolic_data`] there.
pub fn find_parabolic_data<T: Real>(c1: Complex<T>, p: usize) -> Result<SectorConstants<T>> {
    if p == 0 {
        return Err(Error::invalid("renormalization period must be at least 1"));
    }
    let tol = newton_tol::<T>();
    let grid = 24;
    for k in 1..=4 {
        for i in 0..grid {
            for j in 0..grid {
                let seed = Complex::new(
                    T::lit(-2.0 + 4.0 * (i as f64 + 0.5) / grid as f64),
                    T::lit(-2.0 + 4.0 * (j as f64 + 0.5) / grid as f64),
                );
                let Ok(pt) = newton_periodic_point(c1, p * k, seed, tol, NEWTON_STEPS) else {
                    continue;
                };
                if match_root_of_unity(pt.multiplier, T::lit(1e-4), MAX_PETALS).is_ok() {
                    if let Ok(found) = detect_parabolic_data(c1, p, pt.location) {
                        return Ok(found);
                    }
                }
            }
        }
    }
    Err(Error::NoConvergence {
        solver: "parabolic point search",
        steps: grid * grid,
        residual: f64::NAN,
    })
}

/// Solves `P_c^period(z) = z`, `(P_c^period)'(z) = multiplier` for `(c, z)`.
///
/// Locates parabolic parameters such as satellite roots, where a cycle of
/// the given period has multiplier `e^{2 pi i nu'/nu}`.
pub fn solve_parabolic_parameter<T: Real>(
    period: usize,
    multiplier: Complex<T>,
    c_seed: Complex<T>,
    z_seed: Complex<T>,
    tol: T,
) -> Result<(Complex<T>, Complex<T>)> {
    if period == 0 {
        return Err(Error::invalid("period must be at least 1"));
    }
    let two = T::lit(2.0);
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let (mut c, mut z) = (c_seed, z_seed);
    let mut residual = T::infinity();
    for step in 0..100 {
        let (mut zj, mut a, mut b) = (z, one, zero);
        let (mut d, mut dz, mut dc) = (one, zero, zero);
        for _ in 0..period {
            dz = (a * d + zj * dz) * two;
            dc = (b * d + zj * dc) * two;
            d = d * zj * two;
            a = a * zj * two;
            b = b * zj * two + one;
            zj = zj * zj + c;
        }
        let f1 = zj - z;
        let f2 = d - multiplier;
        residual = f1.norm() + f2.norm();
        if residual < tol {
            return Ok((c, z));
        }
        // [[a - 1, b], [dz, dc]] (delta_z, delta_c) = (f1, f2)
        let (j11, j12, j21, j22) = (a - one, b, dz, dc);
        let det = j11 * j22 - j12 * j21;
        let delta_z = (f1 * j22 - j12 * f2) / det;
        let delta_c = (j11 * f2 - j21 * f1) / det;
        if !is_finite(delta_z) || !is_finite(delta_c) || delta_z.norm() + delta_c.norm() > T::one() {
            return Err(Error::Diverged {
                solver: "parabolic parameter",
                step,
            });
        }
        z = z - delta_z;
        c = c - delta_c;
    }
    Err(Error::NoConvergence {
        solver: "parabolic parameter",
        steps: 100,
        residual: residual.as_f64(),
    })
}

/// Polynomial extrapolation to 0 of samples `(x_i, y_i)` (Neville).
fn extrapolate_to_zero<T: Real>(xs: &[T], ys: &[Complex<T>]) -> Complex<T> {
    let mut p = ys.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * (-xs[i + m]) + p[i + 1] * xs[i]) / (xs[i] - xs[i + m]);
        }
    }
    p[0]
}

fn richardson<T: Real>(xs: &[T], ys: &[Complex<T>]) -> ConstantFit<T> {
    let n = xs.len();
    let value = extrapolate_to_zero(xs, ys);
    let coarser = extrapolate_to_zero(&xs[..n - 1], &ys[..n - 1]);
    ConstantFit {
        value,
        residual: (value - coarser).norm(),
    }
}

fn check_steps<T: Real>(steps: &[T]) -> Result<()> {
    if steps.len() < 3 {
        return Err(Error::invalid("extrapolation needs at least 3 steps"));
    }
    if steps.iter().any(|s| !(*s > T::zero())) || steps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("steps must be positive and strictly decreasing"));
    }
    Ok(())
}

/// `u_i = 10^-2 2^-i`, six steps.
pub fn default_u_steps<T: Real>() -> Vec<T> {
    (0..6).map(|i| T::lit(1e-2 * 0.5f64.powi(i))).collect()
}

/// `h_i = 10^-3 2^-i`, six steps.
pub fn default_h_steps<T: Real>() -> Vec<T> {
    (0..6).map(|i| T::lit(1e-3 * 0.5f64.powi(i))).collect()
}

/// The two cycle points born from `q` at parameter `c`, nearest first, with
/// `scale` the expected size `|sqrt(c - c1)|` of the splitting.
fn split_cycle_points<T: Real>(
    constants: &SectorConstants<T>,
    c: Complex<T>,
    scale: T,
    step: usize,
) -> Result<[Complex<T>; 2]> {
    let d = constants.cycle_period;
    let q = constants.q;
    let tol = newton_tol::<T>();
    let reach = scale * T::lit(100.0) + T::lit(1e-9);
    let mut roots: Vec<Complex<T>> = Vec::new();
    for radius in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        for j in 0..8 {
            let angle = T::TAU() * T::from_count(j) / T::lit(8.0) + T::lit(0.1);
            let seed = q + Complex::from_polar(scale * T::lit(radius), angle);
            let Ok(pt) = newton_periodic_point(c, d, seed, tol, NEWTON_STEPS) else {
                continue;
            };
            let z = pt.location;
            if (z - q).norm() > reach {
                continue;
            }
            if minimal_cycle_period(c, z, d, T::lit(1e-9) * scale.max(T::lit(1e-6))) != d {
                continue;
            }
            if roots.iter().all(|r| (*r - z).norm() > scale * T::lit(1e-6)) {
                roots.push(z);
            }
        }
        if roots.len() >= 2 {
            break;
        }
    }
    if roots.len() < 2 {
        return Err(Error::BranchLost { step });
    }
    roots.sort_by(|a, b| (*a - q).norm().partial_cmp(&(*b - q).norm()).unwrap());
    Ok([roots[0], roots[1]])
}

/// `true` when `a` lies in the upper half plane, or on the real axis with
/// positive real part.
fn upper<T: Real>(a: Complex<T>) -> bool {
    a.im > T::zero() || (a.im == T::zero() && a.re > T::zero())
}

/// Fits `A0` from `(mu_+(u) - 1)/u` at `c = c1 + u^2`, `u` in `u_steps`.
///
/// `mu_+` is the split multiplier with `(mu - 1)/u` in the upper half plane,
/// so the fitted `A0` has argument in `[0, pi)`.
pub fn fit_a0<T: Real>(constants: &SectorConstants<T>, u_steps: &[T]) -> Result<ConstantFit<T>> {
    if constants.nu != 1 {
        return Err(Error::invalid("A0 is defined only for a single petal (nu = 1)"));
    }
    check_steps(u_steps)?;
    let mut ys = Vec::with_capacity(u_steps.len());
    for (step, &u) in u_steps.iter().enumerate() {
        let c = constants.c1 + Complex::new(u * u, T::zero());
        let roots = split_cycle_points(constants, c, u, step)?;
        let quotients = roots.map(|z| (constants.normalized_multiplier(c, z) - T::one()) / u);
        let y = if upper(quotients[0]) { quotients[0] } else { quotients[1] };
        if !upper(y) {
            return Err(Error::BranchLost { step });
        }
        ys.push(y);
    }
    Ok(richardson(u_steps, &ys))
}

/// Fits `B0` from `(mu_c / mu_{c1} - 1)/(c - c1)` at `c = c1 + h`.
pub fn fit_b0<T: Real>(constants: &SectorConstants<T>, h_steps: &[T]) -> Result<ConstantFit<T>> {
    if constants.nu < 2 {
        return Err(Error::invalid("B0 is defined only for nu >= 2"));
    }
    check_steps(h_steps)?;
    let mut z = constants.q;
    let mut ys = Vec::with_capacity(h_steps.len());
    // Continue from c1 outwards to the largest step, then back down.
    let mut order: Vec<usize> = (0..h_steps.len()).collect();
    order.reverse();
    ys.resize(h_steps.len(), Complex::new(T::zero(), T::zero()));
    for (step, idx) in order.into_iter().enumerate() {
        let h = h_steps[idx];
        let c = constants.c1 + Complex::new(h, T::zero());
        let pt = newton_periodic_point(c, constants.cycle_period, z, newton_tol::<T>(), NEWTON_STEPS)
            .map_err(|_| Error::BranchLost { step })?;
        if (pt.location - z).norm() > T::lit(10.0) * h.sqrt() {
            return Err(Error::BranchLost { step });
        }
        z = pt.location;
        ys[idx] = (constants.normalized_multiplier(c, z) - T::one()) / h;
    }
    Ok(richardson(h_steps, &ys))
}

/// `sqrt(c - c1)` on the branch with `Im(A0 u) > 0`.
fn sector_root<T: Real>(a0: Complex<T>, c: Complex<T>, c1: Complex<T>) -> Complex<T> {
    let u = (c - c1).sqrt();
    if upper(a0 * u) {
        u
    } else {
        -u
    }
}

fn in_multiplier_sector<T: Real>(mu: Complex<T>, r0: T) -> bool {
    let w = mu - T::one();
    let r = w.norm();
    r > T::zero() && r < r0 && (w.arg() - T::FRAC_PI_2()).abs() < T::lit(SECTOR_HALF_ANGLE)
}

/// Does the normalized multiplier at `c` lie in the sector
/// `0 < |mu - 1| < r0`, `|arg(mu - 1) - pi/2| < pi/8`?
pub fn sector_contains<T: Real>(constants: &SectorConstants<T>, c: Complex<T>) -> bool {
    if !constants.is_complete() || c == constants.c1 {
        return false;
    }
    let delta = c - constants.c1;
    if constants.nu == 1 {
        let scale = delta.norm().sqrt();
        let Ok(roots) = split_cycle_points(constants, c, scale, 0) else {
            return false;
        };
        roots
            .iter()
            .any(|z| in_multiplier_sector(constants.normalized_multiplier(c, *z), constants.r0))
    } else {
        let Ok(pt) = newton_periodic_point(c, constants.cycle_period, constants.q, newton_tol::<T>(), NEWTON_STEPS)
        else {
            return false;
        };
        if (pt.location - constants.q).norm() > T::lit(10.0) * delta.norm().sqrt() {
            return false;
        }
        in_multiplier_sector(constants.normalized_multiplier(c, pt.location), constants.r0)
    }
}

/// Leading term of the lifted phase: `-2 pi i/(A0 sqrt(c - c1))` or
/// `-2 pi i/(nu^2 B0 (c - c1))`.
pub fn tau_leading<T: Real>(constants: &SectorConstants<T>, c: Complex<T>) -> Result<Complex<T>> {
    constants.require_complete()?;
    if c == constants.c1 {
        return Err(Error::invalid("lifted phase has a pole at c1"));
    }
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    match (constants.a0, constants.b0) {
        (Some(a0), _) if constants.nu == 1 => Ok(-two_pi_i / (a0 * sector_root(a0, c, constants.c1))),
        (_, Some(b0)) => {
            let nu2 = T::from_count(constants.nu * constants.nu);
            Ok(-two_pi_i / (b0 * nu2 * (c - constants.c1)))
        }
        _ => unreachable!("completeness checked"),
    }
}

/// Window center `c_n` with the offset `v` subtracted from `n`.
pub fn predict_window_center_with_offset<T: Real>(constants: &SectorConstants<T>, n: usize, v: T) -> Result<WindowPrediction<T>> {
    constants.require_complete()?;
    if n == 0 {
        return Err(Error::invalid("window index must be at least 1"));
    }
    let m = T::from_count(n) - v;
    let c1 = constants.c1;
    let center = match (constants.a0, constants.b0) {
        (Some(a0), _) if constants.nu == 1 => {
            let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
            c1 - Complex::new(four_pi2, T::zero()) / (a0 * a0 * m * m)
        }
        (_, Some(b0)) => {
            let nu2 = T::from_count(constants.nu * constants.nu);
            c1 + Complex::new(T::zero(), T::TAU()) / (b0 * nu2 * m)
        }
        _ => unreachable!("completeness checked"),
    };
    Ok(WindowPrediction {
        n,
        center,
        radius: (center - c1).norm(),
    })
}

pub fn predict_window_center<T: Real>(constants: &SectorConstants<T>, n: usize) -> Result<WindowPrediction<T>> {
    predict_window_center_with_offset(constants, n, T::zero())
}

/// Default gate entry: `Re z <= 0`.
pub fn default_entry<T: Real>(z: Complex<T>) -> bool {
    z.re <= T::zero()
}

/// Default gate exit: `Re z > 2`, past which the orbit escapes.
pub fn default_exit<T: Real>(z: Complex<T>) -> bool {
    z.re > T::lit(2.0)
}

/// Counts iterations of `P_c^p` taken by the critical orbit from the first
/// point satisfying `entry` to the first later point satisfying `exit`.
pub fn gate_transit_count<T, E, X>(c: Complex<T>, p: usize, entry: E, exit: X, max_iter: usize) -> Result<usize>
where
    T: Real,
    E: Fn(Complex<T>) -> bool,
    X: Fn(Complex<T>) -> bool,
{
    if p == 0 {
        return Err(Error::invalid("iterate period must be at least 1"));
    }
    let still = T::lit(1e-14);
    let mut z = Complex::new(T::zero(), T::zero());
    let mut entered_at = None;
    for i in 0..=max_iter {
        match entered_at {
            None if entry(z) => entered_at = Some(i),
            Some(start) if exit(z) => return Ok(i - start),
            _ => {}
        }
        let prev = z;
        for _ in 0..p {
            z = z * z + c;
        }
        if !is_finite(z) {
            return Err(Error::Trapped(format!("orbit overflowed before the exit test at step {i}")));
        }
        if (z - prev).norm() < still {
            return Err(Error::Trapped(format!(
                "orbit of c = {} settled on a fixed point of the iterate",
                to_c64(c)
            )));
        }
    }
    Err(Error::Trapped(match entered_at {
        None => format!("orbit of c = {} never met the entry test", to_c64(c)),
        Some(_) => format!("orbit of c = {} did not exit within {max_iter} steps", to_c64(c)),
    }))
}

/// One row of the transit table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitRow {
    pub eps: f64,
    pub transit: usize,
    pub transit_sqrt_eps: f64,
}

/// Transit counts at `c1 + eps` with the default gate tests.
pub fn transit_table(c1: Complex<f64>, p: usize, eps: &[f64], max_iter: usize) -> Result<Vec<TransitRow>> {
    eps.iter()
        .map(|&e| {
            let transit = gate_transit_count(c1 + e, p, default_entry, default_exit, max_iter)?;
            Ok(TransitRow {
                eps: e,
                transit,
                transit_sqrt_eps: transit as f64 * e.sqrt(),
            })
        })
        .collect()
}

pub fn write_transit_csv<W: Write>(out: W, rows: &[TransitRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}

#[derive(Serialize)]
struct WindowRow {
    n: usize,
    re: f64,
    im: f64,
    radius: f64,
}

pub fn write_window_csv<W: Write>(out: W, rows: &[WindowPrediction<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(WindowRow {
            n: r.n,
            re: r.center.re,
            im: r.center.im,
            radius: r.radius,
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}
