//! Iteration of the quadratic family `P_c(z) = z^2 + c`, escape tests and
//! the Newton solvers for superattracting centers and periodic points.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Real};

/// Default escape radius. Radius 4 leaves one guard iteration past the
/// classical bound 2 for derivative accumulation.
pub const DEFAULT_ESCAPE_RADIUS: f64 = 4.0;

/// Newton steps longer than this abort the solve.
const MAX_NEWTON_STEP: f64 = 1.0;
/// Newton iterates must stay inside this disk.
const NEWTON_GUARD_RADIUS: f64 = 4.0;

#[inline]
pub fn quadratic<T: Real>(c: Complex<T>, z: Complex<T>) -> Complex<T> {
    z * z + c
}

/// An orbit of `P_c` together with the derivatives of the composition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord<T> {
    pub points: Vec<Complex<T>>,
    pub escaped: bool,
    pub escape_index: Option<usize>,
    /// d/dz0 of the composition at the last point.
    pub z_derivative: Complex<T>,
    /// d/dc of the composition at the last point.
    pub c_derivative: Complex<T>,
}

impl<T: Real> OrbitRecord<T> {
    pub fn last(&self) -> Complex<T> {
        *self.points.last().expect("orbit has at least its start point")
    }

    /// Number of applications of `P_c` recorded.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

/// Iterates `P_c` `n` times from `z0`, recording every point.
///
/// Iteration continues past the escape radius (so potentials can be read off
/// the tail) and stops early only when another squaring could overflow.
pub fn iterate<T: Real>(c: Complex<T>, z0: Complex<T>, n: usize, escape_radius: T) -> OrbitRecord<T> {
    let two = T::lit(2.0);
    let r2 = escape_radius * escape_radius;
    let guard = T::overflow_guard();
    let mut points = Vec::with_capacity(n + 1);
    let mut z = z0;
    let mut dz = Complex::new(T::one(), T::zero());
    let mut dc = Complex::new(T::zero(), T::zero());
    points.push(z);
    let mut escape_index = (z.norm_sqr() > r2).then_some(0);
    for i in 1..=n {
        if z.norm() > guard || !is_finite(dz) || !is_finite(dc) || dz.norm() > guard || dc.norm() > guard {
            break;
        }
        dz = dz * z * two;
        dc = dc * z * two + T::one();
        z = z * z + c;
        points.push(z);
        if escape_index.is_none() && z.norm_sqr() > r2 {
            escape_index = Some(i);
        }
    }
    OrbitRecord {
        points,
        escaped: escape_index.is_some(),
        escape_index,
        z_derivative: dz,
        c_derivative: dc,
    }
}

/// Outcome of a bounded escape test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Escape<T> {
    pub escaped: bool,
    /// Index of the first iterate outside the escape radius, or `max_iter`.
    pub iterations: usize,
    pub last: Complex<T>,
}

/// Escape-time test: does some iterate of `z0` leave `D(escape_radius)`
/// within `max_iter` steps?
#[inline]
pub fn escape_time<T: Real>(c: Complex<T>, z0: Complex<T>, max_iter: usize, escape_radius: T) -> Escape<T> {
    let r2 = escape_radius * escape_radius;
    let mut z = z0;
    if z.norm_sqr() > r2 {
        return Escape {
            escaped: true,
            iterations: 0,
            last: z,
        };
    }
    for i in 1..=max_iter {
        z = z * z + c;
        if z.norm_sqr() > r2 {
            return Escape {
                escaped: true,
                iterations: i,
                last: z,
            };
        }
    }
    Escape {
        escaped: false,
        iterations: max_iter,
        last: z,
    }
}

/// `P_c^n(0)` and its `c`-derivative.
#[inline]
pub fn critical_orbit_with_derivative<T: Real>(c: Complex<T>, n: usize) -> (Complex<T>, Complex<T>) {
    let two = T::lit(2.0);
    let mut z = Complex::new(T::zero(), T::zero());
    let mut dc = Complex::new(T::zero(), T::zero());
    for _ in 0..n {
        dc = dc * z * two + T::one();
        z = z * z + c;
    }
    (z, dc)
}

/// `P_c^n(z)` and its `z`-derivative.
#[inline]
pub fn compose_with_derivative<T: Real>(c: Complex<T>, z0: Complex<T>, n: usize) -> (Complex<T>, Complex<T>) {
    let two = T::lit(2.0);
    let mut z = z0;
    let mut dz = Complex::new(T::one(), T::zero());
    for _ in 0..n {
        dz = dz * z * two;
        z = z * z + c;
    }
    (z, dz)
}

fn divisors_below(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |d| n % d == 0)
}

/// Smallest divisor `d` of `period` with `|P_c^d(0)| <= tol`.
pub fn minimal_center_period<T: Real>(c: Complex<T>, period: usize, tol: T) -> usize {
    let mut z = Complex::new(T::zero(), T::zero());
    for d in 1..period {
        z = z * z + c;
        if period % d == 0 && z.norm() <= tol {
            return d;
        }
    }
    period
}

/// Smallest divisor `d` of `period` with `|P_c^d(q) - q| <= tol`.
pub fn minimal_cycle_period<T: Real>(c: Complex<T>, q: Complex<T>, period: usize, tol: T) -> usize {
    let mut z = q;
    for d in 1..period {
        z = z * z + c;
        if period % d == 0 && (z - q).norm() <= tol {
            return d;
        }
    }
    period
}

/// A superattracting parameter returned by [`solve_superattracting_center`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Center<T> {
    pub value: Complex<T>,
    pub period: usize,
    /// Smallest divisor of `period` at which the critical orbit returns to 0.
    /// Differs from `period` when Newton landed on a lower-period center.
    pub minimal_period: usize,
    pub residual: T,
    pub steps: usize,
}

impl<T> Center<T> {
    pub fn is_primitive(&self) -> bool {
        self.minimal_period == self.period
    }
}

/// Solves `P_c^period(0) = 0` for `c` by Newton's method from `seed`.
pub fn solve_superattracting_center<T: Real>(
    period: usize,
    seed: Complex<T>,
    tol: T,
    max_steps: usize,
) -> Result<Center<T>> {
    if period == 0 {
        return Err(Error::invalid("period must be at least 1"));
    }
    let max_step = T::lit(MAX_NEWTON_STEP);
    let guard = T::lit(NEWTON_GUARD_RADIUS);
    let tiny = T::epsilon() * T::lit(4.0);
    let mut c = seed;
    let mut best: Option<(T, Complex<T>, usize)> = None;
    let mut steps = 0;
    loop {
        let (g, dg) = critical_orbit_with_derivative(c, period);
        if !is_finite(g) || !is_finite(dg) {
            return Err(Error::Diverged {
                solver: "center",
                step: steps,
            });
        }
        let residual = g.norm();
        if best.map_or(true, |(r, _, _)| residual < r) {
            best = Some((residual, c, steps));
        }
        if residual == T::zero() || steps >= max_steps || dg.norm() == T::zero() {
            break;
        }
        let step = g / dg;
        if step.norm() > max_step {
            return Err(Error::Diverged {
                solver: "center",
                step: steps,
            });
        }
        c = c - step;
        steps += 1;
        if c.norm() > guard {
            return Err(Error::Diverged {
                solver: "center",
                step: steps,
            });
        }
        if step.norm() <= tiny * c.norm().max(T::one()) {
            let residual = critical_orbit_with_derivative(c, period).0.norm();
            if best.map_or(true, |(r, _, _)| residual < r) {
                best = Some((residual, c, steps));
            }
            break;
        }
    }
    let (residual, value, at) = best.expect("at least one evaluation");
    if residual >= tol {
        return Err(Error::NoConvergence {
            solver: "center",
            steps,
            residual: residual.as_f64(),
        });
    }
    let divisor_tol = (tol * T::lit(1e3)).max(T::lit(1e-9));
    Ok(Center {
        value,
        period,
        minimal_period: minimal_center_period(value, period, divisor_tol),
        residual,
        steps: at,
    })
}

/// A periodic point of `P_c` with its cycle multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint<T> {
    pub location: Complex<T>,
    pub period: usize,
    pub multiplier: Complex<T>,
    pub residual: T,
}

/// Newton on `P_c^period(z) - z` without the minimal-period check.
///
/// Parabolic points are multiple roots, so the iteration keeps going while
/// the residual improves and returns the best iterate seen.
pub(crate) fn newton_periodic_point<T: Real>(
    c: Complex<T>,
    period: usize,
    seed: Complex<T>,
    tol: T,
    max_steps: usize,
) -> Result<PeriodicPoint<T>> {
    let max_step = T::lit(MAX_NEWTON_STEP);
    let guard = T::lit(NEWTON_GUARD_RADIUS).max(T::lit(2.0) * (c.norm().sqrt() + T::one()));
    let tiny = T::epsilon() * T::lit(4.0);
    let mut z = seed;
    let mut best: Option<(T, Complex<T>)> = None;
    let mut stalled = 0;
    for step_idx in 0..=max_steps {
        let (fz, dfz) = compose_with_derivative(c, z, period);
        let g = fz - z;
        let dg = dfz - Complex::new(T::one(), T::zero());
        if !is_finite(g) || !is_finite(dg) {
            return Err(Error::Diverged {
                solver: "periodic point",
                step: step_idx,
            });
        }
        let residual = g.norm();
        match best {
            Some((r, _)) if residual >= r => stalled += 1,
            _ => {
                best = Some((residual, z));
                stalled = 0;
            }
        }
        if residual == T::zero() || dg.norm() == T::zero() || stalled >= 8 {
            break;
        }
        let step = g / dg;
        if step.norm() > max_step {
            return Err(Error::Diverged {
                solver: "periodic point",
                step: step_idx,
            });
        }
        z = z - step;
        if z.norm() > guard {
            return Err(Error::Diverged {
                solver: "periodic point",
                step: step_idx,
            });
        }
        if step.norm() <= tiny * z.norm().max(T::one()) {
            let residual = (compose_with_derivative(c, z, period).0 - z).norm();
            if best.map_or(true, |(r, _)| residual < r) {
                best = Some((residual, z));
            }
            break;
        }
    }
    let (residual, location) = best.expect("at least one evaluation");
    if residual > tol {
        return Err(Error::NoConvergence {
            solver: "periodic point",
            steps: max_steps,
            residual: residual.as_f64(),
        });
    }
    let multiplier = compose_with_derivative(c, location, period).1;
    Ok(PeriodicPoint {
        location,
        period,
        multiplier,
        residual,
    })
}

/// Solves `P_c^period(q) = q` from `seed` and checks that `q` has minimal
/// period `period`.
pub fn solve_periodic_point<T: Real>(
    c: Complex<T>,
    period: usize,
    seed: Complex<T>,
    tol: T,
) -> Result<PeriodicPoint<T>> {
    if period == 0 {
        return Err(Error::invalid("period must be at least 1"));
    }
    let point = newton_periodic_point(c, period, seed, tol, 200)?;
    let divisor_tol = (tol * T::lit(1e3)).max(T::lit(1e-7));
    let minimal = minimal_cycle_period(c, point.location, period, divisor_tol);
    if minimal != period {
        return Err(Error::LowerPeriod {
            requested: period,
            minimal,
        });
    }
    Ok(point)
}

/// Every divisor of `n` below `n`, smallest first.
pub fn proper_divisors(n: usize) -> Vec<usize> {
    divisors_below(n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn iterate_at_origin_stays_put() {
        let orbit = iterate(c64(0.0, 0.0), c64(0.0, 0.0), 10, 4.0);
        assert_eq!(orbit.points.len(), 11);
        assert!(orbit.points.iter().all(|z| *z == c64(0.0, 0.0)));
        assert!(!orbit.escaped);
        assert_eq!(orbit.escape_index, None);
    }

    #[test]
    fn iterate_c_two_escapes_at_index_two() {
        let orbit = iterate(c64(2.0, 0.0), c64(0.0, 0.0), 5, 4.0);
        let re: Vec<f64> = orbit.points.iter().take(4).map(|z| z.re).collect();
        assert_eq!(re, vec![0.0, 2.0, 6.0, 38.0]);
        assert!(orbit.escaped);
        assert_eq!(orbit.escape_index, Some(2));
    }

    #[test]
    fn iterate_c_minus_one_oscillates() {
        let orbit = iterate(c64(-1.0, 0.0), c64(0.0, 0.0), 6, 4.0);
        let re: Vec<f64> = orbit.points.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![0.0, -1.0, 0.0, -1.0, 0.0, -1.0, 0.0]);
        assert!(!orbit.escaped);
    }

    #[test]
    fn iterate_stops_before_overflow() {
        let orbit = iterate(c64(10.0, 0.0), c64(0.0, 0.0), 10_000, 4.0);
        assert!(orbit.escaped);
        assert!(orbit.points.iter().all(|z| z.re.is_finite()));
        assert!(orbit.steps() < 10_000);
    }

    #[test]
    fn escape_time_examples() {
        assert!(escape_time(c64(0.26, 0.0), c64(0.0, 0.0), 10_000, 2.0).escaped);
        assert!(!escape_time(c64(0.0, 0.0), c64(0.0, 0.0), 10, 2.0).escaped);
        assert!(escape_time(c64(-0.77, 0.18), c64(0.0, 0.0), 10_000, 2.0).escaped);
        // 0.25 is the cusp: never escapes.
        assert!(!escape_time(c64(0.25, 0.0), c64(0.0, 0.0), 10_000, 2.0).escaped);
    }

    #[test]
    fn escape_membership_is_radius_independent() {
        for c in [c64(0.26, 0.0), c64(-0.77, 0.18), c64(-0.1, 0.65), c64(0.3, 0.5)] {
            let a = escape_time(c, c64(0.0, 0.0), 5000, 2.0).escaped;
            let b = escape_time(c, c64(0.0, 0.0), 5000, 4.0).escaped;
            assert_eq!(a, b, "c = {c}");
        }
    }

    /// Real root of (c^2 + c)^2 + c by bisection, independent of Newton.
    fn period_three_real_root_by_bisection() -> f64 {
        let f = |c: f64| (c * c + c).powi(2) + c;
        let (mut lo, mut hi) = (-1.8_f64, -1.7_f64);
        assert!(f(lo) * f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn center_examples() {
        let c1 = solve_superattracting_center(1, c64(0.1, 0.0), 1e-12, 50).unwrap();
        assert!(c1.value.norm() < 1e-12);
        let c2 = solve_superattracting_center(2, c64(-0.9, 0.0), 1e-12, 50).unwrap();
        assert!((c2.value - c64(-1.0, 0.0)).norm() < 1e-12);
        assert!(c2.is_primitive());
        let oracle = period_three_real_root_by_bisection();
        assert!((oracle + 1.754_877_666_2).abs() < 1e-9);
        let c3 = solve_superattracting_center(3, c64(-1.7, 0.0), 1e-12, 50).unwrap();
        assert!((c3.value.re - oracle).abs() < 1e-12);
        assert!(c3.residual < 1e-12);
    }

    #[test]
    fn center_lower_period_is_flagged() {
        // Seeding the period-4 equation at -1 converges to the period-2 center.
        let c = solve_superattracting_center(4, c64(-1.0001, 0.0), 1e-12, 50).unwrap();
        assert!((c.value + 1.0).norm() < 1e-12);
        assert_eq!(c.minimal_period, 2);
        assert!(!c.is_primitive());
    }

    #[test]
    fn center_rejects_zero_period_and_reports_divergence() {
        assert!(matches!(
            solve_superattracting_center(0, c64(0.0, 0.0), 1e-12, 10),
            Err(Error::InvalidInput(_))
        ));
        assert!(solve_superattracting_center(3, c64(3.9, 3.9), 1e-12, 50).is_err());
        assert!(matches!(
            solve_superattracting_center(5, c64(0.3, 0.9), 1e-12, 1),
            Err(Error::NoConvergence { .. }) | Err(Error::Diverged { .. })
        ));
    }

    #[test]
    fn periodic_point_examples() {
        let p = solve_periodic_point(c64(0.0, 0.0), 1, c64(0.1, 0.0), 1e-12).unwrap();
        assert!(p.location.norm() < 1e-12);
        assert!(p.multiplier.norm() < 1e-12);

        let c = c64(-0.75, 0.0);
        let p = solve_periodic_point(c, 1, c64(-0.4, 0.0), 1e-12).unwrap();
        let closed = (c64(1.0, 0.0) - (c64(1.0, 0.0) - c * 4.0).sqrt()) / 2.0;
        assert!((closed - c64(-0.5, 0.0)).norm() < 1e-15);
        assert!((p.location - closed).norm() < 1e-7);
        assert!((p.multiplier - c64(-1.0, 0.0)).norm() < 1e-6);

        let c = c64(-1.25, 0.0);
        let p = solve_periodic_point(c, 2, c64(0.2, 0.0), 1e-12).unwrap();
        // roots of z^2 + z + c + 1
        let disc = (c64(1.0, 0.0) - (c + 1.0) * 4.0).sqrt();
        let roots = [(-1.0 + disc) / 2.0, (-1.0 - disc) / 2.0];
        assert!(roots.iter().any(|r| (r - p.location).norm() < 1e-12));
        assert!((p.multiplier - (c + 1.0) * 4.0).norm() < 1e-12);
        assert!((p.multiplier + 1.0).norm() < 1e-12);
        assert!(p.residual <= 1e-12);
    }

    #[test]
    fn periodic_point_wrong_cycle_detected() {
        // At c = -1.25 seeding near the fixed point -0.5*(sqrt(6)-1) converges
        // there, which has period 1, not 2.
        let c = c64(-1.25, 0.0);
        let fixed = (1.0 - (1.0_f64 + 5.0).sqrt()) / 2.0;
        let err = solve_periodic_point(c, 2, c64(fixed + 0.01, 0.0), 1e-12).unwrap_err();
        assert!(matches!(err, Error::LowerPeriod { requested: 2, minimal: 1 }));
    }

    #[test]
    fn f32_smoke() {
        let c = solve_superattracting_center(2, Complex::<f32>::new(-0.9, 0.0), 1e-5, 50).unwrap();
        assert!((c.value.re + 1.0).abs() < 1e-5);
        assert!(escape_time(Complex::<f32>::new(0.26, 0.0), Complex::new(0.0, 0.0), 10_000, 2.0).escaped);
    }

    #[test]
    fn long_orbit_derivative_matches_high_precision() {
        // 50-digit reference for n = 22.
        let c = c64(-0.9258456515826321, -0.3133295198444011);
        let (z, d) = critical_orbit_with_derivative(c, 22);
        let z_ref = c64(-10.310203893529230, -0.32194013269596684);
        let d_ref = c64(-122184.48047732611, -14950.787367347935);
        assert!((z - z_ref).norm() < 1e-10 * z_ref.norm());
        assert!((d - d_ref).norm() < 1e-10 * d_ref.norm());
    }

    proptest! {
        #[test]
        fn orbit_recurrence_is_exact(cr in -1.4f64..1.4, ci in -1.4f64..1.4, zr in -1.4f64..1.4, zi in -1.4f64..1.4) {
            let c = c64(cr, ci);
            let orbit = iterate(c, c64(zr, zi), 40, 4.0);
            for w in orbit.points.windows(2) {
                prop_assert_eq!(w[1] - (w[0] * w[0] + c), c64(0.0, 0.0));
            }
            if let Some(k) = orbit.escape_index {
                prop_assert!(orbit.points[k].norm() > 4.0);
                prop_assert!(orbit.points[..k].iter().all(|z| z.norm() <= 4.0));
            }
        }

        #[test]
        fn c_derivative_matches_central_difference(r in 0.0f64..1.5, theta in 0.0f64..std::f64::consts::TAU, n in 1usize..=12) {
            let c = Complex64::from_polar(r, theta);
            let (z, d) = critical_orbit_with_derivative(c, n);
            prop_assume!(z.norm() < 1e6 && d.norm() > 1e-3 && d.norm() < 1e8);
            // Five-point stencil, O(h^4); h scaled to the distance over which
            // P_c^n(0) stays roughly linear in c.
            let h = 1e-4 * (z.norm().max(1.0) / d.norm()).min(1.0);
            let f = |dc: f64| critical_orbit_with_derivative(c + dc, n).0;
            let fd = (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
            prop_assert!((fd - d).norm() <= 1e-6 * d.norm(), "n={} c={} fd={} d={}", n, c, fd, d);
        }
    }
}
