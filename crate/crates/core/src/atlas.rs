//! Superattracting centers `s_n` of the windows near a parabolic parameter,
//! the reciprocal law they follow, and small filled Julia sets of the
//! renormalized maps `P_c^p`.

use std::io::{Read, Write};
use std::ops::RangeInclusive;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::solve_superattracting_center;
use crate::error::{Error, Result};
use crate::parabolic::{csv_err, predict_window_center, SectorConstants, WindowPrediction};
use crate::scalar::Real;

const CENTER_NEWTON_STEPS: usize = 100;
/// Fewest records accepted by [`fit_center_law`].
pub const MIN_FIT_RECORDS: usize = 5;

/// A center `s_n` found near the predicted window center `c_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterRecord<T> {
    pub n: usize,
    pub period: usize,
    pub value: Complex<T>,
    pub residual: T,
    pub seed_distance: T,
}

/// Least-squares affine law `y(s_n) = slope n + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceFit<T> {
    pub slope: Complex<T>,
    pub intercept: Complex<T>,
    pub max_relative_residual: T,
}

fn try_center<T: Real>(
    prediction: &WindowPrediction<T>,
    period: usize,
    tol: T,
) -> Option<CenterRecord<T>> {
    let center = solve_superattracting_center(period, prediction.center, tol, CENTER_NEWTON_STEPS).ok()?;
    if !center.is_primitive() {
        return None;
    }
    let seed_distance = (center.value - prediction.center).norm();
    if seed_distance >= prediction.guard_radius() {
        return None;
    }
    Some(CenterRecord {
        n: prediction.n,
        period,
        value: center.value,
        residual: center.residual,
        seed_distance,
    })
}

/// Finds one center per window index `n`.
///
/// The periods of the centers in one family of windows form the series
/// `m_n = k nu p n + N`. Every offset `N` compatible with
/// `period_candidates` is scanned; for each `n` Newton starts from the
/// predicted `c_n`, and a root is kept when it is primitive of period `m_n`
/// and inside the guard disk `r_n^{5/4}`. The offset matching the most
/// windows wins, ties going to the smaller total relative seed distance.
pub fn find_center_sequence<T: Real>(
    constants: &SectorConstants<T>,
    n_range: RangeInclusive<usize>,
    period_candidates: RangeInclusive<usize>,
    tol: T,
) -> Result<Vec<CenterRecord<T>>> {
    let ns: Vec<usize> = n_range.filter(|n| *n >= 1).collect();
    if ns.is_empty() || period_candidates.is_empty() {
        return Ok(Vec::new());
    }
    let predictions: Vec<WindowPrediction<T>> =
        ns.iter().map(|&n| predict_window_center(constants, n)).collect::<Result<_>>()?;
    let stride = constants.gate_period() as i64;
    let (n_lo, n_hi) = (ns[0] as i64, *ns.last().unwrap() as i64);
    let (m_lo, m_hi) = (*period_candidates.start() as i64, *period_candidates.end() as i64);
    let offsets: Vec<i64> = (m_lo - stride * n_hi..=m_hi - stride * n_lo).collect();

    let series: Vec<(i64, Vec<CenterRecord<T>>)> = offsets
        .par_iter()
        .map(|&offset| {
            let records = predictions
                .iter()
                .filter_map(|pred| {
                    let m = stride * pred.n as i64 + offset;
                    if m < 1 || !period_candidates.contains(&(m as usize)) {
                        return None;
                    }
                    try_center(pred, m as usize, tol)
                })
                .collect();
            (offset, records)
        })
        .collect();

    let score = |recs: &[CenterRecord<T>]| -> T {
        recs.iter()
            .map(|r| r.seed_distance / (r.value - constants.c1).norm())
            .fold(T::zero(), |a, b| a + b)
    };
    let mut best: Option<&(i64, Vec<CenterRecord<T>>)> = None;
    for cand in &series {
        let better = match best {
            None => !cand.1.is_empty(),
            Some(b) => cand.1.len() > b.1.len() || (cand.1.len() == b.1.len() && score(&cand.1) < score(&b.1)),
        };
        if better {
            best = Some(cand);
        }
    }
    Ok(best.map(|b| b.1.clone()).unwrap_or_default())
}

/// `1/(s - c1)` for `nu >= 2`, `1/sqrt(s - c1)` on the sector branch for
/// `nu = 1`.
pub fn reciprocal_coordinate<T: Real>(constants: &SectorConstants<T>, s: Complex<T>) -> Result<Complex<T>> {
    let delta = s - constants.c1;
    if delta.norm() == T::zero() {
        return Err(Error::invalid("center coincides with c1"));
    }
    if constants.nu >= 2 {
        return Ok(delta.inv());
    }
    let a0 = constants
        .a0
        .ok_or_else(|| Error::invalid("sector constants lack A0"))?;
    let u = delta.sqrt();
    let w = a0 * u;
    let u = if w.im > T::zero() || (w.im == T::zero() && w.re > T::zero()) { u } else { -u };
    Ok(u.inv())
}

/// Slope of the reciprocal law predicted by the constants:
/// `nu^2 B0/(2 pi i)` or `A0/(2 pi i)`.
pub fn expected_slope<T: Real>(constants: &SectorConstants<T>) -> Result<Complex<T>> {
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    match (constants.nu, constants.a0, constants.b0) {
        (1, Some(a0), _) => Ok(a0 / two_pi_i),
        (nu, _, Some(b0)) if nu >= 2 => Ok(b0 * T::from_count(nu * nu) / two_pi_i),
        _ => Err(Error::invalid("sector constants lack the fitted A0/B0")),
    }
}

/// Affine least-squares fit of [`reciprocal_coordinate`] against `n`.
pub fn fit_center_law<T: Real>(constants: &SectorConstants<T>, records: &[CenterRecord<T>]) -> Result<SequenceFit<T>> {
    if records.len() < MIN_FIT_RECORDS {
        return Err(Error::invalid(format!(
            "center law needs at least {MIN_FIT_RECORDS} records, got {}",
            records.len()
        )));
    }
    let mut sorted = records.to_vec();
    sorted.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.period.cmp(&b.period))
            .then(a.value.re.partial_cmp(&b.value.re).unwrap_or(std::cmp::Ordering::Equal))
            .then(a.value.im.partial_cmp(&b.value.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let xs: Vec<T> = sorted.iter().map(|r| T::from_count(r.n)).collect();
    let ys: Vec<Complex<T>> = sorted
        .iter()
        .map(|r| reciprocal_coordinate(constants, r.value))
        .collect::<Result<_>>()?;
    let count = T::from_count(xs.len());
    let x_mean = xs.iter().fold(T::zero(), |a, b| a + *b) / count;
    let y_mean = ys.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b) / count;
    let (mut sxx, mut sxy) = (T::zero(), Complex::new(T::zero(), T::zero()));
    for (x, y) in xs.iter().zip(&ys) {
        let dx = *x - x_mean;
        sxx = sxx + dx * dx;
        sxy = sxy + (y - y_mean) * dx;
    }
    if sxx == T::zero() {
        return Err(Error::invalid("center law needs at least two distinct n"));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let max_relative_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * *x + intercept)).norm() / y.norm())
        .fold(T::zero(), T::max);
    Ok(SequenceFit {
        slope,
        intercept,
        max_relative_residual,
    })
}

/// Does the `P_c^p`-orbit of `z` stay in `D(0, trap_radius)` for `max_iter`
/// steps?
pub fn small_filled_julia_contains<T: Real>(c: Complex<T>, p: usize, z: Complex<T>, trap_radius: T, max_iter: usize) -> bool {
    let r2 = trap_radius * trap_radius;
    let mut z = z;
    if z.norm_sqr() > r2 {
        return false;
    }
    for _ in 0..max_iter {
        for _ in 0..p {
            z = z * z + c;
        }
        if !(z.norm_sqr() <= r2) {
            return false;
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
struct CenterRow {
    n: usize,
    period: usize,
    re: f64,
    im: f64,
    residual: f64,
    seed_distance: f64,
}

/// CSV with columns `n, period, re, im, residual, seed_distance`.
pub fn write_center_csv<W: Write>(out: W, records: &[CenterRecord<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CenterRow {
            n: r.n,
            period: r.period,
            re: r.value.re,
            im: r.value.im,
            residual: r.residual,
            seed_distance: r.seed_distance,
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}

pub fn read_center_csv<R: Read>(input: R) -> Result<Vec<CenterRecord<f64>>> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize::<CenterRow>()
        .map(|row| {
            let row = row.map_err(csv_err)?;
            Ok(CenterRecord {
                n: row.n,
                period: row.period,
                value: Complex::new(row.re, row.im),
                residual: row.residual,
                seed_distance: row.seed_distance,
            })
        })
        .collect()
}
