//! Decorated Mandelbrot sets.
//!
//! For a parameter `sigma` outside `M` the Julia set `J(P_sigma)` is a Cantor
//! set. After choosing `R` with `J(P_sigma)` inside the annulus
//! `A(R^-1/2, R^1/2)`, the rescaled copy `Gamma_0 = R^{3/2} J(P_sigma)` lies in
//! `A(R, R^2)` and its `2^m`-th root preimages `Gamma_m` lie in the disjoint
//! annuli `A(R^{2^-m}, R^{2^-m+1})`. The decorated set is `M` together with
//! the pullbacks of all `Gamma_m` under `Phi_M`.
//!
//! Membership is a thickness test: a point belongs to `Gamma_0` when the
//! distance estimate to `J(P_sigma)` at `Z R^{-3/2}` is below a tolerance.

use std::path::Path;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::boettcher::{boettcher_julia, julia_distance_estimate_with, safe_radius};
use crate::dynamics::escape_time;
use crate::error::{Error, Result};
use crate::scalar::{to_c64, Real};

pub const DEFAULT_M_MAX: u32 = 12;
pub const DEFAULT_SAMPLE_COUNT: usize = 10_000;
pub const DEFAULT_MARGIN: f64 = 1.1;
pub const DEFAULT_PROXIMITY_TOL: f64 = 1e-3;
/// Inverse-iteration steps discarded before points are recorded.
const BURN_IN: usize = 64;
/// Iteration budget for the distance estimate to `J(P_sigma)`.
const JULIA_DE_ITER: usize = 2_000;
const SIGMA_ESCAPE_ITER: usize = 100_000;

fn require_outside_m<T: Real>(sigma: Complex<T>) -> Result<()> {
    if escape_time(sigma, Complex::new(T::zero(), T::zero()), SIGMA_ESCAPE_ITER, T::lit(2.0)).escaped {
        Ok(())
    } else {
        Err(Error::InsideSet {
            c: to_c64(sigma),
            max_iter: SIGMA_ESCAPE_ITER,
        })
    }
}

/// Samples `J(P_sigma)` by inverse iteration `z <- ±sqrt(z - sigma)` with
/// random signs drawn from a seeded ChaCha stream.
pub fn julia_sample<T: Real>(sigma: Complex<T>, count: usize, seed: u64) -> Result<Vec<Complex<T>>> {
    require_outside_m(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = Complex::new(T::one(), T::zero());
    let step = |z: Complex<T>, rng: &mut ChaCha8Rng| {
        let r = (z - sigma).sqrt();
        if rng.gen::<bool>() {
            r
        } else {
            -r
        }
    };
    for _ in 0..BURN_IN {
        z = step(z, &mut rng);
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        z = step(z, &mut rng);
        out.push(z);
    }
    Ok(out)
}

/// `R = margin * max(max|z|^2, min|z|^-2)` over a sample of the Julia set.
pub fn radius_for_sample<T: Real>(sample: &[Complex<T>], margin: T) -> Result<T> {
    if !(margin > T::one()) {
        return Err(Error::invalid("margin must exceed 1 for strict containment"));
    }
    if sample.is_empty() {
        return Err(Error::invalid("empty Julia sample"));
    }
    let (lo, hi) = sample.iter().fold((T::infinity(), T::zero()), |(lo, hi), z| {
        let r = z.norm();
        (lo.min(r), hi.max(r))
    });
    if lo < T::lit(1e-12) {
        return Err(Error::invalid("Julia sample passes through 0"));
    }
    Ok(margin * (hi * hi).max(T::one() / (lo * lo)))
}

/// Chooses `R` so that `J(P_sigma)` (sampled with [`DEFAULT_SAMPLE_COUNT`]
/// points, seed 0) lies in `A(R^-1/2, R^1/2)`.
pub fn choose_r<T: Real>(sigma: Complex<T>, margin: T) -> Result<T> {
    if !(margin > T::one()) {
        return Err(Error::invalid("margin must exceed 1 for strict containment"));
    }
    let sample = julia_sample(sigma, DEFAULT_SAMPLE_COUNT, 0)?;
    radius_for_sample(&sample, margin)
}

/// Serializable parameters of a [`DecorationModel`]; the Julia sample is
/// regenerated from the seed on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecorationParams<T> {
    pub sigma: Complex<T>,
    pub r: T,
    pub proximity_tol: T,
    pub sample_seed: u64,
    pub sample_count: usize,
    pub m_max: u32,
}

/// `sigma`, the scale `R` and a Julia sample; immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct DecorationModel<T> {
    pub sigma: Complex<T>,
    pub r: T,
    pub julia_points: Vec<Complex<T>>,
    pub proximity_tol: T,
    pub sample_seed: u64,
    pub m_max: u32,
    log_r: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MembershipKind {
    InM,
    OnDecoration(u32),
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict<T> {
    pub kind: MembershipKind,
    /// `G_M(c)`; zero exactly for `InM`.
    pub witness_potential: T,
}

impl<T: Real> DecorationModel<T> {
    /// Builds a model, choosing `R` from a fresh Julia sample.
    pub fn new(sigma: Complex<T>, margin: T, sample_count: usize, seed: u64, proximity_tol: T) -> Result<Self> {
        let julia_points = julia_sample(sigma, sample_count.max(1), seed)?;
        let r = radius_for_sample(&julia_points, margin)?;
        Self::from_parts(sigma, r, julia_points, proximity_tol, seed, DEFAULT_M_MAX)
    }

    /// Builds a model for a given `R`, checking the containment invariant.
    pub fn with_radius(sigma: Complex<T>, r: T, sample_count: usize, seed: u64, proximity_tol: T, m_max: u32) -> Result<Self> {
        let julia_points = julia_sample(sigma, sample_count.max(1), seed)?;
        Self::from_parts(sigma, r, julia_points, proximity_tol, seed, m_max)
    }

    fn from_parts(
        sigma: Complex<T>,
        r: T,
        julia_points: Vec<Complex<T>>,
        proximity_tol: T,
        sample_seed: u64,
        m_max: u32,
    ) -> Result<Self> {
        if !(r > T::one()) {
            return Err(Error::invalid("R must exceed 1"));
        }
        if !(proximity_tol > T::zero()) {
            return Err(Error::invalid("proximity tolerance must be positive"));
        }
        let (inner, outer) = (r.powf(T::lit(-0.5)), r.sqrt());
        if let Some(z) = julia_points.iter().find(|z| !(z.norm() > inner && z.norm() < outer)) {
            return Err(Error::invalid(format!(
                "Julia point {} lies outside A(R^-1/2, R^1/2) for R = {}",
                to_c64(*z),
                r.as_f64()
            )));
        }
        Ok(Self {
            sigma,
            r,
            julia_points,
            proximity_tol,
            sample_seed,
            m_max,
            log_r: r.ln(),
        })
    }

    pub fn params(&self) -> DecorationParams<T> {
        DecorationParams {
            sigma: self.sigma,
            r: self.r,
            proximity_tol: self.proximity_tol,
            sample_seed: self.sample_seed,
            sample_count: self.julia_points.len(),
            m_max: self.m_max,
        }
    }

    pub fn from_params(p: &DecorationParams<T>) -> Result<Self> {
        Self::with_radius(p.sigma, p.r, p.sample_count, p.sample_seed, p.proximity_tol, p.m_max)
    }

    pub fn log_r(&self) -> T {
        self.log_r
    }

    /// Distance estimate from `Z R^{-3/2}` to `J(P_sigma)`; zero for
    /// non-escaping points.
    pub fn gamma0_distance(&self, big_z: Complex<T>) -> T {
        let z = big_z * self.r.powf(T::lit(-1.5));
        julia_distance_estimate_with(self.sigma, z, JULIA_DE_ITER).unwrap_or(T::zero())
    }

    /// Is `Z` within the proximity tolerance of `Gamma_0(sigma)`?
    pub fn gamma0_contains(&self, big_z: Complex<T>) -> bool {
        self.gamma0_contains_with_tol(big_z, self.proximity_tol)
    }

    pub fn gamma0_contains_with_tol(&self, big_z: Complex<T>, tol: T) -> bool {
        self.gamma0_distance(big_z) < tol
    }

    /// Level `m` with `R^{2^-m} < |w| <= R^{2^-m+1}`, or `None` outside
    /// `A(1, R^2)` or beyond `m_max`.
    pub fn gamma_level(&self, w: Complex<T>) -> Option<u32> {
        self.level_for_log_modulus(w.norm().ln())
    }

    /// Level for a given `log|w|` (equivalently `G_M(c)` for `w = Phi_M(c)`).
    pub fn level_for_log_modulus(&self, log_mod: T) -> Option<u32> {
        if !(log_mod > T::zero()) || log_mod > self.log_r * T::lit(2.0) {
            return None;
        }
        let mut l = log_mod;
        let mut m = 0;
        while l <= self.log_r {
            if m >= self.m_max {
                return None;
            }
            l = l * T::lit(2.0);
            m += 1;
        }
        Some(m)
    }

    /// Does `w` lie in `Gamma_m(sigma)` for its level `m`?
    pub fn gamma_m_contains(&self, w: Complex<T>) -> bool {
        let Some(m) = self.gamma_level(w) else {
            return false;
        };
        let mut big_z = w;
        for _ in 0..m {
            big_z = big_z * big_z;
        }
        self.gamma0_contains(big_z)
    }

    /// Classifies `c` as in `M`, on the decoration of some level, or outside.
    pub fn decorated_membership(&self, c: Complex<T>, max_iter: usize) -> MembershipVerdict<T> {
        self.classify(c, max_iter, None).verdict
    }

    /// As [`Self::decorated_membership`] with the `Gamma_0` thickness given
    /// as a distance in the `c`-plane instead of the model tolerance.
    pub fn decorated_membership_with_parameter_tol(&self, c: Complex<T>, max_iter: usize, c_tol: T) -> MembershipVerdict<T> {
        self.classify(c, max_iter, Some(c_tol)).verdict
    }

    pub(crate) fn classify(&self, c: Complex<T>, max_iter: usize, c_tol: Option<T>) -> Classification<T> {
        let two = T::lit(2.0);
        let escape2 = T::lit(16.0);
        let bail2 = T::lit(1e16);
        let mut orbit = Vec::with_capacity(64);
        let mut z = c;
        let mut dc = Complex::new(T::one(), T::zero());
        let mut scale = T::one();
        // Same escape decision as `escape_time` with radius 4; once escaped
        // the orbit runs on to the large bailout for the potential.
        let mut escaped = false;
        let mut i = 1;
        loop {
            if !escaped && i > max_iter {
                return Classification {
                    verdict: MembershipVerdict {
                        kind: MembershipKind::InM,
                        witness_potential: T::zero(),
                    },
                    distance: None,
                };
            }
            orbit.push(z);
            if z.norm_sqr() > escape2 {
                escaped = true;
            }
            if escaped && z.norm_sqr() > bail2 {
                break;
            }
            dc = dc * z * two + T::one();
            z = z * z + c;
            scale = scale * T::lit(0.5);
            i += 1;
        }
        let green = z.norm().ln() * scale;
        let log_derivative = dc / z * scale;
        let distance = Some(z.norm() * z.norm().ln() / dc.norm());
        let outside = || Classification {
            verdict: MembershipVerdict {
                kind: MembershipKind::Outside,
                witness_potential: green,
            },
            distance,
        };
        let Some(m) = self.level_for_log_modulus(green) else {
            return outside();
        };
        // Phi_M(c)^(2^m) = phi_c(z_m), evaluated where G_c(z_m) > log R.
        let zm = orbit[m as usize];
        let big_z = if zm.norm() >= safe_radius(c) {
            boettcher_julia(c, zm, 0)
        } else {
            boettcher_julia(c, zm, max_iter)
        };
        let Ok(big_z) = big_z else {
            return outside();
        };
        let tol = match c_tol {
            None => self.proximity_tol,
            Some(ct) => {
                // |dz/dc| for z = Phi_M(c)^(2^m) R^{-3/2}.
                let dz_dc = T::lit(2.0).powi(m as i32) * big_z.norm() * log_derivative.norm() * self.r.powf(T::lit(-1.5));
                ct * dz_dc
            }
        };
        let kind = if self.gamma0_contains_with_tol(big_z, tol) {
            MembershipKind::OnDecoration(m)
        } else {
            MembershipKind::Outside
        };
        Classification {
            verdict: MembershipVerdict {
                kind,
                witness_potential: green,
            },
            distance,
        }
    }
}

pub(crate) struct Classification<T> {
    pub verdict: MembershipVerdict<T>,
    /// Distance estimate from `c` to `M`.
    pub distance: Option<T>,
}

impl<T: Real + Serialize + DeserializeOwned> DecorationModel<T> {
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.params()).expect("decoration parameters serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let p: DecorationParams<T> = toml::from_str(text).map_err(|e| Error::invalid(e.to_string()))?;
        Self::from_params(&p)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let p: DecorationParams<T> = toml::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_params(&p)
    }
}
