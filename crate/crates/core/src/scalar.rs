//! Scalar abstraction shared by every numerical module.
//!
//! All of the dynamics is written against [`Real`], which is satisfied by
//! `f32` and `f64`. The renderer and the CLI use the `f64` aliases exported
//! from the crate root.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the dynamics is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count into this scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest modulus an orbit may reach before squaring could overflow.
    #[inline]
    fn overflow_guard() -> Self {
        Self::max_value().sqrt().sqrt()
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Lossy conversion used for diagnostics and error payloads.
#[inline]
pub(crate) fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

/// Parses `a+bi`, `a-bi`, `bi`, `a` and `a,b` forms.
pub fn parse_complex(text: &str) -> Option<Complex<f64>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    if let Some((re, im)) = s.split_once(',') {
        return Some(Complex::new(re.parse().ok()?, im.parse().ok()?));
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Some(Complex::new(s.parse().ok()?, 0.0));
    };
    // Split at the last sign that is not part of an exponent or the leading sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let ch = bytes[idx];
        if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let parse_im = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => t.parse().ok(),
        }
    };
    match split {
        Some(idx) => Some(Complex::new(body[..idx].parse().ok()?, parse_im(&body[idx..])?)),
        None => Some(Complex::new(0.0, parse_im(body)?)),
    }
}

/// Inverse of [`parse_complex`], emitting `a+bi` with full precision.
pub fn format_complex(z: Complex<f64>) -> String {
    if z.im.is_sign_negative() {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_complex("-0.77+0.18i"), Some(Complex::new(-0.77, 0.18)));
        assert_eq!(parse_complex("-1.25"), Some(Complex::new(-1.25, 0.0)));
        assert_eq!(parse_complex("2i"), Some(Complex::new(0.0, 2.0)));
        assert_eq!(parse_complex("-i"), Some(Complex::new(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3-2.5e-2i"), Some(Complex::new(1e-3, -2.5e-2)));
        assert_eq!(parse_complex("0.5, -0.25"), Some(Complex::new(0.5, -0.25)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn format_roundtrips() {
        for z in [Complex::new(-0.77, 0.18), Complex::new(1e-300, -3.5), Complex::new(0.0, -0.0)] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
    }

    #[test]
    fn overflow_guard_squares_safely() {
        let g = <f64 as Real>::overflow_guard();
        assert!((g * g).is_finite());
        let g32 = <f32 as Real>::overflow_guard();
        assert!((g32 * g32).is_finite());
    }
}
