//! Holomorphic motions of self-similar sets with prescribed dimension.
//!
//! The crate is organised bottom-up:
//!
//! * [`harmonic`]: closed-form harmonic functions on the unit disk, their
//!   finite lower envelopes and Harnack distances.
//! * [`ifs`]: contractive similarity systems, open-set checks, limit-set
//!   rendering and the similarity-dimension root solver.
//! * [`motion`]: explicit motions `λ ↦ E_λ` whose reciprocal dimension is a
//!   given positive harmonic function (plus a constant), and finite unions of
//!   them realising an inf-harmonic reciprocal dimension.
//! * [`dimest`]: dyadic box counting and greedy packing estimators.
//! * [`bounds`]: closed-form quasiconformal distortion bounds.
//! * [`verify`]: numerical property checks tying the pieces together.
//! * [`config`], [`io`]: the JSON motion config and CSV / SVG artifacts.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod dimest;
mod error;
pub mod harmonic;
pub mod ifs;
pub mod io;
pub mod motion;
pub mod root;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// A point of the complex plane. Coordinates are required to be finite
/// wherever points enter the library from outside (see [`checked_point`]).
pub type ComplexPoint = Complex64;

/// Builds a point, rejecting NaN and infinite coordinates.
pub fn checked_point(re: f64, im: f64) -> Result<ComplexPoint> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(Error::NonFinite(format!("({re}, {im})")))
    }
}

/// Fails with [`Error::PointOutsideDisk`] unless `|λ| < 1`.
pub fn require_in_disk(lambda: ComplexPoint) -> Result<()> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::NonFinite(format!("{lambda}")));
    }
    if lambda.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::PointOutsideDisk(lambda.norm()))
    }
}

/// Parses a complex number written as `a`, `bi`, `a+bi` or `a-bi`.
///
/// `i` alone means `1i`; whitespace is ignored.
pub fn parse_complex(text: &str) -> Result<ComplexPoint> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse complex number {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let imag_part = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    let z = if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent or the leading sign
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re = body[..idx].parse::<f64>().map_err(|_| bad())?;
                Complex64::new(re, imag_part(&body[idx..])?)
            }
            None => Complex64::new(0.0, imag_part(body)?),
        }
    } else {
        Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0)
    };
    checked_point(z.re, z.im)
}
