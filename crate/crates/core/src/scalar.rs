//! Shared scalar abstraction over `f64` and exact big rationals.
//!
//! Recursion coefficients, contiguous-relation coefficients and terminating
//! sums are all rational functions of the parameters, so they are written once
//! against this trait and instantiated in both the floating and the exact
//! domain.

use std::ops::{Div, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arguments this close to a pole or a vanishing denominator are treated as
/// exactly at it.
pub const POLE_TOL: f64 = 1e-12;

/// Field operations needed by the generic recursion and relation machinery.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    fn from_int(n: i64) -> Self;

    /// True when the value is too close to zero to divide by. Floating
    /// scalars compare against `tol`; exact scalars ignore it and test for
    /// zero.
    fn vanishes_within(&self, tol: f64) -> bool;

    /// [`Scalar::vanishes_within`] at the global pole tolerance.
    fn is_vanishing(&self) -> bool {
        self.vanishes_within(POLE_TOL)
    }

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn vanishes_within(&self, tol: f64) -> bool {
        self.abs() < tol
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn vanishes_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Lossy conversion that stays accurate for the magnitudes seen here.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or_else(|| {
        // Fall back to a quotient of leading digits when numerator or
        // denominator individually overflow f64.
        let digits = 30usize;
        let num = q.numer();
        let den = q.denom();
        let shift = (num.to_string().len().max(den.to_string().len())).saturating_sub(digits);
        let scale = BigInt::from(10u8).pow(shift as u32);
        let n = num_traits::ToPrimitive::to_f64(&(num / &scale)).unwrap_or(f64::NAN);
        let d = num_traits::ToPrimitive::to_f64(&(den / &scale)).unwrap_or(f64::NAN);
        n / d
    })
}

/// Parse a rational literal: either `p/q` or a plain integer.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = text.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Signed distance from `x` to the nearest nonpositive integer, used for pole
/// guards. Positive arguments are measured against the pole at zero.
pub fn dist_to_nonpositive_int(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        (x - x.round()).abs()
    }
}

/// True when `x` is a nonpositive integer within [`POLE_TOL`].
pub fn is_nonpositive_int(x: f64) -> bool {
    (x - x.round()).abs() < POLE_TOL && x.round() <= 0.0
}
