//! Scalar abstraction shared by the float and exact-rational code paths.
//!
//! The distance engine and the one-dimensional construction are generic over
//! [`CurveScalar`]. Two implementations exist: `f64` for general dimensions
//! and [`BigRational`] for the exact one-dimensional certification path.
//!
//! The two implementations encode vertex separation differently: `f64` uses
//! the Euclidean distance itself, while `BigRational` uses the *squared*
//! Euclidean distance so every value stays rational. Squaring is monotone on
//! nonnegative reals, so minima, maxima and comparisons agree between the two
//! encodings; [`CurveScalar::separation_to_distance`] maps a separation back
//! to distance units (an exact integer square root on the rational side).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

pub trait CurveScalar:
    Clone + std::fmt::Debug + std::fmt::Display + PartialEq + PartialOrd + num::Num + Signed
{
    fn from_int(v: i64) -> Self;

    /// Nearest-`f64` view of the value, for reporting and rendering.
    fn to_f64(&self) -> f64;

    /// Comparable separation of two vertices of equal dimension:
    /// Euclidean distance for `f64`, squared Euclidean distance for rationals.
    fn vertex_separation(a: &[Self], b: &[Self]) -> Self;

    /// Converts a separation value back to distance units. Identity for
    /// `f64`; exact square root for rationals, `None` when the value is not
    /// the square of a rational (cannot happen for 1-dimensional curves).
    fn separation_to_distance(sep: &Self) -> Option<Self>;

    /// Encodes a distance threshold in separation units (identity / square).
    fn distance_to_separation(dist: &Self) -> Self;
}

impl CurveScalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn vertex_separation(a: &[Self], b: &[Self]) -> Self {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    fn separation_to_distance(sep: &Self) -> Option<Self> {
        Some(*sep)
    }

    fn distance_to_separation(dist: &Self) -> Self {
        *dist
    }
}

impl CurveScalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational magnitude exceeds f64 range")
    }

    fn vertex_separation(a: &[Self], b: &[Self]) -> Self {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let diff = x - y;
                &diff * &diff
            })
            .fold(BigRational::zero(), |acc, term| acc + term)
    }

    fn separation_to_distance(sep: &Self) -> Option<Self> {
        exact_sqrt(sep)
    }

    fn distance_to_separation(dist: &Self) -> Self {
        dist * dist
    }
}

/// Exact square root of a nonnegative rational, `None` unless both the
/// (reduced) numerator and denominator are perfect squares.
pub fn exact_sqrt(value: &BigRational) -> Option<BigRational> {
    if value.is_negative() {
        return None;
    }
    let num_root = value.numer().sqrt();
    let den_root = value.denom().sqrt();
    if &(&num_root * &num_root) == value.numer() && &(&den_root * &den_root) == value.denom() {
        Some(BigRational::new(num_root, den_root))
    } else {
        None
    }
}
