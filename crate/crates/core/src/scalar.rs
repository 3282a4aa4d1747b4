//! Scalar abstractions. Exact quantities (densities, exponents) are
//! `Ratio<T>` over any [`ExactInt`]; real-valued statistics are generic over
//! `num_traits::Float`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::Serializer;

/// Integer types usable behind exact rationals: `i64`, `i128`, `BigInt`.
pub trait ExactInt:
    Integer + Signed + Clone + Hash + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// `num / den` as an exact rational; `den` must be nonzero.
pub fn ratio<T: ExactInt>(num: i64, den: i64) -> Ratio<T> {
    let n = T::from_i64(num).expect("integer fits the scalar type");
    let d = T::from_i64(den).expect("integer fits the scalar type");
    Ratio::new(n, d)
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_ratio<T: ExactInt>(r: &Ratio<T>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratio_to_f64<T: ExactInt>(r: &Ratio<T>) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn serialize_ratio<T: ExactInt, S: Serializer>(
    r: &Ratio<T>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}
