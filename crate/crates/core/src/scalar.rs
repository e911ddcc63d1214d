//! Scalar abstractions.
//!
//! [`Scalar`] is enough for counting arithmetic (metrics, Gini impurity,
//! polarity scores) and is implemented by floats as well as exact rationals
//! such as `num_rational::Ratio<i64>`. [`Real`] adds the transcendental
//! functions needed by IDF weighting, naive Bayes and logistic regression.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num + FromPrimitive + ToPrimitive + PartialOrd + Copy + Debug + Send + Sync + 'static
{
    /// Converts a count. Panics only if the count is not representable,
    /// which does not happen for the float and 64-bit rational types.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn of_f64(x: f64) -> Self {
        Self::from_f64(x).expect("value representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl<T> Scalar for T where
    T: Num + FromPrimitive + ToPrimitive + PartialOrd + Copy + Debug + Send + Sync + 'static
{
}

pub trait Real: Scalar + Float {}

impl<T> Real for T where T: Scalar + Float {}

/// Rounds half away from zero at `decimals` places, the way report tables
/// are rendered. A 1e-9 nudge absorbs binary representation error so that
/// decimal halves such as 0.825 round up.
pub fn round_half_up(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let scaled = x * scale;
    let rounded = if scaled >= 0.0 {
        (scaled + 0.5 + 1e-9).floor()
    } else {
        -((-scaled) + 0.5 + 1e-9).floor()
    };
    rounded / scale
}
