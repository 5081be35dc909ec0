//! Exact arithmetic over the rationals: univariate polynomials, rational
//! functions, Sturm sequences and real-root isolation.
//!
//! Every value here is immutable once built and every operation is a pure
//! function, so the types can be shared freely between threads.

mod intpoly;
mod polynomial;
mod ratfunc;
mod roots;

pub use polynomial::{Degree, Polynomial};
pub use ratfunc::RationalFunction;
pub use roots::{
    has_common_real_root, isolate_real_roots, refine_root, root_bound, sturm_count, Interval,
    SturmSequence,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
pub use num_rational::BigRational as Rational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactMathError {
    #[error("empty interval: lo {lo} is not below hi {hi}")]
    EmptyInterval { lo: Box<Rational>, hi: Box<Rational> },
    #[error("interval ({lo}, {hi}] does not bracket a sign change")]
    NoSignChange { lo: Box<Rational>, hi: Box<Rational> },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Nearest `f64`, for display and SVG output only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match r.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            // huge numerator/denominator: scale both down by the same power of two
            let n = r.numer();
            let d = r.denom();
            let shift = n.bits().max(d.bits()).saturating_sub(1000);
            let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub(crate) fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}
