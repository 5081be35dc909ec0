use std::fmt;

use num_traits::Zero;

use super::{has_common_real_root, Degree, ExactMathError, Polynomial, Rational};

/// `numerator / denominator` with a monic, nonzero denominator. No common
/// factor is cancelled: the representation is kept as built so that the
/// common-real-root test sees the same pair of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self, ExactMathError> {
        let lc = denominator
            .leading_coeff()
            .ok_or(ExactMathError::DivisionByZero)?
            .recip();
        Ok(RationalFunction {
            numerator: numerator.scale(&lc),
            denominator: denominator.scale(&lc),
        })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        RationalFunction {
            numerator: p,
            denominator: Polynomial::one(),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn degrees(&self) -> (Degree, Degree) {
        (self.numerator.degree(), self.denominator.degree())
    }

    /// `max(|numerator|, |denominator|)`.
    pub fn max_degree(&self) -> Degree {
        self.numerator.degree().max(self.denominator.degree())
    }

    /// Numerator and denominator share no real root.
    pub fn is_crr(&self) -> bool {
        self.numerator.is_zero() || !has_common_real_root(&self.numerator, &self.denominator)
    }

    /// Value at `x`, or `None` at a root of the denominator.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.denominator.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.numerator.eval(x) / d)
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;

    #[test]
    fn denominator_made_monic() {
        let f = RationalFunction::new(Polynomial::from_i64(&[2, 4]), Polynomial::from_i64(&[6, 2])).unwrap();
        assert_eq!(f.denominator(), &Polynomial::from_i64(&[3, 1]));
        assert_eq!(f.numerator(), &Polynomial::from_i64(&[1, 2]));
        assert_eq!(f.eval(&int(1)), Some(crate::exactmath::ratio(3, 4)));
        assert_eq!(f.eval(&int(-3)), None);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn crr_flag() {
        let x1 = Polynomial::from_i64(&[-1, 1]);
        let f = RationalFunction::new(&x1 * &x1, x1.clone()).unwrap();
        assert!(!f.is_crr());
        let g = RationalFunction::new(Polynomial::from_i64(&[1, 0, 1]), x1).unwrap();
        assert!(g.is_crr());
        assert_eq!(g.max_degree(), Degree::Finite(2));
    }
}
