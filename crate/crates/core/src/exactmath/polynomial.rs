use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{intpoly, ExactMathError, Rational};

/// Degree of a polynomial. The zero polynomial has degree `NegInfinity`,
/// which is absorbing under addition and below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Degree::Finite(d) if d % 2 == 1)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense univariate polynomial over the rationals, stored as integer
/// numerators over one positive common denominator: coefficient `k` is
/// `num[k] / den`. The form is canonical: trailing zeros are stripped and
/// `gcd(num..., den) = 1`, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Default for Polynomial {
    fn default() -> Self {
        Polynomial::zero()
    }
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut den = BigInt::one();
        for c in &coeffs {
            if !c.denom().is_one() {
                den = den.lcm(c.denom());
            }
        }
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::from_parts(num, den)
    }

    /// `num[k] / den`, normalized. `den` must be nonzero.
    pub(crate) fn from_parts(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        while num.last().is_some_and(|c| c.is_zero()) {
            num.pop();
        }
        if num.is_empty() {
            return Polynomial {
                num,
                den: BigInt::one(),
            };
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in num.iter_mut() {
                    *c /= &g;
                }
                den /= &g;
            }
        }
        Polynomial { num, den }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_parts(coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
    }

    pub fn zero() -> Self {
        Polynomial {
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_parts(vec![c.numer().clone()], c.denom().clone())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x - r`.
    pub fn linear_root(r: Rational) -> Self {
        Self::from_parts(vec![-r.numer(), r.denom().clone()], r.denom().clone())
    }

    /// Coefficients by ascending power.
    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|k| self.coeff(k)).collect()
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        match self.num.get(k) {
            Some(c) => Rational::new(c.clone(), self.den.clone()),
            None => Rational::zero(),
        }
    }

    /// Integer numerators and the common denominator.
    pub(crate) fn parts(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1
    }

    pub fn degree(&self) -> Degree {
        match self.num.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading_coeff(&self) -> Option<Rational> {
        (!self.num.is_empty()).then(|| self.coeff(self.num.len() - 1))
    }

    /// `num(p/q) * q^deg` as an integer, for `x = p/q`; same sign as `p(x)`.
    fn eval_scaled(&self, x: &Rational) -> BigInt {
        let (p, q) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for (i, c) in self.num.iter().rev().enumerate() {
            if i == 0 {
                acc = c.clone();
            } else {
                qpow *= q;
                acc = acc * p + c * &qpow;
            }
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if self.num.is_empty() {
            return Rational::zero();
        }
        let d = self.num.len() - 1;
        let scale = num_traits::pow(x.denom().clone(), d) * &self.den;
        Rational::new(self.eval_scaled(x), scale)
    }

    /// Sign of `p(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        match self.eval_scaled(x).sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Sign of `p(x)` as `x` tends to plus infinity.
    pub fn sign_at_pos_infinity(&self) -> i8 {
        match self.num.last().map(|c| c.sign()) {
            Some(Sign::Plus) => 1,
            Some(Sign::Minus) => -1,
            _ => 0,
        }
    }

    /// Sign of `p(x)` as `x` tends to minus infinity.
    pub fn sign_at_neg_infinity(&self) -> i8 {
        let s = self.sign_at_pos_infinity();
        match self.degree() {
            Degree::Finite(d) if d % 2 == 1 => -s,
            _ => s,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let n = c.numer();
        Self::from_parts(self.num.iter().map(|a| a * n).collect(), &self.den * c.denom())
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.num.last() {
            None => Self::zero(),
            Some(lc) => Self::from_parts(self.num.clone(), lc.clone()),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_parts(
            self.num.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect(),
            self.den.clone(),
        )
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), ExactMathError> {
        let Some(lb) = divisor.num.last() else {
            return Err(ExactMathError::DivisionByZero);
        };
        let db = divisor.num.len() - 1;
        if self.num.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        // fraction-free: lb^s A = Q B + R on the integer numerators
        let mut r = self.num.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        let mut steps = 0u32;
        for k in (0..q.len()).rev() {
            let lr = std::mem::take(&mut r[k + db]);
            for c in q.iter_mut() {
                *c *= lb;
            }
            for c in r.iter_mut() {
                *c *= lb;
            }
            if !lr.is_zero() {
                for (j, b) in divisor.num[..db].iter().enumerate() {
                    r[k + j] -= &lr * b;
                }
            }
            q[k] = lr;
            steps += 1;
        }
        r.truncate(db);
        let lbs = num_traits::pow(lb.clone(), steps as usize);
        let base = &lbs * &self.den;
        let quot = Self::from_parts(q, base.clone()).scale(&Rational::from_integer(divisor.den.clone()));
        let rem = Self::from_parts(r, base);
        Ok((quot, rem))
    }

    /// Quotient of a division known to be exact. Returns `None` if the
    /// remainder is nonzero.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_constant() && !divisor.is_zero() {
            return Some(self.scale(&divisor.coeff(0).recip()));
        }
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Polynomial::one();
        }
        let (a, b) = (intpoly::primitive(self), intpoly::primitive(other));
        if intpoly::certainly_coprime(&a, &b) {
            return Polynomial::one();
        }
        intpoly::to_poly(&intpoly::gcd(&a, &b)).monic()
    }

    /// Monic least common multiple; zero if either argument is zero.
    pub fn lcm(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let g = self.gcd(other);
        (self * other).exact_div(&g).expect("gcd divides the product").monic()
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free(&self) -> Polynomial {
        if self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides p")
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest absolute value among the coefficients divided by the leading one.
    pub(crate) fn max_normalized_coeff(&self) -> Rational {
        let Some(lc) = self.num.last() else {
            return Rational::zero();
        };
        let lc = lc.abs();
        self.num[..self.num.len() - 1]
            .iter()
            .map(|c| Rational::new(c.abs(), lc.clone()))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                if a.is_integer() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn combine(a: &Polynomial, b: &Polynomial, sub: bool) -> Polynomial {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if sub { -b } else { b.clone() };
    }
    let (den, fa, fb) = if a.den == b.den {
        (a.den.clone(), BigInt::one(), BigInt::one())
    } else {
        let l = a.den.lcm(&b.den);
        let fa = &l / &a.den;
        let fb = &l / &b.den;
        (l, fa, fb)
    };
    let n = a.num.len().max(b.num.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.num.get(k).map(|c| if fa.is_one() { c.clone() } else { c * &fa });
        let y = b.num.get(k).map(|c| if fb.is_one() { c.clone() } else { c * &fb });
        out.push(match (x, y) {
            (Some(x), Some(y)) => {
                if sub {
                    x - y
                } else {
                    x + y
                }
            }
            (Some(x), None) => x,
            (None, Some(y)) => {
                if sub {
                    -y
                } else {
                    y
                }
            }
            (None, None) => unreachable!(),
        });
    }
    Polynomial::from_parts(out, den)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.num.len() + rhs.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_parts(out, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, ratio};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    #[test]
    fn gcd_shared_factor() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        assert_eq!(Polynomial::zero().gcd(&p(&[3, 3])), p(&[1, 1]));
    }

    #[test]
    fn gcd_coprime() {
        // x^2 + 1 = (x - 2)(x + 2) + 5, then gcd(x + 2, 5) = 1
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[2, 1])), Polynomial::one());
    }

    #[test]
    fn zero_degree_is_absorbing() {
        assert_eq!(Polynomial::zero().degree(), Degree::NegInfinity);
        assert_eq!(Degree::NegInfinity + Degree::Finite(3), Degree::NegInfinity);
        assert_eq!(Degree::Finite(2) + Degree::Finite(3), Degree::Finite(5));
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let prod = &Polynomial::zero() * &p(&[1, 2, 3]);
        assert_eq!(prod.degree(), Degree::NegInfinity);
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let q = Polynomial::new(vec![int(1), int(0), int(0)]);
        assert_eq!(q.degree(), Degree::Finite(0));
        assert_eq!((&p(&[1, 1]) - &p(&[0, 1])).degree(), Degree::Finite(0));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[5, -3, 0, 2, 7]);
        let b = p(&[1, 0, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree() < b.degree());
        assert_eq!(&(&q * &b) + &r, a);
        assert!(a.div_rem(&Polynomial::zero()).is_err());
    }

    #[test]
    fn square_free_part() {
        let sq = p(&[-1, 1]).pow(2);
        assert_eq!(sq.square_free(), p(&[-1, 1]));
        let cube = &p(&[2, 1]).pow(3) * &p(&[0, 1]);
        assert_eq!(cube.square_free(), p(&[0, 2, 1]));
    }

    #[test]
    fn eval_and_display() {
        let q = Polynomial::new(vec![ratio(1, 2), int(-3), int(1)]);
        assert_eq!(q.eval(&int(2)), ratio(-3, 2));
        assert_eq!(q.to_string(), "x^2 - 3x + (1/2)");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }
}
