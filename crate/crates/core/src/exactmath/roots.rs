use num_traits::Signed;

use super::{half, intpoly, ExactMathError, Polynomial, Rational};

/// Half-open interval `(lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ExactMathError> {
        if lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(ExactMathError::EmptyInterval { lo: Box::new(lo), hi: Box::new(hi) })
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * half()
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x <= &self.hi
    }

    /// True if the two half-open intervals share a point.
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Sturm sequence of the square-free part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<Polynomial>,
}

impl SturmSequence {
    pub fn new(p: &Polynomial) -> Self {
        SturmSequence {
            chain: intpoly::sturm_chain(&p.square_free()),
        }
    }

    /// The square-free polynomial the chain was built from.
    pub fn base(&self) -> &Polynomial {
        &self.chain[0]
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        count_variations(self.chain.iter().map(|q| q.sign_at(x)))
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Distinct real roots over the whole line.
    pub fn count_all(&self) -> usize {
        let neg = count_variations(self.chain.iter().map(|q| q.sign_at_neg_infinity()));
        let pos = count_variations(self.chain.iter().map(|q| q.sign_at_pos_infinity()));
        neg.saturating_sub(pos)
    }
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Cauchy bound `1 + max |c_k / c_deg|`; every real root lies strictly inside
/// `(-bound, bound)`.
pub fn root_bound(p: &Polynomial) -> Rational {
    p.max_normalized_coeff() + Rational::from_integer(1.into())
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &Polynomial, iv: &Interval) -> usize {
    SturmSequence::new(p).count(iv.lo(), iv.hi())
}

/// Disjoint intervals, sorted ascending, each holding exactly one distinct
/// real root of `p`. Intervals are dyadic, at most 1 wide, and their lower
/// endpoint is never a root.
pub fn isolate_real_roots(p: &Polynomial) -> Vec<Interval> {
    if p.is_constant() {
        return Vec::new();
    }
    let sturm = SturmSequence::new(p);
    let cauchy = root_bound(sturm.base());
    let one = Rational::from_integer(1.into());
    let mut b = one.clone();
    while b < cauchy {
        b *= Rational::from_integer(2.into());
    }
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 if &hi - &lo <= one => out.push(shrink_off_root(&sturm, lo, hi)),
            _ => {
                let mid = (&lo + &hi) * half();
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

// Shrink (lo, hi] until `lo` is not itself a root, keeping the single root.
fn shrink_off_root(sturm: &SturmSequence, mut lo: Rational, mut hi: Rational) -> Interval {
    while sturm.base().sign_at(&lo) == 0 {
        let mid = (&lo + &hi) * half();
        if sturm.count(&mid, &hi) == 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval { lo, hi }
}

/// True iff `p` and `q` share a real root, i.e. `gcd(p, q)` has one.
pub fn has_common_real_root(p: &Polynomial, q: &Polynomial) -> bool {
    let g = p.gcd(q);
    if g.is_constant() {
        return false;
    }
    SturmSequence::new(&g).count_all() > 0
}

/// Bisection with exact signs until the returned point is within `tol` of the
/// single root of `p` in `iv`.
pub fn refine_root(p: &Polynomial, iv: &Interval, tol: &Rational) -> Result<Rational, ExactMathError> {
    if p.is_zero() {
        return Err(ExactMathError::ZeroPolynomial);
    }
    if !tol.is_positive() {
        return Err(ExactMathError::NonPositiveTolerance);
    }
    let q = p.square_free();
    let mut lo = iv.lo().clone();
    let mut hi = iv.hi().clone();
    if q.sign_at(&hi) == 0 {
        return Ok(hi);
    }
    let mut s_lo = q.sign_at(&lo);
    if s_lo == 0 {
        let sturm = SturmSequence::new(&q);
        if sturm.count(&lo, &hi) == 0 {
            return Err(ExactMathError::NoSignChange { lo: Box::new(lo), hi: Box::new(hi) });
        }
        let shrunk = shrink_off_root(&sturm, lo, hi);
        lo = shrunk.lo;
        hi = shrunk.hi;
        s_lo = q.sign_at(&lo);
        if q.sign_at(&hi) == 0 {
            return Ok(hi);
        }
    }
    if s_lo == q.sign_at(&hi) {
        return Err(ExactMathError::NoSignChange { lo: Box::new(lo), hi: Box::new(hi) });
    }
    let two_tol = tol * Rational::from_integer(2.into());
    while &hi - &lo > two_tol {
        let mid = (&lo + &hi) * half();
        match q.sign_at(&mid) {
            0 => return Ok(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok((lo + hi) * half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, ratio};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    fn iv(lo: Rational, hi: Rational) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn interval_rejects_empty() {
        assert!(Interval::new(int(1), int(1)).is_err());
        assert!(Interval::new(int(2), int(1)).is_err());
    }

    #[test]
    fn sturm_count_examples() {
        assert_eq!(sturm_count(&p(&[-2, 0, 1]), &iv(int(0), int(2))), 1);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &iv(int(-10), int(10))), 0);
        assert_eq!(sturm_count(&p(&[-1, 1]).pow(2), &iv(int(0), int(2))), 1);
    }

    #[test]
    fn sturm_count_half_open_endpoints() {
        let q = p(&[-1, 1]); // root at 1
        assert_eq!(sturm_count(&q, &iv(int(0), int(1))), 1);
        assert_eq!(sturm_count(&q, &iv(int(1), int(2))), 0);
    }

    #[test]
    fn isolate_examples() {
        let roots = isolate_real_roots(&p(&[-2, 0, 1]));
        assert_eq!(roots.len(), 2);
        assert!(roots[0].lo() >= &int(-2) && roots[0].hi() <= &int(-1));
        assert!(roots[1].lo() >= &int(1) && roots[1].hi() <= &int(2));

        let roots = isolate_real_roots(&p(&[5, 1]));
        assert_eq!(roots.len(), 1);
        assert!(roots[0].contains(&int(-5)));

        assert!(isolate_real_roots(&p(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn isolate_handles_root_on_split_point() {
        // x (x - 1)(x + 1): the first split of (-B, B] is at 0, a root
        let q = p(&[0, -1, 0, 1]);
        let roots = isolate_real_roots(&q);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert_ne!(q.sign_at(r.lo()), 0);
            assert_eq!(sturm_count(&q, r), 1);
        }
    }

    #[test]
    fn crr_examples() {
        let a = &p(&[-1, 1]) * &p(&[1, 1]);
        let b = &p(&[0, 1]) * &p(&[-1, 1]);
        assert!(has_common_real_root(&a, &b));
        assert!(!has_common_real_root(&p(&[1, 0, 1]), &p(&[7, 1])));
        let c = &p(&[0, 1]) * &p(&[1, 0, 1]);
        assert!(!has_common_real_root(&p(&[1, 0, 1]), &c));
    }

    #[test]
    fn refine_sqrt2() {
        let tol = ratio(1, 1_000_000);
        let r = refine_root(&p(&[-2, 0, 1]), &iv(int(1), int(2)), &tol).unwrap();
        // sqrt(2) = 1.41421356237..., bracket it with exact squares
        let lo = ratio(141_421_256, 100_000_000);
        let hi = ratio(141_421_457, 100_000_000);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
        assert!(r >= lo && r <= hi);
    }

    #[test]
    fn refine_exact_zero_exits_early() {
        let r = refine_root(&p(&[-3, 1]), &iv(int(2), int(4)), &ratio(1, 1_000_000)).unwrap();
        assert_eq!(r, int(3));
    }

    #[test]
    fn refine_cubic() {
        let tol = ratio(1, 1_000_000_000);
        let r = refine_root(&p(&[0, -1, 0, 1]), &iv(ratio(1, 2), ratio(3, 2)), &tol).unwrap();
        assert!((r - int(1)).abs() <= tol);
    }

    #[test]
    fn refine_without_root_fails() {
        let e = refine_root(&p(&[1, 0, 1]), &iv(int(0), int(1)), &ratio(1, 10));
        assert!(matches!(e, Err(ExactMathError::NoSignChange { .. })));
    }
}
