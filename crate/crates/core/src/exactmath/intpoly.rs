//! Integer-coefficient helpers for gcd and Sturm chains. Working with
//! primitive integer polynomials keeps coefficient growth in check where
//! Euclid over the rationals explodes.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Polynomial;

pub(crate) type IntPoly = Vec<BigInt>;

fn trim(mut v: IntPoly) -> IntPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Positive content of a coefficient list.
fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Clears denominators and divides by the positive content; the sign of the
/// leading coefficient is kept.
pub(crate) fn primitive(p: &Polynomial) -> IntPoly {
    make_primitive(p.parts().0.to_vec())
}

fn make_primitive(v: IntPoly) -> IntPoly {
    let v = trim(v);
    let g = content(&v);
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

pub(crate) fn to_poly(v: &[BigInt]) -> Polynomial {
    Polynomial::from_parts(v.to_vec(), BigInt::one())
}

/// `lc(b)^s a - q b` with `deg < deg b`, and the number of steps `s`.
fn prem(a: &[BigInt], b: &[BigInt]) -> (IntPoly, usize) {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: IntPoly = a.to_vec();
    let mut steps = 0;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r = trim(r);
        steps += 1;
    }
    (r, steps)
}

/// Primitive gcd of two nonzero integer polynomials.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let (mut a, mut b) = if a.len() >= b.len() { (a.to_vec(), b.to_vec()) } else { (b.to_vec(), a.to_vec()) };
    loop {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let (r, _) = prem(&a, &b);
        if r.is_empty() {
            return make_primitive(b);
        }
        a = b;
        b = make_primitive(r);
    }
}

/// Sturm chain of `p0` up to positive factors, with integer coefficients.
pub(crate) fn sturm_chain(p0: &Polynomial) -> Vec<Polynomial> {
    let a0 = primitive(p0);
    let mut chain = vec![a0.clone()];
    if a0.len() <= 1 {
        return chain.iter().map(|v| to_poly(v)).collect();
    }
    let d: IntPoly = a0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut prev = a0;
    let mut cur = make_primitive(d);
    while !cur.is_empty() {
        let (r, s) = prem(&prev, &cur);
        let flip = cur.last().unwrap().sign() == Sign::Minus && s % 2 == 1;
        let next: IntPoly = if flip { r } else { r.into_iter().map(|c| -c).collect() };
        chain.push(cur.clone());
        prev = cur;
        cur = make_primitive(next);
    }
    chain.iter().map(|v| to_poly(v)).collect()
}

const PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn reduce(v: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    v.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect()
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let inv = powmod(*b.last().unwrap(), p - 2, p);
            let f = mulmod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                let t = mulmod(f, *bj, p);
                a[shift + j] = (a[shift + j] + p - t) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when `a` and `b` are certainly coprime: their gcd modulo some prime
/// not dividing either leading coefficient is constant.
pub(crate) fn certainly_coprime(a: &[BigInt], b: &[BigInt]) -> bool {
    PRIMES.iter().any(|&p| {
        let (ra, rb) = (reduce(a, p), reduce(b, p));
        ra.last() != Some(&0) && rb.last() != Some(&0) && gcd_degree_mod(ra, rb, p) == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn int_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let g = gcd(&ip(&[-2, 1, 1]), &ip(&[3, -4, 1]));
        assert_eq!(g, ip(&[-1, 1]));
        assert_eq!(gcd(&ip(&[1, 0, 1]), &ip(&[2, 1])), ip(&[1]));
    }

    #[test]
    fn modular_coprimality() {
        assert!(certainly_coprime(&ip(&[1, 0, 1]), &ip(&[2, 1])));
        assert!(!certainly_coprime(&ip(&[-2, 1, 1]), &ip(&[3, -4, 1])));
    }
}
