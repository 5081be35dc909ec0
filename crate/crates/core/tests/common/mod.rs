//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use triarea::exactmath::{Polynomial, Rational};
use triarea::generators::{accordion, double_stacking, k4, octahedron, stacked_3tree};
use triarea::symbolic::Point;
use triarea::PlaneTriangulation;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Twice the signed area of a polygon by the shoelace sum.
pub fn shoelace(poly: &[&Point]) -> Rational {
    let mut s = Rational::zero();
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        s += &a.x * &b.y - &b.x * &a.y;
    }
    s
}

fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    let v = shoelace(&[a, b, c]);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    let between = |u: &Rational, v: &Rational, w: &Rational| (u.min(v) <= w) && (w <= u.max(v));
    orient(a, b, p) == 0 && between(&a.x, &b.x, &p.x) && between(&a.y, &b.y, &p.y)
}

/// Whether two segments meet anywhere other than a shared endpoint.
pub fn segments_conflict(a: &Point, b: &Point, c: &Point, d: &Point, shared: usize) -> bool {
    match shared {
        2 => false,
        1 => {
            // collinear overlap beyond the shared vertex
            let (s, x, y) = if a == c {
                (a, b, d)
            } else if a == d {
                (a, b, c)
            } else if b == c {
                (b, a, d)
            } else {
                (b, a, c)
            };
            orient(s, x, y) == 0 && (on_segment(s, x, y) || on_segment(s, y, x))
        }
        _ => {
            let (o1, o2) = (orient(a, b, c), orient(a, b, d));
            let (o3, o4) = (orient(c, d, a), orient(c, d, b));
            if o1 * o2 < 0 && o3 * o4 < 0 {
                return true;
            }
            on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
        }
    }
}

/// Brute force over all edge pairs; also rejects coincident vertices.
pub fn has_crossing(t: &PlaneTriangulation, pts: &[Point]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return true;
            }
        }
    }
    let edges = t.edges();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            let shared = [c, d].iter().filter(|v| **v == a || **v == b).count();
            if segments_conflict(&pts[a], &pts[b], &pts[c], &pts[d], shared) {
                return true;
            }
        }
    }
    false
}

/// The point `v` with shoelace(f, m, v) = a and shoelace(m, l, v) = b, by
/// Gaussian elimination on the expanded linear system.
pub fn solve_two_areas(f: &Point, m: &Point, l: &Point, a: &Rational, b: &Rational) -> Option<Point> {
    // shoelace(p, q, v) = (p.x q.y - q.x p.y) + v.x (p.y - q.y) + v.y (q.x - p.x)
    let row = |p: &Point, q: &Point, area: &Rational| {
        [
            &p.y - &q.y,
            &q.x - &p.x,
            area - (&p.x * &q.y - &q.x * &p.y),
        ]
    };
    let mut r = [row(f, m, a), row(m, l, b)];
    if r[0][0].is_zero() {
        r.swap(0, 1);
    }
    if r[0][0].is_zero() {
        // both rows lack x: determined only if the y coefficients differ in a solvable way
        return None;
    }
    let k = &r[1][0] / &r[0][0];
    let r1 = [Rational::zero(), &r[1][1] - &k * &r[0][1], &r[1][2] - &k * &r[0][2]];
    if r1[1].is_zero() {
        return None;
    }
    let y = &r1[2] / &r1[1];
    let x = (&r[0][2] - &r[0][1] * &y) / &r[0][0];
    Some(Point::new(x, y))
}

/// Number of sign changes of `p` along a grid of step `h` from `lo` to
/// `hi`; exact when no grid point is a root and roots are `h`-separated.
pub fn sign_scan(p: &Polynomial, lo: &Rational, hi: &Rational, h: &Rational) -> usize {
    let eval = |x: &Rational| {
        let v = p.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    };
    let mut count = 0;
    let mut x = lo.clone();
    let mut prev = eval(&x);
    while &x < hi {
        x = (&x + h).min(hi.clone());
        let s = eval(&x);
        if s != 0 && prev != 0 && s != prev {
            count += 1;
        }
        if s != 0 {
            prev = s;
        }
    }
    count
}

/// Every generated graph with at most `n_max` vertices.
pub fn family_graphs(n_max: usize) -> Vec<(String, PlaneTriangulation)> {
    let mut out = vec![("k4".to_string(), k4()), ("octahedron".to_string(), octahedron())];
    for l in 1..=n_max.saturating_sub(6) {
        out.push((format!("accordion {l}"), accordion(l)));
    }
    for l in 1..=n_max {
        for k in 1..=n_max {
            if l + k + 4 <= n_max {
                out.push((format!("double-stacking {l} {k}"), double_stacking(l, k).unwrap()));
            }
        }
    }
    for n in 5..=n_max {
        out.push((format!("stacked {n} {n}"), stacked_3tree(n, n as u64).unwrap()));
    }
    out
}
