//! Symbolic almost-realizing placements.
//!
//! Along a p-order, `v1 = (0,0)`, `v2 = (1,0)`, `v3 = (1, y3)` and
//! `v4 = (x, a)` with `x` free. Each later vertex is the unique point
//! satisfying its two area equations, so its coordinates are rational
//! functions `N^x / D`, `N^y / D` of `x`. The determinant of the special
//! face `f_a` is the last-face function; if it is crr with odd max-degree for
//! generic areas, the triangulation is area-universal.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{Degree, Polynomial, Rational, RationalFunction};
use crate::porder::{find_porder, Naming, POrder, POrderError};
use crate::triangulation::{decompose, is_eulerian, FaceId, PlaneTriangulation, Triple, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("expected {expected} area values, got {found}")]
    AreaCount { expected: usize, found: usize },
    #[error("area of inner face {0} is negative")]
    NegativeArea(usize),
    #[error("total area must be positive")]
    ZeroTotal,
    #[error("predecessors of vertex {vertex} are collinear for every x (zero denominator)")]
    ZeroDenominator { vertex: Vertex },
    #[error("last-face degrees disagree across samples even after resampling")]
    UnstableDegrees,
    #[error(transparent)]
    POrder(#[from] POrderError),
}

/// A point with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Point {
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub y: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }
}

/// Determinant area of `p q r`: twice the signed area, positive when ccw.
pub fn det(p: &Point, q: &Point, r: &Point) -> Rational {
    (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x)
}

/// Nonnegative determinant areas for the inner faces, by face index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaAssignment {
    values: Vec<Rational>,
    total: Rational,
}

impl AreaAssignment {
    pub fn new(values: Vec<Rational>) -> Result<Self, SymbolicError> {
        if let Some(i) = values.iter().position(|v| v.is_negative()) {
            return Err(SymbolicError::NegativeArea(i));
        }
        let total: Rational = values.iter().sum();
        if !total.is_positive() {
            return Err(SymbolicError::ZeroTotal);
        }
        Ok(AreaAssignment { values, total })
    }

    /// Checks the assignment has one value per inner face of `t`.
    pub fn for_triangulation(t: &PlaneTriangulation, values: Vec<Rational>) -> Result<Self, SymbolicError> {
        if values.len() != t.inner_faces().len() {
            return Err(SymbolicError::AreaCount {
                expected: t.inner_faces().len(),
                found: values.len(),
            });
        }
        AreaAssignment::new(values)
    }

    /// Each value `p/q` with `p, q` uniform in `[1, 2^32]`.
    pub fn random_generic<R: Rng + ?Sized>(faces: usize, rng: &mut R) -> Self {
        let values = (0..faces)
            .map(|_| {
                let p: u64 = rng.gen_range(1..=1u64 << 32);
                let q: u64 = rng.gen_range(1..=1u64 << 32);
                Rational::new(BigInt::from(p), BigInt::from(q))
            })
            .collect();
        AreaAssignment::new(values).expect("positive values")
    }

    /// Each value `k / 2^32` with `k` uniform in `[1, 2^32]`, then scaled to total 1.
    pub fn random_unit<R: Rng + ?Sized>(faces: usize, rng: &mut R) -> Self {
        let den = BigInt::from(1u64 << 32);
        let raw: Vec<Rational> = (0..faces)
            .map(|_| Rational::new(BigInt::from(rng.gen_range(1..=1u64 << 32)), den.clone()))
            .collect();
        let total: Rational = raw.iter().sum();
        AreaAssignment::new(raw.into_iter().map(|v| v / &total).collect()).expect("positive values")
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    /// `Σ A`.
    pub fn total(&self) -> &Rational {
        &self.total
    }

    /// Prescribed determinant of a face as listed: `A(f)` for inner faces,
    /// `-Σ A` for the outer face.
    pub fn signed(&self, face: FaceId) -> Rational {
        match face {
            FaceId::Inner(i) => self.values[i].clone(),
            FaceId::Outer => -self.total.clone(),
        }
    }
}

/// Split of a denominator: `D = D_M E = vD F` with `E`, `F` coprime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorSplit {
    pub vd: Polynomial,
    pub e: Polynomial,
    pub f: Polynomial,
}

/// Coordinates `(N^x / D, N^y / D)` of one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPolys {
    pub nx: Polynomial,
    pub ny: Polynomial,
    pub d: Polynomial,
    /// Present for vertices after the fourth.
    pub split: Option<DenominatorSplit>,
}

impl VertexPolys {
    fn constant(x: Rational, y: Rational) -> Self {
        VertexPolys {
            nx: Polynomial::constant(x),
            ny: Polynomial::constant(y),
            d: Polynomial::one(),
            split: None,
        }
    }

    /// The point at `x`, or `None` at a root of `D`.
    pub fn eval(&self, x: &Rational) -> Option<Point> {
        let d = self.d.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(Point::new(self.nx.eval(x) / &d, self.ny.eval(x) / d))
    }
}

/// `v1 .. v4` with `x3 = 1`, `y3 = -A'(v1 v3 v2)` and `v4 = (x, A'(v1 v2 v4))`.
pub fn initial_coordinates(areas: &AreaAssignment, porder: &POrder) -> [VertexPolys; 4] {
    let y3 = -areas.signed(porder.face_132);
    let a = areas.signed(porder.face_124);
    [
        VertexPolys::constant(Rational::zero(), Rational::zero()),
        VertexPolys::constant(Rational::one(), Rational::zero()),
        VertexPolys::constant(Rational::one(), y3),
        VertexPolys {
            nx: Polynomial::x(),
            ny: Polynomial::constant(a),
            d: Polynomial::one(),
            split: None,
        },
    ]
}

/// Places a vertex with `Det(p_F, p_M, v) = a` and `Det(p_M, p_L, v) = b`.
pub fn place_vertex(
    vertex: Vertex,
    pf: &VertexPolys,
    pm: &VertexPolys,
    pl: &VertexPolys,
    a: &Rational,
    b: &Rational,
) -> Result<VertexPolys, SymbolicError> {
    let vd = &pf.nx * (&pm.ny * &pl.d - &pl.ny * &pm.d)
        + &pm.nx * (&pl.ny * &pf.d - &pf.ny * &pl.d)
        + &pl.nx * (&pf.ny * &pm.d - &pm.ny * &pf.d);
    if vd.is_zero() {
        return Err(SymbolicError::ZeroDenominator { vertex });
    }
    let g = pm.d.gcd(&vd);
    let f = pm.d.exact_div(&g).expect("gcd divides D_M");
    let e = vd.exact_div(&g).expect("gcd divides vD");
    let c = e.leading_coeff().expect("nonzero").recip();
    let (e, f) = (e.scale(&c), f.scale(&c));
    let dfdl = &pf.d * &pl.d;
    let tail = &e - (&dfdl * &f).scale(&(a + b));
    let fdm = &f * &pm.d;
    let coord = |nf: &Polynomial, nm: &Polynomial, nl: &Polynomial| {
        &fdm * (nl.scale(a) * &pf.d + nf.scale(b) * &pl.d) + nm * &tail
    };
    let nx = coord(&pf.nx, &pm.nx, &pl.nx);
    let ny = coord(&pf.ny, &pm.ny, &pl.ny);
    let d = &pm.d * &e;
    debug_assert_eq!(d, &vd * &f);
    debug_assert_eq!(d.degree(), pm.d.degree() + e.degree());
    Ok(VertexPolys {
        nx,
        ny,
        d,
        split: Some(DenominatorSplit { vd, e, f }),
    })
}

/// The fifth vertex: predecessors are `v1 .. v4` minus one, `D_M = 1`.
pub fn place_v5(areas: &AreaAssignment, porder: &POrder) -> Result<VertexPolys, SymbolicError> {
    let base = initial_coordinates(areas, porder);
    let step = porder.steps.first().ok_or(POrderError::TooSmall)?;
    let idx = |v: Vertex| porder.position[v];
    let Naming { p_f, p_m, p_l } = step.naming;
    place_vertex(
        step.vertex,
        &base[idx(p_f)],
        &base[idx(p_m)],
        &base[idx(p_l)],
        &areas.signed(step.face_a),
        &areas.signed(step.face_b),
    )
}

/// Coordinates of every vertex as rational functions of `x`.
#[derive(Debug, Clone)]
pub struct SymbolicPlacement {
    pub porder: POrder,
    /// Indexed by vertex id.
    pub coords: Vec<VertexPolys>,
    pub f_a: Triple,
    pub last_face: RationalFunction,
}

impl SymbolicPlacement {
    pub fn build(t: &PlaneTriangulation, porder: &POrder, areas: &AreaAssignment) -> Result<Self, SymbolicError> {
        let n = t.vertex_count();
        if areas.len() != t.inner_faces().len() {
            return Err(SymbolicError::AreaCount {
                expected: t.inner_faces().len(),
                found: areas.len(),
            });
        }
        let mut coords: Vec<Option<VertexPolys>> = vec![None; n];
        for (i, vp) in initial_coordinates(areas, porder).into_iter().enumerate() {
            coords[porder.order[i]] = Some(vp);
        }
        for s in &porder.steps {
            let get = |v: Vertex| coords[v].as_ref().expect("predecessors come first");
            let vp = place_vertex(
                s.vertex,
                get(s.naming.p_f),
                get(s.naming.p_m),
                get(s.naming.p_l),
                &areas.signed(s.face_a),
                &areas.signed(s.face_b),
            )?;
            coords[s.vertex] = Some(vp);
        }
        let coords: Vec<VertexPolys> = coords.into_iter().map(|c| c.expect("all placed")).collect();
        let f_a = t.face(porder.f_a);
        let last_face = last_face_function(&coords, f_a);
        Ok(SymbolicPlacement {
            porder: porder.clone(),
            coords,
            f_a,
            last_face,
        })
    }

    /// All vertex positions at `x`, or `None` if `x` is a root of some `D_i`.
    pub fn evaluate(&self, x: &Rational) -> Option<Vec<Point>> {
        self.coords.iter().map(|c| c.eval(x)).collect()
    }

    /// The nonconstant denominators; their real roots form the excluded set.
    pub fn denominators(&self) -> Vec<&Polynomial> {
        self.coords.iter().map(|c| &c.d).filter(|d| !d.is_constant()).collect()
    }

    pub fn xs(&self, v: Vertex) -> RationalFunction {
        RationalFunction::new(self.coords[v].nx.clone(), self.coords[v].d.clone()).expect("monic")
    }

    pub fn ys(&self, v: Vertex) -> RationalFunction {
        RationalFunction::new(self.coords[v].ny.clone(), self.coords[v].d.clone()).expect("monic")
    }
}

/// `Det(p, q, r)` of the listed vertices of `f_a`, written over
/// `lcm(D_p D_q, D_q D_r, D_r D_p)` with no further cancellation.
pub fn last_face_function(coords: &[VertexPolys], f_a: Triple) -> RationalFunction {
    let [p, q, r] = f_a.map(|v| &coords[v]);
    let det3 = &p.nx * (&q.ny * &r.d - &r.ny * &q.d) + &q.nx * (&r.ny * &p.d - &p.ny * &r.d)
        + &r.nx * (&p.ny * &q.d - &q.ny * &p.d);
    let pq = &p.d * &q.d;
    let qr = &q.d * &r.d;
    let rp = &r.d * &p.d;
    let l = pq.lcm(&qr).lcm(&rp);
    let prod = &pq * &r.d;
    let num = (&det3 * &l).exact_div(&prod).expect("each term has a pairwise denominator");
    RationalFunction::new(num, l).expect("nonzero denominator")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    AreaUniversal,
    NotAreaUniversalEulerian,
    Inconclusive,
    NoPOrder,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::AreaUniversal | Verdict::NotAreaUniversalEulerian => 0,
            Verdict::Inconclusive => 2,
            Verdict::NoPOrder => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub verdict: Verdict,
    pub vertex_count: usize,
    /// `(|numerator|, |denominator|)` of the last-face function.
    pub degrees: Option<(Degree, Degree)>,
    pub crr: bool,
    pub samples_used: usize,
    pub porder: Option<POrder>,
    /// Reports for the 4-connected pieces when the input had separating triangles.
    pub leaves: Vec<AnalysisReport>,
}

impl AnalysisReport {
    fn simple(t: &PlaneTriangulation, verdict: Verdict) -> Self {
        AnalysisReport {
            verdict,
            vertex_count: t.vertex_count(),
            degrees: None,
            crr: false,
            samples_used: 0,
            porder: None,
            leaves: Vec::new(),
        }
    }

    pub fn max_degree(&self) -> Option<Degree> {
        self.degrees.map(|(a, b)| a.max(b))
    }

    /// One-line human-readable verdict.
    pub fn summary(&self) -> String {
        match self.verdict {
            Verdict::NotAreaUniversalEulerian => "NOT AREA-UNIVERSAL (Eulerian)".into(),
            Verdict::NoPOrder => "NO P-ORDER (criterion not applicable)".into(),
            Verdict::AreaUniversal | Verdict::Inconclusive => {
                let head = if self.verdict == Verdict::AreaUniversal {
                    "AREA-UNIVERSAL"
                } else {
                    "INCONCLUSIVE"
                };
                match self.degrees {
                    Some((a, b)) => {
                        let crr = if self.crr { "crr" } else { "not crr" };
                        let odd = if a.max(b).is_odd() { "odd" } else { "even" };
                        format!("{head} (degrees {a}/{b}, {crr}, {odd})")
                    }
                    None if self.leaves.is_empty() => head.to_string(),
                    None => format!("{head} ({} pieces)", self.leaves.len()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { samples: 3, seed: 0 }
    }
}

/// Runs the criterion with `samples` generic area draws and seed 0.
pub fn analyze(t: &PlaneTriangulation, samples: usize) -> Result<AnalysisReport, SymbolicError> {
    analyze_with(t, &AnalyzeOptions { samples, seed: 0 })
}

/// Eulerian check, then the criterion on each piece between separating
/// triangles. The whole is area-universal iff every piece is.
pub fn analyze_with(t: &PlaneTriangulation, opts: &AnalyzeOptions) -> Result<AnalysisReport, SymbolicError> {
    if t.vertex_count() == 3 {
        return Ok(AnalysisReport::simple(t, Verdict::AreaUniversal));
    }
    if is_eulerian(t) {
        return Ok(AnalysisReport::simple(t, Verdict::NotAreaUniversalEulerian));
    }
    let tree = decompose(t);
    if tree.is_leaf() {
        return analyze_piece(t, opts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut leaves = Vec::new();
    for leaf in tree.leaves() {
        let sub = AnalyzeOptions {
            samples: opts.samples,
            seed: rng.gen(),
        };
        let r = if is_eulerian(leaf) {
            AnalysisReport::simple(leaf, Verdict::NotAreaUniversalEulerian)
        } else {
            analyze_piece(leaf, &sub)?
        };
        leaves.push(r);
    }
    let has = |v: Verdict| leaves.iter().any(|r| r.verdict == v);
    let verdict = if has(Verdict::NotAreaUniversalEulerian) {
        Verdict::NotAreaUniversalEulerian
    } else if leaves.iter().all(|r| r.verdict == Verdict::AreaUniversal) {
        Verdict::AreaUniversal
    } else if has(Verdict::NoPOrder) {
        Verdict::NoPOrder
    } else {
        Verdict::Inconclusive
    };
    Ok(AnalysisReport {
        verdict,
        vertex_count: t.vertex_count(),
        degrees: None,
        crr: leaves.iter().all(|r| r.crr),
        samples_used: leaves.iter().map(|r| r.samples_used).sum(),
        porder: None,
        leaves,
    })
}

fn analyze_piece(t: &PlaneTriangulation, opts: &AnalyzeOptions) -> Result<AnalysisReport, SymbolicError> {
    match find_porder(t) {
        None => Ok(AnalysisReport::simple(t, Verdict::NoPOrder)),
        Some(p) => analyze_with_order(t, &p, opts),
    }
}

/// The criterion for a fixed p-order (no Eulerian shortcut).
pub fn analyze_with_order(
    t: &PlaneTriangulation,
    porder: &POrder,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, SymbolicError> {
    let samples = opts.samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut used = 0;
    for _round in 0..2 {
        let mut seen: Vec<((Degree, Degree), bool)> = Vec::with_capacity(samples);
        let mut degenerate = false;
        for _ in 0..samples {
            let areas = AreaAssignment::random_generic(t.inner_faces().len(), &mut rng);
            used += 1;
            match SymbolicPlacement::build(t, porder, &areas) {
                Ok(pl) => seen.push((pl.last_face.degrees(), pl.last_face.is_crr())),
                Err(SymbolicError::ZeroDenominator { .. }) => degenerate = true,
                Err(e) => return Err(e),
            }
        }
        if degenerate || seen.iter().any(|s| s.0 != seen[0].0) {
            continue;
        }
        let degrees = seen[0].0;
        let crr = seen.iter().all(|s| s.1);
        let odd = degrees.0.max(degrees.1).is_odd();
        return Ok(AnalysisReport {
            verdict: if crr && odd {
                Verdict::AreaUniversal
            } else {
                Verdict::Inconclusive
            },
            vertex_count: t.vertex_count(),
            degrees: Some(degrees),
            crr,
            samples_used: used,
            porder: Some(porder.clone()),
            leaves: Vec::new(),
        });
    }
    Err(SymbolicError::UnstableDegrees)
}
