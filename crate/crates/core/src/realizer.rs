//! Concrete drawings with prescribed face areas.
//!
//! Leaves of the separating-triangle decomposition are drawn either
//! directly (`K3`, `K4`) or through a p-order: solve the last-face function
//! for `x`, then place every vertex exactly from its two area equations.
//! Pieces are glued by affine maps, which scale all areas by the same factor
//! and so keep exact faces exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{
    has_common_real_root, isolate_real_roots, sturm_count, to_f64, ExactMathError, Interval, Polynomial, Rational,
    RationalFunction,
};
use crate::porder::{base_anchored, porder_candidates, POrder};
use crate::symbolic::{det, initial_coordinates, AreaAssignment, Point, SymbolicError, SymbolicPlacement};
use crate::triangulation::{decompose, rotate_to, DecompositionTree, FaceId, PlaneTriangulation, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("last-face equation has no real root")]
    NoRealRoot,
    #[error("every real root of the last-face equation is excluded")]
    AllRootsForbidden,
    #[error("predecessors of vertex {vertex} are collinear at the chosen x")]
    CollinearPredecessors { vertex: Vertex },
    #[error("last-face function is constant")]
    ConstantLastFace,
    #[error("target area must be positive")]
    NonPositiveTarget,
    #[error("outer triangle has determinant {found}, expected {expected}")]
    OuterAreaMismatch { expected: Box<Rational>, found: Box<Rational> },
    #[error("affine map between triangles would not preserve orientation")]
    DegenerateMap,
    #[error("piece with vertices {vertices:?} has no p-order")]
    NoPOrder { vertices: Vec<Vertex> },
    #[error("piece with vertices {vertices:?}: {source}")]
    Leaf {
        vertices: Vec<Vertex>,
        #[source]
        source: Box<RealizeError>,
    },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Math(#[from] ExactMathError),
}

/// Exact vertex positions, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Drawing {
    pub points: Vec<Point>,
}

impl Drawing {
    pub fn new(points: Vec<Point>) -> Self {
        Drawing { points }
    }

    pub fn face_det(&self, f: [Vertex; 3]) -> Rational {
        det(&self.points[f[0]], &self.points[f[1]], &self.points[f[2]])
    }
}

/// `p -> m p + t` with `det m > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub m: [[Rational; 2]; 2],
    pub t: [Rational; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            m: [[Rational::one(), Rational::zero()], [Rational::zero(), Rational::one()]],
            t: [Rational::zero(), Rational::zero()],
        }
    }

    /// The unique map sending `src[i]` to `dst[i]`; both must have the same
    /// nonzero orientation.
    pub fn from_triangles(src: &[Point; 3], dst: &[Point; 3]) -> Result<Self, RealizeError> {
        let (s1x, s1y) = (&src[1].x - &src[0].x, &src[1].y - &src[0].y);
        let (s2x, s2y) = (&src[2].x - &src[0].x, &src[2].y - &src[0].y);
        let (d1x, d1y) = (&dst[1].x - &dst[0].x, &dst[1].y - &dst[0].y);
        let (d2x, d2y) = (&dst[2].x - &dst[0].x, &dst[2].y - &dst[0].y);
        let ds = &s1x * &s2y - &s2x * &s1y;
        let dd = &d1x * &d2y - &d2x * &d1y;
        if ds.is_zero() || dd.is_zero() || ds.is_positive() != dd.is_positive() {
            return Err(RealizeError::DegenerateMap);
        }
        // m = D S^-1 with S^-1 = [[s2y, -s2x], [-s1y, s1x]] / ds
        let m = [
            [(&d1x * &s2y - &d2x * &s1y) / &ds, (&d2x * &s1x - &d1x * &s2x) / &ds],
            [(&d1y * &s2y - &d2y * &s1y) / &ds, (&d2y * &s1x - &d1y * &s2x) / &ds],
        ];
        let t = [
            &dst[0].x - (&m[0][0] * &src[0].x + &m[0][1] * &src[0].y),
            &dst[0].y - (&m[1][0] * &src[0].x + &m[1][1] * &src[0].y),
        ];
        Ok(AffineMap { m, t })
    }

    pub fn determinant(&self) -> Rational {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point::new(
            &self.m[0][0] * &p.x + &self.m[0][1] * &p.y + &self.t[0],
            &self.m[1][0] * &p.x + &self.m[1][1] * &p.y + &self.t[1],
        )
    }
}

/// A rational `x` with `|f(x) - target| <= tol * target`, near a real root
/// of `num - target * den` that is not a root of any `forbidden` polynomial.
/// Roots are tried by increasing `|midpoint|` of their isolating interval.
pub fn solve_x4(
    f: &RationalFunction,
    target: &Rational,
    forbidden: &[&Polynomial],
    tol: &Rational,
) -> Result<Rational, RealizeError> {
    if !target.is_positive() {
        return Err(RealizeError::NonPositiveTarget);
    }
    solve_candidates(f, target, forbidden, &(tol * target))?
        .into_iter()
        .next()
        .ok_or(RealizeError::AllRootsForbidden)
}

/// One refined point per admissible root, in preference order.
fn solve_candidates(
    f: &RationalFunction,
    target: &Rational,
    forbidden: &[&Polynomial],
    abs_tol: &Rational,
) -> Result<Vec<Rational>, RealizeError> {
    if !abs_tol.is_positive() {
        return Err(ExactMathError::NonPositiveTolerance.into());
    }
    let g = f.numerator() - &f.denominator().scale(target);
    if g.is_zero() {
        // f is identically the target
        let x = (0i64..)
            .map(|k| Rational::from_integer(BigInt::from(k)))
            .find(|x| forbidden.iter().all(|d| !d.eval(x).is_zero()) && f.eval(x).is_some())
            .expect("finitely many excluded points");
        return Ok(vec![x]);
    }
    if g.is_constant() {
        return Err(if f.max_degree() == crate::exactmath::Degree::Finite(0) {
            RealizeError::ConstantLastFace
        } else {
            RealizeError::NoRealRoot
        });
    }
    let gs = g.square_free();
    let mut roots = isolate_real_roots(&gs);
    if roots.is_empty() {
        return Err(RealizeError::NoRealRoot);
    }
    let shared: Vec<Polynomial> = forbidden
        .iter()
        .filter(|d| !d.is_constant() && has_common_real_root(&gs, d))
        .map(|d| gs.gcd(d))
        .collect();
    roots.retain(|iv| shared.iter().all(|h| sturm_count(h, iv) == 0));
    if roots.is_empty() {
        return Err(RealizeError::AllRootsForbidden);
    }
    roots.sort_by_key(|iv| iv.midpoint().abs());
    roots
        .iter()
        .map(|iv| refine_to_target(f, &gs, iv, target, forbidden, abs_tol))
        .collect()
}

fn refine_to_target(
    f: &RationalFunction,
    gs: &Polynomial,
    iv: &Interval,
    target: &Rational,
    forbidden: &[&Polynomial],
    abs_tol: &Rational,
) -> Result<Rational, RealizeError> {
    let good = |x: &Rational| {
        forbidden.iter().all(|d| !d.eval(x).is_zero())
            && f.eval(x).is_some_and(|v| (v - target).abs() <= *abs_tol)
    };
    let (mut lo, mut hi) = (iv.lo().clone(), iv.hi().clone());
    if gs.sign_at(&hi) == 0 && good(&hi) {
        return Ok(hi);
    }
    let slo = gs.sign_at(&lo);
    if slo == 0 || slo == gs.sign_at(&hi) {
        return Err(ExactMathError::NoSignChange { lo: Box::new(lo), hi: Box::new(hi) }.into());
    }
    let two = Rational::from_integer(BigInt::from(2));
    for _ in 0..4096 {
        let mid = (&lo + &hi) / &two;
        if good(&mid) {
            return Ok(mid);
        }
        match gs.sign_at(&mid) {
            // an exact root where some denominator vanishes
            0 => return Err(RealizeError::AllRootsForbidden),
            s if s == slo => lo = mid,
            _ => hi = mid,
        }
    }
    Err(RealizeError::AllRootsForbidden)
}

/// The interior vertex of `K4` inside the ccw triangle `outer`, where
/// `areas[i]` is the target of the inner face avoiding `outer[i]`.
pub fn realize_k4(outer: &[Point; 3], areas: &[Rational; 3]) -> Result<Point, RealizeError> {
    let total: Rational = areas.iter().sum();
    let found = det(&outer[0], &outer[1], &outer[2]);
    if found != total {
        return Err(RealizeError::OuterAreaMismatch { expected: Box::new(total), found: Box::new(found) });
    }
    Ok(barycentric(outer, areas))
}

fn barycentric(outer: &[Point; 3], w: &[Rational; 3]) -> Point {
    let total: Rational = w.iter().sum();
    let x: Rational = outer.iter().zip(w).map(|(p, a)| &p.x * a).sum();
    let y: Rational = outer.iter().zip(w).map(|(p, a)| &p.y * a).sum();
    Point::new(x / &total, y / total)
}

/// Exact placement along the p-order at `x`: `v1 .. v4` from the area
/// values, then each vertex from its two area equations.
pub fn build_drawing(
    t: &PlaneTriangulation,
    porder: &POrder,
    areas: &AreaAssignment,
    x: &Rational,
) -> Result<Drawing, RealizeError> {
    let mut pts: Vec<Option<Point>> = vec![None; t.vertex_count()];
    for (i, vp) in initial_coordinates(areas, porder).iter().enumerate() {
        pts[porder.order[i]] = Some(vp.eval(x).expect("constant denominators"));
    }
    for s in &porder.steps {
        let get = |v: Vertex| pts[v].as_ref().expect("predecessors come first");
        let v = place_from_predecessors(
            get(s.naming.p_f),
            get(s.naming.p_m),
            get(s.naming.p_l),
            &areas.signed(s.face_a),
            &areas.signed(s.face_b),
        )
        .ok_or(RealizeError::CollinearPredecessors { vertex: s.vertex })?;
        pts[s.vertex] = Some(v);
    }
    Ok(Drawing::new(pts.into_iter().map(|p| p.expect("all placed")).collect()))
}

/// The point `v` with `Det(f, m, v) = a` and `Det(m, l, v) = b`, or `None`
/// when `f, m, l` are collinear.
pub fn place_from_predecessors(f: &Point, m: &Point, l: &Point, a: &Rational, b: &Rational) -> Option<Point> {
    let (px, py) = (&m.x - &f.x, &m.y - &f.y);
    let (qx, qy) = (&l.x - &m.x, &l.y - &m.y);
    let c = &px * &qy - &py * &qx;
    if c.is_zero() {
        return None;
    }
    let ux = (a * &qx - b * &px) / &c;
    let uy = (a * &qy - b * &py) / &c;
    Some(Point::new(&m.x + ux, &m.y + uy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Positive,
    Degenerate,
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    pub face: usize,
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub achieved: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub residual: Rational,
    /// `|residual| / target`, or `/ Σ A` when the target is zero.
    #[serde(serialize_with = "ser_rational")]
    pub relative: Rational,
    pub orientation: Orientation,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// How one leaf of the decomposition was drawn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafReport {
    pub vertices: Vec<Vertex>,
    pub method: LeafMethod,
    #[serde(serialize_with = "ser_opt_rational")]
    pub x4: Option<Rational>,
    /// Faces of the input carrying the residual, if they are real faces.
    pub f_a: Option<usize>,
    pub f_b: Option<usize>,
    pub perturbed: bool,
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LeafMethod {
    Triangle,
    K4,
    POrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub faces: Vec<FaceReport>,
    #[serde(serialize_with = "ser_rational")]
    pub outer_det: Rational,
    pub outer_orientation: Orientation,
    /// Σ inner determinants equals minus the outer determinant.
    pub sum_identity: bool,
    #[serde(serialize_with = "ser_rational")]
    pub max_relative_residual: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub tol: Rational,
    pub leaves: Vec<LeafReport>,
    pub perturbed: bool,
}

impl RealizationReport {
    /// Inner faces with nonzero residual.
    pub fn residual_faces(&self) -> Vec<usize> {
        self.faces.iter().filter(|f| !f.residual.is_zero()).map(|f| f.face).collect()
    }

    pub fn orientations_ok(&self) -> bool {
        self.outer_orientation != Orientation::Reversed
            && self.faces.iter().all(|f| f.orientation != Orientation::Reversed)
    }

    pub fn within_tol(&self) -> bool {
        self.max_relative_residual <= self.tol
    }

    pub fn strictly_oriented(&self) -> bool {
        self.outer_orientation == Orientation::Positive && self.faces.iter().all(|f| f.orientation == Orientation::Positive)
    }

    pub fn ok(&self) -> bool {
        self.orientations_ok() && self.within_tol() && self.sum_identity
    }

    /// The x chosen for the first p-order leaf, if any.
    pub fn x4(&self) -> Option<&Rational> {
        self.leaves.iter().find_map(|l| l.x4.as_ref())
    }
}

/// Recomputes every face determinant against the prescribed areas.
/// Inner faces should be positive and the outer face negative; zero is
/// reported as degenerate, not as a failure.
pub fn verify(t: &PlaneTriangulation, areas: &AreaAssignment, d: &Drawing, tol: &Rational) -> RealizationReport {
    let orient = |v: &Rational, inner: bool| match (v.is_zero(), v.is_positive() == inner) {
        (true, _) => Orientation::Degenerate,
        (false, true) => Orientation::Positive,
        (false, false) => Orientation::Reversed,
    };
    let mut faces = Vec::with_capacity(t.inner_faces().len());
    let mut sum = Rational::zero();
    let mut max_rel = Rational::zero();
    for (i, f) in t.inner_faces().iter().enumerate() {
        let achieved = d.face_det(*f);
        sum += &achieved;
        let target = areas.get(i).clone();
        let residual = &achieved - &target;
        let scale = if target.is_zero() { areas.total().clone() } else { target.clone() };
        let relative = residual.abs() / scale;
        if relative > max_rel {
            max_rel = relative.clone();
        }
        faces.push(FaceReport {
            face: i,
            orientation: orient(&achieved, true),
            target,
            achieved,
            residual,
            relative,
        });
    }
    let outer_det = d.face_det(t.outer_face());
    RealizationReport {
        faces,
        outer_orientation: match orient(&outer_det, false) {
            Orientation::Positive => Orientation::Positive,
            o => o,
        },
        sum_identity: sum == -outer_det.clone(),
        outer_det,
        max_relative_residual: max_rel,
        tol: tol.clone(),
        leaves: Vec::new(),
        perturbed: false,
    }
}

/// Decomposes, draws every leaf, glues the pieces and verifies the result.
pub fn realize(
    t: &PlaneTriangulation,
    areas: &AreaAssignment,
    tol: &Rational,
) -> Result<(Drawing, RealizationReport), RealizeError> {
    if areas.len() != t.inner_faces().len() {
        return Err(SymbolicError::AreaCount {
            expected: t.inner_faces().len(),
            found: areas.len(),
        }
        .into());
    }
    if !tol.is_positive() {
        return Err(ExactMathError::NonPositiveTolerance.into());
    }
    let tree = decompose(t);
    let (d, leaves) = glue(&tree, areas, tol)?;
    let mut report = verify(t, areas, &d, tol);
    report.perturbed = leaves.iter().any(|l| l.perturbed);
    report.leaves = leaves;
    Ok((d, report))
}

/// Draws a decomposition tree: the exterior piece first, with the
/// separating triangle standing for the whole interior, then the interior
/// mapped into the drawn triangle. Recursive over the tree.
pub fn glue(
    tree: &DecompositionTree,
    areas: &AreaAssignment,
    tol: &Rational,
) -> Result<(Drawing, Vec<LeafReport>), RealizeError> {
    let n = tree.triangulation.vertex_count();
    let ctx = Piece {
        to_root_vertex: (0..n).collect(),
        to_root_face: (0..tree.triangulation.inner_faces().len()).map(Some).collect(),
    };
    let mut leaves = Vec::new();
    let pts = draw_node(tree, areas.values(), None, &ctx, tol, &mut leaves)?;
    Ok((Drawing::new(pts), leaves))
}

/// How a node's ids relate to the input triangulation.
struct Piece {
    to_root_vertex: Vec<Vertex>,
    /// `None` for faces standing in for a separating triangle.
    to_root_face: Vec<Option<usize>>,
}

fn draw_node(
    tree: &DecompositionTree,
    areas: &[Rational],
    fixed: Option<[Point; 3]>,
    ctx: &Piece,
    tol: &Rational,
    leaves: &mut Vec<LeafReport>,
) -> Result<Vec<Point>, RealizeError> {
    let t = &tree.triangulation;
    let Some(split) = &tree.split else {
        return draw_leaf(t, areas, fixed, ctx, tol, leaves).map_err(|e| match e {
            e @ (RealizeError::Leaf { .. } | RealizeError::NoPOrder { .. }) => e,
            e => RealizeError::Leaf {
                vertices: ctx.to_root_vertex.clone(),
                source: Box::new(e),
            },
        });
    };
    let int = &split.interior;
    let ext = &split.exterior;
    let int_areas: Vec<Rational> = int.face_map.iter().map(|m| areas[m.expect("interior faces are real")].clone()).collect();
    let int_total: Rational = int_areas.iter().sum();
    let ext_areas: Vec<Rational> = ext
        .face_map
        .iter()
        .map(|m| match m {
            Some(i) => areas[*i].clone(),
            None => int_total.clone(),
        })
        .collect();
    let sub_ctx = |p: &crate::triangulation::Piece| Piece {
        to_root_vertex: p.vertex_map.iter().map(|&v| ctx.to_root_vertex[v]).collect(),
        to_root_face: p.face_map.iter().map(|m| m.and_then(|i| ctx.to_root_face[i])).collect(),
    };

    let mut pts: Vec<Option<Point>> = vec![None; t.vertex_count()];
    let ext_fixed = fixed.map(|f| {
        let outer = t.outer_face();
        let child_outer = ext.tree.triangulation.outer_face();
        child_outer.map(|c| {
            let k = outer.iter().position(|&v| v == ext.vertex_map[c]).expect("same outer face");
            f[k].clone()
        })
    });
    let ext_pts = draw_node(&ext.tree, &ext_areas, ext_fixed, &sub_ctx(ext), tol, leaves)?;
    for (c, p) in ext_pts.into_iter().enumerate() {
        pts[ext.vertex_map[c]] = Some(p);
    }
    let int_fixed = int
        .tree
        .triangulation
        .outer_face()
        .map(|c| pts[int.vertex_map[c]].clone().expect("triangle drawn by the exterior"));
    let int_pts = draw_node(&int.tree, &int_areas, Some(int_fixed), &sub_ctx(int), tol, leaves)?;
    for (c, p) in int_pts.into_iter().enumerate() {
        pts[int.vertex_map[c]] = Some(p);
    }
    Ok(pts.into_iter().map(|p| p.expect("every vertex drawn")).collect())
}

/// Own-frame triangle with the given ccw determinant.
fn default_triangle(total: &Rational) -> [Point; 3] {
    [
        Point::new(Rational::zero(), Rational::zero()),
        Point::new(Rational::one(), Rational::zero()),
        Point::new(Rational::zero(), total.clone()),
    ]
}

fn draw_leaf(
    t: &PlaneTriangulation,
    areas: &[Rational],
    fixed: Option<[Point; 3]>,
    ctx: &Piece,
    tol: &Rational,
    leaves: &mut Vec<LeafReport>,
) -> Result<Vec<Point>, RealizeError> {
    let n = t.vertex_count();
    let [o0, o1, o2] = t.outer_face();
    let total: Rational = areas.iter().sum();
    // the outer face traversed ccw
    let ccw = [o0, o2, o1];
    let frame = match &fixed {
        Some(f) => [f[0].clone(), f[2].clone(), f[1].clone()],
        None => default_triangle(&total),
    };
    let mut report = LeafReport {
        vertices: ctx.to_root_vertex.clone(),
        method: LeafMethod::Triangle,
        x4: None,
        f_a: None,
        f_b: None,
        perturbed: false,
    };
    let mut pts: Vec<Option<Point>> = vec![None; n];
    for (v, p) in ccw.iter().zip(frame.iter()) {
        pts[*v] = Some(p.clone());
    }
    if n == 3 {
        leaves.push(report);
        return Ok(pts.into_iter().map(Option::unwrap).collect());
    }
    if n == 4 {
        report.method = LeafMethod::K4;
        let inner = (0..4).find(|v| !ccw.contains(v)).expect("one inner vertex");
        let mut w = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (i, f) in t.inner_faces().iter().enumerate() {
            let missing = ccw.iter().position(|v| !f.contains(v)).expect("inner face misses one corner");
            w[missing] = areas[i].clone();
        }
        // proportional split, exact whenever the frame has the right area
        pts[inner] = Some(barycentric(&frame, &w));
        leaves.push(report);
        return Ok(pts.into_iter().map(Option::unwrap).collect());
    }

    report.method = LeafMethod::POrder;
    let is_virtual = |id: FaceId| match id {
        FaceId::Inner(i) => ctx.to_root_face[i].is_none(),
        FaceId::Outer => false,
    };
    let mut cands: Vec<POrder> = porder_candidates(t)
        .filter(|p| p.f_a != FaceId::Outer && (fixed.is_none() || p.f_b != FaceId::Outer))
        .collect();
    if cands.is_empty() {
        return Err(RealizeError::NoPOrder {
            vertices: ctx.to_root_vertex.clone(),
        });
    }
    // real residual faces first, then base-anchored orders
    cands.sort_by_key(|p| (is_virtual(p.f_a) || is_virtual(p.f_b), !base_anchored(t, p)));

    let assignment = AreaAssignment::new(areas.to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut last_err = RealizeError::NoRealRoot;
    for attempt in 0..4 {
        let a = if attempt == 0 {
            assignment.clone()
        } else {
            perturb(&assignment, &(tol / Rational::from_integer(BigInt::from(4))), &mut rng)
        };
        for p in &cands {
            match draw_porder_leaf(t, p, &a, tol) {
                Ok((d, x)) => {
                    let own = [d.points[ccw[0]].clone(), d.points[ccw[1]].clone(), d.points[ccw[2]].clone()];
                    let placed: Vec<Point> = match &fixed {
                        None => d.points,
                        Some(_) => {
                            let map = AffineMap::from_triangles(&own, &frame)?;
                            d.points.iter().map(|q| map.apply(q)).collect()
                        }
                    };
                    let face = |id: FaceId| match id {
                        FaceId::Inner(i) => ctx.to_root_face[i],
                        FaceId::Outer => None,
                    };
                    report.x4 = Some(x);
                    report.f_a = face(p.f_a);
                    report.f_b = face(p.f_b);
                    report.perturbed = attempt > 0;
                    leaves.push(report);
                    let mut out = placed;
                    if let Some(f) = &fixed {
                        // corners land exactly; keep the given values
                        for (v, q) in ccw.iter().zip([&f[0], &f[2], &f[1]]) {
                            out[*v] = q.clone();
                        }
                    }
                    return Ok(out);
                }
                Err(e @ RealizeError::NoRealRoot) => last_err = e,
                Err(
                    e @ (RealizeError::AllRootsForbidden
                    | RealizeError::CollinearPredecessors { .. }
                    | RealizeError::Symbolic(SymbolicError::ZeroDenominator { .. })),
                ) => last_err = e,
                Err(e) => return Err(e),
            }
        }
        if matches!(last_err, RealizeError::NoRealRoot) {
            break;
        }
    }
    Err(last_err)
}

fn perturb<R: Rng>(a: &AreaAssignment, delta: &Rational, rng: &mut R) -> AreaAssignment {
    let scale = BigInt::from(1u64 << 20);
    let values = a
        .values()
        .iter()
        .map(|v| {
            let k = Rational::new(BigInt::from(rng.gen_range(-(1i64 << 20)..=(1i64 << 20))), scale.clone());
            v * (Rational::one() + delta * k)
        })
        .collect();
    AreaAssignment::new(values).expect("small perturbation keeps signs")
}

/// Draws one 4-connected leaf along `p` in the p-order frame.
fn draw_porder_leaf(
    t: &PlaneTriangulation,
    p: &POrder,
    a: &AreaAssignment,
    tol: &Rational,
) -> Result<(Drawing, Rational), RealizeError> {
    let pl = SymbolicPlacement::build(t, p, a)?;
    let target = a.signed(p.f_a);
    let allow = |id: FaceId| {
        let v = a.signed(id).abs();
        tol * if v.is_zero() { a.total().clone() } else { v }
    };
    let abs_tol = allow(p.f_a).min(allow(p.f_b));
    let forbidden = pl.denominators();
    let xs = solve_candidates(&pl.last_face, &target, &forbidden, &abs_tol)?;
    let mut last = RealizeError::AllRootsForbidden;
    let mut fallback = None;
    for x in xs {
        match build_drawing(t, p, a, &x) {
            Ok(d) if oriented(t, &d) => return Ok((d, x)),
            Ok(d) => {
                fallback.get_or_insert((d, x));
            }
            Err(e) => last = e,
        }
    }
    fallback.ok_or(last)
}

fn oriented(t: &PlaneTriangulation, d: &Drawing) -> bool {
    t.inner_faces().iter().all(|f| d.face_det(*f).is_positive()) && d.face_det(t.outer_face()).is_negative()
}

/// Nearest `f64` pair, for rendering.
pub fn to_f64_point(p: &Point) -> (f64, f64) {
    (to_f64(&p.x), to_f64(&p.y))
}

/// A face of `t` from a vertex triple in any rotation.
pub fn face_index(t: &PlaneTriangulation, f: [Vertex; 3]) -> Option<FaceId> {
    let id = t.face_of_dart(f[0], f[1])?;
    (rotate_to(t.face(id), f[0]) == f).then_some(id)
}
