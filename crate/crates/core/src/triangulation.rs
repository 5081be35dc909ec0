//! Combinatorial plane triangulations given by their face list.
//!
//! Inner faces are listed counter-clockwise and the outer face clockwise.
//! With that convention every edge is traversed once in each direction, and
//! swapping which face is outer only changes the sign conventions of the
//! area equations, never the vertex order within a face.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub type Vertex = usize;
pub type Triple = [Vertex; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FaceId {
    Inner(usize),
    Outer,
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceId::Inner(i) => write!(f, "inner face {i}"),
            FaceId::Outer => write!(f, "outer face"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewVertices(usize),
    VertexOutOfRange { face: Triple },
    RepeatedVertex { face: Triple },
    FaceCount { expected: usize, found: usize },
    EdgeCount { expected: usize, found: usize },
    EdgeInTooManyFaces { edge: (Vertex, Vertex), faces: usize },
    EdgeInOneFace { edge: (Vertex, Vertex) },
    InconsistentOrientation { edge: (Vertex, Vertex) },
    UnusedVertex(Vertex),
    NotADisk { vertex: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices(n) => write!(f, "need at least 3 vertices, got {n}"),
            Violation::VertexOutOfRange { face } => write!(f, "face {face:?} names a vertex out of range"),
            Violation::RepeatedVertex { face } => write!(f, "face {face:?} repeats a vertex"),
            Violation::FaceCount { expected, found } => {
                write!(f, "expected {expected} faces (2n-4), found {found}")
            }
            Violation::EdgeCount { expected, found } => {
                write!(f, "expected {expected} edges (3n-6), found {found}")
            }
            Violation::EdgeInTooManyFaces { edge, faces } => {
                write!(f, "edge in >2 faces: {}-{} lies in {faces} faces", edge.0, edge.1)
            }
            Violation::EdgeInOneFace { edge } => write!(f, "edge {}-{} lies in only one face", edge.0, edge.1),
            Violation::InconsistentOrientation { edge } => {
                write!(f, "inconsistent edge orientation on {}-{}", edge.0, edge.1)
            }
            Violation::UnusedVertex(v) => write!(f, "vertex {v} lies on no face"),
            Violation::NotADisk { vertex } => {
                write!(f, "faces around vertex {vertex} do not form a single cycle")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationError(pub Vec<Violation>);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid triangulation:")?;
        for v in &self.0 {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

fn edge_key(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Rotate `t` so that it starts at `v`. `v` must be in `t`.
pub fn rotate_to(t: Triple, v: Vertex) -> Triple {
    match t.iter().position(|&w| w == v) {
        Some(0) => t,
        Some(1) => [t[1], t[2], t[0]],
        Some(2) => [t[2], t[0], t[1]],
        _ => panic!("vertex {v} not in {t:?}"),
    }
}

/// Checks every structural invariant of a face list.
pub fn validate(n: usize, inner: &[Triple], outer: Triple) -> Result<(), ValidationError> {
    let mut out = Vec::new();
    if n < 3 {
        out.push(Violation::TooFewVertices(n));
        return Err(ValidationError(out));
    }
    let faces: Vec<Triple> = inner.iter().copied().chain(std::iter::once(outer)).collect();
    let mut well_formed = true;
    for f in &faces {
        if f.iter().any(|&v| v >= n) {
            out.push(Violation::VertexOutOfRange { face: *f });
            well_formed = false;
        } else if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
            out.push(Violation::RepeatedVertex { face: *f });
            well_formed = false;
        }
    }
    if faces.len() != 2 * n - 4 {
        out.push(Violation::FaceCount {
            expected: 2 * n - 4,
            found: faces.len(),
        });
    }
    if !well_formed {
        return Err(ValidationError(out));
    }

    // undirected edge -> darts seen on it
    let mut darts: HashMap<(Vertex, Vertex), Vec<(Vertex, Vertex)>> = HashMap::new();
    for f in &faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            darts.entry(edge_key(a, b)).or_default().push((a, b));
        }
    }
    let mut edges: Vec<_> = darts.keys().copied().collect();
    edges.sort_unstable();
    let mut consistent = true;
    for e in &edges {
        let d = &darts[e];
        match d.len() {
            1 => {
                out.push(Violation::EdgeInOneFace { edge: *e });
                consistent = false;
            }
            2 if d[0] == d[1] => {
                out.push(Violation::InconsistentOrientation { edge: *e });
                consistent = false;
            }
            2 => {}
            k => {
                out.push(Violation::EdgeInTooManyFaces { edge: *e, faces: k });
                consistent = false;
            }
        }
    }
    if edges.len() != 3 * n - 6 {
        out.push(Violation::EdgeCount {
            expected: 3 * n - 6,
            found: edges.len(),
        });
    }
    let mut used = vec![false; n];
    for f in &faces {
        for &v in f {
            used[v] = true;
        }
    }
    for (v, u) in used.iter().enumerate() {
        if !u {
            out.push(Violation::UnusedVertex(v));
        }
    }

    if consistent {
        // link of each vertex must be one cycle
        let mut link: Vec<HashMap<Vertex, Vertex>> = vec![HashMap::new(); n];
        for f in &faces {
            for k in 0..3 {
                link[f[k]].insert(f[(k + 1) % 3], f[(k + 2) % 3]);
            }
        }
        for (v, succ) in link.iter().enumerate() {
            let Some((&start, _)) = succ.iter().next() else {
                continue;
            };
            let mut cur = start;
            let mut steps = 0;
            while let Some(&nx) = succ.get(&cur) {
                cur = nx;
                steps += 1;
                if cur == start || steps > succ.len() {
                    break;
                }
            }
            if cur != start || steps != succ.len() {
                out.push(Violation::NotADisk { vertex: v });
            }
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(ValidationError(out))
    }
}

/// A validated plane triangulation with its derived adjacency.
#[derive(Debug, Clone)]
pub struct PlaneTriangulation {
    n: usize,
    inner: Vec<Triple>,
    outer: Triple,
    labels: Option<Vec<String>>,
    neighbors: Vec<Vec<Vertex>>,
    dart_face: HashMap<(Vertex, Vertex), FaceId>,
}

impl PartialEq for PlaneTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.inner == other.inner && self.outer == other.outer && self.labels == other.labels
    }
}

impl Eq for PlaneTriangulation {}

impl PlaneTriangulation {
    pub fn new(n: usize, inner: Vec<Triple>, outer: Triple) -> Result<Self, ValidationError> {
        validate(n, &inner, outer)?;
        let mut dart_face = HashMap::with_capacity(6 * n);
        let mut nb: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
        let ids = (0..inner.len()).map(FaceId::Inner).chain(std::iter::once(FaceId::Outer));
        for (id, f) in ids.zip(inner.iter().chain(std::iter::once(&outer))) {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                dart_face.insert((a, b), id);
                nb[a].insert(b);
                nb[b].insert(a);
            }
        }
        Ok(PlaneTriangulation {
            n,
            inner,
            outer,
            labels: None,
            neighbors: nb.into_iter().map(|s| s.into_iter().collect()).collect(),
            dart_face,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn inner_faces(&self) -> &[Triple] {
        &self.inner
    }

    pub fn outer_face(&self) -> Triple {
        self.outer
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: Vertex) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn face(&self, id: FaceId) -> Triple {
        match id {
            FaceId::Inner(i) => self.inner[i],
            FaceId::Outer => self.outer,
        }
    }

    /// All faces, inner ones first in list order, then the outer face.
    pub fn faces(&self) -> impl Iterator<Item = (FaceId, Triple)> + '_ {
        self.inner
            .iter()
            .enumerate()
            .map(|(i, f)| (FaceId::Inner(i), *f))
            .chain(std::iter::once((FaceId::Outer, self.outer)))
    }

    /// The face traversing the directed edge `a -> b`.
    pub fn face_of_dart(&self, a: Vertex, b: Vertex) -> Option<FaceId> {
        self.dart_face.get(&(a, b)).copied()
    }

    /// The face with vertex set `{a, b, c}`, if any.
    pub fn find_face(&self, a: Vertex, b: Vertex, c: Vertex) -> Option<FaceId> {
        [(a, b), (b, a)].into_iter().find_map(|(x, y)| {
            let id = self.face_of_dart(x, y)?;
            self.face(id).contains(&c).then_some(id)
        })
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.dart_face.contains_key(&(a, b))
    }

    /// Every edge once as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e: Vec<_> = (0..self.n)
            .flat_map(|u| self.neighbors[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Renames vertex `v` to `perm[v]`. Face list order is kept.
    pub fn relabel(&self, perm: &[Vertex]) -> PlaneTriangulation {
        assert_eq!(perm.len(), self.n);
        let map = |t: Triple| [perm[t[0]], perm[t[1]], perm[t[2]]];
        let t = PlaneTriangulation::new(self.n, self.inner.iter().map(|&f| map(f)).collect(), map(self.outer))
            .expect("relabeling by a permutation preserves validity");
        match &self.labels {
            Some(l) => {
                let mut nl = vec![String::new(); self.n];
                for (old, lab) in l.iter().enumerate() {
                    nl[perm[old]] = lab.clone();
                }
                t.with_labels(nl)
            }
            None => t,
        }
    }

    /// Checks whether the inner face list equals `other`'s up to rotation of each face.
    pub fn same_faces(&self, other: &PlaneTriangulation) -> bool {
        fn canon(t: Triple) -> Triple {
            let m = *t.iter().min().unwrap();
            rotate_to(t, m)
        }
        self.n == other.n
            && canon(self.outer) == canon(other.outer)
            && self.inner.len() == other.inner.len()
            && self.inner.iter().zip(&other.inner).all(|(a, b)| canon(*a) == canon(*b))
    }
}

/// Every vertex has even degree.
pub fn is_eulerian(t: &PlaneTriangulation) -> bool {
    (0..t.vertex_count()).all(|v| t.degree(v).is_multiple_of(2))
}

/// Three pairwise adjacent vertices that do not bound a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SeparatingTriangle(pub Triple);

impl SeparatingTriangle {
    pub fn vertices(&self) -> Triple {
        self.0
    }
}

/// All separating triangles, vertices ascending, in lexicographic order.
pub fn separating_triangles(t: &PlaneTriangulation) -> Vec<SeparatingTriangle> {
    let mut out = Vec::new();
    for (u, v) in t.edges() {
        for &w in t.neighbors(v) {
            if w > v && t.has_edge(u, w) && t.find_face(u, v, w).is_none() {
                out.push(SeparatingTriangle([u, v, w]));
            }
        }
    }
    out
}

/// No separating triangle. For `n > 4` this is 4-connectedness.
pub fn is_four_connected(t: &PlaneTriangulation) -> bool {
    separating_triangles(t).is_empty()
}

/// One side of a split: a sub-triangulation plus how it maps into its parent.
#[derive(Debug, Clone)]
pub struct Piece {
    pub tree: DecompositionTree,
    /// `vertex_map[child vertex] = parent vertex`
    pub vertex_map: Vec<Vertex>,
    /// `face_map[child inner face] = parent inner face`, `None` for the face
    /// standing in for the separating triangle.
    pub face_map: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct Split {
    pub triangle: SeparatingTriangle,
    /// The triangle and everything inside it; its outer face is the triangle.
    pub interior: Piece,
    /// The triangle and everything outside; the triangle is an inner face.
    pub exterior: Piece,
}

#[derive(Debug, Clone)]
pub struct DecompositionTree {
    pub triangulation: PlaneTriangulation,
    pub split: Option<Box<Split>>,
}

impl DecompositionTree {
    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    /// Leaf triangulations, interior before exterior at every split.
    pub fn leaves(&self) -> Vec<&PlaneTriangulation> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a PlaneTriangulation>) {
        match &self.split {
            None => out.push(&self.triangulation),
            Some(s) => {
                s.interior.tree.collect_leaves(out);
                s.exterior.tree.collect_leaves(out);
            }
        }
    }

    /// Glues the leaves back together along the recorded triangles.
    pub fn reassemble(&self) -> PlaneTriangulation {
        let Some(s) = &self.split else {
            return self.triangulation.clone();
        };
        let int = s.interior.tree.reassemble();
        let ext = s.exterior.tree.reassemble();
        let n = self.triangulation.vertex_count();
        let face_count = int.inner_faces().len() + ext.inner_faces().len() - 1;
        let mut inner: Vec<Option<Triple>> = vec![None; face_count];
        for (piece, t) in [(&s.interior, &int), (&s.exterior, &ext)] {
            let m = |f: Triple| f.map(|v| piece.vertex_map[v]);
            for (i, f) in t.inner_faces().iter().enumerate() {
                if let Some(pi) = piece.face_map[i] {
                    inner[pi] = Some(m(*f));
                }
            }
        }
        let outer = ext.outer_face().map(|v| s.exterior.vertex_map[v]);
        let inner = inner.into_iter().map(|f| f.expect("every parent face covered")).collect();
        let t = PlaneTriangulation::new(n, inner, outer).expect("reassembly is valid");
        match self.triangulation.labels() {
            Some(l) => t.with_labels(l.to_vec()),
            None => t,
        }
    }
}

/// Recursively splits along separating triangles until no piece has one.
/// The first separating triangle in lexicographic order is split first.
pub fn decompose(t: &PlaneTriangulation) -> DecompositionTree {
    if t.vertex_count() <= 4 {
        return DecompositionTree {
            triangulation: t.clone(),
            split: None,
        };
    }
    let Some(&tri) = separating_triangles(t).first() else {
        return DecompositionTree {
            triangulation: t.clone(),
            split: None,
        };
    };
    let (interior, exterior) = split_along(t, tri);
    DecompositionTree {
        triangulation: t.clone(),
        split: Some(Box::new(Split {
            triangle: tri,
            interior,
            exterior,
        })),
    }
}

fn split_along(t: &PlaneTriangulation, tri: SeparatingTriangle) -> (Piece, Piece) {
    let [a, b, c] = tri.0;
    let on_tri = |x: Vertex, y: Vertex| {
        let s = [a, b, c];
        s.contains(&x) && s.contains(&y)
    };
    // flood fill faces from the outer face without crossing the triangle
    let mut exterior = BTreeSet::new();
    let mut queue = VecDeque::from([FaceId::Outer]);
    exterior.insert(FaceId::Outer);
    while let Some(id) = queue.pop_front() {
        let f = t.face(id);
        for k in 0..3 {
            let (x, y) = (f[k], f[(k + 1) % 3]);
            if on_tri(x, y) {
                continue;
            }
            let nb = t.face_of_dart(y, x).expect("closed surface");
            if exterior.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    let side_faces = |want_ext: bool| -> Vec<(FaceId, Triple)> {
        t.faces().filter(|(id, _)| exterior.contains(id) == want_ext).collect()
    };

    // the triangle oriented against the darts the given side uses on it
    let closing = |faces: &[(FaceId, Triple)]| -> Triple {
        for (_, f) in faces {
            for k in 0..3 {
                let (x, y) = (f[k], f[(k + 1) % 3]);
                if on_tri(x, y) {
                    let z = [a, b, c].into_iter().find(|&v| v != x && v != y).unwrap();
                    return [y, x, z];
                }
            }
        }
        unreachable!("each side touches the triangle")
    };

    let build = |faces: Vec<(FaceId, Triple)>, is_interior: bool| -> Piece {
        let verts: BTreeSet<Vertex> = faces.iter().flat_map(|(_, f)| f.iter().copied()).collect();
        let vertex_map: Vec<Vertex> = verts.into_iter().collect();
        let mut local = HashMap::new();
        for (i, &v) in vertex_map.iter().enumerate() {
            local.insert(v, i);
        }
        let loc = |f: Triple| f.map(|v| local[&v]);
        let cap = loc(closing(&faces));
        let mut inner = Vec::new();
        let mut face_map = Vec::new();
        let mut outer = None;
        for (id, f) in &faces {
            match id {
                FaceId::Inner(i) => {
                    inner.push(loc(*f));
                    face_map.push(Some(*i));
                }
                FaceId::Outer => outer = Some(loc(*f)),
            }
        }
        let outer = if is_interior {
            cap
        } else {
            inner.push(cap);
            face_map.push(None);
            outer.expect("outer face is exterior")
        };
        let sub = PlaneTriangulation::new(vertex_map.len(), inner, outer).expect("pieces of a triangulation are triangulations");
        let sub = match t.labels() {
            Some(l) => sub.with_labels(vertex_map.iter().map(|&v| l[v].clone()).collect()),
            None => sub,
        };
        Piece {
            tree: decompose(&sub),
            vertex_map,
            face_map,
        }
    };
    let int = build(side_faces(false), true);
    let ext = build(side_faces(true), false);
    (int, ext)
}

/// The vertices of `t` in ascending order.
pub fn vertex_set(t: Triple) -> Triple {
    let mut s = t;
    s.sort_unstable();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k4() -> PlaneTriangulation {
        PlaneTriangulation::new(4, vec![[0, 1, 3], [1, 2, 3], [2, 0, 3]], [0, 2, 1]).unwrap()
    }

    fn octahedron() -> PlaneTriangulation {
        // A B C v u w = 0..6
        PlaneTriangulation::new(
            6,
            vec![[0, 1, 3], [0, 3, 4], [0, 4, 2], [1, 5, 3], [1, 2, 5], [2, 4, 5], [4, 3, 5]],
            [0, 2, 1],
        )
        .unwrap()
    }

    fn stacked_k4() -> PlaneTriangulation {
        // vertex 4 stacked into face 0 1 3
        PlaneTriangulation::new(5, vec![[0, 1, 4], [1, 3, 4], [3, 0, 4], [1, 2, 3], [2, 0, 3]], [0, 2, 1]).unwrap()
    }

    #[test]
    fn octahedron_validates() {
        let t = octahedron();
        assert_eq!(t.inner_faces().len() + 1, 8);
        assert_eq!(t.edges().len(), 12);
    }

    #[test]
    fn duplicated_face_rejected() {
        let err = validate(4, &[[0, 1, 3], [1, 2, 3], [2, 0, 3], [0, 1, 3]], [0, 2, 1]).unwrap_err();
        assert!(err.0.iter().any(|v| matches!(v, Violation::EdgeInTooManyFaces { .. })));
        assert!(err.to_string().contains("edge in >2 faces"));
    }

    #[test]
    fn reversed_face_rejected() {
        let err = validate(4, &[[0, 3, 1], [1, 2, 3], [2, 0, 3]], [0, 2, 1]).unwrap_err();
        assert!(err.0.iter().any(|v| matches!(v, Violation::InconsistentOrientation { .. })));
        assert!(err.to_string().contains("inconsistent edge orientation"));
    }

    #[test]
    fn out_of_range_and_counts() {
        let err = validate(4, &[[0, 1, 7]], [0, 2, 1]).unwrap_err();
        assert!(err.0.contains(&Violation::VertexOutOfRange { face: [0, 1, 7] }));
        assert!(validate(2, &[], [0, 1, 0]).is_err());
    }

    #[test]
    fn pinched_vertex_rejected() {
        // two K4 boundaries glued at one vertex: counts are off and the link of 0 is two cycles
        let faces = [[0, 1, 2], [0, 2, 1], [0, 3, 4], [0, 4, 3]];
        let err = validate(5, &faces[..3], faces[3]).unwrap_err();
        assert!(!err.0.is_empty());
    }

    #[test]
    fn k3_is_valid() {
        let t = PlaneTriangulation::new(3, vec![[0, 1, 2]], [0, 2, 1]).unwrap();
        assert!(separating_triangles(&t).is_empty());
        assert!(is_eulerian(&t));
    }

    #[test]
    fn eulerian_flags() {
        assert!(is_eulerian(&octahedron()));
        assert!(!is_eulerian(&k4()));
    }

    #[test]
    fn separating_examples() {
        assert!(separating_triangles(&octahedron()).is_empty());
        assert_eq!(separating_triangles(&stacked_k4()), vec![SeparatingTriangle([0, 1, 3])]);
    }

    #[test]
    fn decompose_stacked_k4() {
        let t = stacked_k4();
        let tree = decompose(&t);
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().all(|l| l.vertex_count() == 4));
        assert!(tree.reassemble().same_faces(&t));
        assert_eq!(tree.reassemble(), t);
    }

    #[test]
    fn decompose_leaf_is_identity() {
        let t = octahedron();
        let tree = decompose(&t);
        assert!(tree.is_leaf());
        assert_eq!(tree.leaves().len(), 1);
    }

    #[test]
    fn find_face_and_darts() {
        let t = k4();
        assert_eq!(t.find_face(3, 1, 0), Some(FaceId::Inner(0)));
        assert_eq!(t.find_face(0, 1, 2), Some(FaceId::Outer));
        assert_eq!(t.face_of_dart(1, 0), Some(FaceId::Outer));
        assert_eq!(rotate_to([4, 5, 6], 6), [6, 4, 5]);
    }
}
