//! Graph families: K4, the octahedron, diamondizations, accordions, double
//! stackings and random stacked triangulations.
//!
//! Family members are labeled so that vertex ids coincide with a known
//! p-order: `0..n` is that order. The octahedron uses
//! `A=0, B=1, C=2, v=3, u=4, w=5` with outer face `A C B`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::triangulation::{rotate_to, FaceId, PlaneTriangulation, Triple, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("edge {0}-{1} is not an edge of the triangulation")]
    NotAnEdge(Vertex, Vertex),
    #[error("edge {0}-{1} lies on the outer face")]
    OuterEdge(Vertex, Vertex),
    #[error("face index {0} out of range")]
    NoSuchFace(usize),
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
}

pub fn k4() -> PlaneTriangulation {
    PlaneTriangulation::new(4, vec![[0, 1, 3], [1, 2, 3], [2, 0, 3]], [0, 2, 1])
        .expect("K4")
        .with_labels(names(&["a", "b", "c", "d"]))
}

pub fn octahedron() -> PlaneTriangulation {
    let (a, b, c, v, u, w) = (0, 1, 2, 3, 4, 5);
    PlaneTriangulation::new(
        6,
        vec![[a, b, v], [a, v, u], [a, u, c], [b, w, v], [b, c, w], [c, u, w], [u, v, w]],
        [a, c, b],
    )
    .expect("octahedron")
    .with_labels(names(&["A", "B", "C", "v", "u", "w"]))
}

fn names(s: &[&str]) -> Vec<String> {
    s.iter().map(|x| x.to_string()).collect()
}

/// Subdivides the inner edge `x-y` with `k` new vertices, each joined to both
/// apexes of the two faces on `x-y`. New vertices get ids `n..n+k` in path
/// order from `x` to `y`.
pub fn diamondize(t: &PlaneTriangulation, edge: (Vertex, Vertex), k: usize) -> Result<PlaneTriangulation, GeneratorError> {
    let (x, y) = edge;
    let (Some(f1), Some(f2)) = (t.face_of_dart(x, y), t.face_of_dart(y, x)) else {
        return Err(GeneratorError::NotAnEdge(x, y));
    };
    let (FaceId::Inner(i1), FaceId::Inner(i2)) = (f1, f2) else {
        return Err(GeneratorError::OuterEdge(x, y));
    };
    if k == 0 {
        return Ok(t.clone());
    }
    let n = t.vertex_count();
    let p = rotate_to(t.face(f1), x)[2];
    let q = rotate_to(t.face(f2), y)[2];
    let path: Vec<Vertex> = std::iter::once(x).chain(n..n + k).chain(std::iter::once(y)).collect();
    let mut inner: Vec<Triple> = t.inner_faces().to_vec();
    inner[i1] = [path[0], path[1], p];
    inner[i2] = [path[1], path[0], q];
    for j in 1..=k {
        inner.push([path[j], path[j + 1], p]);
        inner.push([path[j + 1], path[j], q]);
    }
    let out = PlaneTriangulation::new(n + k, inner, t.outer_face()).expect("diamondization keeps validity");
    Ok(match t.labels() {
        Some(l) => {
            let mut l = l.to_vec();
            l.extend((1..=k).map(|j| format!("{}{}_{j}", t.label(x), t.label(y))));
            out.with_labels(l)
        }
        None => out,
    })
}

/// Accordion `A_l`: the octahedron with edge `u-w` diamondized `l` times.
/// Order `A B C v u d_1 .. d_l w`; each `d_i` has predecessors `C`, its
/// path predecessor and `v`.
pub fn accordion(l: usize) -> PlaneTriangulation {
    let g = octahedron();
    let (u, w) = (4, 5);
    let d = diamondize(&g, (u, w), l).expect("u-w is inner");
    // old ids: A B C v u w d_1..d_l -> positions
    let mut perm = vec![0; l + 6];
    for (old, p) in perm.iter_mut().enumerate().take(5) {
        *p = old;
    }
    perm[w] = l + 5;
    for j in 0..l {
        perm[6 + j] = 5 + j;
    }
    let mut t = d.relabel(&perm);
    let mut labels = names(&["A", "B", "C", "v", "u"]);
    labels.extend((1..=l).map(|j| format!("d{j}")));
    labels.push("w".into());
    t = t.with_labels(labels);
    t
}

/// Double stacking `DS(l, k)`: edge `A-u` diamondized `l-1` times and `v-w`
/// diamondized `k-1` times. Order `A B C v s_1 .. s_{l-1} u t_1 .. t_{k-1} w`.
pub fn double_stacking(l: usize, k: usize) -> Result<PlaneTriangulation, GeneratorError> {
    if l == 0 || k == 0 {
        return Err(GeneratorError::InvalidParameters(format!(
            "double stacking needs l, k >= 1, got {l}, {k}"
        )));
    }
    let g = octahedron();
    let (a, v, u, w) = (0, 3, 4, 5);
    let g = diamondize(&g, (a, u), l - 1)?;
    let g = diamondize(&g, (v, w), k - 1)?;
    let n = l + k + 4;
    // old ids: A B C v u w s_1..s_{l-1} t_1..t_{k-1}
    let mut perm = vec![0; n];
    perm[..4].copy_from_slice(&[0, 1, 2, 3]);
    perm[u] = 3 + l;
    perm[w] = n - 1;
    for j in 0..l - 1 {
        perm[6 + j] = 4 + j;
    }
    for j in 0..k - 1 {
        perm[6 + (l - 1) + j] = 4 + l + j;
    }
    let mut labels = names(&["A", "B", "C", "v"]);
    labels.extend((1..l).map(|j| format!("s{j}")));
    labels.push("u".into());
    labels.extend((1..k).map(|j| format!("t{j}")));
    labels.push("w".into());
    Ok(g.relabel(&perm).with_labels(labels))
}

/// Puts a new vertex (id `n`) into inner face `face` and joins it to the three corners.
pub fn stack_into(t: &PlaneTriangulation, face: usize) -> Result<PlaneTriangulation, GeneratorError> {
    let inner = t.inner_faces();
    let [a, b, c] = *inner.get(face).ok_or(GeneratorError::NoSuchFace(face))?;
    let n = t.vertex_count();
    let mut faces = inner.to_vec();
    faces[face] = [a, b, n];
    faces.push([b, c, n]);
    faces.push([c, a, n]);
    let out = PlaneTriangulation::new(n + 1, faces, t.outer_face()).expect("stacking keeps validity");
    Ok(match t.labels() {
        Some(l) => {
            let mut l = l.to_vec();
            l.push(format!("x{n}"));
            out.with_labels(l)
        }
        None => out,
    })
}

/// Stacked triangulation: K4 followed by `n - 4` stackings into uniformly
/// random inner faces.
pub fn stacked_3tree(n: usize, seed: u64) -> Result<PlaneTriangulation, GeneratorError> {
    if n < 4 {
        return Err(GeneratorError::InvalidParameters(format!("stacked triangulation needs n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = k4();
    while t.vertex_count() < n {
        let f = rng.gen_range(0..t.inner_faces().len());
        t = stack_into(&t, f)?;
    }
    Ok(t)
}

/// The order `0..n`, which is a p-order for the canonical family labelings.
pub fn canonical_order(t: &PlaneTriangulation) -> Vec<Vertex> {
    (0..t.vertex_count()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    K4,
    Octahedron,
    Accordion(usize),
    DoubleStacking(usize, usize),
    Stacked { n: usize, seed: u64 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<PlaneTriangulation, GeneratorError> {
        match *self {
            FamilySpec::K4 => Ok(k4()),
            FamilySpec::Octahedron => Ok(octahedron()),
            FamilySpec::Accordion(l) => Ok(accordion(l)),
            FamilySpec::DoubleStacking(l, k) => double_stacking(l, k),
            FamilySpec::Stacked { n, seed } => stacked_3tree(n, seed),
        }
    }

    /// Parses `k4`, `octahedron`, `accordion L`, `double-stacking L K`, `stacked N [SEED]`.
    pub fn from_args<S: AsRef<str>>(args: &[S]) -> Result<Self, GeneratorError> {
        let bad = |m: &str| GeneratorError::InvalidParameters(m.to_string());
        let num = |s: &S| -> Result<u64, GeneratorError> {
            s.as_ref()
                .parse::<u64>()
                .map_err(|_| bad(&format!("expected a nonnegative integer, got '{}'", s.as_ref())))
        };
        let Some(tag) = args.first() else {
            return Err(bad("missing family name"));
        };
        let rest = &args[1..];
        let spec = match (tag.as_ref(), rest.len()) {
            ("k4", 0) => FamilySpec::K4,
            ("octahedron", 0) => FamilySpec::Octahedron,
            ("accordion", 1) => FamilySpec::Accordion(num(&rest[0])? as usize),
            ("double-stacking" | "double_stacking", 2) => {
                FamilySpec::DoubleStacking(num(&rest[0])? as usize, num(&rest[1])? as usize)
            }
            ("stacked", 1) => FamilySpec::Stacked {
                n: num(&rest[0])? as usize,
                seed: 0,
            },
            ("stacked", 2) => FamilySpec::Stacked {
                n: num(&rest[0])? as usize,
                seed: num(&rest[1])?,
            },
            (t, _) => {
                return Err(bad(&format!(
                    "unknown family or wrong arity '{t}'; expected k4 | octahedron | accordion L | double-stacking L K | stacked N [SEED]"
                )))
            }
        };
        match spec {
            FamilySpec::DoubleStacking(l, k) if l == 0 || k == 0 => Err(bad("double-stacking needs L, K >= 1")),
            FamilySpec::Stacked { n, .. } if n < 4 => Err(bad("stacked needs N >= 4")),
            s => Ok(s),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        FamilySpec::from_args(&parts)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::K4 => write!(f, "k4"),
            FamilySpec::Octahedron => write!(f, "octahedron"),
            FamilySpec::Accordion(l) => write!(f, "accordion {l}"),
            FamilySpec::DoubleStacking(l, k) => write!(f, "double-stacking {l} {k}"),
            FamilySpec::Stacked { n, seed } => write!(f, "stacked {n} {seed}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{decompose, is_eulerian, separating_triangles};

    #[test]
    fn octahedron_shape() {
        let g = octahedron();
        assert_eq!(g.vertex_count(), 6);
        assert!((0..6).all(|v| g.degree(v) == 4));
        assert!(is_eulerian(&g));
        assert!(separating_triangles(&g).is_empty());
    }

    #[test]
    fn diamondize_zero_is_identity() {
        let g = octahedron();
        assert_eq!(diamondize(&g, (4, 5), 0).unwrap(), g);
    }

    #[test]
    fn diamondize_rejects_outer_edge() {
        assert_eq!(diamondize(&octahedron(), (0, 2), 1), Err(GeneratorError::OuterEdge(0, 2)));
        assert_eq!(diamondize(&octahedron(), (0, 5), 1), Err(GeneratorError::NotAnEdge(0, 5)));
    }

    #[test]
    fn diamondize_changes_two_degrees() {
        let g = octahedron();
        let d = diamondize(&g, (4, 5), 3).unwrap();
        let changed: Vec<_> = (0..6).filter(|&v| d.degree(v) != g.degree(v)).collect();
        assert_eq!(changed, vec![2, 3]);
        assert!(changed.iter().all(|&v| d.degree(v) == g.degree(v) + 3));
        assert!((6..9).all(|v| d.degree(v) == 4));
        assert_eq!(d.outer_face(), g.outer_face());
    }

    #[test]
    fn accordion_sizes() {
        assert_eq!(accordion(0), octahedron());
        assert_eq!(accordion(3).vertex_count(), 9);
        let a1 = accordion(1);
        assert_eq!(a1.vertex_count(), 7);
        assert!(separating_triangles(&a1).is_empty());
        for l in 0..7 {
            assert_eq!(is_eulerian(&accordion(l)), l % 2 == 0);
        }
    }

    #[test]
    fn double_stacking_sizes() {
        assert_eq!(double_stacking(1, 1).unwrap(), octahedron());
        for l in 1..5 {
            for k in 1..5 {
                let d = double_stacking(l, k).unwrap();
                assert_eq!(d.vertex_count(), l + k + 4);
                assert_eq!(is_eulerian(&d), l * k % 2 == 1);
            }
        }
        assert!(double_stacking(0, 2).is_err());
    }

    #[test]
    fn ds_l1_matches_accordion_degrees() {
        for l in 1..6 {
            let mut a: Vec<_> = {
                let t = accordion(l - 1);
                (0..t.vertex_count()).map(|v| t.degree(v)).collect()
            };
            let mut d: Vec<_> = {
                let t = double_stacking(l, 1).unwrap();
                (0..t.vertex_count()).map(|v| t.degree(v)).collect()
            };
            a.sort_unstable();
            d.sort_unstable();
            assert_eq!(a, d);
        }
    }

    #[test]
    fn stacked_examples() {
        assert_eq!(stacked_3tree(4, 9).unwrap().vertex_count(), 4);
        assert_eq!(separating_triangles(&stacked_3tree(5, 1).unwrap()).len(), 1);
        for seed in 0..5 {
            let t = stacked_3tree(9, seed).unwrap();
            let tree = decompose(&t);
            let leaves = tree.leaves();
            assert_eq!(leaves.len(), 6);
            assert!(leaves.iter().all(|l| l.vertex_count() == 4));
        }
    }

    #[test]
    fn accordion_with_stacked_vertex_decomposes() {
        let t = stack_into(&accordion(1), 0).unwrap();
        let tree = decompose(&t);
        let mut sizes: Vec<_> = tree.leaves().iter().map(|l| l.vertex_count()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![4, 7]);
        assert_eq!(tree.reassemble(), t);
    }

    #[test]
    fn family_spec_parsing() {
        assert_eq!("accordion 3".parse::<FamilySpec>().unwrap(), FamilySpec::Accordion(3));
        assert_eq!(
            "double-stacking 2 2".parse::<FamilySpec>().unwrap(),
            FamilySpec::DoubleStacking(2, 2)
        );
        assert_eq!("stacked 7 3".parse::<FamilySpec>().unwrap(), FamilySpec::Stacked { n: 7, seed: 3 });
        assert!("accordion".parse::<FamilySpec>().is_err());
        assert!("double-stacking 0 1".parse::<FamilySpec>().is_err());
        assert!("stacked 3".parse::<FamilySpec>().is_err());
        for s in ["k4", "octahedron", "accordion 2", "double-stacking 1 3", "stacked 6 2"] {
            assert_eq!(s.parse::<FamilySpec>().unwrap().to_string().parse::<FamilySpec>().unwrap().to_string(), s);
        }
    }
}
