//! Predecessor orders.
//!
//! A p-order lists the vertices so that `v1 v2` is an edge, `v3` and `v4`
//! each have predecessors `{v1, v2}`, and every later vertex has exactly
//! three earlier neighbours. Exactly one edge, `e_P`, is left unoriented.
//! Positions in this module are 0-based, so "v5" is `order[4]`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::triangulation::{is_four_connected, rotate_to, FaceId, PlaneTriangulation, Triple, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum POrderError {
    #[error("order is not a permutation of the {0} vertices")]
    NotAPermutation(usize),
    #[error("a p-order needs at least 4 vertices")]
    TooSmall,
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(Vertex, Vertex),
    #[error("vertex {vertex} at position {position} has {found} predecessors")]
    DegreeProfile { vertex: Vertex, position: usize, found: usize },
    #[error("faces v1 v2 v4 and v1 v3 v2 are not both faces with that orientation")]
    BaseFaces,
    #[error("partial triangulation before vertex {0} does not have a single 4-face")]
    NoFourFace(Vertex),
    #[error("predecessors of vertex {0} are not a path on the 4-face")]
    NotAPath(Vertex),
    #[error("order leaves {0} unoriented edges, expected 1")]
    UnorientedEdgeCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Naming {
    pub p_f: Vertex,
    pub p_m: Vertex,
    pub p_l: Vertex,
}

/// Insertion of one vertex `v_i`, `i >= 5`, into the 4-face of `T_{i-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionStep {
    pub position: usize,
    pub vertex: Vertex,
    /// The 4-face of `T_{i-1}`, oriented like the faces, starting at `p_F`.
    pub four_face: [Vertex; 4],
    pub naming: Naming,
    /// Face `p_F p_M v_i` of `T`; its area is `a_i`.
    pub face_a: FaceId,
    /// Face `p_M p_L v_i` of `T`; its area is `b_i`.
    pub face_b: FaceId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct POrder {
    pub order: Vec<Vertex>,
    /// `position[v]` is the index of `v` in `order`.
    pub position: Vec<usize>,
    /// Predecessors of each vertex, in order.
    pub preds: Vec<Vec<Vertex>>,
    pub steps: Vec<ConstructionStep>,
    pub e_p: (Vertex, Vertex),
    pub f_a: FaceId,
    pub f_b: FaceId,
    /// Face `v1 v2 v4`.
    pub face_124: FaceId,
    /// Face `v1 v3 v2`.
    pub face_132: FaceId,
}

impl POrder {
    /// Builds and checks a p-order from a vertex order and its unoriented edge.
    pub fn new(t: &PlaneTriangulation, order: Vec<Vertex>, e_p: (Vertex, Vertex)) -> Result<POrder, POrderError> {
        let n = t.vertex_count();
        if n < 4 {
            return Err(POrderError::TooSmall);
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(POrderError::NotAPermutation(n));
            }
            position[v] = i;
        }
        if order.len() != n {
            return Err(POrderError::NotAPermutation(n));
        }
        if !t.has_edge(e_p.0, e_p.1) {
            return Err(POrderError::NotAnEdge(e_p.0, e_p.1));
        }
        let is_ep = |a: Vertex, b: Vertex| (a, b) == e_p || (b, a) == e_p;

        let mut preds = vec![Vec::new(); n];
        for (i, &v) in order.iter().enumerate() {
            let mut p: Vec<Vertex> = t
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| position[u] < i && !is_ep(u, v))
                .collect();
            p.sort_by_key(|&u| position[u]);
            let want = match i {
                0 => 0,
                1 => 1,
                2 | 3 => 2,
                _ => 3,
            };
            if p.len() != want || (i == 2 || i == 3) && p != [order[0], order[1]] {
                return Err(POrderError::DegreeProfile {
                    vertex: v,
                    position: i,
                    found: p.len(),
                });
            }
            preds[v] = p;
        }

        let (v1, v2, v3, v4) = (order[0], order[1], order[2], order[3]);
        let face_124 = oriented_face(t, [v1, v2, v4]).ok_or(POrderError::BaseFaces)?;
        let face_132 = oriented_face(t, [v1, v3, v2]).ok_or(POrderError::BaseFaces)?;

        let mut included: HashSet<FaceId> = HashSet::new();
        let mut in_prefix = vec![false; n];
        let mut steps = Vec::with_capacity(n.saturating_sub(4));
        for (i, &v) in order.iter().enumerate() {
            if i >= 4 {
                let cycle = four_face(t, &included).ok_or(POrderError::NoFourFace(v))?;
                let k = cycle
                    .iter()
                    .position(|c| !preds[v].contains(c))
                    .filter(|_| preds[v].iter().all(|p| cycle.contains(p)))
                    .ok_or(POrderError::NotAPath(v))?;
                let p_m = cycle[(k + 2) % 4];
                let p_f = cycle[(k + 1) % 4];
                let p_l = cycle[(k + 3) % 4];
                let face_a = oriented_face(t, [p_f, p_m, v]).ok_or(POrderError::NotAPath(v))?;
                let face_b = oriented_face(t, [p_m, p_l, v]).ok_or(POrderError::NotAPath(v))?;
                steps.push(ConstructionStep {
                    position: i,
                    vertex: v,
                    four_face: [p_f, p_m, p_l, cycle[k]],
                    naming: Naming { p_f, p_m, p_l },
                    face_a,
                    face_b,
                });
            }
            in_prefix[v] = true;
            for (id, f) in t.faces() {
                if f.contains(&v) && f.iter().all(|&u| in_prefix[u]) && (0..3).all(|j| !is_ep(f[j], f[(j + 1) % 3])) {
                    included.insert(id);
                }
            }
        }

        let (f_a, f_b) = last_faces(t, &position, e_p);
        Ok(POrder {
            order,
            position,
            preds,
            steps,
            e_p,
            f_a,
            f_b,
            face_124,
            face_132,
        })
    }

    /// Like [`POrder::new`], with `e_P` inferred from the order alone. When
    /// the last vertex has four earlier neighbours, the excluded one is the
    /// earliest that yields a valid order.
    pub fn from_order(t: &PlaneTriangulation, order: Vec<Vertex>) -> Result<POrder, POrderError> {
        let n = t.vertex_count();
        if order.len() != n || n < 4 {
            return Err(POrderError::NotAPermutation(n));
        }
        let (edge, _, _) = unoriented_edge(t, &order)?;
        match edge {
            Some(e) => POrder::new(t, order, e),
            None => {
                // the over-full vertex is adjacent to a whole 4-face; try each
                let (z, mut cands) = overfull_vertex(t, &order).ok_or(POrderError::UnorientedEdgeCount(0))?;
                let pos: HashMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                cands.sort_by_key(|u| pos[u]);
                let mut last = POrderError::UnorientedEdgeCount(0);
                for u in cands {
                    match POrder::new(t, order.clone(), (u, z)) {
                        Ok(p) => return Ok(p),
                        Err(e) => last = e,
                    }
                }
                Err(last)
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    /// Vertex at 0-based position `i`.
    pub fn v(&self, i: usize) -> Vertex {
        self.order[i]
    }

    /// Rebuilds the face list by inserting vertices into the tracked 4-face,
    /// then splitting the final 4-face along `e_P`. Returns `None` if the
    /// recorded steps are inconsistent.
    pub fn replay(&self) -> Option<Vec<Triple>> {
        let o = &self.order;
        let mut faces = vec![[o[0], o[1], o[3]], [o[0], o[2], o[1]]];
        let mut cycle = [o[0], o[3], o[1], o[2]];
        for s in &self.steps {
            let m = cycle.iter().position(|&c| c == s.naming.p_m)?;
            if cycle[(m + 3) % 4] != s.naming.p_f || cycle[(m + 1) % 4] != s.naming.p_l {
                return None;
            }
            faces.push([s.naming.p_f, s.naming.p_m, s.vertex]);
            faces.push([s.naming.p_m, s.naming.p_l, s.vertex]);
            cycle[m] = s.vertex;
        }
        let (a, b) = self.e_p;
        let i = cycle.iter().position(|&c| c == a)?;
        if cycle[(i + 2) % 4] != b {
            return None;
        }
        faces.push([cycle[i], cycle[(i + 1) % 4], b]);
        faces.push([b, cycle[(i + 3) % 4], cycle[i]]);
        Some(faces)
    }
}

fn oriented_face(t: &PlaneTriangulation, f: Triple) -> Option<FaceId> {
    let id = t.face_of_dart(f[0], f[1])?;
    (rotate_to(t.face(id), f[0]) == f).then_some(id)
}

/// The single 4-face left by `included`, oriented like the faces.
fn four_face(t: &PlaneTriangulation, included: &HashSet<FaceId>) -> Option<[Vertex; 4]> {
    let mut succ: HashMap<Vertex, Vertex> = HashMap::new();
    for id in included {
        let f = t.face(*id);
        for j in 0..3 {
            let (a, b) = (f[j], f[(j + 1) % 3]);
            let other = t.face_of_dart(b, a)?;
            if !included.contains(&other) && succ.insert(b, a).is_some() {
                return None;
            }
        }
    }
    if succ.len() != 4 {
        return None;
    }
    let start = *succ.keys().min()?;
    let mut c = [start; 4];
    for j in 1..4 {
        c[j] = succ[&c[j - 1]];
    }
    (succ[&c[3]] == start).then_some(c)
}

/// Faces on `e_P`: inner faces first, then the one whose third vertex comes
/// earlier in the order.
fn last_faces(t: &PlaneTriangulation, position: &[usize], e: (Vertex, Vertex)) -> (FaceId, FaceId) {
    let f1 = t.face_of_dart(e.0, e.1).expect("edge");
    let f2 = t.face_of_dart(e.1, e.0).expect("edge");
    let third = |id: FaceId| {
        let f = t.face(id);
        f.into_iter().find(|&v| v != e.0 && v != e.1).unwrap()
    };
    let key = |id: FaceId| (id == FaceId::Outer, position[third(id)]);
    if key(f1) <= key(f2) {
        (f1, f2)
    } else {
        (f2, f1)
    }
}

fn needed_preds(i: usize) -> usize {
    match i {
        0 => 0,
        1 => 1,
        2 | 3 => 2,
        _ => 3,
    }
}

fn overfull_vertex(t: &PlaneTriangulation, order: &[Vertex]) -> Option<(Vertex, Vec<Vertex>)> {
    let pos: HashMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    order.iter().enumerate().find_map(|(i, &v)| {
        let earlier: Vec<Vertex> = t.neighbors(v).iter().copied().filter(|u| pos[u] < i).collect();
        (earlier.len() > needed_preds(i)).then_some((v, earlier))
    })
}

/// The unoriented edge of an order, with its two faces.
///
/// Returns `(Some(e), f_a, f_b)` when the order alone determines `e_P`, and
/// `(None, ..)` when the vertex carrying it has a free choice among its
/// earlier neighbours (the faces are then those of the earliest candidate).
pub fn unoriented_edge(
    t: &PlaneTriangulation,
    order: &[Vertex],
) -> Result<(Option<(Vertex, Vertex)>, FaceId, FaceId), POrderError> {
    let n = t.vertex_count();
    if order.len() != n || n < 4 {
        return Err(POrderError::NotAPermutation(n));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(POrderError::NotAPermutation(n));
        }
        position[v] = i;
    }
    let mut excess = 0usize;
    for (i, &v) in order.iter().enumerate() {
        let earlier = t.neighbors(v).iter().filter(|&&u| position[u] < i).count();
        let need = needed_preds(i);
        if earlier < need {
            return Err(POrderError::DegreeProfile {
                vertex: v,
                position: i,
                found: earlier,
            });
        }
        excess += earlier - need;
    }
    if excess != 1 {
        return Err(POrderError::UnorientedEdgeCount(excess));
    }
    let (z, mut cands) = overfull_vertex(t, order).expect("one vertex has an extra neighbour");
    cands.sort_by_key(|&u| position[u]);
    let zp = position[z];
    let determined = if zp <= 3 {
        // v3 v4 adjacent, or v2 with an extra neighbour (impossible)
        cands.iter().copied().find(|&u| position[u] >= 2).map(|u| (u, z))
    } else {
        None
    };
    let e = determined.unwrap_or((cands[0], z));
    let (fa, fb) = last_faces(t, &position, e);
    Ok((determined, fa, fb))
}

/// Predecessor naming for every vertex after the fourth.
pub fn name_predecessors(
    t: &PlaneTriangulation,
    order: &[Vertex],
    e_p: (Vertex, Vertex),
) -> Result<Vec<ConstructionStep>, POrderError> {
    POrder::new(t, order.to_vec(), e_p).map(|p| p.steps)
}

/// Searches for a p-order: for each edge `e` in lexicographic order, peels
/// the smallest-id degree-3 vertex of `T - e` until four vertices inducing
/// `K4` minus an edge remain. The first order whose `f_a` has two vertices
/// among `v1 .. v4` wins; failing that, the first order found.
///
/// Inputs with a separating triangle return `None`; they are handled by
/// decomposing first. `K4` gets the trivial order.
pub fn find_porder(t: &PlaneTriangulation) -> Option<POrder> {
    let mut first = None;
    for p in porder_candidates(t) {
        if base_anchored(t, &p) {
            return Some(p);
        }
        first.get_or_insert(p);
    }
    first
}

/// Every p-order the peeling search finds, one per successful edge, in
/// lexicographic edge order. Empty for inputs with a separating triangle.
pub fn porder_candidates(t: &PlaneTriangulation) -> impl Iterator<Item = POrder> + '_ {
    let n = t.vertex_count();
    let ok = n == 4 || (n > 4 && is_four_connected(t));
    let edges = if ok { t.edges() } else { Vec::new() };
    edges.into_iter().filter_map(move |e| try_edge(t, e))
}

/// `f_a` has two of its vertices among `v1 .. v4`, so the last-face
/// function depends on the coordinates of `v_n` alone.
pub fn base_anchored(t: &PlaneTriangulation, p: &POrder) -> bool {
    t.face(p.f_a).iter().filter(|&&v| p.position[v] < 4).count() >= 2
}

fn try_edge(t: &PlaneTriangulation, e: (Vertex, Vertex)) -> Option<POrder> {
    let n = t.vertex_count();
    let mut adj: Vec<HashSet<Vertex>> = (0..n).map(|v| t.neighbors(v).iter().copied().collect()).collect();
    adj[e.0].remove(&e.1);
    adj[e.1].remove(&e.0);
    let mut alive = vec![true; n];
    let mut peeled = Vec::with_capacity(n);
    for _ in 0..n - 4 {
        let v = (0..n).find(|&v| alive[v] && adj[v].len() == 3)?;
        alive[v] = false;
        for u in std::mem::take(&mut adj[v]) {
            adj[u].remove(&v);
        }
        peeled.push(v);
    }
    let rest: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    let edges_left: usize = rest.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if edges_left != 5 {
        return None;
    }
    // the adjacent pair of degree 3 in K4 - e are v1, v2
    let pair: Vec<Vertex> = rest.iter().copied().filter(|&v| adj[v].len() == 3).collect();
    let (p, q) = (pair[0], pair[1]);
    let v5 = peeled.last().copied();
    let touches = |x: Vertex| v5.is_some_and(|w| t.has_edge(w, x) && (w, x) != e && (x, w) != e);
    let v1 = if touches(q) && !touches(p) { q } else { p };
    let v2 = if v1 == p { q } else { p };
    let apex = |a: Vertex, b: Vertex| {
        let f = rotate_to(t.face(t.face_of_dart(a, b)?), a);
        Some(f[2])
    };
    let v4 = apex(v1, v2)?;
    let v3 = apex(v2, v1)?;
    if !rest.contains(&v3) || !rest.contains(&v4) {
        return None;
    }
    let order: Vec<Vertex> = [v1, v2, v3, v4].into_iter().chain(peeled.into_iter().rev()).collect();
    POrder::new(t, order, e).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{accordion, canonical_order, double_stacking, k4, octahedron};

    fn face_set(t: &PlaneTriangulation) -> HashSet<Triple> {
        t.faces().map(|(_, f)| canon(f)).collect()
    }

    fn canon(f: Triple) -> Triple {
        rotate_to(f, *f.iter().min().unwrap())
    }

    #[test]
    fn k4_trivial_order() {
        let t = k4();
        let p = find_porder(&t).unwrap();
        assert!(p.steps.is_empty());
        let replay: HashSet<_> = p.replay().unwrap().into_iter().map(canon).collect();
        assert_eq!(replay, face_set(&t));
    }

    #[test]
    fn octahedron_has_porder() {
        let t = octahedron();
        let p = find_porder(&t).unwrap();
        assert_eq!(p.steps.len(), 2);
        assert!(p.e_p.0 == p.order[5] || p.e_p.1 == p.order[5]);
    }

    #[test]
    fn accordion_canonical_naming() {
        for l in 1..6 {
            let t = accordion(l);
            let n = t.vertex_count();
            let p = POrder::new(&t, canonical_order(&t), (1, n - 1)).unwrap();
            for s in p.steps.iter().filter(|s| s.position > 4) {
                assert_eq!(
                    s.naming,
                    Naming {
                        p_f: p.v(2),
                        p_m: p.v(s.position - 1),
                        p_l: p.v(3)
                    },
                    "accordion {l} position {}",
                    s.position
                );
            }
            // f_a = B C w
            assert_eq!(canon(t.face(p.f_a)), canon([1, 2, n - 1]));
            let replay: HashSet<_> = p.replay().unwrap().into_iter().map(canon).collect();
            assert_eq!(replay, face_set(&t));
        }
    }

    #[test]
    fn accordion_order_infers_edge() {
        let t = accordion(1);
        let p = POrder::from_order(&t, canonical_order(&t)).unwrap();
        assert_eq!(p.e_p, (1, 6));
    }

    #[test]
    fn double_stacking_canonical() {
        let t = double_stacking(2, 2).unwrap();
        let n = t.vertex_count();
        let p = POrder::new(&t, canonical_order(&t), (2, n - 1)).unwrap();
        assert_eq!(canon(t.face(p.f_a)), canon([n - 1, 1, 2]));
        // s_1 .. u have predecessors C and v
        for v in 4..6 {
            assert!(p.preds[v].contains(&2) && p.preds[v].contains(&3), "{v}: {:?}", p.preds[v]);
        }
    }

    #[test]
    fn base_four_face() {
        let t = accordion(1);
        let p = POrder::new(&t, canonical_order(&t), (1, 6)).unwrap();
        let s = &p.steps[0];
        let mut cyc = s.four_face.to_vec();
        let k = cyc.iter().position(|&c| c == 0).unwrap();
        cyc.rotate_left(k);
        assert_eq!(cyc, vec![0, 3, 1, 2]);
    }

    #[test]
    fn rejects_bad_orders() {
        let t = octahedron();
        assert!(matches!(
            POrder::new(&t, vec![0, 1, 2, 3, 4, 4], (1, 5)),
            Err(POrderError::NotAPermutation(6))
        ));
        assert!(POrder::new(&t, vec![5, 0, 1, 2, 3, 4], (1, 5)).is_err());
        assert!(unoriented_edge(&t, &[0, 5, 1, 2, 3, 4]).is_err());
    }

    #[test]
    fn unoriented_edge_counts() {
        let t = accordion(2);
        let (_, fa, fb) = unoriented_edge(&t, &canonical_order(&t)).unwrap();
        assert_ne!(fa, fb);
        // 3n - 7 oriented edges
        let p = POrder::from_order(&t, canonical_order(&t)).unwrap();
        let oriented: usize = p.preds.iter().map(Vec::len).sum();
        assert_eq!(oriented, 3 * t.vertex_count() - 7);
    }

    #[test]
    fn found_orders_replay() {
        for t in [accordion(1), accordion(4), double_stacking(3, 2).unwrap(), double_stacking(4, 4).unwrap()] {
            let p = find_porder(&t).unwrap();
            let replay: HashSet<_> = p.replay().unwrap().into_iter().map(canon).collect();
            assert_eq!(replay, face_set(&t));
            let last = *p.order.last().unwrap();
            assert!(p.e_p.0 == last || p.e_p.1 == last);
        }
    }

    #[test]
    fn not_four_connected_has_none() {
        let t = crate::generators::stacked_3tree(6, 2).unwrap();
        assert!(find_porder(&t).is_none());
    }
}
