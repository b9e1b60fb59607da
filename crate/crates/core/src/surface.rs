//! Topological recognition of edge-connected 2-complexes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::complex::{Complex2, ComplexError, Edge, Triangle, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "boundary_cycles")]
pub enum SurfaceKind {
    Sphere,
    /// Orientable genus-0 surface with the given number (at least one) of
    /// boundary circles. One boundary circle is a disk.
    PuncturedSphere(usize),
    ClosedOther,
    WithBoundaryOther,
    NotSurface,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceClass {
    pub kind: SurfaceKind,
    pub euler_characteristic: i64,
}

impl SurfaceClass {
    pub fn is_sphere(&self) -> bool {
        self.kind == SurfaceKind::Sphere
    }

    pub fn is_punctured_sphere(&self) -> bool {
        matches!(self.kind, SurfaceKind::PuncturedSphere(_))
    }
}

/// Shape of a vertex link in a complex whose edges have multiplicity at most 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LinkShape {
    Cycle,
    Path,
    Other,
}

pub(crate) fn link_shape(k: &Complex2, v: Vertex) -> LinkShape {
    let link: Vec<Edge> = k.triangles_at_vertex(v).filter_map(|t| t.opposite_edge(v)).collect();
    let nodes: BTreeSet<Vertex> = link.iter().flat_map(|e| e.endpoints()).collect();
    let index: BTreeMap<Vertex, usize> = nodes.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut degree = vec![0usize; nodes.len()];
    let mut uf = UnionFind::<usize>::new(nodes.len());
    for e in &link {
        let [a, b] = e.endpoints();
        let (ia, ib) = (index[&a], index[&b]);
        degree[ia] += 1;
        degree[ib] += 1;
        uf.union(ia, ib);
    }
    let connected = (0..nodes.len()).all(|i| uf.equiv(0, i));
    if !connected || degree.iter().any(|&d| d > 2) {
        return LinkShape::Other;
    }
    if link.len() == nodes.len() {
        LinkShape::Cycle
    } else if link.len() + 1 == nodes.len() {
        LinkShape::Path
    } else {
        LinkShape::Other
    }
}

/// Splits every vertex whose link in `k` is disconnected into one vertex per
/// link component. The component holding the smallest link vertex keeps the
/// original id, the others get ids counting up from `first_fresh`.
///
/// Returns the split complex and, for every new id, the vertex it copies.
/// Triangles keep their edge adjacencies, so edge multiplicities, boundary
/// edges and edge-connectivity are unchanged.
pub fn split_pinched_vertices(k: &Complex2, first_fresh: u32) -> (Complex2, BTreeMap<Vertex, Vertex>) {
    let mut corners: BTreeMap<Triangle, [Vertex; 3]> = k.triangles().iter().map(|t| (*t, t.corners())).collect();
    let mut copies = BTreeMap::new();
    let mut next = first_fresh;
    for v in k.vertices() {
        let star: Vec<(Triangle, Edge)> = k
            .triangles_at_vertex(v)
            .filter_map(|t| t.opposite_edge(v).map(|e| (t, e)))
            .collect();
        let nodes: BTreeSet<Vertex> = star.iter().flat_map(|(_, e)| e.endpoints()).collect();
        let index: BTreeMap<Vertex, usize> = nodes.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let mut uf = UnionFind::<usize>::new(nodes.len());
        for (_, e) in &star {
            let [a, b] = e.endpoints();
            uf.union(index[&a], index[&b]);
        }
        let mut label: BTreeMap<usize, Vertex> = BTreeMap::new();
        for w in &nodes {
            let root = uf.find(index[w]);
            if !label.contains_key(&root) {
                let id = if label.is_empty() {
                    v
                } else {
                    next += 1;
                    copies.insert(Vertex(next - 1), v);
                    Vertex(next - 1)
                };
                label.insert(root, id);
            }
        }
        if label.len() < 2 {
            continue;
        }
        for (t, e) in &star {
            let id = label[&uf.find(index[&e.endpoints()[0]])];
            let slot = corners.get_mut(t).expect("star triangles belong to k");
            for c in slot.iter_mut().filter(|c| **c == v) {
                *c = id;
            }
        }
    }
    let split = Complex2::from_triangles(
        corners
            .into_values()
            .map(|[a, b, c]| Triangle::new(a, b, c).expect("splitting keeps corners distinct")),
    );
    (split, copies)
}

/// Consistent orientation of an edge-connected complex in which every edge
/// has multiplicity at most 2.
///
/// Returns, for each triangle in sorted order, `true` when its cyclic order
/// is the sorted corner order `(a, b, c)` and `false` for `(a, c, b)`.
/// `None` if the complex is not orientable (or has an edge of multiplicity
/// three or more).
pub fn orientation(k: &Complex2) -> Option<Vec<bool>> {
    let tris = k.triangles();
    let mut sign: Vec<Option<bool>> = vec![None; tris.len()];
    for start in 0..tris.len() {
        if sign[start].is_some() {
            continue;
        }
        sign[start] = Some(true);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let t = tris[i];
            let s = sign[i].unwrap();
            for e in t.edges() {
                let dir = s == t.edge_sign(&e);
                for other in k.triangles_on_edge(&e) {
                    if other == t {
                        continue;
                    }
                    let j = k.index_of(&other).unwrap();
                    // the neighbor must traverse `e` in the opposite direction
                    let want = !dir == other.edge_sign(&e);
                    match sign[j] {
                        None => {
                            sign[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(got) if got != want => return None,
                        Some(_) => {}
                    }
                }
                if k.edge_multiplicity(&e) > 2 {
                    return None;
                }
            }
        }
    }
    Some(sign.into_iter().map(Option::unwrap).collect())
}

/// The triangles of `k` as cyclically ordered corner triples under a
/// consistent orientation, or `None` if `k` is not orientable.
pub fn oriented_triangles(k: &Complex2) -> Option<Vec<[Vertex; 3]>> {
    let signs = orientation(k)?;
    Some(
        k.triangles()
            .iter()
            .zip(signs)
            .map(|(t, s)| {
                let [a, b, c] = t.corners();
                if s {
                    [a, b, c]
                } else {
                    [a, c, b]
                }
            })
            .collect(),
    )
}

/// Boundary edges grouped into closed cycles, each listed as a vertex
/// sequence. Assumes every boundary vertex has exactly two boundary edges.
pub(crate) fn boundary_cycles(boundary: &BTreeSet<Edge>) -> Vec<Vec<Vertex>> {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in boundary {
        let [a, b] = e.endpoints();
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut cycles = Vec::new();
    for &start in adj.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut prev = start;
        let mut cur = adj[&start][0];
        while cur != start {
            if !seen.insert(cur) {
                break;
            }
            cycle.push(cur);
            let next = adj[&cur].iter().copied().find(|&w| w != prev).unwrap_or(start);
            prev = cur;
            cur = next;
        }
        cycles.push(cycle);
    }
    cycles
}

/// Classifies an edge-connected complex.
///
/// The manifold test checks edge multiplicities and that every vertex link is
/// a single cycle (interior vertex) or a single path (boundary vertex). A
/// closed connected surface is a sphere exactly when `χ = 2`; a surface with
/// `b` boundary circles is a punctured sphere exactly when it is orientable
/// and `χ = 2 - b`.
pub fn classify_surface(k: &Complex2) -> Result<SurfaceClass, ComplexError> {
    let components = k.edge_connected_components().len();
    if components != 1 {
        return Err(ComplexError::NotEdgeConnected(components));
    }
    let chi = k.euler_characteristic();
    let class = |kind| SurfaceClass {
        kind,
        euler_characteristic: chi,
    };
    if k.edge_multiplicities().any(|(_, m)| m > 2) {
        return Ok(class(SurfaceKind::NotSurface));
    }
    let boundary = k.boundary_edges();
    let mut on_boundary: BTreeMap<Vertex, usize> = BTreeMap::new();
    for e in &boundary {
        for v in e.endpoints() {
            *on_boundary.entry(v).or_default() += 1;
        }
    }
    for v in k.vertices() {
        let expected = if on_boundary.contains_key(&v) {
            LinkShape::Path
        } else {
            LinkShape::Cycle
        };
        if link_shape(k, v) != expected {
            return Ok(class(SurfaceKind::NotSurface));
        }
    }
    if boundary.is_empty() {
        return Ok(class(if chi == 2 {
            SurfaceKind::Sphere
        } else {
            SurfaceKind::ClosedOther
        }));
    }
    let b = boundary_cycles(&boundary).len();
    let orientable = orientation(k).is_some();
    Ok(class(if orientable && chi == 2 - b as i64 {
        SurfaceKind::PuncturedSphere(b)
    } else {
        SurfaceKind::WithBoundaryOther
    }))
}

/// True iff the triangle set forms a single sphere.
pub fn is_sphere(k: &Complex2) -> bool {
    k.num_triangles() >= 4 && k.num_triangles().is_multiple_of(2) && classify_surface(k).is_ok_and(|c| c.is_sphere())
}

/// Convenience for triangle subsets.
pub fn is_sphere_triangles(ts: &[Triangle]) -> bool {
    is_sphere(&Complex2::from_triangles(ts.iter().copied()))
}
