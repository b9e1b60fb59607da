//! Replacing a punctured-sphere component by a small one with the same
//! boundary.
//!
//! The replacement keeps every ear (a triangle holding two consecutive
//! boundary edges, which is exactly where cofacial pairs live) and closes the
//! remaining polygons with fresh vertices. One boundary cycle is closed by a
//! cone. Several cycles are joined to the holes of a fresh tube of triangular
//! rings: two ring holes at the ends and one removed quad for every further
//! cycle, each polygon attached to its hole by a strip.
//!
//! A component that only becomes a punctured sphere after splitting its
//! pinched vertices is replaced through the split, then the copies are merged
//! again.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Complex2, Edge, Triangle, Vertex};
use crate::surface::{boundary_cycles, classify_surface, oriented_triangles, split_pinched_vertices, SurfaceKind};

use super::DeletionError;

/// Pairs of boundary edges of `c` that lie in a common triangle of `c`.
pub fn cofacial_pairs(c: &Complex2) -> BTreeSet<(Edge, Edge)> {
    let boundary = c.boundary_edges();
    let mut out = BTreeSet::new();
    for t in c.triangles() {
        let on: Vec<Edge> = t.edges().into_iter().filter(|e| boundary.contains(e)).collect();
        for (i, a) in on.iter().enumerate() {
            for b in &on[i + 1..] {
                out.insert((*a.min(b), *a.max(b)));
            }
        }
    }
    out
}

/// Vertices of `c` not on a boundary edge.
pub(crate) fn interior_vertices(c: &Complex2) -> BTreeSet<Vertex> {
    let on_boundary: BTreeSet<Vertex> = c.boundary_edges().iter().flat_map(|e| e.endpoints()).collect();
    c.vertices().filter(|v| !on_boundary.contains(v)).collect()
}

struct Fresh(u32);

impl Fresh {
    fn take(&mut self) -> Vertex {
        self.0 += 1;
        Vertex(self.0 - 1)
    }
}

fn triangle(t: [Vertex; 3]) -> Triangle {
    Triangle::new(t[0], t[1], t[2]).expect("replacement triangles have distinct corners")
}

/// Replaces the component `c` of `host`. Fresh vertex ids start above every
/// vertex of `host` and `c`. Interior vertices of `c` that `host` uses
/// outside `c` stay interior vertices of the replacement.
pub fn replace_component(c: &Complex2, host: &Complex2) -> Result<Complex2, DeletionError> {
    let first_fresh = host.max_vertex().max(c.max_vertex()).map_or(0, |v| v.0 + 1);
    let outside = host.without(c.triangles());
    let pinned: BTreeSet<Vertex> = interior_vertices(c)
        .into_iter()
        .filter(|v| outside.contains_vertex(*v))
        .collect();
    replace_component_with(c, first_fresh, &pinned)
}

/// Replacement with an explicit first fresh id and set of interior vertices
/// to keep. Returns `c` itself when the construction is not smaller.
///
/// A component whose split (see [`split_pinched_vertices`]) is a punctured
/// sphere is replaced through its split. The result is accepted only if
/// merging the copies back yields a simplicial complex with the same
/// structure and the boundary cycles keep their relative orientation.
pub fn replace_component_with(
    c: &Complex2,
    first_fresh: u32,
    pinned: &BTreeSet<Vertex>,
) -> Result<Complex2, DeletionError> {
    let kind = classify_surface(c).ok().map(|s| s.kind);
    if let Some(SurfaceKind::PuncturedSphere(b)) = kind {
        return Ok(construct(c, b, first_fresh, pinned, false)
            .filter(|out| out.num_triangles() < c.num_triangles())
            .unwrap_or_else(|| c.clone()));
    }
    let Some((split, copies)) = unpinch(c, first_fresh) else {
        return Err(DeletionError::NotPuncturedSphere(kind));
    };
    let b = match classify_surface(&split).map(|s| s.kind) {
        Ok(SurfaceKind::PuncturedSphere(b)) => b,
        _ => unreachable!("unpinch checks the split"),
    };
    let fresh = first_fresh + copies.len() as u32;
    for collar in [false, true] {
        let Some(out) = construct(&split, b, fresh, pinned, collar) else {
            break;
        };
        if out.num_triangles() >= c.num_triangles() {
            break;
        }
        if !same_boundary_orientation(&split, &out) {
            continue;
        }
        if let Some(merged) = merge_copies(&out, &copies) {
            return Ok(merged);
        }
    }
    Ok(c.clone())
}

/// Splits the pinched vertices of `c` (copies numbered from `first_fresh`)
/// and returns the split with its copy map, provided the split is a punctured
/// sphere on whose boundary every copy and every pinched vertex lies.
/// Otherwise `c` is not a subcomplex of any 2-sphere.
pub(crate) fn unpinch(c: &Complex2, first_fresh: u32) -> Option<(Complex2, BTreeMap<Vertex, Vertex>)> {
    let (split, copies) = split_pinched_vertices(c, first_fresh);
    if !classify_surface(&split).is_ok_and(|s| s.is_punctured_sphere()) {
        return None;
    }
    let interior = interior_vertices(&split);
    if copies
        .iter()
        .any(|(copy, v)| interior.contains(copy) || interior.contains(v))
    {
        return None;
    }
    Some((split, copies))
}

/// Maps copies back to their vertices. `None` if two corners of a triangle,
/// two triangles or two edges collapse.
fn merge_copies(k: &Complex2, copies: &BTreeMap<Vertex, Vertex>) -> Option<Complex2> {
    let map = |v: Vertex| copies.get(&v).copied().unwrap_or(v);
    let mut edges = BTreeSet::new();
    for e in k.edges() {
        let [a, b] = e.endpoints();
        if !edges.insert(Edge::new(map(a), map(b)).ok()?) {
            return None;
        }
    }
    let tris: BTreeSet<Triangle> = k
        .triangles()
        .iter()
        .map(|t| {
            let [a, b, c] = t.corners();
            Triangle::new(map(a), map(b), map(c)).ok()
        })
        .collect::<Option<_>>()?;
    (tris.len() == k.num_triangles()).then(|| Complex2::from_triangles(tris))
}

/// Whether orientations of `a` and `b` traverse their common boundary edges
/// all in the same or all in opposite directions.
fn same_boundary_orientation(a: &Complex2, b: &Complex2) -> bool {
    let directions = |k: &Complex2| -> Option<BTreeMap<Edge, bool>> {
        let boundary = k.boundary_edges();
        let mut out = BTreeMap::new();
        for [x, y, z] in oriented_triangles(k)? {
            for (p, q) in [(x, y), (y, z), (z, x)] {
                let e = Edge::new(p, q).ok()?;
                if boundary.contains(&e) {
                    out.insert(e, p < q);
                }
            }
        }
        Some(out)
    };
    let (Some(da), Some(db)) = (directions(a), directions(b)) else {
        return false;
    };
    if da.len() != db.len() {
        return false;
    }
    let agree = da.iter().filter(|(e, d)| db.get(e) == Some(d)).count();
    agree == da.len() || agree == 0
}

/// The replacement of a punctured sphere `c` with `b` boundary cycles, or
/// `None` when removing ears leaves a polygon with fewer than three corners.
/// With `collar`, every polygon is first surrounded by a ring of fresh
/// vertices, so no fresh vertex touches two non-consecutive polygon corners.
fn construct(c: &Complex2, b: usize, first_fresh: u32, pinned: &BTreeSet<Vertex>, collar: bool) -> Option<Complex2> {
    let cycles = boundary_cycles(&c.boundary_edges());
    debug_assert_eq!(cycles.len(), b);

    let mut ears = Vec::new();
    let mut polygons = Vec::with_capacity(b);
    for cycle in &cycles {
        let l = cycle.len();
        let mut keep = vec![true; l];
        if l >= 4 {
            for i in 0..l {
                let ear = triangle([cycle[(i + l - 1) % l], cycle[i], cycle[(i + 1) % l]]);
                if c.contains(&ear) {
                    ears.push(ear);
                    keep[i] = false;
                }
            }
        }
        let polygon: Vec<Vertex> = cycle.iter().zip(&keep).filter(|(_, &k)| k).map(|(v, _)| *v).collect();
        if polygon.len() < 3 {
            return None;
        }
        polygons.push(polygon);
    }

    let mut fresh = Fresh(first_fresh);
    let mut tris: Vec<[Vertex; 3]> = Vec::new();
    if collar {
        for polygon in &mut polygons {
            let inner: Vec<Vertex> = polygon.iter().map(|_| fresh.take()).collect();
            let l = polygon.len();
            for i in 0..l {
                let j = (i + 1) % l;
                tris.push([polygon[i], polygon[j], inner[i]]);
                tris.push([polygon[j], inner[i], inner[j]]);
            }
            *polygon = inner;
        }
    }
    if b == 1 {
        let apex = fresh.take();
        let p = &polygons[0];
        for i in 0..p.len() {
            tris.push([apex, p[i], p[(i + 1) % p.len()]]);
        }
    } else {
        let holes = tube(b, &mut fresh, &mut tris);
        for (polygon, hole) in polygons.iter().zip(&holes) {
            strip(polygon, hole, &mut tris);
        }
    }
    for &p in pinned {
        let i = all_fresh_triangle(&mut tris, &mut fresh, first_fresh);
        let [x, y, z] = tris.swap_remove(i);
        tris.extend([[p, x, y], [p, y, z], [p, x, z]]);
    }

    Some(Complex2::from_triangles(
        ears.into_iter().chain(tris.into_iter().map(triangle)),
    ))
}

/// A cylinder of triangular rings with `b` holes; returns the hole cycles.
fn tube(b: usize, fresh: &mut Fresh, tris: &mut Vec<[Vertex; 3]>) -> Vec<Vec<Vertex>> {
    let segments = if b == 2 { 1 } else { 2 * b - 3 };
    let rings: Vec<[Vertex; 3]> = (0..=segments)
        .map(|_| [fresh.take(), fresh.take(), fresh.take()])
        .collect();
    let side: Vec<usize> = (0..b - 2).map(|h| 2 * h + 1).collect();
    for s in 0..segments {
        let (p, q) = (rings[s], rings[s + 1]);
        for col in 0..3 {
            if col == 0 && side.contains(&s) {
                continue;
            }
            let next = (col + 1) % 3;
            tris.push([p[col], p[next], q[next]]);
            tris.push([p[col], q[next], q[col]]);
        }
    }
    let mut holes = vec![rings[0].to_vec(), rings[segments].to_vec()];
    for s in side {
        holes.push(vec![rings[s][0], rings[s][1], rings[s + 1][1], rings[s + 1][0]]);
    }
    holes
}

/// Triangulates the annulus between cycles `a` and `h`, advancing along
/// whichever cycle is proportionally behind.
fn strip(a: &[Vertex], h: &[Vertex], tris: &mut Vec<[Vertex; 3]>) {
    let (m, n) = (a.len(), h.len());
    let (mut i, mut j) = (0, 0);
    while i < m || j < n {
        let step_a = j == n || (i < m && (i + 1) * n <= (j + 1) * m);
        if step_a {
            tris.push([a[i % m], a[(i + 1) % m], h[j % n]]);
            i += 1;
        } else {
            tris.push([a[i % m], h[(j + 1) % n], h[j % n]]);
            j += 1;
        }
    }
}

/// Index of a triangle whose corners are all fresh, subdividing until one
/// exists.
fn all_fresh_triangle(tris: &mut Vec<[Vertex; 3]>, fresh: &mut Fresh, first_fresh: u32) -> usize {
    let count = |t: &[Vertex; 3]| t.iter().filter(|v| v.0 >= first_fresh).count();
    loop {
        let (i, best) = tris
            .iter()
            .enumerate()
            .map(|(i, t)| (i, count(t)))
            .max_by_key(|&(i, c)| (c, i))
            .expect("construction is non-empty");
        if best == 3 {
            return i;
        }
        let mut t = tris.swap_remove(i);
        t.sort_by_key(|v| std::cmp::Reverse(v.0 >= first_fresh));
        let [x, y, z] = t;
        let g = fresh.take();
        tris.extend([[g, y, z], [g, x, z], [g, x, y]]);
    }
}

/// Grows `c` by 1-to-3 subdivisions (two triangles each) until it has more
/// than `k` triangles. Subdivided triangles hold at most one boundary edge,
/// preferring those with a vertex id of at least `first_fresh`.
pub fn pad_component(c: &Complex2, k: usize, first_fresh: u32) -> Complex2 {
    if c.num_triangles() > k {
        return c.clone();
    }
    let boundary = c.boundary_edges();
    let on_boundary = |t: &Triangle| t.edges().iter().filter(|e| boundary.contains(e)).count();
    let mut tris: Vec<Triangle> = c.triangles().to_vec();
    let start = c.max_vertex().map_or(first_fresh, |v| first_fresh.max(v.0 + 1));
    let mut fresh = Fresh(start);
    while tris.len() <= k {
        let candidate = tris
            .iter()
            .rposition(|t| on_boundary(t) <= 1 && t.corners().iter().any(|v| v.0 >= first_fresh))
            .or_else(|| tris.iter().rposition(|t| on_boundary(t) <= 1));
        let Some(i) = candidate else { break };
        let [x, y, z] = tris.swap_remove(i).corners();
        let g = fresh.take();
        tris.extend([[g, x, y], [g, y, z], [g, x, z]].map(triangle));
    }
    Complex2::from_triangles(tris)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::surface::is_sphere;

    #[test]
    fn boundary_orientation_compares_cycles() {
        let a = complex(&[[0, 1, 3], [1, 3, 4], [1, 2, 4], [2, 4, 5], [0, 2, 5], [0, 3, 5]]);
        // the inner triangle is attached the other way round
        let b = complex(&[[0, 1, 3], [1, 3, 5], [1, 2, 5], [2, 4, 5], [0, 2, 4], [0, 3, 4]]);
        assert_eq!(classify_surface(&a).unwrap().kind, SurfaceKind::PuncturedSphere(2));
        assert_eq!(classify_surface(&b).unwrap().kind, SurfaceKind::PuncturedSphere(2));
        assert_eq!(a.boundary_edges(), b.boundary_edges());
        assert!(same_boundary_orientation(&a, &a));
        assert!(!same_boundary_orientation(&a, &b));
    }

    #[test]
    fn merging_copies_rejects_collisions() {
        let copies = BTreeMap::from([(Vertex(3), Vertex(1))]);
        let fan = complex(&[[10, 1, 2], [10, 3, 4]]);
        assert_eq!(merge_copies(&fan, &copies), None);
        let apart = complex(&[[10, 1, 2], [11, 3, 4]]);
        assert_eq!(merge_copies(&apart, &copies), Some(complex(&[[10, 1, 2], [11, 1, 4]])));
        assert_eq!(merge_copies(&complex(&[[1, 3, 4]]), &copies), None);
    }

    /// 24-triangle disk bounded by the hexagon 1..=6: a fan around 0 with
    /// every other triangle split 1-to-3, twice.
    fn hexagonal_disk() -> Complex2 {
        let mut tris: Vec<[u32; 3]> = (0..6).map(|i| [0, 1 + i, 1 + (i + 1) % 6]).collect();
        let mut next = 7;
        for _ in 0..2 {
            let mut out = Vec::new();
            for (n, t) in tris.iter().enumerate() {
                if n % 2 == 0 {
                    out.extend([[next, t[0], t[1]], [next, t[1], t[2]], [next, t[0], t[2]]]);
                    next += 1;
                } else {
                    out.push(*t);
                }
            }
            tris = out;
        }
        complex(&tris)
    }

    fn annulus(outer: &[u32], inner: &[u32]) -> Complex2 {
        let mut tris = Vec::new();
        let (m, n) = (outer.len(), inner.len());
        let (mut i, mut j) = (0, 0);
        while i < m || j < n {
            if j == n || (i < m && (i + 1) * n <= (j + 1) * m) {
                tris.push([outer[i % m], outer[(i + 1) % m], inner[j % n]]);
                i += 1;
            } else {
                tris.push([outer[i % m], inner[(j + 1) % n], inner[j % n]]);
                j += 1;
            }
        }
        complex(&tris)
    }

    /// Subdivides every triangle once, keeping the boundary.
    fn refine(c: &Complex2, first: u32) -> Complex2 {
        let mut next = first;
        Complex2::from_triangles(c.triangles().iter().flat_map(|t| {
            let [x, y, z] = t.corners();
            let g = Vertex(next);
            next += 1;
            [[g, x, y], [g, y, z], [g, x, z]].map(triangle)
        }))
    }

    fn check(c: &Complex2, out: &Complex2) {
        let first_fresh = c.max_vertex().unwrap().0 + 1;
        let b = match classify_surface(c).unwrap().kind {
            SurfaceKind::PuncturedSphere(b) => b,
            other => panic!("{other:?}"),
        };
        assert_eq!(classify_surface(out).unwrap().kind, SurfaceKind::PuncturedSphere(b));
        assert_eq!(out.boundary_edges(), c.boundary_edges());
        let pairs = cofacial_pairs(out);
        assert!(cofacial_pairs(c).is_subset(&pairs));
        let l = c.boundary_edges().len();
        assert!(
            out.num_triangles() <= 4 * l + 6 * b,
            "{} > 4*{l}+6*{b}",
            out.num_triangles()
        );
        let boundary: BTreeSet<Vertex> = c.boundary_edges().iter().flat_map(|e| e.endpoints()).collect();
        for v in out.vertices() {
            assert!(boundary.contains(&v) || v.0 >= first_fresh || c.contains_vertex(v));
        }
    }

    #[test]
    fn single_triangle_unchanged() {
        let c = complex(&[[1, 2, 3]]);
        assert_eq!(replace_component(&c, &c).unwrap(), c);
    }

    #[test]
    fn hexagonal_disk_shrinks() {
        let c = hexagonal_disk();
        assert_eq!(c.num_triangles(), 24);
        assert_eq!(c.boundary_edges().len(), 6);
        let out = replace_component(&c, &c).unwrap();
        check(&c, &out);
        assert!(out.num_triangles() <= 30);
        assert!(out.num_triangles() < c.num_triangles());
    }

    #[test]
    fn annulus_keeps_both_cycles() {
        let c = refine(&refine(&annulus(&[1, 2, 3], &[4, 5, 6]), 100), 200);
        let out = replace_component(&c, &c).unwrap();
        check(&c, &out);
        assert!(out.num_triangles() <= 36);
        assert!(out.num_triangles() < c.num_triangles());
    }

    #[test]
    fn many_holes() {
        for b in 2..=5u32 {
            let mut tris: Vec<[u32; 3]> = Vec::new();
            // a long cylinder of triangular rings, open at both ends
            let len = 4 * b;
            for s in 0..len {
                for col in 0..3 {
                    let p = |r: u32, c: u32| 10 + 3 * r + c % 3;
                    tris.push([p(s, col), p(s, col + 1), p(s + 1, col + 1)]);
                    tris.push([p(s, col), p(s + 1, col + 1), p(s + 1, col)]);
                }
            }
            // holes: the two end rings plus b-2 side quads
            let mut c = complex(&tris);
            let quads: Vec<Triangle> = (0..b - 2)
                .flat_map(|h| {
                    let s = 4 * h + 2;
                    let p = |r: u32, c: u32| 10 + 3 * r + c % 3;
                    [
                        tri(p(s, 0), p(s, 1), p(s + 1, 1)),
                        tri(p(s, 0), p(s + 1, 1), p(s + 1, 0)),
                    ]
                })
                .collect();
            c = c.without(&quads);
            let c = refine(&refine(&c, 1000), 5000);
            assert_eq!(
                classify_surface(&c).unwrap().kind,
                SurfaceKind::PuncturedSphere(b as usize)
            );
            let out = replace_component(&c, &c).unwrap();
            check(&c, &out);
        }
    }

    #[test]
    fn ears_are_kept() {
        // fan around 0 over the hexagon, then glue an ear on each other edge
        let mut tris: Vec<[u32; 3]> = (0..6).map(|i| [0, 1 + i, 1 + (i + 1) % 6]).collect();
        let refined = refine(&complex(&tris), 50);
        tris = refined.triangles().iter().map(|t| t.corners().map(|v| v.0)).collect();
        for (a, bb, e) in [(1, 2, 20), (3, 4, 21), (5, 6, 22)] {
            tris.push([a, bb, e]);
        }
        let c = complex(&tris);
        let before = cofacial_pairs(&c);
        assert_eq!(before.len(), 3);
        let out = replace_component(&c, &c).unwrap();
        check(&c, &out);
    }

    #[test]
    fn rejects_non_punctured_sphere() {
        assert!(matches!(
            replace_component(&mobius_strip(), &mobius_strip()),
            Err(DeletionError::NotPuncturedSphere(_))
        ));
        assert!(replace_component(&tetrahedron(), &tetrahedron()).is_err());
    }

    #[test]
    fn pinned_vertices_stay_interior() {
        let c = hexagonal_disk();
        // a sphere elsewhere that touches the disk at its interior vertex 0
        let other = complex(&[[0, 90, 91], [0, 90, 92], [0, 91, 92], [90, 91, 92]]);
        let host = c.union(&other);
        let out = replace_component(&c, &host).unwrap();
        assert!(out.contains_vertex(Vertex(0)));
        assert!(interior_vertices(&out).contains(&Vertex(0)));
        assert!(out.vertices().all(|v| v.0 <= 6 || v.0 > 92 || v == Vertex(0)));
        assert_eq!(classify_surface(&out).unwrap().kind, SurfaceKind::PuncturedSphere(1));
        assert_eq!(out.boundary_edges(), c.boundary_edges());
        assert!(!is_sphere(&out.union(&other)));
    }

    #[test]
    fn padding_grows_past_k() {
        let c = hexagonal_disk();
        let out = replace_component(&c, &c).unwrap();
        let first = c.max_vertex().unwrap().0 + 1;
        let padded = pad_component(&out, 40, first);
        assert!(padded.num_triangles() > 40 && padded.num_triangles() <= 42);
        assert_eq!((padded.num_triangles() - out.num_triangles()) % 2, 0);
        assert_eq!(padded.boundary_edges(), c.boundary_edges());
        assert_eq!(classify_surface(&padded).unwrap().kind, SurfaceKind::PuncturedSphere(1));
        assert!(cofacial_pairs(&c).is_subset(&cofacial_pairs(&padded)));
        assert_eq!(pad_component(&c, 3, first), c);
    }
}
