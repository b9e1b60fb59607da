//! Seeded instance generators.
//!
//! All generators take an explicit RNG so that a seed reproduces the same
//! complex.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex2, Edge, Triangle, Vertex};
use crate::deletion::DeletionInstance;

fn tri(a: u32, b: u32, c: u32) -> Triangle {
    Triangle::new(a, b, c).expect("generator triangles have distinct corners")
}

fn next_vertex(k: &Complex2) -> u32 {
    k.max_vertex().map_or(0, |v| v.0 + 1)
}

/// Flips a random edge if the result is still a simplicial sphere.
fn random_flip<R: Rng + ?Sized>(rng: &mut R, k: &Complex2) -> Option<Complex2> {
    let edges: Vec<Edge> = k.edges().collect();
    let e = *edges.choose(rng)?;
    let ts: Vec<Triangle> = k.triangles_on_edge(&e).collect();
    if ts.len() != 2 {
        return None;
    }
    let c = ts[0].opposite_vertex(&e)?;
    let d = ts[1].opposite_vertex(&e)?;
    if k.contains_edge(&Edge::new(c, d).ok()?) {
        return None;
    }
    let [a, b] = e.endpoints();
    if k.triangles_at_vertex(a).count() <= 3 || k.triangles_at_vertex(b).count() <= 3 {
        return None;
    }
    let flipped = [Triangle::new(c, d, a).ok()?, Triangle::new(c, d, b).ok()?];
    Some(k.without(&ts).union(&Complex2::from_triangles(flipped)))
}

/// A random triangulated sphere with the given (even, at least 4) number of
/// triangles on vertices `base..`: random 1-to-3 subdivisions of a
/// tetrahedron followed by random edge flips.
pub fn random_sphere<R: Rng + ?Sized>(rng: &mut R, triangles: usize, base: u32) -> Complex2 {
    assert!(
        triangles >= 4 && triangles.is_multiple_of(2),
        "a sphere needs an even number (>= 4) of triangles"
    );
    let b = base;
    let mut tris = vec![
        tri(b, b + 1, b + 2),
        tri(b, b + 1, b + 3),
        tri(b, b + 2, b + 3),
        tri(b + 1, b + 2, b + 3),
    ];
    let mut next = base + 4;
    while tris.len() < triangles {
        let i = rng.gen_range(0..tris.len());
        let [x, y, z] = tris.swap_remove(i).corners().map(|v| v.0);
        tris.extend([tri(next, x, y), tri(next, y, z), tri(next, x, z)]);
        next += 1;
    }
    let mut k = Complex2::from_triangles(tris);
    for _ in 0..2 * triangles {
        if let Some(f) = random_flip(rng, &k) {
            k = f;
        }
    }
    k
}

/// Randomly permutes vertex ids within `0..n` where `n` is the vertex count.
pub fn shuffle_labels<R: Rng + ?Sized>(rng: &mut R, k: &Complex2) -> Complex2 {
    let vertices: Vec<Vertex> = k.vertices().collect();
    let mut ids: Vec<u32> = (0..vertices.len() as u32).collect();
    ids.shuffle(rng);
    let map: std::collections::BTreeMap<Vertex, Vertex> =
        vertices.into_iter().zip(ids.into_iter().map(Vertex)).collect();
    k.relabel(|v| map[&v]).expect("permutation is injective")
}

/// Shape of a glued random complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueParams {
    /// Triangles of the main sphere (rounded up to an even number >= 4).
    pub sphere_triangles: usize,
    /// Further small spheres glued on.
    pub extra_spheres: usize,
    /// Loose triangles glued on.
    pub extra_triangles: usize,
    /// Probability that a glued piece shares an edge (creating a conflict
    /// edge) rather than a single vertex.
    pub conflict_density: f64,
}

impl Default for GlueParams {
    fn default() -> Self {
        GlueParams {
            sphere_triangles: 12,
            extra_spheres: 1,
            extra_triangles: 4,
            conflict_density: 0.5,
        }
    }
}

fn even_at_least_4(n: usize) -> usize {
    (n.max(4) + 1) & !1
}

/// A random sphere with further spheres and loose triangles glued along
/// edges or vertices.
pub fn random_glued<R: Rng + ?Sized>(rng: &mut R, params: &GlueParams) -> Complex2 {
    let mut k = random_sphere(rng, even_at_least_4(params.sphere_triangles), 0);
    for _ in 0..params.extra_spheres {
        let size = 2 * rng.gen_range(2..=4);
        let base = next_vertex(&k);
        let s = random_sphere(rng, size, base);
        let along_edge = rng.gen_bool(params.conflict_density);
        let targets: Vec<Vertex> = if along_edge {
            let edges: Vec<Edge> = k.edges().collect();
            edges.choose(rng).expect("sphere has edges").endpoints().to_vec()
        } else {
            let vs: Vec<Vertex> = k.vertices().collect();
            vec![*vs.choose(rng).expect("sphere has vertices")]
        };
        let sources: Vec<Vertex> = if along_edge {
            let edges: Vec<Edge> = s.edges().collect();
            edges.choose(rng).unwrap().endpoints().to_vec()
        } else {
            vec![Vertex(base)]
        };
        let glued = s
            .relabel(|v| sources.iter().position(|&u| u == v).map_or(v, |i| targets[i]))
            .expect("glued vertices are distinct");
        k = k.union(&glued);
    }
    for _ in 0..params.extra_triangles {
        let fresh = next_vertex(&k);
        let t = if rng.gen_bool(params.conflict_density) {
            let edges: Vec<Edge> = k.edges().collect();
            let [a, b] = edges.choose(rng).unwrap().endpoints();
            let others: Vec<Vertex> = k.vertices().filter(|&v| v != a && v != b).collect();
            let c = match others.choose(rng) {
                Some(&c) if rng.gen_bool(0.5) => c,
                _ => Vertex(fresh),
            };
            Triangle::new(a, b, c).unwrap()
        } else {
            let vs: Vec<Vertex> = k.vertices().collect();
            let a = *vs.choose(rng).unwrap();
            Triangle::new(a, fresh, fresh + 1).unwrap()
        };
        k = k.union(&Complex2::from_triangles([t]));
    }
    k
}

/// Random triangles over a small vertex set.
pub fn random_triangles<R: Rng + ?Sized>(rng: &mut R, vertices: u32, triangles: usize) -> Complex2 {
    let mut all: Vec<Triangle> = Vec::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            for c in b + 1..vertices {
                all.push(tri(a, b, c));
            }
        }
    }
    all.shuffle(rng);
    all.truncate(triangles);
    Complex2::from_triangles(all)
}

/// A mix of random triangle sets, glued spheres, punctured spheres and
/// disjoint unions with at most `max_triangles` triangles.
pub fn random_small_complex<R: Rng + ?Sized>(rng: &mut R, max_triangles: usize) -> Complex2 {
    let max = max_triangles.max(1);
    let k = match rng.gen_range(0..4) {
        0 => {
            let v = rng.gen_range(4..=7);
            let n = rng.gen_range(1..=max);
            random_triangles(rng, v, n)
        }
        1 if max >= 4 => {
            let size = 2 * rng.gen_range(2..=(max / 2).min(6));
            let params = GlueParams {
                sphere_triangles: size,
                extra_spheres: usize::from(max >= size + 8 && rng.gen_bool(0.3)),
                extra_triangles: rng.gen_range(0..=(max - size).min(4)),
                conflict_density: rng.gen_range(0.2..=0.9),
            };
            random_glued(rng, &params)
        }
        2 if max >= 4 => {
            let size = 2 * rng.gen_range(2..=(max / 2).min(6));
            let s = random_sphere(rng, size, 0);
            let holes = rng.gen_range(0..=2).min(size - 1);
            let mut ts = s.triangles().to_vec();
            ts.shuffle(rng);
            let punctured = Complex2::from_triangles(ts.into_iter().skip(holes));
            let n = rng.gen_range(0..=3);
            let extra = random_triangles(rng, next_vertex(&punctured).min(7), n);
            punctured.union(&extra)
        }
        _ if max >= 8 => {
            let a = random_sphere(rng, 4, 0);
            let size = 2 * rng.gen_range(2..=((max - 4) / 2).min(6));
            let b = random_sphere(rng, size, 4);
            let shared = rng.gen_range(0..=2u32);
            // identify the first `shared` vertices of the second sphere with
            // the first sphere
            let b = b
                .relabel(|v| if v.0 - 4 < shared { Vertex(v.0 - 4) } else { v })
                .unwrap();
            a.union(&b)
        }
        _ => {
            let n = rng.gen_range(1..=max);
            random_triangles(rng, 5, n)
        }
    };
    truncate(rng, k, max)
}

fn truncate<R: Rng + ?Sized>(rng: &mut R, k: Complex2, max: usize) -> Complex2 {
    if k.num_triangles() <= max {
        return k;
    }
    let mut ts = k.triangles().to_vec();
    ts.shuffle(rng);
    ts.truncate(max);
    Complex2::from_triangles(ts)
}

/// A deletion instance with at most `max_triangles` triangles and a budget
/// in `0..=max_k`.
pub fn random_deletion_instance<R: Rng + ?Sized>(rng: &mut R, max_triangles: usize, max_k: i64) -> DeletionInstance {
    let k = if rng.gen_bool(0.7) && max_triangles >= 4 {
        let size = 2 * rng.gen_range(2..=(max_triangles / 2).min(6));
        let room = max_triangles - size;
        let params = GlueParams {
            sphere_triangles: size,
            extra_spheres: usize::from(room >= 8 && rng.gen_bool(0.3)),
            extra_triangles: rng.gen_range(0..=room.min(5)),
            conflict_density: rng.gen_range(0.3..=0.9),
        };
        let k = random_glued(rng, &params);
        truncate(rng, k, max_triangles)
    } else {
        random_small_complex(rng, max_triangles)
    };
    DeletionInstance::new(k, rng.gen_range(0..=max_k))
}

/// A random sphere with tetrahedra glued on two disjoint edges of the link of
/// one vertex `v`. The triangles without a conflict edge then typically form
/// one component that meets itself only at `v`. Falls back to a single glued
/// tetrahedron when no vertex has degree four or more.
pub fn pinched_sphere<R: Rng + ?Sized>(rng: &mut R, sphere_triangles: usize) -> Complex2 {
    let s = random_sphere(rng, even_at_least_4(sphere_triangles), 0);
    let tetra = |k: &Complex2, a: Vertex, b: Vertex| {
        let p = next_vertex(k);
        let (a, b) = (a.0, b.0);
        k.union(&Complex2::from_triangles([
            tri(a, b, p),
            tri(a, b, p + 1),
            tri(a, p, p + 1),
            tri(b, p, p + 1),
        ]))
    };
    let hubs: Vec<Vertex> = s
        .vertices()
        .filter(|&v| s.triangles_at_vertex(v).count() >= 4)
        .collect();
    let Some(&v) = hubs.choose(rng) else {
        let e = *s.edges().collect::<Vec<_>>().choose(rng).expect("sphere has edges");
        let [a, b] = e.endpoints();
        return tetra(&s, a, b);
    };
    let link: Vec<Edge> = s.triangles_at_vertex(v).filter_map(|t| t.opposite_edge(v)).collect();
    let mut cycle = link[0].endpoints().to_vec();
    while cycle.len() < link.len() {
        let (last, prev) = (cycle[cycle.len() - 1], cycle[cycle.len() - 2]);
        let next = link
            .iter()
            .find(|e| e.contains(last) && !e.contains(prev))
            .and_then(|e| e.other(last))
            .expect("sphere links are cycles");
        cycle.push(next);
    }
    let l = cycle.len();
    let i = rng.gen_range(0..l);
    let j = (i + rng.gen_range(2..=l - 2)) % l;
    let k = tetra(&s, cycle[i], cycle[(i + 1) % l]);
    tetra(&k, cycle[j], cycle[(j + 1) % l])
}

/// A random host containing a tetrahedron on four randomly chosen vertices.
pub fn planted_tetrahedron<R: Rng + ?Sized>(rng: &mut R, vertices: u32, extra_triangles: usize) -> Complex2 {
    let vertices = vertices.max(4);
    let mut ids: Vec<u32> = (0..vertices).collect();
    ids.shuffle(rng);
    let [a, b, c, d] = [ids[0], ids[1], ids[2], ids[3]];
    let tetra = Complex2::from_triangles([tri(a, b, c), tri(a, b, d), tri(a, c, d), tri(b, c, d)]);
    tetra.union(&random_triangles(rng, vertices, extra_triangles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::is_sphere;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spheres_are_spheres() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [4, 6, 10, 30, 200] {
            let s = random_sphere(&mut rng, n, 7);
            assert_eq!(s.num_triangles(), n);
            assert!(is_sphere(&s));
            assert!(s.vertices().all(|v| v.0 >= 7));
        }
    }

    #[test]
    fn seeds_reproduce() {
        let gen = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_glued(&mut rng, &GlueParams::default())
        };
        assert_eq!(gen(5), gen(5));
        assert_ne!(gen(5), gen(6));
    }

    #[test]
    fn small_complexes_respect_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let k = random_small_complex(&mut rng, 14);
            assert!(!k.is_empty() && k.num_triangles() <= 14);
            let i = random_deletion_instance(&mut rng, 16, 4);
            assert!(i.complex.num_triangles() <= 16 && (0..=4).contains(&i.budget));
        }
    }

    #[test]
    fn glued_density_controls_conflicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = |d| GlueParams {
            conflict_density: d,
            extra_triangles: 6,
            ..GlueParams::default()
        };
        let low: usize = (0..20)
            .map(|_| random_glued(&mut rng, &params(0.0)).conflict_triangles().len())
            .sum();
        let high: usize = (0..20)
            .map(|_| random_glued(&mut rng, &params(1.0)).conflict_triangles().len())
            .sum();
        assert_eq!(low, 0);
        assert!(high > 0);
    }

    #[test]
    fn planted_hosts_contain_a_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let k = planted_tetrahedron(&mut rng, 8, 10);
        let found = crate::search::brute_force_sphere_subcomplex(&k, 4, crate::search::SearchMode::AtMost).unwrap();
        assert!(found.found);
    }
}
