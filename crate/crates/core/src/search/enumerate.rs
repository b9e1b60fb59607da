//! Isomorph-free enumeration of triangulated 2-spheres by vertex splitting.
//!
//! Every simplicial 2-sphere other than the tetrahedron boundary has an edge
//! whose contraction yields a smaller simplicial sphere, so splitting
//! vertices of all spheres with `t` triangles reaches every sphere with
//! `t + 2` triangles. Duplicates are removed with a canonical code computed
//! from the rotation system of the (oriented) triangulation.

use std::collections::{BTreeMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::complex::{Complex2, Triangle, Vertex};
use crate::surface::oriented_triangles;

/// Rotation system of a closed oriented surface with vertices `0..n`.
struct Rotation {
    /// Neighbors of each vertex in cyclic order.
    cycles: Vec<Vec<u32>>,
    /// Position of each neighbor within `cycles[x]`.
    position: Vec<BTreeMap<u32, usize>>,
}

impl Rotation {
    /// Requires vertices `0..n` and a closed orientable surface.
    fn new(k: &Complex2) -> Option<Self> {
        let n = k.num_vertices();
        let oriented = oriented_triangles(k)?;
        let mut next: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); n];
        for [a, b, c] in oriented {
            let (a, b, c) = (a.0, b.0, c.0);
            next[a as usize].insert(b, c);
            next[b as usize].insert(c, a);
            next[c as usize].insert(a, b);
        }
        let mut cycles = Vec::with_capacity(n);
        let mut position = Vec::with_capacity(n);
        for nx in &next {
            let &start = nx.keys().next()?;
            let mut cycle = vec![start];
            let mut y = nx[&start];
            while y != start {
                cycle.push(y);
                y = *nx.get(&y)?;
                if cycle.len() > nx.len() {
                    return None;
                }
            }
            if cycle.len() != nx.len() {
                return None;
            }
            position.push(cycle.iter().enumerate().map(|(i, &w)| (w, i)).collect());
            cycles.push(cycle);
        }
        Some(Rotation { cycles, position })
    }

    /// BFS code from the directed edge `(u0, v0)`, walking rotations
    /// forwards or backwards. Returns the code and the BFS numbering.
    fn bfs_code(&self, u0: u32, v0: u32, mirror: bool) -> (Vec<u32>, Vec<u32>) {
        let n = self.cycles.len();
        let mut label = vec![0u32; n];
        let mut first = vec![0u32; n];
        let mut next_label = 1;
        label[u0 as usize] = 1;
        first[u0 as usize] = v0;
        let mut queue = VecDeque::from([u0]);
        let mut code = Vec::with_capacity(2 * n + 6 * n);
        while let Some(x) = queue.pop_front() {
            let cycle = &self.cycles[x as usize];
            let d = cycle.len();
            let start = self.position[x as usize][&first[x as usize]];
            for step in 0..d {
                let idx = if mirror {
                    (start + d - step) % d
                } else {
                    (start + step) % d
                };
                let y = cycle[idx];
                if label[y as usize] == 0 {
                    next_label += 1;
                    label[y as usize] = next_label;
                    first[y as usize] = x;
                    queue.push_back(y);
                }
                code.push(label[y as usize]);
            }
            code.push(0);
        }
        (code, label)
    }

    /// Lexicographically smallest BFS code over all starting directed edges
    /// and both orientations, with the numbering achieving it.
    fn canonical(&self) -> (Vec<u32>, Vec<u32>) {
        let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
        for (u, cycle) in self.cycles.iter().enumerate() {
            for &v in cycle {
                for mirror in [false, true] {
                    let candidate = self.bfs_code(u as u32, v, mirror);
                    if best.as_ref().is_none_or(|b| candidate.0 < b.0) {
                        best = Some(candidate);
                    }
                }
            }
        }
        best.unwrap_or_default()
    }
}

/// Relabels the vertices of `k` to `0..n` in sorted order.
fn compact(k: &Complex2) -> Complex2 {
    let ids: BTreeMap<Vertex, u32> = k.vertices().enumerate().map(|(i, v)| (v, i as u32)).collect();
    k.relabel(|v| Vertex(ids[&v])).expect("relabeling by a bijection")
}

/// Canonical code of a triangulated closed orientable surface; two such
/// surfaces have equal codes exactly when they are combinatorially
/// isomorphic (orientation-reversing isomorphisms included). `None` if `k`
/// is not a closed orientable surface.
pub fn canonical_code(k: &Complex2) -> Option<Vec<u32>> {
    if k.is_empty() || !k.boundary_edges().is_empty() {
        return None;
    }
    Rotation::new(&compact(k)).map(|r| r.canonical().0)
}

/// Canonical form: the code plus the complex relabeled by the canonical
/// numbering (vertices `0..n`).
fn canonical_form(k: &Complex2) -> (Vec<u32>, Complex2) {
    let k = compact(k);
    let rotation = Rotation::new(&k).expect("sphere is a closed oriented surface");
    let (code, label) = rotation.canonical();
    let relabeled = k.relabel(|v| Vertex(label[v.0 as usize] - 1)).expect("bijection");
    (code, relabeled)
}

/// All vertex splits of the sphere `k` (vertices `0..n`).
fn vertex_splits(k: &Complex2) -> Vec<Complex2> {
    let rotation = Rotation::new(k).expect("sphere is a closed oriented surface");
    let u = Vertex(k.num_vertices() as u32);
    let mut out = Vec::new();
    for (v, cycle) in rotation.cycles.iter().enumerate() {
        let v = Vertex(v as u32);
        let d = cycle.len();
        for i in 0..d {
            for len in 1..d {
                let j = (i + len) % d;
                let mut tris: Vec<Triangle> = k.triangles().to_vec();
                let mut replaced = Vec::new();
                for step in 0..len {
                    let a = Vertex(cycle[(i + step) % d]);
                    let b = Vertex(cycle[(i + step + 1) % d]);
                    replaced.push(Triangle::new(v, a, b).unwrap());
                    tris.push(Triangle::new(u, a, b).unwrap());
                }
                tris.retain(|t| !replaced.contains(t));
                tris.push(Triangle::new(v, u, Vertex(cycle[i])).unwrap());
                tris.push(Triangle::new(v, u, Vertex(cycle[j])).unwrap());
                out.push(Complex2::from_triangles(tris));
            }
        }
    }
    out
}

fn cache() -> &'static Mutex<Vec<Arc<Vec<Complex2>>>> {
    static LEVELS: OnceLock<Mutex<Vec<Arc<Vec<Complex2>>>>> = OnceLock::new();
    LEVELS.get_or_init(|| Mutex::new(Vec::new()))
}

/// All sphere triangulations with exactly `t` triangles, up to isomorphism,
/// with vertices `0..(t + 4) / 2`, sorted by canonical code. Empty for odd
/// `t` or `t < 4`. Results are cached for the lifetime of the process.
pub fn spheres_with_triangles(t: usize) -> Arc<Vec<Complex2>> {
    if t < 4 || t % 2 == 1 {
        return Arc::new(Vec::new());
    }
    let level = (t - 4) / 2;
    let mut levels = cache().lock().unwrap_or_else(|e| e.into_inner());
    if levels.is_empty() {
        let tetra = Complex2::from_triples([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        levels.push(Arc::new(vec![canonical_form(&tetra).1]));
    }
    while levels.len() <= level {
        let mut seen: BTreeMap<Vec<u32>, Complex2> = BTreeMap::new();
        for sphere in levels.last().unwrap().iter() {
            for split in vertex_splits(sphere) {
                let (code, form) = canonical_form(&split);
                seen.entry(code).or_insert(form);
            }
        }
        levels.push(Arc::new(seen.into_values().collect()));
    }
    levels[level].clone()
}

/// All sphere triangulations with at most `max_triangles` triangles, ordered
/// by triangle count and then canonical code.
pub fn enumerate_sphere_triangulations(max_triangles: usize) -> Vec<Complex2> {
    (4..=max_triangles)
        .step_by(2)
        .flat_map(|t| spheres_with_triangles(t).iter().cloned().collect::<Vec<_>>())
        .collect()
}
