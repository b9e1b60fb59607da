//! Barycentric subdivision and its dimension-colored 1-skeleton.

use std::collections::HashMap;

use crate::complex::{Complex2, Edge, Triangle, Vertex};

/// A nonempty simplex of a 2-complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Simplex {
    Vertex(Vertex),
    Edge(Edge),
    Triangle(Triangle),
}

impl Simplex {
    pub fn dim(&self) -> u8 {
        match self {
            Simplex::Vertex(_) => 0,
            Simplex::Edge(_) => 1,
            Simplex::Triangle(_) => 2,
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            Simplex::Vertex(v) => vec![*v],
            Simplex::Edge(e) => e.endpoints().to_vec(),
            Simplex::Triangle(t) => t.corners().to_vec(),
        }
    }
}

/// Simple undirected graph with a color on every vertex; adjacency lists are
/// sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    colors: Vec<u8>,
    adj: Vec<Vec<usize>>,
}

impl ColoredGraph {
    /// Builds a graph from vertex colors and an edge list. Self-loops and
    /// repeated edges are dropped.
    pub fn new(colors: Vec<u8>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); colors.len()];
        for (a, b) in edges {
            assert!(a < colors.len() && b < colors.len(), "edge endpoint out of range");
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        ColoredGraph { colors, adj }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Checks that `map` is an injective, color-preserving homomorphism of
    /// `self` into `host`.
    pub fn is_embedding_into(&self, host: &ColoredGraph, map: &[usize]) -> bool {
        if map.len() != self.len() || map.iter().any(|&h| h >= host.len()) {
            return false;
        }
        let mut used = vec![false; host.len()];
        for (p, &h) in map.iter().enumerate() {
            if used[h] || host.color(h) != self.color(p) {
                return false;
            }
            used[h] = true;
        }
        self.edges().all(|(a, b)| host.has_edge(map[a], map[b]))
    }
}

/// The 1-skeleton of the barycentric subdivision, one vertex per simplex,
/// colored by simplex dimension.
///
/// Skeleton vertices are numbered: complex vertices first, then edges, then
/// triangles, each group in sorted order.
#[derive(Clone, Debug)]
pub struct ColoredSkeleton {
    graph: ColoredGraph,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

impl ColoredSkeleton {
    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, v: usize) -> Simplex {
        self.simplices[v]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_by_dim(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for s in &self.simplices {
            counts[s.dim() as usize] += 1;
        }
        counts
    }
}

/// Builds the dimension-colored skeleton of `Sd(K)`: an edge joins two
/// simplices exactly when one strictly contains the other.
pub fn skeleton_with_dims(k: &Complex2) -> ColoredSkeleton {
    let mut simplices: Vec<Simplex> = k.vertices().map(Simplex::Vertex).collect();
    simplices.extend(k.edges().map(Simplex::Edge));
    simplices.extend(k.triangles().iter().map(|&t| Simplex::Triangle(t)));
    let index: HashMap<Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (*s, i)).collect();

    let mut edges = Vec::new();
    for e in k.edges() {
        let ie = index[&Simplex::Edge(e)];
        for v in e.endpoints() {
            edges.push((index[&Simplex::Vertex(v)], ie));
        }
    }
    for &t in k.triangles() {
        let it = index[&Simplex::Triangle(t)];
        for v in t.corners() {
            edges.push((index[&Simplex::Vertex(v)], it));
        }
        for e in t.edges() {
            edges.push((index[&Simplex::Edge(e)], it));
        }
    }
    let colors = simplices.iter().map(Simplex::dim).collect();
    ColoredSkeleton {
        graph: ColoredGraph::new(colors, edges),
        simplices,
        index,
    }
}

/// Barycentric subdivision. Vertex `i` of the output is skeleton vertex `i`
/// of [`skeleton_with_dims`]; every triangle of `K` yields six triangles, one
/// per flag vertex ⊂ edge ⊂ triangle.
pub fn barycentric_subdivision(k: &Complex2) -> Complex2 {
    let skeleton = skeleton_with_dims(k);
    let id = |s: Simplex| Vertex(skeleton.index[&s] as u32);
    let mut out = Vec::with_capacity(6 * k.num_triangles());
    for &t in k.triangles() {
        for e in t.edges() {
            for v in e.endpoints() {
                out.push(
                    Triangle::new(id(Simplex::Vertex(v)), id(Simplex::Edge(e)), id(Simplex::Triangle(t)))
                        .expect("flag simplices are distinct"),
                );
            }
        }
    }
    Complex2::from_triangles(out)
}
