//! Pure 2-dimensional simplicial complexes stored as a canonical triangle set.
//!
//! Only maximal triangles are stored. Edges and vertices are implied by
//! downward closure and indexed for incidence queries. Everything iterates in
//! sorted order, so all algorithms built on top are reproducible.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("degenerate triangle ({0}, {1}, {2}): repeated vertex")]
    DegenerateTriangle(u32, u32, u32),
    #[error("degenerate edge ({0}, {1}): repeated vertex")]
    DegenerateEdge(u32, u32),
    #[error("complex is not edge-connected ({0} components)")]
    NotEdgeConnected(usize),
    #[error("vertex {0} appears in more than one identification class")]
    InvalidPartition(u32),
    #[error("identification collapses the complex: {0}")]
    IdentificationCollapse(String),
}

/// Opaque vertex label. Labels need not be contiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub u32);

impl Vertex {
    pub fn id(self) -> u32 {
        self.0
    }
}

impl From<u32> for Vertex {
    fn from(id: u32) -> Self {
        Vertex(id)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge with endpoints stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "[u32; 2]")]
pub struct Edge([Vertex; 2]);

impl Edge {
    pub fn new(a: impl Into<Vertex>, b: impl Into<Vertex>) -> Result<Self, ComplexError> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge([a, b])),
            std::cmp::Ordering::Greater => Ok(Edge([b, a])),
            std::cmp::Ordering::Equal => Err(ComplexError::DegenerateEdge(a.0, b.0)),
        }
    }

    pub fn endpoints(&self) -> [Vertex; 2] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0[0] == v || self.0[1] == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: Vertex) -> Option<Vertex> {
        if self.0[0] == v {
            Some(self.0[1])
        } else if self.0[1] == v {
            Some(self.0[0])
        } else {
            None
        }
    }
}

impl From<Edge> for [u32; 2] {
    fn from(e: Edge) -> Self {
        [e.0[0].0, e.0[1].0]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

/// A triangle with corners stored in strictly increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 3]", try_from = "[u32; 3]")]
pub struct Triangle([Vertex; 3]);

impl Triangle {
    pub fn new(a: impl Into<Vertex>, b: impl Into<Vertex>, c: impl Into<Vertex>) -> Result<Self, ComplexError> {
        let mut corners = [a.into(), b.into(), c.into()];
        corners.sort_unstable();
        if corners[0] == corners[1] || corners[1] == corners[2] {
            let [a, b, c] = corners;
            return Err(ComplexError::DegenerateTriangle(a.0, b.0, c.0));
        }
        Ok(Triangle(corners))
    }

    pub fn corners(&self) -> [Vertex; 3] {
        self.0
    }

    /// The three edges, in sorted order: `(a,b)`, `(a,c)`, `(b,c)`.
    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge([a, b]), Edge([a, c]), Edge([b, c])]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        let [a, b] = e.endpoints();
        self.contains(a) && self.contains(b)
    }

    /// The edge not incident to `v`.
    pub fn opposite_edge(&self, v: Vertex) -> Option<Edge> {
        let [a, b, c] = self.0;
        if v == a {
            Some(Edge([b, c]))
        } else if v == b {
            Some(Edge([a, c]))
        } else if v == c {
            Some(Edge([a, b]))
        } else {
            None
        }
    }

    /// The corner not on `e`.
    pub fn opposite_vertex(&self, e: &Edge) -> Option<Vertex> {
        if !self.contains_edge(e) {
            return None;
        }
        self.0.iter().copied().find(|v| !e.contains(*v))
    }

    /// Direction of `e` under the cyclic order `(a, b, c)` of the sorted
    /// corners: `true` if the cycle traverses it from its smaller endpoint.
    pub(crate) fn edge_sign(&self, e: &Edge) -> bool {
        let [a, _, c] = self.0;
        let [x, y] = e.endpoints();
        !(x == a && y == c)
    }
}

impl From<Triangle> for [u32; 3] {
    fn from(t: Triangle) -> Self {
        [t.0[0].0, t.0[1].0, t.0[2].0]
    }
}

impl TryFrom<[u32; 3]> for Triangle {
    type Error = ComplexError;
    fn try_from(v: [u32; 3]) -> Result<Self, Self::Error> {
        Triangle::new(v[0], v[1], v[2])
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// A pure 2-dimensional simplicial complex.
///
/// The triangle list is sorted and duplicate-free; `edge_index` and
/// `vertex_index` map every face to the positions of the triangles containing
/// it and are always rebuilt from the triangle list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Complex2 {
    triangles: Vec<Triangle>,
    edge_index: BTreeMap<Edge, Vec<usize>>,
    vertex_index: BTreeMap<Vertex, Vec<usize>>,
}

impl Complex2 {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a complex from raw vertex-id triples, canonicalizing and
    /// deduplicating.
    pub fn from_triples<I>(triples: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = [u32; 3]>,
    {
        let triangles = triples
            .into_iter()
            .map(|[a, b, c]| Triangle::new(a, b, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_triangles(triangles))
    }

    pub fn from_triangles<I>(triangles: I) -> Self
    where
        I: IntoIterator<Item = Triangle>,
    {
        let mut triangles: Vec<Triangle> = triangles.into_iter().collect();
        triangles.sort_unstable();
        triangles.dedup();
        let (edge_index, vertex_index) = build_indices(&triangles);
        Complex2 {
            triangles,
            edge_index,
            vertex_index,
        }
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_index.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_index.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertex_index.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edge_index.keys().copied()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.vertex_index.keys().next_back().copied()
    }

    pub fn contains(&self, t: &Triangle) -> bool {
        self.triangles.binary_search(t).is_ok()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edge_index.contains_key(e)
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertex_index.contains_key(&v)
    }

    pub fn index_of(&self, t: &Triangle) -> Option<usize> {
        self.triangles.binary_search(t).ok()
    }

    /// Number of triangles containing `e` (0 if `e` is not in the complex).
    pub fn edge_multiplicity(&self, e: &Edge) -> usize {
        self.edge_index.get(e).map_or(0, Vec::len)
    }

    pub fn triangles_on_edge(&self, e: &Edge) -> impl Iterator<Item = Triangle> + '_ {
        self.edge_index.get(e).into_iter().flatten().map(|&i| self.triangles[i])
    }

    pub fn triangles_at_vertex(&self, v: Vertex) -> impl Iterator<Item = Triangle> + '_ {
        self.vertex_index
            .get(&v)
            .into_iter()
            .flatten()
            .map(|&i| self.triangles[i])
    }

    /// Edge multiplicities in sorted edge order.
    pub fn edge_multiplicities(&self) -> impl Iterator<Item = (Edge, usize)> + '_ {
        self.edge_index.iter().map(|(e, ts)| (*e, ts.len()))
    }

    /// Vertices adjacent to `v` through an edge, sorted.
    pub fn neighbors(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.triangles_at_vertex(v)
            .flat_map(|t| t.corners())
            .filter(|&w| w != v)
            .collect()
    }

    /// `V - E + F` over the downward closure.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    /// Checks that the incidence indices equal a fresh rebuild.
    pub fn indices_consistent(&self) -> bool {
        let mut sorted = self.triangles.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted == self.triangles
            && build_indices(&self.triangles) == (self.edge_index.clone(), self.vertex_index.clone())
    }

    /// Splits the triangles into maximal edge-connected parts.
    pub fn edge_connected_components(&self) -> ComponentDecomposition {
        let mut uf = UnionFind::<usize>::new(self.triangles.len());
        for incident in self.edge_index.values() {
            for w in incident.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<Triangle>> = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(*t);
        }
        let mut components: Vec<Vec<Triangle>> = groups.into_values().collect();
        components.sort_unstable_by(|a, b| a[0].cmp(&b[0]));
        ComponentDecomposition { components }
    }

    pub fn is_edge_connected(&self) -> bool {
        !self.is_empty() && self.edge_connected_components().len() == 1
    }

    /// Edges contained in exactly one triangle.
    pub fn boundary_edges(&self) -> BTreeSet<Edge> {
        self.edge_index
            .iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(e, _)| *e)
            .collect()
    }

    /// Edges contained in three or more triangles.
    pub fn conflict_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edge_index.iter().filter(|(_, ts)| ts.len() >= 3).map(|(e, _)| *e)
    }

    /// Triangles having at least one edge of multiplicity three or more.
    pub fn conflict_triangles(&self) -> BTreeSet<Triangle> {
        self.edge_index
            .values()
            .filter(|ts| ts.len() >= 3)
            .flatten()
            .map(|&i| self.triangles[i])
            .collect()
    }

    /// The complex with the given triangles removed; faces left without a
    /// triangle disappear with them.
    pub fn without<'a, I>(&self, removed: I) -> Complex2
    where
        I: IntoIterator<Item = &'a Triangle>,
    {
        let removed: BTreeSet<&Triangle> = removed.into_iter().collect();
        Complex2::from_triangles(self.triangles.iter().filter(|t| !removed.contains(t)).copied())
    }

    /// Repeatedly removes triangles that have an edge lying in no other
    /// triangle. Returns the remaining complex and the removed triangles in
    /// removal order (ties broken by triangle order).
    pub fn strip_free_triangles(&self) -> (Complex2, Vec<Triangle>) {
        let mut multiplicity: BTreeMap<Edge, usize> = self.edge_index.iter().map(|(e, ts)| (*e, ts.len())).collect();
        let mut alive = vec![true; self.triangles.len()];
        let mut removed = Vec::new();
        let mut queue: VecDeque<usize> = (0..self.triangles.len())
            .filter(|&i| self.triangles[i].edges().iter().any(|e| multiplicity[e] == 1))
            .collect();
        while let Some(i) = queue.pop_front() {
            if !alive[i] {
                continue;
            }
            alive[i] = false;
            removed.push(self.triangles[i]);
            for e in self.triangles[i].edges() {
                let m = multiplicity.get_mut(&e).unwrap();
                *m -= 1;
                if *m == 1 {
                    queue.extend(self.edge_index[&e].iter().copied().filter(|&j| alive[j]));
                }
            }
        }
        let kept = Complex2::from_triangles(self.triangles.iter().zip(&alive).filter(|(_, &a)| a).map(|(t, _)| *t));
        (kept, removed)
    }

    pub fn union(&self, other: &Complex2) -> Complex2 {
        Complex2::from_triangles(self.triangles.iter().chain(other.triangles.iter()).copied())
    }

    /// Applies an injective relabeling.
    pub fn relabel(&self, mut map: impl FnMut(Vertex) -> Vertex) -> Result<Complex2, ComplexError> {
        let triangles = self
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.corners();
                Triangle::new(map(a), map(b), map(c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let out = Complex2::from_triangles(triangles);
        if out.num_triangles() != self.num_triangles() {
            return Err(ComplexError::IdentificationCollapse(
                "relabeling merged triangles".into(),
            ));
        }
        Ok(out)
    }

    /// Identifies the vertices of each class with the class minimum.
    ///
    /// Vertices not listed in any class keep their label. Fails if a
    /// triangle degenerates or two distinct triangles land on the same
    /// vertex triple.
    pub fn quotient_by_vertex_identifications<C>(&self, classes: &[C]) -> Result<Complex2, ComplexError>
    where
        C: AsRef<[Vertex]>,
    {
        let mut representative: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        for class in classes {
            let class = class.as_ref();
            let Some(&rep) = class.iter().min() else {
                continue;
            };
            for &v in class {
                if let Some(prev) = representative.insert(v, rep) {
                    if prev != rep || class.iter().filter(|&&w| w == v).count() > 1 {
                        return Err(ComplexError::InvalidPartition(v.0));
                    }
                }
            }
        }
        let rep = |v: Vertex| representative.get(&v).copied().unwrap_or(v);
        let mut image: BTreeMap<Triangle, Triangle> = BTreeMap::new();
        for t in &self.triangles {
            let [a, b, c] = t.corners();
            let q = Triangle::new(rep(a), rep(b), rep(c))
                .map_err(|_| ComplexError::IdentificationCollapse(format!("triangle {t} degenerates")))?;
            if let Some(other) = image.insert(q, *t) {
                return Err(ComplexError::IdentificationCollapse(format!(
                    "triangles {other} and {t} merge into {q}"
                )));
            }
        }
        Ok(Complex2::from_triangles(image.into_keys()))
    }
}

fn build_indices(triangles: &[Triangle]) -> (BTreeMap<Edge, Vec<usize>>, BTreeMap<Vertex, Vec<usize>>) {
    let mut edge_index: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    let mut vertex_index: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, t) in triangles.iter().enumerate() {
        for e in t.edges() {
            edge_index.entry(e).or_default().push(i);
        }
        for v in t.corners() {
            vertex_index.entry(v).or_default().push(i);
        }
    }
    (edge_index, vertex_index)
}

impl FromIterator<Triangle> for Complex2 {
    fn from_iter<I: IntoIterator<Item = Triangle>>(iter: I) -> Self {
        Complex2::from_triangles(iter)
    }
}

/// Partition of a complex's triangles into edge-connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Vec<Triangle>>,
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Triangle]> {
        self.components.iter().map(Vec::as_slice)
    }

    pub fn complexes(&self) -> Vec<Complex2> {
        self.components
            .iter()
            .map(|c| Complex2::from_triangles(c.iter().copied()))
            .collect()
    }
}
