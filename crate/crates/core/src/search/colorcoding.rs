//! Color-coding: rainbow subgraph embedding by dynamic programming over a
//! tree decomposition of the pattern.
//!
//! Host vertices carry a trial label. A pattern copy is *rainbow* when its
//! image uses pairwise distinct labels, which makes injectivity a local
//! property: a DP state only needs the images of the current bag plus the set
//! of labels used so far in the subtree.

use std::collections::HashMap;

use rand::Rng;

use super::skeleton::{ColoredGraph, ColoredSkeleton, Simplex};
use super::treedec::TreeDecomposition;

/// Labels at or above this value mark host vertices that no pattern vertex
/// may use.
pub const MAX_LABELS: u32 = 512;

pub const BLOCKED: u32 = u32::MAX;

const UNSET: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct LabelMask([u64; 8]);

/// Partial maps keyed by (images of the bag vertices, labels used below).
type Table = HashMap<(Vec<u32>, LabelMask), Vec<u32>>;

impl LabelMask {
    fn has(&self, l: u32) -> bool {
        self.0[(l / 64) as usize] >> (l % 64) & 1 == 1
    }

    fn with(mut self, l: u32) -> Self {
        self.0[(l / 64) as usize] |= 1 << (l % 64);
        self
    }

    fn and(self, o: Self) -> Self {
        LabelMask(std::array::from_fn(|i| self.0[i] & o.0[i]))
    }

    fn or(self, o: Self) -> Self {
        LabelMask(std::array::from_fn(|i| self.0[i] | o.0[i]))
    }
}

#[derive(Clone, Debug)]
enum NiceNode {
    Leaf,
    Introduce { child: usize, vertex: usize },
    Forget { child: usize, vertex: usize },
    Join { left: usize, right: usize },
}

/// Nice form of a tree decomposition: leaves with empty bags, and
/// introduce / forget / join nodes. Nodes are stored children-first; the
/// last node is the root and has an empty bag.
#[derive(Clone, Debug)]
struct NiceDecomposition {
    nodes: Vec<NiceNode>,
    bags: Vec<Vec<usize>>,
}

impl NiceDecomposition {
    fn from_tree(td: &TreeDecomposition) -> Self {
        let mut nice = NiceDecomposition {
            nodes: Vec::new(),
            bags: Vec::new(),
        };
        let mut tree = vec![Vec::new(); td.bags.len()];
        for &(a, b) in &td.tree_edges {
            tree[a].push(b);
            tree[b].push(a);
        }
        let top = nice.build(td, &tree, 0, usize::MAX);
        nice.morph(top, &[]);
        nice
    }

    fn push(&mut self, node: NiceNode, bag: Vec<usize>) -> usize {
        self.nodes.push(node);
        self.bags.push(bag);
        self.nodes.len() - 1
    }

    /// Forget and introduce until the bag of `node` equals `target`.
    fn morph(&mut self, mut node: usize, target: &[usize]) -> usize {
        for v in self.bags[node].clone() {
            if !target.contains(&v) {
                let bag = self.bags[node].iter().copied().filter(|&w| w != v).collect();
                node = self.push(NiceNode::Forget { child: node, vertex: v }, bag);
            }
        }
        for &v in target {
            if !self.bags[node].contains(&v) {
                let mut bag = self.bags[node].clone();
                bag.push(v);
                bag.sort_unstable();
                node = self.push(NiceNode::Introduce { child: node, vertex: v }, bag);
            }
        }
        node
    }

    fn build(&mut self, td: &TreeDecomposition, tree: &[Vec<usize>], x: usize, parent: usize) -> usize {
        let mut target = td.bags[x].clone();
        target.sort_unstable();
        let mut branches = Vec::new();
        for &c in &tree[x] {
            if c != parent {
                let sub = self.build(td, tree, c, x);
                branches.push(self.morph(sub, &target));
            }
        }
        if branches.is_empty() {
            let leaf = self.push(NiceNode::Leaf, Vec::new());
            branches.push(self.morph(leaf, &target));
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            acc = self.push(NiceNode::Join { left: acc, right: b }, target.clone());
        }
        acc
    }
}

/// Precomputed per-pattern data for repeated trials.
#[derive(Clone, Debug)]
pub struct PreparedPattern {
    pattern: ColoredGraph,
    nice: NiceDecomposition,
}

impl PreparedPattern {
    pub fn new(pattern: &ColoredGraph, td: &TreeDecomposition) -> Self {
        PreparedPattern {
            pattern: pattern.clone(),
            nice: NiceDecomposition::from_tree(td),
        }
    }

    pub fn pattern(&self) -> &ColoredGraph {
        &self.pattern
    }

    /// One color-coding trial: searches for an injective, color-preserving
    /// embedding whose image is rainbow under `labels`.
    pub fn match_once(&self, host: &ColoredGraph, labels: &[u32]) -> Option<Vec<usize>> {
        assert_eq!(labels.len(), host.len(), "one label per host vertex");
        let pattern = &self.pattern;
        let m = pattern.len();
        if m == 0 {
            return Some(Vec::new());
        }
        let usable = |h: usize| labels[h] < MAX_LABELS;
        let mut tables: Vec<Option<Table>> = vec![None; self.nice.nodes.len()];

        for (id, node) in self.nice.nodes.iter().enumerate() {
            let bag = &self.nice.bags[id];
            let mut table: Table = HashMap::new();
            match *node {
                NiceNode::Leaf => {
                    table.insert((Vec::new(), LabelMask::default()), vec![UNSET; m]);
                }
                NiceNode::Introduce { child, vertex } => {
                    let child_table = tables[child].take().unwrap();
                    let child_bag = &self.nice.bags[child];
                    let pos = bag.binary_search(&vertex).unwrap();
                    let bag_neighbors: Vec<usize> = child_bag
                        .iter()
                        .enumerate()
                        .filter(|(_, &u)| pattern.has_edge(u, vertex))
                        .map(|(i, _)| i)
                        .collect();
                    let color = pattern.color(vertex);
                    let degree = pattern.degree(vertex);
                    for ((images, mask), witness) in child_table {
                        let candidates: Box<dyn Iterator<Item = usize>> = match bag_neighbors.first() {
                            Some(&i) => Box::new(host.neighbors(images[i] as usize).iter().copied()),
                            None => Box::new(0..host.len()),
                        };
                        for h in candidates {
                            if host.color(h) != color
                                || !usable(h)
                                || mask.has(labels[h])
                                || host.degree(h) < degree
                                || !bag_neighbors.iter().all(|&i| host.has_edge(images[i] as usize, h))
                            {
                                continue;
                            }
                            let mut next = images.clone();
                            next.insert(pos, h as u32);
                            let key = (next, mask.with(labels[h]));
                            table.entry(key).or_insert_with(|| {
                                let mut w = witness.clone();
                                w[vertex] = h as u32;
                                w
                            });
                        }
                    }
                }
                NiceNode::Forget { child, vertex } => {
                    let child_table = tables[child].take().unwrap();
                    let pos = self.nice.bags[child].binary_search(&vertex).unwrap();
                    for ((mut images, mask), witness) in child_table {
                        images.remove(pos);
                        table.entry((images, mask)).or_insert(witness);
                    }
                }
                NiceNode::Join { left, right } => {
                    let lt = tables[left].take().unwrap();
                    let rt = tables[right].take().unwrap();
                    let mut by_images: HashMap<&Vec<u32>, Vec<(LabelMask, &Vec<u32>)>> = HashMap::new();
                    for ((images, mask), witness) in &rt {
                        by_images.entry(images).or_default().push((*mask, witness));
                    }
                    for ((images, lmask), lwit) in &lt {
                        let Some(rights) = by_images.get(images) else {
                            continue;
                        };
                        let shared = images
                            .iter()
                            .fold(LabelMask::default(), |acc, &h| acc.with(labels[h as usize]));
                        for (rmask, rwit) in rights {
                            if lmask.and(*rmask) != shared {
                                continue;
                            }
                            table.entry((images.clone(), lmask.or(*rmask))).or_insert_with(|| {
                                lwit.iter()
                                    .zip(rwit.iter())
                                    .map(|(&a, &b)| if a == UNSET { b } else { a })
                                    .collect()
                            });
                        }
                    }
                }
            }
            if table.is_empty() {
                return None;
            }
            tables[id] = Some(table);
        }

        let root = tables.pop().flatten()?;
        let witness = root.into_values().next()?;
        let map: Vec<usize> = witness.iter().map(|&h| h as usize).collect();
        let mut used = LabelMask::default();
        for &h in &map {
            if h >= host.len() || used.has(labels[h]) {
                return None;
            }
            used = used.with(labels[h]);
        }
        pattern.is_embedding_into(host, &map).then_some(map)
    }
}

/// One color-coding trial for `pattern` in `host` under the trial labels.
///
/// A returned map is verified to be an injective, color-preserving,
/// label-rainbow embedding. `None` means no rainbow embedding exists under
/// this labeling.
pub fn colorful_match_once(
    host: &ColoredGraph,
    pattern: &ColoredGraph,
    labels: &[u32],
    td: &TreeDecomposition,
) -> Option<Vec<usize>> {
    PreparedPattern::new(pattern, td).match_once(host, labels)
}

/// Uniform labels in `0..num_labels`.
pub fn random_labels<R: Rng>(n: usize, num_labels: u32, rng: &mut R) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..num_labels)).collect()
}

/// Labels for a skeleton host derived from labels on its dimension-0
/// vertices.
///
/// Vertex simplices get a uniform label in `0..m0`. An edge or triangle gets
/// a label naming its set of vertex labels, or [`BLOCKED`] if two of its
/// vertices share a label. Since a color-preserving embedding of a complex
/// skeleton sends every edge and triangle to the simplex spanned by the
/// images of its vertices, the image is rainbow under these labels exactly
/// when the vertex images are, so one trial succeeds with probability
/// `m0! / m0^m0 >= e^-m0` for a fixed copy.
pub fn lifted_labels<R: Rng>(host: &ColoredSkeleton, m0: u32, rng: &mut R) -> Vec<u32> {
    let base: Vec<Option<u32>> = host
        .simplices()
        .iter()
        .map(|s| matches!(s, Simplex::Vertex(_)).then(|| rng.gen_range(0..m0)))
        .collect();
    host.simplices()
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            Simplex::Vertex(_) => base[i].unwrap(),
            _ => {
                let mut ls: Vec<u32> = s
                    .vertices()
                    .iter()
                    .map(|v| base[host.index_of(&Simplex::Vertex(*v)).unwrap()].unwrap())
                    .collect();
                ls.sort_unstable();
                if ls.windows(2).any(|w| w[0] == w[1]) {
                    BLOCKED
                } else {
                    subset_code(m0, &ls)
                }
            }
        })
        .collect()
}

/// Number of distinct labels [`lifted_labels`] may produce.
pub fn lifted_label_count(m0: u32) -> u32 {
    m0 + binomial(m0, 2) + binomial(m0, 3)
}

fn binomial(n: u32, k: u32) -> u32 {
    match k {
        1 => n,
        2 => n * n.saturating_sub(1) / 2,
        3 => n * n.saturating_sub(1) * n.saturating_sub(2) / 6,
        _ => unreachable!(),
    }
}

/// Dense code of a sorted 1-, 2- or 3-subset of `0..m0` (combinatorial
/// number system, offset by the sizes of the smaller layers).
fn subset_code(m0: u32, sorted: &[u32]) -> u32 {
    match *sorted {
        [a] => a,
        [a, b] => m0 + binomial(b, 2) + a,
        [a, b, c] => m0 + binomial(m0, 2) + binomial(c, 3) + binomial(b, 2) + a,
        _ => unreachable!("simplices have at most three vertices"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::search::skeleton::skeleton_with_dims;
    use crate::search::treedec::tree_decomposition;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive rainbow matcher over all injective maps.
    fn brute_rainbow(host: &ColoredGraph, pattern: &ColoredGraph, labels: &[u32]) -> bool {
        fn extend(host: &ColoredGraph, pattern: &ColoredGraph, labels: &[u32], map: &mut Vec<usize>) -> bool {
            let p = map.len();
            if p == pattern.len() {
                return true;
            }
            for h in 0..host.len() {
                if map.contains(&h)
                    || labels[h] >= MAX_LABELS
                    || map.iter().any(|&g| labels[g] == labels[h])
                    || host.color(h) != pattern.color(p)
                    || (0..p).any(|q| pattern.has_edge(q, p) && !host.has_edge(map[q], h))
                {
                    continue;
                }
                map.push(h);
                if extend(host, pattern, labels, map) {
                    return true;
                }
                map.pop();
            }
            false
        }
        extend(host, pattern, labels, &mut Vec::new())
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, colors: u8) -> ColoredGraph {
        let cs = (0..n).map(|_| rng.gen_range(0..colors)).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        ColoredGraph::new(cs, edges)
    }

    #[test]
    fn identity_on_triangle_skeleton() {
        let skel = skeleton_with_dims(&complex(&[[1, 2, 3]]));
        let g = skel.graph();
        let labels: Vec<u32> = (0..g.len() as u32).collect();
        let td = tree_decomposition(g.adjacency());
        let map = colorful_match_once(g, g, &labels, &td).unwrap();
        assert!(g.is_embedding_into(g, &map));
    }

    #[test]
    fn single_label_host_has_no_rainbow_copy() {
        let skel = skeleton_with_dims(&tetrahedron());
        let g = skel.graph();
        let labels = vec![0; g.len()];
        let td = tree_decomposition(g.adjacency());
        assert!(colorful_match_once(g, g, &labels, &td).is_none());
    }

    #[test]
    fn planted_pattern_is_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let pattern = random_graph(&mut rng, 6, 0.5, 2);
            let extra = 8;
            let n = pattern.len() + extra;
            // plant the pattern at a random injective position
            let mut slots: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                slots.swap(i, rng.gen_range(0..=i));
            }
            let mut colors: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let mut edges = Vec::new();
            for (p, &h) in slots.iter().take(pattern.len()).enumerate() {
                colors[h] = pattern.color(p);
            }
            for (a, b) in pattern.edges() {
                edges.push((slots[a], slots[b]));
            }
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.2) {
                        edges.push((a, b));
                    }
                }
            }
            let host = ColoredGraph::new(colors, edges);
            let mut labels = vec![0u32; n];
            for (p, &h) in slots.iter().enumerate() {
                labels[h] = if p < pattern.len() {
                    p as u32
                } else {
                    rng.gen_range(0..6)
                };
            }
            let td = tree_decomposition(pattern.adjacency());
            let map = colorful_match_once(&host, &pattern, &labels, &td).expect("planted copy is rainbow");
            assert!(pattern.is_embedding_into(&host, &map));
        }
    }

    #[test]
    fn dp_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        for _ in 0..150 {
            let (np, nh) = (rng.gen_range(1..6), rng.gen_range(3..9));
            let pattern = random_graph(&mut rng, np, 0.5, 2);
            let host = random_graph(&mut rng, nh, 0.5, 2);
            let labels = random_labels(host.len(), pattern.len() as u32, &mut rng);
            let td = tree_decomposition(pattern.adjacency());
            let dp = colorful_match_once(&host, &pattern, &labels, &td);
            assert_eq!(dp.is_some(), brute_rainbow(&host, &pattern, &labels));
            if let Some(map) = dp {
                assert!(pattern.is_embedding_into(&host, &map));
                found += 1;
            }
        }
        assert!(found > 10);
    }

    #[test]
    fn lifted_labels_are_consistent() {
        let skel = skeleton_with_dims(&octahedron_at(0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let labels = lifted_labels(&skel, 6, &mut rng);
        for (i, s) in skel.simplices().iter().enumerate() {
            if s.dim() > 0 && labels[i] != BLOCKED {
                assert!(labels[i] >= 6);
            }
        }
        assert_eq!(lifted_label_count(4), 14);
        let mut codes: Vec<u32> = Vec::new();
        for a in 0..7 {
            codes.push(subset_code(7, &[a]));
            for b in a + 1..7 {
                codes.push(subset_code(7, &[a, b]));
                for c in b + 1..7 {
                    codes.push(subset_code(7, &[a, b, c]));
                }
            }
        }
        codes.sort_unstable();
        assert_eq!(codes, (0..lifted_label_count(7)).collect::<Vec<_>>());
    }
}
