//! Deterministic backtracking search for color-preserving subgraph
//! embeddings.

use super::skeleton::ColoredGraph;

/// Order in which pattern vertices are placed: each next vertex has the most
/// already-placed neighbors (ties: larger degree, then smaller index).
fn placement_order(pattern: &ColoredGraph) -> Vec<usize> {
    let n = pattern.len();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (links[v], pattern.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[v] = true;
        order.push(v);
        for &w in pattern.neighbors(v) {
            links[w] += 1;
        }
    }
    order
}

struct Search<'a> {
    host: &'a ColoredGraph,
    pattern: &'a ColoredGraph,
    order: Vec<usize>,
    /// For each step, the placed neighbors of the vertex placed at that step.
    anchors: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
}

impl Search<'_> {
    fn extend(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            return true;
        }
        self.nodes += 1;
        let p = self.order[step];
        let candidates: Vec<usize> = match self.anchors[step].first() {
            Some(&a) => self.host.neighbors(self.map[a]).to_vec(),
            None => (0..self.host.len()).collect(),
        };
        for h in candidates {
            if self.used[h]
                || self.host.color(h) != self.pattern.color(p)
                || self.host.degree(h) < self.pattern.degree(p)
                || !self.anchors[step].iter().all(|&a| self.host.has_edge(self.map[a], h))
            {
                continue;
            }
            self.map[p] = h;
            self.used[h] = true;
            if self.extend(step + 1) {
                return true;
            }
            self.used[h] = false;
        }
        self.map[p] = usize::MAX;
        false
    }
}

/// Finds an injective, color-preserving embedding of `pattern` into `host`,
/// returned as the image of each pattern vertex, together with the number
/// of search nodes visited.
pub fn find_embedding(host: &ColoredGraph, pattern: &ColoredGraph) -> (Option<Vec<usize>>, u64) {
    if pattern.len() > host.len() {
        return (None, 0);
    }
    let order = placement_order(pattern);
    let mut position = vec![0; pattern.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let anchors = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut a: Vec<usize> = pattern
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| position[w] < i)
                .collect();
            a.sort_by_key(|&w| position[w]);
            a
        })
        .collect();
    let mut search = Search {
        host,
        pattern,
        order,
        anchors,
        map: vec![usize::MAX; pattern.len()],
        used: vec![false; host.len()],
        nodes: 0,
    };
    let found = search.extend(0);
    (found.then_some(search.map), search.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::search::skeleton::skeleton_with_dims;

    #[test]
    fn tetrahedron_embeds_in_itself() {
        let g = skeleton_with_dims(&tetrahedron());
        let (map, _) = find_embedding(g.graph(), g.graph());
        assert!(g.graph().is_embedding_into(g.graph(), &map.unwrap()));
    }

    #[test]
    fn tetrahedron_not_in_torus() {
        let pattern = skeleton_with_dims(&tetrahedron());
        let host = skeleton_with_dims(&seven_vertex_torus());
        assert!(find_embedding(host.graph(), pattern.graph()).0.is_none());
    }

    #[test]
    fn tetrahedron_in_two_glued_tetrahedra() {
        let host = complex(&[
            [1, 2, 3],
            [1, 2, 4],
            [1, 3, 4],
            [2, 3, 4],
            [1, 2, 5],
            [1, 3, 5],
            [2, 3, 5],
        ]);
        let pattern = skeleton_with_dims(&tetrahedron_at(10));
        let host = skeleton_with_dims(&host);
        let (map, _) = find_embedding(host.graph(), pattern.graph());
        assert!(pattern.graph().is_embedding_into(host.graph(), &map.unwrap()));
    }

    #[test]
    fn colors_are_respected() {
        let host = ColoredGraph::new(vec![0, 1, 0], [(0, 1), (1, 2)]);
        let pattern = ColoredGraph::new(vec![0, 0], [(0, 1)]);
        assert!(find_embedding(&host, &pattern).0.is_none());
        let pattern = ColoredGraph::new(vec![1, 0], [(0, 1)]);
        assert!(find_embedding(&host, &pattern).0.is_some());
    }
}
