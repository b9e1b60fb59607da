//! Heuristic tree decompositions from min-fill elimination orderings.

use std::collections::BTreeSet;

/// Bags over graph vertices `0..n`, connected by `tree_edges` into a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; `-1` for the single empty bag of an empty
    /// graph.
    pub fn width(&self) -> isize {
        self.bags.iter().map(|b| b.len() as isize).max().unwrap_or(0) - 1
    }

    /// Checks the decomposition against the graph given by `adj`: every
    /// vertex and edge lies in some bag, the bags containing any vertex form
    /// a connected subtree, and the bag graph is a tree.
    pub fn validate(&self, adj: &[Vec<usize>]) -> Result<(), String> {
        let nb = self.bags.len();
        if nb == 0 {
            return Err("no bags".into());
        }
        if self.tree_edges.len() + 1 != nb {
            return Err(format!("{} bags but {} tree edges", nb, self.tree_edges.len()));
        }
        let mut tree = vec![Vec::new(); nb];
        for &(a, b) in &self.tree_edges {
            if a >= nb || b >= nb || a == b {
                return Err(format!("bad tree edge ({a}, {b})"));
            }
            tree[a].push(b);
            tree[b].push(a);
        }
        if reachable(&tree, 0, |_| true).len() != nb {
            return Err("bag graph is not connected".into());
        }
        let sets: Vec<BTreeSet<usize>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        for (v, ns) in adj.iter().enumerate() {
            let holding: Vec<usize> = (0..nb).filter(|&i| sets[i].contains(&v)).collect();
            let Some(&first) = holding.first() else {
                return Err(format!("vertex {v} is in no bag"));
            };
            if reachable(&tree, first, |i| sets[i].contains(&v)).len() != holding.len() {
                return Err(format!("bags holding vertex {v} are not connected"));
            }
            for &w in ns {
                if !holding.iter().any(|&i| sets[i].contains(&w)) {
                    return Err(format!("edge ({v}, {w}) is in no bag"));
                }
            }
        }
        Ok(())
    }
}

fn reachable(tree: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(i) = stack.pop() {
        for &j in &tree[i] {
            if allowed(j) && seen.insert(j) {
                stack.push(j);
            }
        }
    }
    seen
}

/// Tree decomposition from a min-fill elimination ordering (ties broken by
/// degree, then by vertex index).
pub fn tree_decomposition(adj: &[Vec<usize>]) -> TreeDecomposition {
    let n = adj.len();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![Vec::new()],
            tree_edges: Vec::new(),
        };
    }
    let mut graph: Vec<BTreeSet<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, ns)| ns.iter().copied().filter(|&w| w != v).collect())
        .collect();
    for v in 0..n {
        for w in graph[v].clone() {
            graph[w].insert(v);
        }
    }
    let mut eliminated = vec![false; n];
    let mut position = vec![usize::MAX; n];
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(n);

    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !eliminated[v])
            .min_by_key(|&v| (fill_in(&graph, v), graph[v].len(), v))
            .unwrap();
        let ns: Vec<usize> = graph[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                graph[a].insert(b);
                graph[b].insert(a);
            }
        }
        for &w in &ns {
            graph[w].remove(&v);
        }
        eliminated[v] = true;
        position[v] = step;
        let mut bag = ns;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        order.push(v);
    }

    // bag of v hangs below the bag of its earliest-eliminated later neighbor
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for (step, &v) in order.iter().enumerate() {
        let parent = bags[step].iter().filter(|&&w| w != v).map(|&w| position[w]).min();
        match parent {
            Some(p) => tree_edges.push((step, p)),
            None => roots.push(step),
        }
    }
    for w in roots.windows(2) {
        tree_edges.push((w[0], w[1]));
    }
    TreeDecomposition { bags, tree_edges }
}

fn fill_in(graph: &[BTreeSet<usize>], v: usize) -> usize {
    let ns: Vec<usize> = graph[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if !graph[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}
