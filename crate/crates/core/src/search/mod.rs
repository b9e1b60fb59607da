//! Searching for sphere subcomplexes with a bounded number of triangles.
//!
//! A complex `K` contains a subcomplex isomorphic to `L` exactly when the
//! dimension-colored skeleton of the barycentric subdivision of `L` embeds
//! into that of `K` (color-preserving, injective, not necessarily induced).
//! The search enumerates candidate sphere triangulations and looks for such
//! an embedding, either exactly by backtracking or by color coding.

pub mod backtrack;
pub mod brute;
pub mod colorcoding;
pub mod enumerate;
pub mod skeleton;
pub mod treedec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Complex2, Triangle};
use crate::surface::is_sphere_triangles;

pub use brute::{brute_force_sphere_subcomplex, brute_force_with_guard, DEFAULT_BRUTE_FORCE_GUARD};
pub use colorcoding::{colorful_match_once, lifted_labels, random_labels, PreparedPattern};
pub use enumerate::{canonical_code, enumerate_sphere_triangulations, spheres_with_triangles};
pub use skeleton::{barycentric_subdivision, skeleton_with_dims, ColoredGraph, ColoredSkeleton, Simplex};
pub use treedec::{tree_decomposition, TreeDecomposition};

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("budget must be non-negative, got {0}")]
    InvalidBudget(i64),
    #[error("oracle limited to {guard} triangles, instance has {triangles}")]
    OracleTooLarge { triangles: usize, guard: usize },
    #[error("failure probability must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("pattern with {0} vertices exceeds the color-coding label space")]
    PatternTooLarge(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    #[default]
    AtMost,
    Exactly,
}

impl SearchMode {
    /// Sphere sizes to try, smallest first.
    pub fn sizes(self, budget: i64) -> Vec<usize> {
        match self {
            SearchMode::AtMost => (4..=budget.max(0) as usize).step_by(2).collect(),
            SearchMode::Exactly if budget >= 4 && budget % 2 == 0 => vec![budget as usize],
            SearchMode::Exactly => Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorCodingParams {
    pub seed: u64,
    /// Target miss probability per pattern.
    pub delta: f64,
    /// Optional cap on the number of trials per pattern and component.
    pub max_trials: Option<u64>,
}

impl Default for ColorCodingParams {
    fn default() -> Self {
        ColorCodingParams {
            seed: 0,
            delta: 0.01,
            max_trials: None,
        }
    }
}

impl ColorCodingParams {
    /// `ceil(e^m0 * ln(1/delta))`, clamped by `max_trials`.
    pub fn trials_for(&self, m0: usize) -> u64 {
        let t = ((m0 as f64).exp() * (1.0 / self.delta).ln()).ceil().max(1.0);
        let t = if t >= u64::MAX as f64 { u64::MAX } else { t as u64 };
        self.max_trials.map_or(t, |cap| t.min(cap))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Engine {
    #[default]
    Backtracking,
    ColorCoding(ColorCodingParams),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Pattern/component pairs examined.
    pub patterns: u64,
    /// Color-coding trials run (across all patterns).
    pub trials: u64,
    /// Backtracking or subset-enumeration nodes visited.
    pub search_nodes: u64,
    /// Largest tree-decomposition width among the patterns used.
    pub max_width: isize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub found: bool,
    pub witness: Option<Vec<Triangle>>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub(crate) fn found(mut witness: Vec<Triangle>, stats: SearchStats) -> Self {
        witness.sort_unstable();
        SearchOutcome {
            found: true,
            witness: Some(witness),
            stats,
        }
    }

    pub(crate) fn not_found(stats: SearchStats) -> Self {
        SearchOutcome {
            found: false,
            witness: None,
            stats,
        }
    }
}

/// Per-component host data, built lazily.
struct Host {
    complex: Complex2,
    skeleton: Option<ColoredSkeleton>,
}

impl Host {
    fn skeleton(&mut self) -> &ColoredSkeleton {
        self.skeleton.get_or_insert_with(|| skeleton_with_dims(&self.complex))
    }
}

/// Searches `k` for a sphere subcomplex with at most (or exactly) `budget`
/// triangles.
///
/// Triangles that cannot lie on any closed subsurface are stripped first,
/// and each edge-connected component of the rest is searched separately.
/// Smaller spheres are tried first. A returned witness is always verified
/// to be a sphere of admissible size; with color coding a "not found"
/// answer may be wrong with probability at most `delta` per pattern.
pub fn find_sphere_subcomplex(
    k: &Complex2,
    budget: i64,
    mode: SearchMode,
    engine: &Engine,
) -> Result<SearchOutcome, SearchError> {
    if budget < 0 {
        return Err(SearchError::InvalidBudget(budget));
    }
    if let Engine::ColorCoding(p) = engine {
        if !(p.delta > 0.0 && p.delta < 1.0) {
            return Err(SearchError::InvalidDelta(p.delta));
        }
    }
    let mut stats = SearchStats {
        max_width: -1,
        ..SearchStats::default()
    };
    let (core, _) = k.strip_free_triangles();
    let mut hosts: Vec<Host> = core
        .edge_connected_components()
        .complexes()
        .into_iter()
        .map(|complex| Host {
            complex,
            skeleton: None,
        })
        .collect();

    for size in mode.sizes(budget) {
        if hosts.iter().all(|h| h.complex.num_triangles() < size) {
            continue;
        }
        let patterns = spheres_with_triangles(size);
        let prepared: Vec<(ColoredSkeleton, TreeDecomposition)> = patterns
            .iter()
            .map(|p| {
                let skel = skeleton_with_dims(p);
                let td = tree_decomposition(skel.graph().adjacency());
                (skel, td)
            })
            .collect();
        for host in hosts.iter_mut() {
            if host.complex.num_triangles() < size || host.complex.num_vertices() < size / 2 + 2 {
                continue;
            }
            for (pattern, td) in &prepared {
                stats.patterns += 1;
                stats.max_width = stats.max_width.max(td.width());
                let skel = host.skeleton();
                let map = match engine {
                    Engine::Backtracking => {
                        let (map, nodes) = backtrack::find_embedding(skel.graph(), pattern.graph());
                        stats.search_nodes += nodes;
                        map
                    }
                    Engine::ColorCoding(params) => {
                        let (map, trials) = color_coding_search(skel, pattern, td, params)?;
                        stats.trials += trials;
                        map
                    }
                };
                if let Some(map) = map {
                    let witness = recover_triangles(skel, pattern, &map);
                    if witness.len() == size && is_sphere_triangles(&witness) {
                        return Ok(SearchOutcome::found(witness, stats));
                    }
                }
            }
        }
    }
    Ok(SearchOutcome::not_found(stats))
}

/// Host triangles hit by the pattern's triangle vertices.
fn recover_triangles(host: &ColoredSkeleton, pattern: &ColoredSkeleton, map: &[usize]) -> Vec<Triangle> {
    pattern
        .simplices()
        .iter()
        .zip(map)
        .filter_map(|(s, &h)| match (s, host.simplex(h)) {
            (Simplex::Triangle(_), Simplex::Triangle(t)) => Some(t),
            _ => None,
        })
        .collect()
}

/// Runs independent color-coding trials in parallel. Trial `i` draws its
/// labels from a generator seeded by `(seed, i)`; the successful trial with
/// the lowest index wins. Returns the embedding and the trial budget used.
fn color_coding_search(
    host: &ColoredSkeleton,
    pattern: &ColoredSkeleton,
    td: &TreeDecomposition,
    params: &ColorCodingParams,
) -> Result<(Option<Vec<usize>>, u64), SearchError> {
    let m0 = pattern.count_by_dim()[0];
    if colorcoding::lifted_label_count(m0 as u32) > colorcoding::MAX_LABELS {
        return Err(SearchError::PatternTooLarge(m0));
    }
    let trials = params.trials_for(m0);
    let prepared = PreparedPattern::new(pattern.graph(), td);
    let found = (0..trials).into_par_iter().find_map_first(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(i);
        let labels = lifted_labels(host, m0 as u32, &mut rng);
        prepared.match_once(host.graph(), &labels).map(|m| (i, m))
    });
    Ok(match found {
        Some((i, map)) => (Some(map), i + 1),
        None => (None, trials),
    })
}
