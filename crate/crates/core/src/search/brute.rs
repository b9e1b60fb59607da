//! Exhaustive subset oracle for sphere subcomplexes.

use itertools::Itertools;

use super::{SearchError, SearchMode, SearchOutcome, SearchStats};
use crate::complex::{Complex2, Triangle};
use crate::surface::is_sphere_triangles;

pub const DEFAULT_BRUTE_FORCE_GUARD: usize = 25;

/// Decides the search problem by trying triangle subsets in increasing size.
pub fn brute_force_sphere_subcomplex(
    k: &Complex2,
    budget: i64,
    mode: SearchMode,
) -> Result<SearchOutcome, SearchError> {
    brute_force_with_guard(k, budget, mode, DEFAULT_BRUTE_FORCE_GUARD)
}

pub fn brute_force_with_guard(
    k: &Complex2,
    budget: i64,
    mode: SearchMode,
    guard: usize,
) -> Result<SearchOutcome, SearchError> {
    if budget < 0 {
        return Err(SearchError::InvalidBudget(budget));
    }
    let n = k.num_triangles();
    if n > guard {
        return Err(SearchError::OracleTooLarge { triangles: n, guard });
    }
    let mut stats = SearchStats::default();
    for size in mode.sizes(budget).into_iter().filter(|&s| s <= n) {
        for subset in k.triangles().iter().copied().combinations(size) {
            stats.search_nodes += 1;
            if closed_edges(&subset) && is_sphere_triangles(&subset) {
                return Ok(SearchOutcome::found(subset, stats));
            }
        }
    }
    Ok(SearchOutcome::not_found(stats))
}

/// Cheap necessary condition: every edge lies in exactly two triangles.
fn closed_edges(ts: &[Triangle]) -> bool {
    let mut edges: Vec<_> = ts.iter().flat_map(|t| t.edges()).collect();
    edges.sort_unstable();
    edges.chunk_by(|a, b| a == b).all(|c| c.len() == 2)
}
