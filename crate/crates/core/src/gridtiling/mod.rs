//! Grid Tiling instances, a brute-force solver, and the reduction that turns
//! an instance into a 2-complex whose sphere subcomplexes encode solutions.

mod gadget;
mod reduction;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gadget::{build_square_gadget, SquareGadget};
pub use reduction::{assemble_solution, generate_reduction, ReductionOutput, SquareCopy};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridTilingError {
    #[error("n and k must be positive")]
    ZeroSize,
    #[error("tile ({0}, {1}) has an empty set")]
    EmptySet(u32, u32),
    #[error("tile ({0}, {1}) lies outside the grid")]
    TileOutOfRange(u32, u32),
    #[error("pair ({a}, {b}) at tile ({i}, {j}) lies outside [1, n]")]
    PairOutOfRange { i: u32, j: u32, a: u32, b: u32 },
    #[error("brute force limited to n <= {max_n} and k <= {max_k}")]
    GuardExceeded { max_n: u32, max_k: u32 },
    #[error("selection for tile ({i}, {j}) is not in its set")]
    SelectionOutOfSet { i: u32, j: u32 },
    #[error("construction failed: {0}")]
    Construction(String),
}

/// Tile coordinates `(i, j)` and pairs `(a, b)` are 1-based.
pub type Tile = (u32, u32);
pub type Pair = (u32, u32);
pub type Selection = BTreeMap<Tile, Pair>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridTilingInstance {
    n: u32,
    k: u32,
    sets: BTreeMap<Tile, BTreeSet<Pair>>,
}

impl GridTilingInstance {
    pub fn new(n: u32, k: u32, sets: BTreeMap<Tile, BTreeSet<Pair>>) -> Result<Self, GridTilingError> {
        if n == 0 || k == 0 {
            return Err(GridTilingError::ZeroSize);
        }
        for (&(i, j), set) in &sets {
            if !(1..=k).contains(&i) || !(1..=k).contains(&j) {
                return Err(GridTilingError::TileOutOfRange(i, j));
            }
            for &(a, b) in set {
                if !(1..=n).contains(&a) || !(1..=n).contains(&b) {
                    return Err(GridTilingError::PairOutOfRange { i, j, a, b });
                }
            }
        }
        for i in 1..=k {
            for j in 1..=k {
                if sets.get(&(i, j)).is_none_or(BTreeSet::is_empty) {
                    return Err(GridTilingError::EmptySet(i, j));
                }
            }
        }
        Ok(GridTilingInstance { n, k, sets })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn set(&self, tile: Tile) -> &BTreeSet<Pair> {
        &self.sets[&tile]
    }

    pub fn sets(&self) -> impl Iterator<Item = (Tile, &BTreeSet<Pair>)> {
        self.sets.iter().map(|(t, s)| (*t, s))
    }

    /// `Σ |S_{i,j}|`.
    pub fn total_pairs(&self) -> usize {
        self.sets.values().map(BTreeSet::len).sum()
    }

    /// Whether `selection` picks one member per tile and satisfies the row
    /// and column agreements.
    pub fn is_solution(&self, selection: &Selection) -> bool {
        let k = self.k;
        for i in 1..=k {
            for j in 1..=k {
                let Some(&(a, b)) = selection.get(&(i, j)) else {
                    return false;
                };
                if !self.sets[&(i, j)].contains(&(a, b)) {
                    return false;
                }
                if j < k && selection.get(&(i, j + 1)).map(|p| p.0) != Some(a) {
                    return false;
                }
                if i < k && selection.get(&(i + 1, j)).map(|p| p.1) != Some(b) {
                    return false;
                }
            }
        }
        selection.len() == (k * k) as usize
    }

    /// Random instance: each pair joins each set independently with
    /// probability `density`; empty sets get one uniform pair.
    pub fn random<R: Rng>(n: u32, k: u32, density: f64, rng: &mut R) -> Self {
        let mut sets = BTreeMap::new();
        for i in 1..=k {
            for j in 1..=k {
                let mut set: BTreeSet<Pair> = BTreeSet::new();
                for a in 1..=n {
                    for b in 1..=n {
                        if rng.gen_bool(density) {
                            set.insert((a, b));
                        }
                    }
                }
                if set.is_empty() {
                    set.insert((rng.gen_range(1..=n), rng.gen_range(1..=n)));
                }
                sets.insert((i, j), set);
            }
        }
        GridTilingInstance::new(n, k, sets).expect("random sets are valid")
    }

    /// Random instance with a planted solution.
    pub fn random_yes<R: Rng>(n: u32, k: u32, density: f64, rng: &mut R) -> Self {
        let mut inst = Self::random(n, k, density, rng);
        let rows: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
        let cols: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
        for i in 1..=k {
            for j in 1..=k {
                inst.sets
                    .get_mut(&(i, j))
                    .unwrap()
                    .insert((rows[i as usize - 1], cols[j as usize - 1]));
            }
        }
        inst
    }

    /// Random no-instance (needs `n >= 2` and `k >= 2`): the first
    /// coordinates used by tiles (1,1) and (1,2) are disjoint, so their row
    /// agreement fails.
    pub fn random_no<R: Rng>(n: u32, k: u32, density: f64, rng: &mut R) -> Self {
        assert!(n >= 2 && k >= 2, "forced no-instances need n, k >= 2");
        let mut inst = Self::random(n, k, density, rng);
        let mut firsts: Vec<u32> = (1..=n).collect();
        firsts.shuffle(rng);
        let (left, right) = firsts.split_at(rng.gen_range(1..n) as usize);
        for (tile, allowed) in [((1, 1), left), ((1, 2), right)] {
            let set = inst.sets.get_mut(&tile).unwrap();
            set.retain(|p| allowed.contains(&p.0));
            if set.is_empty() {
                set.insert((*allowed.choose(rng).unwrap(), rng.gen_range(1..=n)));
            }
        }
        inst
    }
}

pub const DEFAULT_MAX_N: u32 = 4;
pub const DEFAULT_MAX_K: u32 = 3;

/// Lexicographically first solution (tiles in row-major order, pairs in
/// increasing order), or `None`.
pub fn solve_grid_tiling(instance: &GridTilingInstance) -> Result<Option<Selection>, GridTilingError> {
    solve_grid_tiling_with_guard(instance, DEFAULT_MAX_N, DEFAULT_MAX_K)
}

pub fn solve_grid_tiling_with_guard(
    instance: &GridTilingInstance,
    max_n: u32,
    max_k: u32,
) -> Result<Option<Selection>, GridTilingError> {
    if instance.n > max_n || instance.k > max_k {
        return Err(GridTilingError::GuardExceeded { max_n, max_k });
    }
    let k = instance.k;
    let tiles: Vec<Tile> = (1..=k).flat_map(|i| (1..=k).map(move |j| (i, j))).collect();
    let mut chosen: Selection = BTreeMap::new();
    fn extend(inst: &GridTilingInstance, tiles: &[Tile], chosen: &mut Selection) -> bool {
        let Some(&(i, j)) = tiles.first() else {
            return true;
        };
        for &(a, b) in &inst.sets[&(i, j)] {
            let row_ok = j == 1 || chosen[&(i, j - 1)].0 == a;
            let col_ok = i == 1 || chosen[&(i - 1, j)].1 == b;
            if row_ok && col_ok {
                chosen.insert((i, j), (a, b));
                if extend(inst, &tiles[1..], chosen) {
                    return true;
                }
                chosen.remove(&(i, j));
            }
        }
        false
    }
    Ok(extend(instance, &tiles, &mut chosen).then_some(chosen))
}

/// Every selection picking one member of each set, in lexicographic order.
pub fn all_selections(instance: &GridTilingInstance) -> impl Iterator<Item = Selection> + '_ {
    use itertools::Itertools;
    instance
        .sets
        .iter()
        .map(|(&tile, set)| set.iter().map(move |&p| (tile, p)).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|choice| choice.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn instance(n: u32, k: u32, sets: &[(Tile, &[Pair])]) -> GridTilingInstance {
        let sets = sets.iter().map(|(t, ps)| (*t, ps.iter().copied().collect())).collect();
        GridTilingInstance::new(n, k, sets).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(
            GridTilingInstance::new(2, 1, BTreeMap::new()),
            Err(GridTilingError::EmptySet(1, 1))
        );
        let bad = BTreeMap::from([((1, 1), BTreeSet::from([(3, 1)]))]);
        assert!(matches!(
            GridTilingInstance::new(2, 1, bad),
            Err(GridTilingError::PairOutOfRange { .. })
        ));
    }

    #[test]
    fn single_tile_takes_first_element() {
        let g = instance(3, 1, &[((1, 1), &[(2, 3), (1, 2)])]);
        let sol = solve_grid_tiling(&g).unwrap().unwrap();
        assert_eq!(sol[&(1, 1)], (1, 2));
    }

    #[test]
    fn row_conflict_is_no() {
        let g = instance(
            2,
            2,
            &[
                ((1, 1), &[(1, 1)]),
                ((1, 2), &[(2, 2)]),
                ((2, 1), &[(1, 1)]),
                ((2, 2), &[(1, 1)]),
            ],
        );
        assert_eq!(solve_grid_tiling(&g).unwrap(), None);
    }

    #[test]
    fn small_yes_instance() {
        // tile (1,1) as in the introductory example; other sets chosen so
        // that a = 2 in row 1, b = 2 in column 1 works
        let g = instance(
            3,
            2,
            &[
                ((1, 1), &[(1, 3), (2, 2)]),
                ((1, 2), &[(2, 1), (3, 3)]),
                ((2, 1), &[(1, 2), (3, 1)]),
                ((2, 2), &[(1, 1), (2, 3)]),
            ],
        );
        let sol = solve_grid_tiling(&g).unwrap().unwrap();
        assert!(g.is_solution(&sol));
        assert_eq!(sol[&(1, 1)], (2, 2));
    }

    #[test]
    fn guard() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = GridTilingInstance::random(5, 2, 0.3, &mut rng);
        assert!(matches!(
            solve_grid_tiling(&g),
            Err(GridTilingError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn solver_matches_selection_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for round in 0..60 {
            let g = match round % 3 {
                0 => GridTilingInstance::random(3, 2, 0.25, &mut rng),
                1 => GridTilingInstance::random_yes(3, 2, 0.2, &mut rng),
                _ => GridTilingInstance::random_no(3, 2, 0.4, &mut rng),
            };
            let solved = solve_grid_tiling(&g).unwrap();
            let first = all_selections(&g).find(|s| g.is_solution(s));
            assert_eq!(solved, first);
            if round % 3 == 2 {
                assert!(solved.is_none());
            }
            if round % 3 == 1 {
                assert!(solved.is_some());
            }
        }
    }
}
