//! Exact solvers.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;

use crate::complex::{Complex2, Triangle};
use crate::surface::is_sphere;

use super::{DeletionError, DeletionInstance, DeletionOutcome, WeightedInstance};

pub const DEFAULT_CONFLICT_CAP: usize = 20;
pub const DEFAULT_DELETION_GUARD: usize = 18;

type Cost<'a> = &'a (dyn Fn(&Triangle) -> u64 + Sync);

fn unit(_: &Triangle) -> u64 {
    1
}

fn weights_of(w: &WeightedInstance) -> impl Fn(&Triangle) -> u64 + Sync + '_ {
    |t| w.weight(t)
}

fn outcome(found: Option<(Vec<Triangle>, u64)>) -> DeletionOutcome {
    match found {
        Some((deleted, cost)) => DeletionOutcome::feasible(deleted, cost),
        None => DeletionOutcome::infeasible(),
    }
}

/// Deletes everything outside the heaviest sphere component. Exact when no
/// edge has more than two triangles.
fn base_case(k: &Complex2, budget: i64, cost: Cost) -> Option<(Vec<Triangle>, u64)> {
    let (rest, mut deleted) = k.strip_free_triangles();
    let weight = |c: &Complex2| c.triangles().iter().map(cost).sum::<u64>();
    let keep = rest
        .edge_connected_components()
        .complexes()
        .into_iter()
        .filter(is_sphere)
        .max_by_key(weight)?;
    deleted.extend(rest.triangles().iter().filter(|t| !keep.contains(t)));
    let total: u64 = deleted.iter().map(cost).sum();
    (total as i64 <= budget).then_some((deleted, total))
}

fn branch(k: &Complex2, budget: i64, cost: Cost) -> Option<(Vec<Triangle>, u64)> {
    if budget < 0 {
        return None;
    }
    let (rest, stripped) = k.strip_free_triangles();
    let spent: u64 = stripped.iter().map(cost).sum();
    let budget = budget - spent as i64;
    if budget < 0 {
        return None;
    }
    let edge = rest
        .edge_multiplicities()
        .filter(|&(_, m)| m >= 3)
        .map(|(e, _)| e)
        .min();
    let found = match edge {
        None => base_case(&rest, budget, cost),
        Some(e) => {
            let mut on_edge: Vec<Triangle> = rest.triangles_on_edge(&e).collect();
            on_edge.sort_unstable();
            on_edge.truncate(3);
            on_edge.into_iter().find_map(|t| {
                let w = cost(&t);
                if w as i64 > budget {
                    return None;
                }
                let (mut deleted, c) = branch(&rest.without([&t]), budget - w as i64, cost)?;
                deleted.push(t);
                Some((deleted, c + w))
            })
        }
    };
    found.map(|(mut deleted, c)| {
        deleted.extend(stripped);
        (deleted, c + spent)
    })
}

/// Branches on three triangles of the smallest edge with at least three
/// triangles; at most `3^k` leaves.
pub fn solve_branching(instance: &DeletionInstance) -> DeletionOutcome {
    outcome(branch(&instance.complex, instance.budget, &unit))
}

pub fn solve_branching_weighted(instance: &WeightedInstance) -> DeletionOutcome {
    outcome(branch(&instance.complex, instance.budget, &weights_of(instance)))
}

pub fn solve_base_case(instance: &DeletionInstance) -> DeletionOutcome {
    if instance.budget < 0 {
        return DeletionOutcome::infeasible();
    }
    outcome(base_case(&instance.complex, instance.budget, &unit))
}

pub fn solve_base_case_weighted(instance: &WeightedInstance) -> DeletionOutcome {
    if instance.budget < 0 {
        return DeletionOutcome::infeasible();
    }
    outcome(base_case(&instance.complex, instance.budget, &weights_of(instance)))
}

fn conflict_param(k: &Complex2, budget: i64, cost: Cost, cap: usize) -> Result<DeletionOutcome, DeletionError> {
    let conflicts: Vec<Triangle> = k.conflict_triangles().into_iter().collect();
    if conflicts.len() > cap {
        return Err(DeletionError::GuardExceeded {
            conflicts: conflicts.len(),
            cap,
        });
    }
    if budget < 0 {
        return Ok(DeletionOutcome::infeasible());
    }
    let best = (0u64..1 << conflicts.len())
        .into_par_iter()
        .filter_map(|mask| {
            let guess: Vec<Triangle> = conflicts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| *t)
                .collect();
            let spent: u64 = guess.iter().map(cost).sum();
            if spent as i64 > budget {
                return None;
            }
            let rest = k.without(&guess);
            if rest.edge_multiplicities().any(|(_, m)| m >= 3) {
                return None;
            }
            let (mut deleted, c) = base_case(&rest, budget - spent as i64, cost)?;
            deleted.extend(guess);
            deleted.sort_unstable();
            Some((c + spent, deleted))
        })
        .min();
    Ok(outcome(best.map(|(c, d)| (d, c))))
}

/// Guesses which conflict triangles to delete, then solves the base case.
/// Returns the cheapest deletion set, ties broken lexicographically.
pub fn solve_conflict_param(instance: &DeletionInstance) -> Result<DeletionOutcome, DeletionError> {
    solve_conflict_with_cap(instance, DEFAULT_CONFLICT_CAP)
}

pub fn solve_conflict_with_cap(instance: &DeletionInstance, cap: usize) -> Result<DeletionOutcome, DeletionError> {
    conflict_param(&instance.complex, instance.budget, &unit, cap)
}

pub fn solve_conflict_param_weighted(instance: &WeightedInstance) -> Result<DeletionOutcome, DeletionError> {
    conflict_param(
        &instance.complex,
        instance.budget,
        &weights_of(instance),
        DEFAULT_CONFLICT_CAP,
    )
}

/// Bitmask view of a small complex: for every edge, the set of triangles
/// holding it.
struct Masks {
    triangles: Vec<Triangle>,
    edges: Vec<u32>,
}

impl Masks {
    fn new(k: &Complex2) -> Self {
        let triangles = k.triangles().to_vec();
        let mut by_edge: BTreeMap<_, u32> = BTreeMap::new();
        for (i, t) in triangles.iter().enumerate() {
            for e in t.edges() {
                *by_edge.entry(e).or_default() |= 1 << i;
            }
        }
        Masks {
            triangles,
            edges: by_edge.into_values().collect(),
        }
    }

    fn full(&self) -> u32 {
        ((1u64 << self.triangles.len()) - 1) as u32
    }

    /// Whether the kept triangles form a sphere.
    fn sphere(&self, kept: u32) -> bool {
        kept.count_ones() >= 4
            && self.edges.iter().all(|&m| matches!((m & kept).count_ones(), 0 | 2))
            && is_sphere(&Complex2::from_triangles(self.pick(kept)))
    }

    fn pick(&self, mask: u32) -> Vec<Triangle> {
        (0..self.triangles.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.triangles[i])
            .collect()
    }
}

fn check_guard(k: &Complex2, budget: i64, guard: usize) -> Result<(), DeletionError> {
    let n = k.num_triangles();
    if n > guard || n > 31 || budget > guard as i64 {
        return Err(DeletionError::OracleTooLarge {
            triangles: n,
            budget,
            guard,
        });
    }
    Ok(())
}

/// Tries every deletion set of at most `k` triangles, smallest first.
pub fn brute_force_deletion(instance: &DeletionInstance) -> Result<DeletionOutcome, DeletionError> {
    brute_force_with_guard(instance, DEFAULT_DELETION_GUARD)
}

pub fn brute_force_with_guard(instance: &DeletionInstance, guard: usize) -> Result<DeletionOutcome, DeletionError> {
    check_guard(&instance.complex, instance.budget, guard)?;
    if instance.budget < 0 {
        return Ok(DeletionOutcome::infeasible());
    }
    let masks = Masks::new(&instance.complex);
    let n = masks.triangles.len();
    for size in 0..=n.min(instance.budget as usize) {
        for combo in (0..n).combinations(size) {
            let deleted: u32 = combo.iter().map(|i| 1 << i).sum();
            if masks.sphere(masks.full() & !deleted) {
                return Ok(DeletionOutcome::feasible(masks.pick(deleted), size as u64));
            }
        }
    }
    Ok(DeletionOutcome::infeasible())
}

/// Cheapest deletion set by total weight over all subsets.
pub fn brute_force_deletion_weighted(instance: &WeightedInstance) -> Result<DeletionOutcome, DeletionError> {
    check_guard(&instance.complex, 0, DEFAULT_DELETION_GUARD)?;
    if instance.budget < 0 {
        return Ok(DeletionOutcome::infeasible());
    }
    let masks = Masks::new(&instance.complex);
    let w: Vec<u64> = masks.triangles.iter().map(|t| instance.weight(t)).collect();
    let best = (0..=masks.full())
        .into_par_iter()
        .filter_map(|deleted| {
            let cost: u64 = (0..w.len()).filter(|i| deleted >> i & 1 == 1).map(|i| w[i]).sum();
            (cost as i64 <= instance.budget && masks.sphere(masks.full() & !deleted))
                .then(|| (cost, masks.pick(deleted)))
        })
        .min();
    Ok(outcome(best.map(|(c, d)| (d, c))))
}
