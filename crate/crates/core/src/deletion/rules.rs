//! The four reduction rules.

use crate::complex::{Complex2, Triangle};
use crate::surface::is_sphere;

use super::replace::unpinch;
use super::{DeletionInstance, KernelOutcome};

/// Exhaustively deletes triangles that have an edge shared with no other
/// triangle, charging one unit of budget each. Returns the reduced instance
/// (whose budget may be negative) and the number of deletions.
pub fn apply_rule_1(instance: &DeletionInstance) -> (DeletionInstance, usize) {
    let (kept, removed) = instance.complex.strip_free_triangles();
    let n = removed.len();
    (DeletionInstance::new(kept, instance.budget - n as i64), n)
}

/// Rejects when there are more than `7k` conflict triangles.
pub fn apply_rule_2(instance: &DeletionInstance) -> KernelOutcome {
    let t = instance.complex.conflict_triangles().len() as i64;
    if instance.budget < 0 || t > 7 * instance.budget {
        KernelOutcome::no()
    } else {
        KernelOutcome::Reduced(instance.clone())
    }
}

/// Edge-connected components of the complex minus its conflict triangles.
pub fn conflict_free_components(k: &Complex2) -> Vec<Complex2> {
    let conflicts = k.conflict_triangles();
    k.without(&conflicts).edge_connected_components().complexes()
}

/// Handles the closed components of the conflict-free part: a sphere
/// component whose complement fits the budget decides yes (certificate: all
/// other triangles); every other closed component is deleted.
pub fn apply_rule_3(instance: &DeletionInstance) -> KernelOutcome {
    let mut current = instance.complex.clone();
    let mut budget = instance.budget;
    for c in conflict_free_components(&instance.complex) {
        if !c.boundary_edges().is_empty() {
            continue;
        }
        let rest = (current.num_triangles() - c.num_triangles()) as i64;
        if is_sphere(&c) && rest <= budget {
            let certificate: Vec<Triangle> = instance
                .complex
                .triangles()
                .iter()
                .filter(|t| !c.contains(t))
                .copied()
                .collect();
            return KernelOutcome::Decided {
                feasible: true,
                certificate: Some(certificate),
            };
        }
        current = current.without(c.triangles());
        budget -= c.num_triangles() as i64;
        if budget < 0 {
            return KernelOutcome::no();
        }
    }
    KernelOutcome::Reduced(DeletionInstance::new(current, budget))
}

/// Deletes every conflict-free component that has a boundary but is not a
/// punctured sphere, even after splitting its pinched vertices.
pub fn apply_rule_4(instance: &DeletionInstance) -> KernelOutcome {
    let mut current = instance.complex.clone();
    let mut budget = instance.budget;
    for c in conflict_free_components(&instance.complex) {
        if c.boundary_edges().is_empty() {
            continue;
        }
        let first_fresh = c.max_vertex().map_or(0, |v| v.0 + 1);
        if unpinch(&c, first_fresh).is_none() {
            current = current.without(c.triangles());
            budget -= c.num_triangles() as i64;
            if budget < 0 {
                return KernelOutcome::no();
            }
        }
    }
    KernelOutcome::Reduced(DeletionInstance::new(current, budget))
}
