//! Deleting at most `k` triangles so that the rest is a 2-sphere.
//!
//! Preprocessing rules, component replacement, kernelization and weighted
//! compression, plus three exact solvers (branching on conflict edges,
//! enumeration of conflict-triangle subsets, and brute force) and their
//! weighted variants, where deleting a triangle costs its weight.

mod kernel;
mod replace;
mod rules;
mod solve;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Complex2, Triangle};
use crate::surface::SurfaceKind;

pub use kernel::{compress, compress_with_stats, kernelize, kernelize_with_stats, KernelStats};
pub use replace::{cofacial_pairs, pad_component, replace_component, replace_component_with};
pub use rules::{apply_rule_1, apply_rule_2, apply_rule_3, apply_rule_4, conflict_free_components};
pub use solve::{
    brute_force_deletion, brute_force_deletion_weighted, brute_force_with_guard, solve_base_case,
    solve_base_case_weighted, solve_branching, solve_branching_weighted, solve_conflict_param,
    solve_conflict_param_weighted, solve_conflict_with_cap, DEFAULT_CONFLICT_CAP, DEFAULT_DELETION_GUARD,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeletionError {
    #[error("{conflicts} conflict triangles exceed the enumeration cap of {cap}")]
    GuardExceeded { conflicts: usize, cap: usize },
    #[error("oracle limited to {guard} triangles and budget {guard}, instance has {triangles} triangles and budget {budget}")]
    OracleTooLarge {
        triangles: usize,
        budget: i64,
        guard: usize,
    },
    #[error("component is not a punctured sphere ({0:?})")]
    NotPuncturedSphere(Option<SurfaceKind>),
    #[error("triangle {0} has no positive weight")]
    MissingWeight(Triangle),
}

/// A complex and a deletion budget. Budgets are signed so that rules can
/// report overspending; a negative budget is a no-instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionInstance {
    pub complex: Complex2,
    pub budget: i64,
}

impl DeletionInstance {
    pub fn new(complex: Complex2, budget: i64) -> Self {
        DeletionInstance { complex, budget }
    }
}

/// A complex with a positive cost per triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedInstance {
    pub complex: Complex2,
    pub weights: BTreeMap<Triangle, u64>,
    pub budget: i64,
}

impl WeightedInstance {
    /// Checks that every triangle has a positive weight.
    pub fn new(complex: Complex2, weights: BTreeMap<Triangle, u64>, budget: i64) -> Result<Self, DeletionError> {
        for t in complex.triangles() {
            if weights.get(t).is_none_or(|&w| w == 0) {
                return Err(DeletionError::MissingWeight(*t));
            }
        }
        let weights = weights.into_iter().filter(|(t, _)| complex.contains(t)).collect();
        Ok(WeightedInstance {
            complex,
            weights,
            budget,
        })
    }

    /// All weights one.
    pub fn unit(instance: &DeletionInstance) -> Self {
        WeightedInstance {
            complex: instance.complex.clone(),
            weights: instance.complex.triangles().iter().map(|t| (*t, 1)).collect(),
            budget: instance.budget,
        }
    }

    pub fn weight(&self, t: &Triangle) -> u64 {
        self.weights.get(t).copied().unwrap_or(1)
    }

    pub fn total_weight(&self) -> u64 {
        self.complex.triangles().iter().map(|t| self.weight(t)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelOutcome {
    /// Solved during preprocessing. A yes carries a deletion set for the
    /// input instance.
    Decided {
        feasible: bool,
        certificate: Option<Vec<Triangle>>,
    },
    Reduced(DeletionInstance),
    ReducedWeighted(WeightedInstance),
}

impl KernelOutcome {
    pub(crate) fn no() -> Self {
        KernelOutcome::Decided {
            feasible: false,
            certificate: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletionOutcome {
    pub feasible: bool,
    /// Sorted deletion set when feasible.
    pub deleted: Option<Vec<Triangle>>,
    /// Total deletion cost (triangle count or weight) when feasible.
    pub cost: Option<u64>,
}

impl DeletionOutcome {
    pub(crate) fn infeasible() -> Self {
        DeletionOutcome {
            feasible: false,
            deleted: None,
            cost: None,
        }
    }

    pub(crate) fn feasible(mut deleted: Vec<Triangle>, cost: u64) -> Self {
        deleted.sort_unstable();
        deleted.dedup();
        DeletionOutcome {
            feasible: true,
            deleted: Some(deleted),
            cost: Some(cost),
        }
    }
}

/// Whether deleting `deleted` from `k` leaves exactly a sphere.
pub fn verify_deletion(k: &Complex2, deleted: &[Triangle]) -> bool {
    crate::surface::is_sphere(&k.without(deleted))
}
