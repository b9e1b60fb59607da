//! Kernelization and weighted compression.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::Triangle;

use super::replace::{pad_component, replace_component};
use super::rules::{apply_rule_1, apply_rule_2, apply_rule_3, apply_rule_4, conflict_free_components};
use super::{DeletionInstance, KernelOutcome, WeightedInstance};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KernelStats {
    pub rounds: usize,
    pub rule_1_deleted: usize,
    pub rule_3_deleted: usize,
    pub rule_4_deleted: usize,
    pub conflict_triangles: usize,
    pub components: usize,
    pub boundary_length: usize,
    pub replaced: usize,
    pub input_triangles: usize,
    pub output_triangles: usize,
}

/// Applies the rules in order, restarting from the first rule after any
/// change, until none applies.
fn exhaust_rules(input: &DeletionInstance, stats: &mut KernelStats) -> Result<DeletionInstance, KernelOutcome> {
    let mut cur = input.clone();
    loop {
        stats.rounds += 1;
        if cur.budget < 0 {
            return Err(KernelOutcome::no());
        }
        let (next, n) = apply_rule_1(&cur);
        stats.rule_1_deleted += n;
        cur = next;
        if cur.budget < 0 {
            return Err(KernelOutcome::no());
        }
        if let KernelOutcome::Decided { .. } = apply_rule_2(&cur) {
            return Err(KernelOutcome::no());
        }
        match apply_rule_3(&cur) {
            KernelOutcome::Decided {
                feasible: true,
                certificate: Some(cert),
            } => {
                let kept = cur.complex.without(&cert);
                let certificate: Vec<Triangle> = input
                    .complex
                    .triangles()
                    .iter()
                    .filter(|t| !kept.contains(t))
                    .copied()
                    .collect();
                return Err(KernelOutcome::Decided {
                    feasible: true,
                    certificate: Some(certificate),
                });
            }
            KernelOutcome::Reduced(next) if next.complex != cur.complex => {
                stats.rule_3_deleted += cur.complex.num_triangles() - next.complex.num_triangles();
                cur = next;
                continue;
            }
            KernelOutcome::Reduced(_) => {}
            other => return Err(other),
        }
        match apply_rule_4(&cur) {
            KernelOutcome::Reduced(next) if next.complex != cur.complex => {
                stats.rule_4_deleted += cur.complex.num_triangles() - next.complex.num_triangles();
                cur = next;
            }
            KernelOutcome::Reduced(_) => break,
            other => return Err(other),
        }
    }
    if cur.complex.is_empty() {
        return Err(KernelOutcome::no());
    }
    stats.conflict_triangles = cur.complex.conflict_triangles().len();
    Ok(cur)
}

pub fn kernelize(instance: &DeletionInstance) -> KernelOutcome {
    kernelize_with_stats(instance).0
}

/// Exhausts the rules, then replaces every component with more than `k`
/// triangles by a smaller one padded back above `k` triangles.
pub fn kernelize_with_stats(instance: &DeletionInstance) -> (KernelOutcome, KernelStats) {
    let mut stats = KernelStats {
        input_triangles: instance.complex.num_triangles(),
        ..KernelStats::default()
    };
    let cur = match exhaust_rules(instance, &mut stats) {
        Ok(cur) => cur,
        Err(outcome) => return (outcome, stats),
    };
    let k = cur.budget as usize;
    let mut complex = cur.complex.clone();
    for c in conflict_free_components(&cur.complex) {
        stats.components += 1;
        stats.boundary_length += c.boundary_edges().len();
        if c.num_triangles() <= k {
            continue;
        }
        let replaced = replace_component(&c, &complex).expect("remaining components are punctured spheres");
        if replaced == c {
            continue;
        }
        let first_fresh = complex.max_vertex().map_or(0, |v| v.0 + 1);
        let padded = pad_component(&replaced, k, first_fresh);
        complex = complex.without(c.triangles()).union(&padded);
        stats.replaced += 1;
    }
    stats.output_triangles = complex.num_triangles();
    (
        KernelOutcome::Reduced(DeletionInstance::new(complex, cur.budget)),
        stats,
    )
}

pub fn compress(instance: &DeletionInstance) -> KernelOutcome {
    compress_with_stats(instance).0
}

/// Exhausts the rules, then replaces every component and weights it so that
/// deleting it costs its original size, capped at `k + 1`.
pub fn compress_with_stats(instance: &DeletionInstance) -> (KernelOutcome, KernelStats) {
    let mut stats = KernelStats {
        input_triangles: instance.complex.num_triangles(),
        ..KernelStats::default()
    };
    let cur = match exhaust_rules(instance, &mut stats) {
        Ok(cur) => cur,
        Err(outcome) => return (outcome, stats),
    };
    let cap = cur.budget as u64 + 1;
    let mut complex = cur.complex.clone();
    let mut weights: BTreeMap<Triangle, u64> = BTreeMap::new();
    for c in conflict_free_components(&cur.complex) {
        stats.components += 1;
        stats.boundary_length += c.boundary_edges().len();
        let replaced = replace_component(&c, &complex).expect("remaining components are punctured spheres");
        if replaced != c {
            stats.replaced += 1;
            complex = complex.without(c.triangles()).union(&replaced);
        }
        let total = (c.num_triangles() as u64).min(cap);
        let size = replaced.num_triangles() as u64;
        for (n, t) in replaced.triangles().iter().enumerate() {
            let w = if n == 0 && size <= total { total - size + 1 } else { 1 };
            weights.insert(*t, w);
        }
    }
    for t in complex.triangles() {
        weights.entry(*t).or_insert(1);
    }
    stats.output_triangles = complex.num_triangles();
    let weighted = WeightedInstance::new(complex, weights, cur.budget).expect("every triangle is weighted");
    (KernelOutcome::ReducedWeighted(weighted), stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::complex::Complex2;
    use crate::deletion::{brute_force_deletion, solve_branching, solve_branching_weighted, verify_deletion};

    fn hexagon_fan_refined(times: usize) -> Complex2 {
        let mut c = complex(&(0..6).map(|i| [0, 1 + i, 1 + (i + 1) % 6]).collect::<Vec<_>>());
        let mut next = 100;
        for _ in 0..times {
            c = Complex2::from_triangles(c.triangles().to_vec().into_iter().flat_map(|t| {
                let [x, y, z] = t.corners().map(|v| v.0);
                next += 1;
                [tri(next, x, y), tri(next, y, z), tri(next, x, z)]
            }));
        }
        c
    }

    #[test]
    fn tetrahedron_is_decided_yes() {
        match kernelize(&DeletionInstance::new(tetrahedron(), 0)) {
            KernelOutcome::Decided {
                feasible: true,
                certificate: Some(c),
            } => assert!(c.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overspending_is_decided_no() {
        let i = DeletionInstance::new(complex(&[[1, 2, 3], [1, 2, 4]]), 1);
        assert_eq!(kernelize(&i), KernelOutcome::no());
        assert_eq!(compress(&i), KernelOutcome::no());
        assert_eq!(
            kernelize(&DeletionInstance::new(tetrahedron(), -1)),
            KernelOutcome::no()
        );
    }

    #[test]
    fn rule_3_certificate_refers_to_input() {
        let k = tetrahedron_at(0)
            .union(
                &seven_vertex_torus()
                    .relabel(|v| crate::complex::Vertex(v.0 + 10))
                    .unwrap(),
            )
            .union(&complex(&[[40, 41, 42]]));
        let i = DeletionInstance::new(k.clone(), 15);
        match kernelize(&i) {
            KernelOutcome::Decided {
                feasible: true,
                certificate: Some(c),
            } => {
                assert_eq!(c.len(), 15);
                assert!(verify_deletion(&k, &c));
            }
            other => panic!("{other:?}"),
        }
    }

    /// A refined hexagonal disk closed by a cone from 60, plus the other three
    /// faces of the tetrahedron on the cone face 1-2-60.
    fn disk_on_book(times: usize) -> Complex2 {
        let disk = hexagon_fan_refined(times);
        let mut extra = Vec::new();
        for i in 0..6u32 {
            extra.push([1 + i, 1 + (i + 1) % 6, 60]);
        }
        disk.union(&complex(&extra))
            .union(&complex(&[[1, 2, 61], [1, 60, 61], [2, 60, 61]]))
    }

    #[test]
    fn large_disk_is_replaced_and_padded() {
        let k = disk_on_book(3);
        assert_eq!(k.num_triangles(), 6 * 27 + 6 + 3);
        for budget in 0..=3 {
            let i = DeletionInstance::new(k.clone(), budget);
            let (out, stats) = kernelize_with_stats(&i);
            let expected = solve_branching(&i).feasible;
            match out {
                KernelOutcome::Reduced(r) => {
                    assert_eq!(stats.replaced, 1);
                    assert!(r.complex.num_triangles() < k.num_triangles());
                    assert_eq!(solve_branching(&r).feasible, expected);
                    let components = conflict_free_components(&r.complex);
                    assert!(components.iter().all(|c| c.num_triangles() > budget as usize));
                }
                KernelOutcome::Decided { feasible, .. } => assert_eq!(feasible, expected),
                other => panic!("{other:?}"),
            }
            match compress(&i) {
                KernelOutcome::ReducedWeighted(w) => {
                    assert_eq!(solve_branching_weighted(&w).feasible, expected);
                    assert!(w.weights.values().all(|&x| x <= budget as u64 + 1));
                    let disk = conflict_free_components(&w.complex)
                        .into_iter()
                        .max_by_key(|c| c.num_triangles())
                        .unwrap();
                    let total: u64 = disk.triangles().iter().map(|t| w.weight(t)).sum();
                    assert_eq!(total, (budget as u64 + 1).max(disk.num_triangles() as u64));
                }
                KernelOutcome::Decided { feasible, .. } => assert_eq!(feasible, expected),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn small_instances_match_oracle() {
        let k = disk_on_book(0);
        for budget in 0..=4 {
            let i = DeletionInstance::new(k.clone(), budget);
            let expected = brute_force_deletion(&i).unwrap().feasible;
            let got = match kernelize(&i) {
                KernelOutcome::Reduced(r) => solve_branching(&r).feasible,
                KernelOutcome::Decided { feasible, .. } => feasible,
                other => panic!("{other:?}"),
            };
            assert_eq!(got, expected, "budget {budget}");
        }
    }
}
