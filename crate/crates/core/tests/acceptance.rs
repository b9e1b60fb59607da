//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Lines are written to the process stdout directly so they appear even when
//! the harness captures test output.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use twosphere::deletion::{
    brute_force_deletion, brute_force_deletion_weighted, compress, kernelize, solve_branching,
    solve_branching_weighted, solve_conflict_param, verify_deletion, DeletionInstance, KernelOutcome,
};
use twosphere::gridtiling::{all_selections, assemble_solution, generate_reduction, solve_grid_tiling};
use twosphere::random::{planted_tetrahedron, random_deletion_instance, random_small_complex};
use twosphere::search::{
    brute_force_sphere_subcomplex, colorful_match_once, enumerate_sphere_triangulations, find_sphere_subcomplex,
    lifted_labels, skeleton_with_dims, tree_decomposition, ColorCodingParams, ColoredGraph, Engine, SearchMode,
};
use twosphere::{classify_surface, is_sphere, Complex2, GridTilingInstance, SurfaceKind, Triangle, Vertex};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{status} criterion {id} ({name}): {detail}").unwrap();
    out.flush().unwrap();
}

fn search_suite() -> Vec<Complex2> {
    (0..320u64)
        .map(|seed| random_small_complex(&mut ChaCha8Rng::seed_from_u64(seed), 14))
        .collect()
}

fn deletion_suite() -> Vec<DeletionInstance> {
    (0..320u64)
        .map(|seed| random_deletion_instance(&mut ChaCha8Rng::seed_from_u64(10_000 + seed), 16, 4))
        .collect()
}

fn witness_ok(k: &Complex2, witness: &[Triangle], budget: i64, mode: SearchMode) -> bool {
    let sizes = mode.sizes(budget);
    witness.iter().all(|t| k.contains(t))
        && sizes.contains(&witness.len())
        && is_sphere(&Complex2::from_triangles(witness.iter().copied()))
}

#[test]
fn criterion_1_search_oracle_equivalence() {
    let start = Instant::now();
    let suite = search_suite();
    let cases: Vec<(usize, i64, SearchMode)> = (0..suite.len())
        .cartesian_product([4i64, 6, 8])
        .cartesian_product([SearchMode::AtMost, SearchMode::Exactly])
        .map(|((i, k), m)| (i, k, m))
        .collect();
    let results: Vec<(bool, bool)> = cases
        .par_iter()
        .map(|&(i, k, mode)| {
            let c = &suite[i];
            let oracle = brute_force_sphere_subcomplex(c, k, mode).unwrap();
            let got = find_sphere_subcomplex(c, k, mode, &Engine::Backtracking).unwrap();
            let valid = got.witness.as_deref().is_none_or(|w| witness_ok(c, w, k, mode));
            (oracle.found == got.found && valid, oracle.found)
        })
        .collect();
    let mismatches = results.iter().filter(|r| !r.0).count();
    let yes = results.iter().filter(|r| r.1).count();
    let elapsed = start.elapsed();
    let pass = suite.len() >= 300 && mismatches == 0 && elapsed < Duration::from_secs(300);
    report(
        1,
        "search oracle equivalence",
        pass,
        &format!(
            "{} complexes, {} queries ({} yes), {} mismatches, {:.1}s",
            suite.len(),
            results.len(),
            yes,
            mismatches,
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

/// Brute-force search for an injective, color-preserving, adjacency-
/// preserving map whose image has pairwise distinct labels. Host vertices
/// labelled `u32::MAX` are unusable.
fn brute_colorful(host: &ColoredGraph, pattern: &ColoredGraph, labels: &[u32]) -> bool {
    fn go(host: &ColoredGraph, pattern: &ColoredGraph, labels: &[u32], map: &mut Vec<usize>) -> bool {
        let p = map.len();
        if p == pattern.len() {
            return true;
        }
        for h in 0..host.len() {
            let fits = labels[h] != u32::MAX
                && !map.contains(&h)
                && host.color(h) == pattern.color(p)
                && map.iter().all(|&g| labels[g] != labels[h])
                && (0..p).all(|q| !pattern.has_edge(q, p) || host.has_edge(map[q], h));
            if fits {
                map.push(h);
                if go(host, pattern, labels, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    go(host, pattern, labels, &mut Vec::new())
}

fn random_colored_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ColoredGraph {
    let colors = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
    let edges: Vec<(usize, usize)> = (0..n).tuple_combinations().filter(|_| rng.gen_bool(p)).collect();
    ColoredGraph::new(colors, edges)
}

fn rainbow_embedding(host: &ColoredGraph, pattern: &ColoredGraph, labels: &[u32], map: &[usize]) -> bool {
    let distinct: BTreeSet<u32> = map.iter().map(|&h| labels[h]).collect();
    pattern.is_embedding_into(host, map) && distinct.len() == map.len()
}

#[test]
fn criterion_2_color_coding() {
    // soundness over the search suite, with few trials per pattern
    let suite = search_suite();
    let false_positives: usize = suite
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            [4i64, 6, 8]
                .iter()
                .filter(|&&k| {
                    let engine = Engine::ColorCoding(ColorCodingParams {
                        seed: i as u64,
                        delta: 0.1,
                        max_trials: Some(16),
                    });
                    let got = find_sphere_subcomplex(c, k, SearchMode::AtMost, &engine).unwrap();
                    let oracle = brute_force_sphere_subcomplex(c, k, SearchMode::AtMost).unwrap();
                    let bad_witness = got
                        .witness
                        .as_deref()
                        .is_some_and(|w| !witness_ok(c, w, k, SearchMode::AtMost));
                    (got.found && !oracle.found) || bad_witness
                })
                .count()
        })
        .sum();

    // completeness on planted tetrahedra at the faithful trial count
    let planted = 120u64;
    let misses = (0..planted)
        .into_par_iter()
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(50_000 + seed);
            let host = planted_tetrahedron(&mut rng, 8, 10);
            let engine = Engine::ColorCoding(ColorCodingParams {
                seed,
                delta: 0.1,
                max_trials: None,
            });
            !find_sphere_subcomplex(&host, 4, SearchMode::AtMost, &engine)
                .unwrap()
                .found
        })
        .count();

    // single-trial dynamic program against brute force
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut triples = 0;
    let mut dp_mismatches = 0;
    let mut dp_yes = 0;
    for _ in 0..150 {
        let (np, nh) = (rng.gen_range(2..6), rng.gen_range(4..9));
        let pattern = random_colored_graph(&mut rng, np, 0.6);
        let host = random_colored_graph(&mut rng, nh, 0.6);
        let num_labels = rng.gen_range(np as u32..=np as u32 + 2);
        let labels: Vec<u32> = (0..nh).map(|_| rng.gen_range(0..num_labels)).collect();
        let td = tree_decomposition(pattern.adjacency());
        let dp = colorful_match_once(&host, &pattern, &labels, &td);
        let ok = match &dp {
            Some(map) => rainbow_embedding(&host, &pattern, &labels, map),
            None => !brute_colorful(&host, &pattern, &labels),
        };
        dp_yes += usize::from(dp.is_some());
        dp_mismatches += usize::from(!ok);
        triples += 1;
    }
    // skeleton triples with lifted labels
    let spheres = enumerate_sphere_triangulations(6);
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(90_000 + seed);
        let host_complex = random_small_complex(&mut rng, 8);
        let pattern_complex = &spheres[seed as usize % spheres.len()];
        let host = skeleton_with_dims(&host_complex);
        let pattern = skeleton_with_dims(pattern_complex);
        let m0 = pattern_complex.num_vertices() as u32;
        let labels = lifted_labels(&host, m0, &mut rng);
        let td = tree_decomposition(pattern.graph().adjacency());
        let dp = colorful_match_once(host.graph(), pattern.graph(), &labels, &td);
        let ok = match &dp {
            Some(map) => rainbow_embedding(host.graph(), pattern.graph(), &labels, map),
            None => !brute_colorful(host.graph(), pattern.graph(), &labels),
        };
        dp_yes += usize::from(dp.is_some());
        dp_mismatches += usize::from(!ok);
        triples += 1;
    }

    let pass = false_positives == 0 && misses <= 18 && planted >= 100 && triples >= 100 && dp_mismatches == 0;
    report(
        2,
        "color coding",
        pass,
        &format!(
            "{false_positives} false positives over {} complexes; {misses}/{planted} planted misses at delta=0.1; \
             {dp_mismatches} DP mismatches over {triples} triples ({dp_yes} with a rainbow copy)",
            suite.len()
        ),
    );
    assert!(pass);
}

fn full_instance(n: u32, k: u32) -> GridTilingInstance {
    let all: BTreeSet<(u32, u32)> = (1..=n).cartesian_product(1..=n).collect();
    let sets = (1..=k).cartesian_product(1..=k).map(|t| (t, all.clone())).collect();
    GridTilingInstance::new(n, k, sets).unwrap()
}

#[test]
fn criterion_3_reduction_counts() {
    let mut lines = Vec::new();
    let mut pass = true;
    for (k, expected) in [(1u32, (14usize, 36usize, 24usize)), (2, (42, 120, 80))] {
        let kk = k as usize;
        let formula = (8 * kk * kk + 4 * kk + 2, 24 * kk * kk + 12 * kk, 16 * kk * kk + 8 * kk);
        assert_eq!(formula, expected);
        let inst = full_instance(2, k);
        let out = generate_reduction(&inst).unwrap();
        let selection = solve_grid_tiling(&inst).unwrap().expect("full instance is solvable");
        let s = Complex2::from_triangles(assemble_solution(&out, &selection).unwrap());
        let got = (s.num_vertices(), s.num_edges(), s.num_triangles());
        let chi = s.euler_characteristic();
        let sphere = classify_surface(&s).map(|c| c.kind) == Ok(SurfaceKind::Sphere);
        pass &= got == expected && chi == 2 && sphere;
        lines.push(format!("k={k}: V/E/T={}/{}/{} chi={chi}", got.0, got.1, got.2));
    }
    report(3, "reduction counting identities", pass, &lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_4_reduction_faithfulness() {
    let start = Instant::now();
    let mut instances = Vec::new();
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(70_000 + seed);
        let n = rng.gen_range(2..=3);
        let density = rng.gen_range(0.15..0.5);
        let inst = match seed % 3 {
            0 => GridTilingInstance::random_no(n, 2, density, &mut rng),
            1 => GridTilingInstance::random_yes(n, 2, density, &mut rng),
            _ => GridTilingInstance::random(n, 2, density, &mut rng),
        };
        instances.push((seed % 3 == 0, inst));
    }
    let results: Vec<(bool, bool, bool)> = instances
        .par_iter()
        .map(|(forced_no, inst)| {
            let solvable = solve_grid_tiling(inst).unwrap().is_some();
            let out = generate_reduction(inst).unwrap();
            let sphere = all_selections(inst).any(|sel| {
                let ts = assemble_solution(&out, &sel).unwrap();
                is_sphere(&Complex2::from_triangles(ts))
            });
            (solvable == sphere, solvable, *forced_no && !solvable)
        })
        .collect();
    let mismatches = results.iter().filter(|r| !r.0).count();
    let yes = results.iter().filter(|r| r.1).count();
    let forced_no = results.iter().filter(|r| r.2).count();
    let elapsed = start.elapsed();
    let pass = results.len() >= 50 && forced_no >= 10 && mismatches == 0 && elapsed < Duration::from_secs(120);
    report(
        4,
        "reduction faithfulness",
        pass,
        &format!(
            "{} instances ({yes} yes, {forced_no} forced no), {mismatches} mismatches, {:.1}s",
            results.len(),
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_deletion_solvers_agree() {
    let suite = deletion_suite();
    let results: Vec<(bool, bool, bool)> = suite
        .par_iter()
        .map(|i| {
            let a = solve_branching(i);
            let b = solve_conflict_param(i).unwrap();
            let c = brute_force_deletion(i).unwrap();
            let agree = a.feasible == b.feasible && b.feasible == c.feasible;
            let certified = [&a, &b, &c].iter().all(|o| match &o.deleted {
                Some(d) => d.len() as i64 <= i.budget && verify_deletion(&i.complex, d),
                None => !o.feasible,
            });
            (agree, certified, c.feasible)
        })
        .collect();
    let disagreements = results.iter().filter(|r| !r.0).count();
    let bad_certificates = results.iter().filter(|r| !r.1).count();
    let yes = results.iter().filter(|r| r.2).count();
    let pass = suite.len() >= 300 && disagreements == 0 && bad_certificates == 0;
    report(
        5,
        "deletion solvers agree",
        pass,
        &format!(
            "{} instances ({yes} yes), {disagreements} disagreements, {bad_certificates} bad certificates",
            suite.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_kernel_and_compression() {
    let suite = deletion_suite();
    let results: Vec<(bool, bool, bool, usize, usize)> = suite
        .par_iter()
        .map(|i| {
            let expected = brute_force_deletion(i).unwrap().feasible;
            let k = i.budget.max(0) as usize;
            let (kernel_ok, kernel_size_ok, kernel_size) = match kernelize(i) {
                KernelOutcome::Reduced(r) => {
                    let n = r.complex.num_triangles();
                    (solve_branching(&r).feasible == expected, n <= 7 * k * k + 120 * k, n)
                }
                KernelOutcome::Decided { feasible, certificate } => {
                    let cert_ok = certificate.is_none_or(|c| verify_deletion(&i.complex, &c) && c.len() <= k);
                    (feasible == expected && cert_ok, true, 0)
                }
                KernelOutcome::ReducedWeighted(_) => (false, false, 0),
            };
            let (weighted_ok, weighted_size) = match compress(i) {
                KernelOutcome::ReducedWeighted(w) => {
                    let n = w.complex.num_triangles();
                    let weights_ok = w.weights.values().all(|&x| x >= 1 && x <= k as u64 + 1);
                    let answer = solve_branching_weighted(&w).feasible;
                    let cross = brute_force_deletion_weighted(&w).map_or(true, |o| o.feasible == answer);
                    (answer == expected && cross && weights_ok && n <= 150 * k, n)
                }
                KernelOutcome::Decided { feasible, .. } => (feasible == expected, 0),
                KernelOutcome::Reduced(_) => (false, 0),
            };
            (kernel_ok, kernel_size_ok, weighted_ok, kernel_size, weighted_size)
        })
        .collect();
    let kernel_bad = results.iter().filter(|r| !r.0).count();
    let size_bad = results.iter().filter(|r| !r.1).count();
    let weighted_bad = results.iter().filter(|r| !r.2).count();
    let largest = results.iter().map(|r| r.3).max().unwrap_or(0);
    let largest_weighted = results.iter().map(|r| r.4).max().unwrap_or(0);
    let pass = kernel_bad == 0 && size_bad == 0 && weighted_bad == 0;
    report(
        6,
        "kernel and compression",
        pass,
        &format!(
            "{} instances: {kernel_bad} kernel mismatches, {size_bad} over the size bound, \
             {weighted_bad} weighted failures; largest kernel {largest}, largest weighted kernel {largest_weighted}",
            suite.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_deletion_size_bounds() {
    let suite = deletion_suite();
    let results: Vec<Option<bool>> = suite
        .par_iter()
        .map(|i| {
            // the bounds hold once free triangles are gone
            let (core, removed) = i.complex.strip_free_triangles();
            let reduced = DeletionInstance::new(core.clone(), i.budget - removed.len() as i64);
            let best = brute_force_deletion(&reduced).unwrap();
            let d = best.deleted?.len();
            let conflicts = core.conflict_triangles();
            let boundary: usize = core
                .without(&conflicts)
                .edge_connected_components()
                .complexes()
                .iter()
                .map(|c| c.boundary_edges().len())
                .sum();
            Some(conflicts.len() <= 7 * d && boundary <= 21 * d)
        })
        .collect();
    let checked = results.iter().flatten().count();
    let violations = results.iter().flatten().filter(|ok| !**ok).count();
    let pass = checked > 0 && violations == 0;
    report(
        7,
        "deletion size bounds",
        pass,
        &format!("{checked} yes-instances checked against the minimum deletion size, {violations} violations"),
    );
    assert!(pass);
}

/// Isomorphism by trying every vertex bijection.
fn isomorphic(a: &Complex2, b: &Complex2) -> bool {
    let va: Vec<Vertex> = a.vertices().collect();
    let vb: Vec<Vertex> = b.vertices().collect();
    if va.len() != vb.len() || a.num_triangles() != b.num_triangles() {
        return false;
    }
    vb.iter().copied().permutations(vb.len()).any(|perm| {
        let map = |v: Vertex| perm[va.iter().position(|&x| x == v).unwrap()];
        a.relabel(map).unwrap() == *b
    })
}

#[test]
fn criterion_8_sphere_enumeration() {
    let mut pass = true;
    let mut lines = Vec::new();
    for (max, expected) in [(4usize, 1usize), (6, 2), (8, 4)] {
        let all = enumerate_sphere_triangulations(max);
        let spheres = all.iter().all(is_sphere);
        let small = all.iter().all(|s| s.num_vertices() <= 6);
        let distinct = all.iter().tuple_combinations().all(|(a, b)| !isomorphic(a, b));
        pass &= all.len() == expected && spheres && small && distinct;
        lines.push(format!("<= {max} triangles: {} (expected {expected})", all.len()));
    }
    report(8, "sphere enumeration", pass, &lines.join("; "));
    assert!(pass);
}
