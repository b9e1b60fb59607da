//! Structural invariants on random complexes.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twosphere::deletion::{brute_force_deletion, kernelize, solve_branching, verify_deletion};
use twosphere::format::{from_json, parse_2sc, parse_gt, to_json, write_2sc, write_gt};
use twosphere::random::{random_deletion_instance, random_sphere, shuffle_labels};
use twosphere::search::barycentric_subdivision;
use twosphere::surface::split_pinched_vertices;
use twosphere::{
    brute_force_sphere_subcomplex, classify_surface, find_sphere_subcomplex, is_sphere, Complex2, Engine,
    GridTilingInstance, KernelOutcome, SearchMode, Triangle,
};

fn complex_strategy(vertices: u32, max_triangles: usize) -> impl Strategy<Value = Complex2> {
    proptest::collection::vec((0..vertices, 0..vertices, 0..vertices), 1..=max_triangles)
        .prop_map(|raw| Complex2::from_triangles(raw.into_iter().filter_map(|(a, b, c)| Triangle::new(a, b, c).ok())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subdivision_keeps_euler_characteristic(k in complex_strategy(8, 12)) {
        let sd = barycentric_subdivision(&k);
        prop_assert_eq!(sd.num_triangles(), 6 * k.num_triangles());
        prop_assert_eq!(sd.euler_characteristic(), k.euler_characteristic());
        prop_assert_eq!(sd.boundary_edges().len(), 2 * k.boundary_edges().len());
    }

    #[test]
    fn incidences_add_up(k in complex_strategy(8, 16)) {
        let total: usize = k.edge_multiplicities().map(|(_, m)| m).sum();
        prop_assert_eq!(total, 3 * k.num_triangles());
        let at_vertices: usize = k.vertices().map(|v| k.triangles_at_vertex(v).count()).sum();
        prop_assert_eq!(at_vertices, 3 * k.num_triangles());
        prop_assert!(k.indices_consistent());
        for (i, t) in k.triangles().iter().enumerate() {
            prop_assert_eq!(k.index_of(t), Some(i));
        }
    }

    #[test]
    fn components_partition_triangles(k in complex_strategy(9, 16)) {
        let parts = k.edge_connected_components().complexes();
        prop_assert_eq!(parts.iter().map(Complex2::num_triangles).sum::<usize>(), k.num_triangles());
        let mut seen_edges = BTreeSet::new();
        for p in &parts {
            prop_assert!(p.is_edge_connected());
            for e in p.edges() {
                prop_assert!(seen_edges.insert(e), "edge {:?} in two components", e);
            }
        }
    }

    #[test]
    fn stripping_leaves_no_free_triangle(k in complex_strategy(7, 16)) {
        let (kept, removed) = k.strip_free_triangles();
        prop_assert!(kept.boundary_edges().is_empty());
        prop_assert_eq!(kept.num_triangles() + removed.len(), k.num_triangles());
        prop_assert_eq!(kept.union(&Complex2::from_triangles(removed)), k);
    }

    #[test]
    fn classification_ignores_labels(seed in any::<u64>(), size in 2usize..=20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sphere(&mut rng, 2 * size, 0);
        let t = shuffle_labels(&mut rng, &s);
        prop_assert!(is_sphere(&s) && is_sphere(&t));
        let hole = s.triangles()[0];
        let disk = s.without(&[hole]);
        let shuffled = shuffle_labels(&mut rng, &disk);
        prop_assert_eq!(classify_surface(&disk).unwrap(), classify_surface(&shuffled).unwrap());
    }

    #[test]
    fn splitting_is_idempotent(k in complex_strategy(7, 14)) {
        let first = k.max_vertex().map_or(0, |v| v.0 + 1);
        let (split, copies) = split_pinched_vertices(&k, first);
        prop_assert_eq!(split.num_triangles(), k.num_triangles());
        prop_assert_eq!(split.boundary_edges().len(), k.boundary_edges().len());
        let again = split.max_vertex().map_or(0, |v| v.0 + 1);
        prop_assert!(split_pinched_vertices(&split, again).1.is_empty());
        let merged = split.relabel(|v| copies.get(&v).copied().unwrap_or(v)).unwrap();
        prop_assert_eq!(merged, k);
    }

    #[test]
    fn text_formats_round_trip(k in complex_strategy(9, 12), w in 1u64..50) {
        // weights live on triangle lines
        prop_assume!(!k.is_empty());
        let weights = k.triangles().iter().enumerate().map(|(i, t)| (*t, w + i as u64)).collect();
        let parsed = parse_2sc(&write_2sc(&k, Some(&weights), &["c".into()])).unwrap();
        prop_assert_eq!(&parsed.complex, &k);
        prop_assert_eq!(parsed.weights.as_ref(), Some(&weights));
        let json = serde_json::to_string(&to_json(&k, Some(&weights))).unwrap();
        let (back, back_weights) = from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back, k);
        prop_assert_eq!(back_weights, Some(weights));
    }

    #[test]
    fn grid_tiling_text_round_trips(seed in any::<u64>(), n in 1u32..=4, k in 1u32..=3) {
        let g = GridTilingInstance::random(n, k, 0.5, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_gt(&write_gt(&g)).unwrap(), g);
    }

    #[test]
    fn search_witnesses_are_valid(k in complex_strategy(6, 12), budget in 4i64..=8) {
        let got = find_sphere_subcomplex(&k, budget, SearchMode::AtMost, &Engine::Backtracking).unwrap();
        let oracle = brute_force_sphere_subcomplex(&k, budget, SearchMode::AtMost).unwrap();
        prop_assert_eq!(got.found, oracle.found);
        if let Some(w) = got.witness {
            prop_assert!(w.len() as i64 <= budget && w.iter().all(|t| k.contains(t)));
            prop_assert!(is_sphere(&Complex2::from_triangles(w)));
        }
    }

    #[test]
    fn deletion_certificates_verify(seed in any::<u64>()) {
        let i = random_deletion_instance(&mut ChaCha8Rng::seed_from_u64(seed), 14, 5);
        let got = solve_branching(&i);
        prop_assert_eq!(got.feasible, brute_force_deletion(&i).unwrap().feasible);
        if let Some(d) = &got.deleted {
            prop_assert!(d.len() as i64 <= i.budget && verify_deletion(&i.complex, d));
        }
        let kernel = match kernelize(&i) {
            KernelOutcome::Decided { feasible, .. } => feasible,
            KernelOutcome::Reduced(r) => solve_branching(&r).feasible,
            KernelOutcome::ReducedWeighted(_) => unreachable!(),
        };
        prop_assert_eq!(kernel, got.feasible);
    }
}
