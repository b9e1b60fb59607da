//! Criterion benchmarks over seeded random instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twosphere::random::{random_glued, GlueParams};
use twosphere::Complex2;

pub mod deletion;
pub mod gridtiling;
pub mod search;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A sphere of `sphere_triangles` triangles with a small sphere and a few
/// triangles glued on.
pub fn glued(seed: u64, sphere_triangles: usize) -> Complex2 {
    let params = GlueParams {
        sphere_triangles,
        extra_spheres: 1,
        extra_triangles: 3,
        conflict_density: 0.7,
    };
    random_glued(&mut rng(seed), &params)
}
