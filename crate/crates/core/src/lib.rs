//! Sphere subcomplexes in pure 2-dimensional simplicial complexes.
//!
//! * [`complex`] and [`surface`]: the triangle-set data model and surface
//!   recognition.
//! * [`search`]: finding a sphere subcomplex with a bounded number of
//!   triangles (subdivision skeletons, color coding, backtracking).
//! * [`deletion`]: deleting few triangles so that a sphere remains
//!   (reduction rules, kernels, exact solvers).
//! * [`gridtiling`]: Grid Tiling instances and the complexes built from them.
//! * [`format`]: `.2sc`, `.gt` and JSON encodings.
//! * [`random`]: seeded instance generators.

pub mod complex;
pub mod deletion;
pub mod format;
pub mod gridtiling;
pub mod random;
pub mod search;
pub mod surface;

pub use complex::{Complex2, ComplexError, ComponentDecomposition, Edge, Triangle, Vertex};
pub use deletion::{
    brute_force_deletion, compress, kernelize, solve_branching, solve_conflict_param, DeletionError, DeletionInstance,
    DeletionOutcome, KernelOutcome, WeightedInstance,
};
pub use format::{ComplexFile, FormatError};
pub use gridtiling::{GridTilingError, GridTilingInstance, ReductionOutput};
pub use search::{
    brute_force_sphere_subcomplex, find_sphere_subcomplex, ColorCodingParams, Engine, SearchError, SearchMode,
    SearchOutcome,
};
pub use surface::{classify_surface, is_sphere, SurfaceClass, SurfaceKind};
