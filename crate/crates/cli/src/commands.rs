use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use twosphere::deletion::{
    self, brute_force_deletion_weighted, compress_with_stats, kernelize_with_stats, solve_branching_weighted,
    solve_conflict_param_weighted, DeletionError, KernelStats,
};
use twosphere::format::{self, ComplexFile};
use twosphere::gridtiling::{self, assemble_solution, generate_reduction};
use twosphere::random::{self, GlueParams};
use twosphere::search::{self, SearchStats};
use twosphere::{
    classify_surface, find_sphere_subcomplex, ColorCodingParams, Complex2, DeletionInstance, Engine, KernelOutcome,
    SearchMode, SurfaceKind, Triangle, WeightedInstance,
};

use crate::io::{self as cio, CliError, OutputFormat};
use crate::report::{EngineReport, InstanceStats, RunReport, Verdict};
use crate::{BenchTask, EngineName, Output, RandomKind, Randomness};

fn load(path: &Path) -> Result<(ComplexFile, RunReport, Vec<String>), CliError> {
    let file = cio::read_complex(path)?;
    let mut warnings = Vec::new();
    if file.has_lower_dimensional_maximal_simplices() {
        warnings.push(format!(
            "input lists {} maximal edge(s) and {} isolated vertex(es); the complex is not pure 2-dimensional",
            file.loose_edges.len(),
            file.loose_vertices.len()
        ));
    }
    let mut stats = InstanceStats::of(&file.complex);
    stats.loose_edges = file.loose_edges.len();
    stats.loose_vertices = file.loose_vertices.len();
    let mut report = RunReport::new(Verdict::Ok);
    report.instance = Some(stats);
    Ok((file, report, warnings))
}

fn finish(mut report: RunReport, warnings: Vec<String>) -> RunReport {
    for w in &warnings {
        report.summary.push_str(&format!("\nwarning: {w}"));
    }
    report.warnings.extend(warnings);
    report
}

fn complex_json(triangles: &[Triangle], weights: Option<&BTreeMap<Triangle, u64>>) -> Value {
    let k = Complex2::from_triangles(triangles.iter().copied());
    serde_json::to_value(format::to_json(&k, weights)).expect("complex JSON serializes")
}

/// Writes to `--out` if given, else returns the complex for embedding.
fn emit(
    output: &Output,
    triangles: &[Triangle],
    weights: Option<&BTreeMap<Triangle, u64>>,
    comments: &[String],
) -> Result<Value, CliError> {
    match &output.out {
        Some(path) => {
            cio::write_text(path, &cio::render_complex(triangles, weights, comments, output.format))?;
            Ok(json!({ "out": path.display().to_string() }))
        }
        None => Ok(json!({ "complex": complex_json(triangles, weights) })),
    }
}

fn merge(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Object(mut a), Value::Object(b)) => {
            a.extend(b);
            Value::Object(a)
        }
        (a, Value::Null) => a,
        (_, b) => b,
    }
}

pub fn validate(path: &Path) -> Result<RunReport, CliError> {
    let (file, report, warnings) = load(path)?;
    let details = json!({
        "weighted": file.weights.is_some(),
        "loose_edges": file.loose_edges.iter().map(|e| <[u32; 2]>::from(*e)).collect::<Vec<_>>(),
        "loose_vertices": file.loose_vertices.iter().map(|v| v.0).collect::<Vec<_>>(),
        "listed_triangles": file.file_order.len(),
    });
    let summary = format!("valid: {} triangles", file.complex.num_triangles());
    Ok(finish(report.with_details(details).with_summary(summary), warnings))
}

pub fn stats(path: &Path) -> Result<RunReport, CliError> {
    let (file, report, warnings) = load(path)?;
    let k = &file.complex;
    let max_multiplicity = k.edge_multiplicities().map(|(_, m)| m).max().unwrap_or(0);
    let details = json!({
        "max_edge_multiplicity": max_multiplicity,
        "conflict_edges": k.conflict_edges().count(),
        "weighted": file.weights.is_some(),
        "total_weight": file.weights.as_ref().map(|w| w.values().sum::<u64>()),
    });
    let s = report.instance.clone().unwrap_or_default();
    let summary = format!(
        "{} vertices, {} edges, {} triangles, chi = {}, {} components",
        s.vertices, s.edges, s.triangles, s.euler_characteristic, s.components
    );
    Ok(finish(report.with_details(details).with_summary(summary), warnings))
}

fn kind_name(kind: SurfaceKind) -> String {
    match kind {
        SurfaceKind::Sphere => "Sphere".into(),
        SurfaceKind::PuncturedSphere(b) => format!("PuncturedSphere({b})"),
        SurfaceKind::ClosedOther => "ClosedOther".into(),
        SurfaceKind::WithBoundaryOther => "WithBoundaryOther".into(),
        SurfaceKind::NotSurface => "NotSurface".into(),
    }
}

pub fn recognize(path: &Path) -> Result<RunReport, CliError> {
    let (file, mut report, mut warnings) = load(path)?;
    let k = &file.complex;
    let (kind, details) = match classify_surface(k) {
        Ok(class) => (
            Some(class.kind),
            json!({ "kind": kind_name(class.kind), "euler_characteristic": class.euler_characteristic }),
        ),
        Err(e) => (None, json!({ "kind": Value::Null, "reason": e.to_string() })),
    };
    let pure = !file.has_lower_dimensional_maximal_simplices();
    if !pure {
        warnings.push("lower-dimensional maximal simplices rule out a sphere".into());
    }
    let sphere = pure && kind == Some(SurfaceKind::Sphere);
    report.verdict = Verdict::from_bool(sphere);
    let summary = format!(
        "{} (chi = {})",
        details["kind"].as_str().unwrap_or("not classifiable"),
        k.euler_characteristic()
    );
    Ok(finish(report.with_details(details).with_summary(summary), warnings))
}

pub fn components(path: &Path) -> Result<RunReport, CliError> {
    let (file, report, warnings) = load(path)?;
    let list: Vec<Value> = file
        .complex
        .edge_connected_components()
        .complexes()
        .iter()
        .map(|c| {
            let kind = classify_surface(c)
                .map(|s| kind_name(s.kind))
                .unwrap_or_else(|e| e.to_string());
            json!({
                "triangles": c.num_triangles(),
                "vertices": c.num_vertices(),
                "euler_characteristic": c.euler_characteristic(),
                "boundary_edges": c.boundary_edges().len(),
                "conflict_triangles": c.conflict_triangles().len(),
                "kind": kind,
            })
        })
        .collect();
    let summary = format!("{} edge-connected components", list.len());
    Ok(finish(
        report.with_details(json!({ "components": list })).with_summary(summary),
        warnings,
    ))
}

pub fn subdivide(path: &Path, output: &Output) -> Result<RunReport, CliError> {
    let (file, report, warnings) = load(path)?;
    let sd = search::barycentric_subdivision(&file.complex);
    let emitted = emit(output, sd.triangles(), None, &["barycentric subdivision".into()])?;
    let details = merge(json!({ "subdivision": InstanceStats::of(&sd) }), emitted);
    let summary = format!("subdivision has {} triangles", sd.num_triangles());
    Ok(finish(report.with_details(details).with_summary(summary), warnings))
}

fn search_stats_json(stats: &SearchStats) -> Value {
    serde_json::to_value(stats).expect("stats serialize")
}

pub fn find_sphere(
    path: &Path,
    k: i64,
    exact: bool,
    engine: EngineName,
    randomness: &Randomness,
) -> Result<RunReport, CliError> {
    let (file, mut report, mut warnings) = load(path)?;
    if file.has_lower_dimensional_maximal_simplices() {
        warnings.push("maximal edges and isolated vertices are ignored by the search".into());
    }
    let mode = if exact { SearchMode::Exactly } else { SearchMode::AtMost };
    let mut engine_report = EngineReport {
        name: format!("{engine:?}").to_lowercase(),
        ..EngineReport::default()
    };
    let outcome = match engine {
        EngineName::Backtracking => find_sphere_subcomplex(&file.complex, k, mode, &Engine::Backtracking),
        EngineName::ColorCoding => {
            let params = ColorCodingParams {
                seed: randomness.seed,
                delta: randomness.delta,
                max_trials: randomness.max_trials,
            };
            engine_report.name = "color-coding".into();
            engine_report.seed = Some(params.seed);
            engine_report.delta = Some(params.delta);
            find_sphere_subcomplex(&file.complex, k, mode, &Engine::ColorCoding(params))
        }
        EngineName::Brute => search::brute_force_sphere_subcomplex(&file.complex, k, mode),
        other => {
            return Err(CliError::usage(format!(
                "engine `{}` solves deletion, not search; use backtracking, color-coding or brute",
                format!("{other:?}").to_lowercase()
            )))
        }
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    if engine == EngineName::ColorCoding {
        engine_report.trials = Some(outcome.stats.trials);
    }
    report.verdict = Verdict::from_bool(outcome.found);
    report.engine = Some(engine_report);
    let summary = match &outcome.witness {
        Some(w) => format!("found a sphere with {} triangles", w.len()),
        None => format!(
            "no sphere with {} {k} triangles",
            if exact { "exactly" } else { "at most" }
        ),
    };
    report.certificate = outcome.witness.clone();
    let details = json!({ "mode": mode, "budget": k, "stats": search_stats_json(&outcome.stats) });
    Ok(finish(report.with_details(details).with_summary(summary), warnings))
}

fn deletion_error(e: DeletionError) -> CliError {
    CliError::usage(e.to_string())
}

pub fn delete_to_sphere(path: &Path, k: i64, engine: EngineName, weighted: bool) -> Result<RunReport, CliError> {
    let (file, mut report, mut warnings) = load(path)?;
    report.engine = Some(EngineReport {
        name: format!("{engine:?}").to_lowercase(),
        ..EngineReport::default()
    });
    if file.has_lower_dimensional_maximal_simplices() {
        warnings.push("maximal edges and isolated vertices cannot be deleted, so no sphere can remain".into());
        report.verdict = Verdict::No;
        let summary = "no: input is not pure 2-dimensional".to_string();
        return Ok(finish(
            report.with_details(json!({ "budget": k })).with_summary(summary),
            warnings,
        ));
    }
    let instance = DeletionInstance::new(file.complex.clone(), k);
    let weights = match (&file.weights, weighted) {
        (Some(w), true) => Some(w.clone()),
        (None, true) => {
            warnings.push("input carries no weights; every triangle costs 1".into());
            None
        }
        (Some(_), false) => {
            warnings.push("weights in the input are ignored without --weighted".into());
            None
        }
        (None, false) => None,
    };
    let winstance = match weights {
        Some(w) => Some(WeightedInstance::new(file.complex.clone(), w, k).map_err(deletion_error)?),
        None if weighted => Some(WeightedInstance::unit(&instance)),
        None => None,
    };
    let outcome = match (engine, &winstance) {
        (EngineName::Branching, None) => deletion::solve_branching(&instance),
        (EngineName::Branching, Some(w)) => solve_branching_weighted(w),
        (EngineName::Conflict, None) => deletion::solve_conflict_param(&instance).map_err(deletion_error)?,
        (EngineName::Conflict, Some(w)) => solve_conflict_param_weighted(w).map_err(deletion_error)?,
        (EngineName::Brute, None) => deletion::brute_force_deletion(&instance).map_err(deletion_error)?,
        (EngineName::Brute, Some(w)) => brute_force_deletion_weighted(w).map_err(deletion_error)?,
        (other, _) => {
            return Err(CliError::usage(format!(
                "engine `{}` solves search, not deletion; use branching, conflict or brute",
                format!("{other:?}").to_lowercase()
            )))
        }
    };
    report.verdict = Verdict::from_bool(outcome.feasible);
    let summary = match outcome.cost {
        Some(c) => format!("yes: deleting cost {c} leaves a sphere"),
        None => format!("no: no deletion within budget {k} leaves a sphere"),
    };
    report.certificate = outcome.deleted.clone();
    let details = json!({ "budget": k, "weighted": winstance.is_some(), "cost": outcome.cost });
    Ok(finish(report.with_details(details).with_summary(summary), warnings))
}

fn kernel_stats_json(stats: &KernelStats) -> Value {
    serde_json::to_value(stats).expect("stats serialize")
}

/// `kernelize` and `compress`.
pub fn kernelize(path: &Path, k: i64, output: &Output, weighted: bool) -> Result<RunReport, CliError> {
    let (file, mut report, mut warnings) = load(path)?;
    if file.weights.is_some() {
        warnings.push("input weights are ignored; the rules apply to unit costs".into());
    }
    if file.has_lower_dimensional_maximal_simplices() {
        warnings.push("maximal edges and isolated vertices cannot be deleted, so no sphere can remain".into());
        report.verdict = Verdict::No;
        return Ok(finish(
            report.with_summary("no: input is not pure 2-dimensional"),
            warnings,
        ));
    }
    let instance = DeletionInstance::new(file.complex.clone(), k);
    let (outcome, stats) = if weighted {
        compress_with_stats(&instance)
    } else {
        kernelize_with_stats(&instance)
    };
    let name = if weighted { "compression" } else { "kernel" };
    let mut details = json!({ "budget": k, "stats": kernel_stats_json(&stats) });
    let comments = |budget: i64| {
        vec![
            format!("{name} of a deletion instance"),
            format!("original budget {k}"),
            format!("budget {budget}"),
        ]
    };
    match outcome {
        KernelOutcome::Decided { feasible, certificate } => {
            report.verdict = Verdict::from_bool(feasible);
            report.certificate = certificate;
            details = merge(details, json!({ "decided": true }));
            report.summary = format!("decided during preprocessing: {}", if feasible { "yes" } else { "no" });
        }
        KernelOutcome::Reduced(r) => {
            let emitted = emit(output, r.complex.triangles(), None, &comments(r.budget))?;
            details = merge(
                details,
                json!({ "decided": false, "kernel_budget": r.budget, "kernel": InstanceStats::of(&r.complex) }),
            );
            details = merge(details, emitted);
            report.summary = format!(
                "{name}: {} -> {} triangles",
                stats.input_triangles, stats.output_triangles
            );
        }
        KernelOutcome::ReducedWeighted(w) => {
            let emitted = emit(output, w.complex.triangles(), Some(&w.weights), &comments(w.budget))?;
            details = merge(
                details,
                json!({
                    "decided": false,
                    "kernel_budget": w.budget,
                    "kernel": InstanceStats::of(&w.complex),
                    "total_weight": w.total_weight(),
                    "max_weight": w.weights.values().max(),
                }),
            );
            details = merge(details, emitted);
            report.summary = format!(
                "{name}: {} -> {} triangles",
                stats.input_triangles, stats.output_triangles
            );
        }
    }
    Ok(finish(report.with_details(details), warnings))
}

fn grid_error(e: gridtiling::GridTilingError) -> CliError {
    CliError::usage(e.to_string())
}

pub fn gen_grid_tiling(
    input: &Path,
    out: &Path,
    format: OutputFormat,
    sidecar: Option<&Path>,
) -> Result<RunReport, CliError> {
    let instance = cio::read_grid_tiling(input)?;
    let output = generate_reduction(&instance).map_err(grid_error)?;
    let ordered = output.ordered_triangles();
    let comments = vec![
        format!("grid tiling reduction: n = {}, k = {}", instance.n(), instance.k()),
        format!("target sphere size {}", output.k_prime),
    ];
    cio::write_text(out, &cio::render_complex(&ordered, None, &comments, format))?;

    let squares: Vec<Value> = output
        .squares
        .iter()
        .enumerate()
        .map(|(s, sq)| {
            json!({
                "tile": [sq.i, sq.j],
                "pair": [sq.a, sq.b],
                "triangles": [16 * s, 16 * (s + 1)],
            })
        })
        .collect();
    let back = 16 * output.squares.len();
    let side = json!({
        "n": instance.n(),
        "k": instance.k(),
        "k_prime": output.k_prime,
        "squares": squares,
        "back_sheet": [back, back + output.back_sheet.len()],
    });
    let side_path = sidecar.map_or_else(|| cio::sidecar_path(out), Path::to_path_buf);
    let text = serde_json::to_string_pretty(&side).expect("sidecar serializes") + "\n";
    cio::write_text(&side_path, &text)?;

    let report = RunReport::new(Verdict::Ok).with_instance(&output.complex);
    let summary = format!(
        "wrote {} triangles ({} squares) to {}",
        ordered.len(),
        output.squares.len(),
        out.display()
    );
    Ok(report
        .with_details(json!({
            "out": out.display().to_string(),
            "sidecar": side_path.display().to_string(),
            "k_prime": output.k_prime,
            "total_pairs": instance.total_pairs(),
        }))
        .with_summary(summary))
}

pub fn solve_grid_tiling(input: &Path) -> Result<RunReport, CliError> {
    let instance = cio::read_grid_tiling(input)?;
    let selection = gridtiling::solve_grid_tiling(&instance).map_err(grid_error)?;
    let mut report = RunReport::new(Verdict::from_bool(selection.is_some()));
    let details = match &selection {
        Some(sel) => {
            let output = generate_reduction(&instance).map_err(grid_error)?;
            let mut sphere = assemble_solution(&output, sel).map_err(grid_error)?;
            sphere.sort_unstable();
            report.certificate = Some(sphere);
            let picks: Vec<Value> = sel
                .iter()
                .map(|(&(i, j), &(a, b))| json!({ "tile": [i, j], "pair": [a, b] }))
                .collect();
            json!({ "selection": picks, "k_prime": output.k_prime })
        }
        None => json!({ "selection": Value::Null }),
    };
    let summary = if selection.is_some() {
        "yes: selection found"
    } else {
        "no: no compatible selection"
    };
    Ok(report.with_details(details).with_summary(summary))
}

pub struct RandomSpec {
    pub seed: u64,
    pub kind: RandomKind,
    pub triangles: usize,
    pub extra_spheres: usize,
    pub extra_triangles: usize,
    pub conflict_density: f64,
    pub vertices: u32,
}

pub fn random_complex(spec: &RandomSpec) -> Result<Complex2, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        RandomKind::Glued => {
            if !(0.0..=1.0).contains(&spec.conflict_density) {
                return Err(CliError::usage("--conflict-density must lie in [0, 1]"));
            }
            let params = GlueParams {
                sphere_triangles: spec.triangles,
                extra_spheres: spec.extra_spheres,
                extra_triangles: spec.extra_triangles,
                conflict_density: spec.conflict_density,
            };
            Ok(random::random_glued(&mut rng, &params))
        }
        RandomKind::Sphere => {
            let n = (spec.triangles.max(4) + 1) & !1;
            Ok(random::random_sphere(&mut rng, n, 0))
        }
        RandomKind::Soup => {
            if spec.vertices < 3 {
                return Err(CliError::usage("--vertices must be at least 3"));
            }
            Ok(random::random_triangles(&mut rng, spec.vertices, spec.triangles))
        }
    }
}

pub fn gen_random(spec: &RandomSpec, output: &Output) -> Result<RunReport, CliError> {
    let k = random_complex(spec)?;
    let comments = vec![format!("random {:?} complex, seed {}", spec.kind, spec.seed).to_lowercase()];
    let emitted = emit(output, k.triangles(), None, &comments)?;
    let mut report = RunReport::new(Verdict::Ok).with_instance(&k);
    report.engine = Some(EngineReport {
        name: "random".into(),
        seed: Some(spec.seed),
        ..EngineReport::default()
    });
    let summary = format!("generated {} triangles (seed {})", k.num_triangles(), spec.seed);
    Ok(report.with_details(emitted).with_summary(summary))
}

struct Timer {
    samples: Vec<f64>,
}

impl Timer {
    fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.samples.push(start.elapsed().as_secs_f64() * 1e3);
        out
    }

    fn summary(&self) -> Value {
        let total: f64 = self.samples.iter().sum();
        let max = self.samples.iter().copied().fold(0.0, f64::max);
        let mean = if self.samples.is_empty() {
            0.0
        } else {
            total / self.samples.len() as f64
        };
        json!({ "total_ms": total, "mean_ms": mean, "max_ms": max })
    }
}

pub fn bench(
    task: BenchTask,
    seed: u64,
    instances: usize,
    k: i64,
    triangles: usize,
    engine: Option<EngineName>,
    timing: bool,
) -> Result<RunReport, CliError> {
    let mut timer = Timer { samples: Vec::new() };
    let mut yes = 0usize;
    let mut work = 0u64;
    let engine_name = match (task, engine) {
        (BenchTask::Search, None) => EngineName::Backtracking,
        (BenchTask::Deletion, None) => EngineName::Branching,
        (_, Some(e)) => e,
        (_, None) => EngineName::Branching,
    };
    let deletes = matches!(
        engine_name,
        EngineName::Branching | EngineName::Conflict | EngineName::Brute
    );
    if task == BenchTask::Deletion && !deletes {
        return Err(CliError::usage(format!(
            "engine {engine_name:?} does not solve deletion"
        )));
    }
    for n in 0..instances {
        let instance_seed = seed.wrapping_add(n as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
        match task {
            BenchTask::Search => {
                let host = random::random_glued(
                    &mut rng,
                    &GlueParams {
                        sphere_triangles: triangles,
                        ..GlueParams::default()
                    },
                );
                let engine = match engine_name {
                    EngineName::Backtracking => Engine::Backtracking,
                    EngineName::ColorCoding => Engine::ColorCoding(ColorCodingParams {
                        seed: instance_seed,
                        ..ColorCodingParams::default()
                    }),
                    other => return Err(CliError::usage(format!("engine {other:?} does not search"))),
                };
                let out = timer
                    .time(|| find_sphere_subcomplex(&host, k, SearchMode::AtMost, &engine))
                    .map_err(|e| CliError::usage(e.to_string()))?;
                yes += usize::from(out.found);
                work += out.stats.search_nodes + out.stats.trials;
            }
            BenchTask::Deletion | BenchTask::Kernel => {
                let host = random::random_glued(
                    &mut rng,
                    &GlueParams {
                        sphere_triangles: triangles,
                        ..GlueParams::default()
                    },
                );
                let instance = DeletionInstance::new(host, k);
                if task == BenchTask::Kernel {
                    let (outcome, stats) = timer.time(|| kernelize_with_stats(&instance));
                    yes += usize::from(matches!(outcome, KernelOutcome::Decided { feasible: true, .. }));
                    work += stats.output_triangles as u64;
                } else {
                    let out = timer.time(|| match engine_name {
                        EngineName::Conflict => deletion::solve_conflict_param(&instance),
                        EngineName::Brute => deletion::brute_force_deletion(&instance),
                        _ => Ok(deletion::solve_branching(&instance)),
                    });
                    let out = out.map_err(deletion_error)?;
                    yes += usize::from(out.feasible);
                }
            }
            BenchTask::Grid => {
                let grid_k = k.clamp(1, 3) as u32;
                let instance = if rng.gen_bool(0.5) {
                    twosphere::GridTilingInstance::random_yes(3, grid_k, 0.5, &mut rng)
                } else {
                    twosphere::GridTilingInstance::random(3, grid_k, 0.5, &mut rng)
                };
                let out = timer.time(|| generate_reduction(&instance)).map_err(grid_error)?;
                work += out.complex.num_triangles() as u64;
                yes += usize::from(gridtiling::solve_grid_tiling(&instance).map_err(grid_error)?.is_some());
            }
        }
    }
    let mut details = json!({
        "task": format!("{task:?}").to_lowercase(),
        "instances": instances,
        "budget": k,
        "sphere_triangles": triangles,
        "yes": yes,
        "work": work,
    });
    if timing {
        details = merge(details, timer.summary());
    }
    let mut report = RunReport::new(Verdict::Ok).with_details(details);
    report.engine = Some(EngineReport {
        name: format!("{engine_name:?}").to_lowercase(),
        seed: Some(seed),
        ..EngineReport::default()
    });
    let summary = format!("{task:?}: {instances} instances, {yes} yes").to_lowercase();
    Ok(report.with_summary(summary))
}
