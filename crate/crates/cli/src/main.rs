//! `twosphere`: sphere subcomplex search, triangle deletion, kernels and
//! Grid Tiling reductions from the command line.
//!
//! Every command prints one JSON report on stdout and a one-line summary on
//! stderr. Exit codes: 0 yes/ok, 1 no, 2 usage error, 3 input error.

mod commands;
mod io;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use io::{CliError, OutputFormat};
use report::{RunReport, Verdict};

#[derive(Debug, Parser)]
#[command(
    name = "twosphere",
    version,
    about = "Sphere subcomplexes of 2-dimensional simplicial complexes"
)]
struct Cli {
    /// Omit wall-clock timings so reports are byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineName {
    Backtracking,
    ColorCoding,
    Branching,
    Conflict,
    Brute,
}

#[derive(Debug, Args)]
pub struct Input {
    /// `.2sc` or JSON complex (`-` for stdin).
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the resulting complex here instead of embedding it in the report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::TwoSc)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Triangle budget.
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
}

#[derive(Debug, Args)]
pub struct Randomness {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-pattern failure probability of color coding.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Cap on color-coding trials per pattern and component.
    #[arg(long)]
    pub max_trials: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    /// A sphere with small spheres and loose triangles glued on.
    Glued,
    /// A single random sphere.
    Sphere,
    /// Random triangles on few vertices.
    Soup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchTask {
    Search,
    Deletion,
    Kernel,
    Grid,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a complex and report what it lists.
    Validate(Input),
    /// Counts, Euler characteristic, components and conflict triangles.
    Stats(Input),
    /// Classify the complex as a surface; yes iff it is a sphere.
    Recognize(Input),
    /// Edge-connected components and their surface types.
    Components(Input),
    /// Barycentric subdivision.
    Sd {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Find a sphere subcomplex with at most (or exactly) k triangles.
    FindSphere {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: Budget,
        /// Require exactly k triangles.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = EngineName::Backtracking)]
        engine: EngineName,
        #[command(flatten)]
        randomness: Randomness,
    },
    /// Delete at most k triangles (total weight with --weighted) so that a
    /// sphere remains.
    DeleteToSphere {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value_t = EngineName::Branching)]
        engine: EngineName,
        /// Use the weights listed in the input.
        #[arg(long)]
        weighted: bool,
    },
    /// Reduce a deletion instance to an equivalent small one.
    Kernelize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        output: Output,
    },
    /// Reduce a deletion instance to an equivalent weighted one.
    Compress {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        output: Output,
    },
    /// Build the complex of a Grid Tiling instance (`.gt`).
    GenGridTiling {
        /// `.gt` instance.
        input: PathBuf,
        /// Output complex; square ranges go to `<out>.squares.json`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::TwoSc)]
        format: OutputFormat,
        /// Sidecar path (defaults next to --out).
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Solve a small Grid Tiling instance by brute force.
    SolveGridTiling {
        /// `.gt` instance.
        input: PathBuf,
    },
    /// Generate a seeded random complex.
    GenRandom {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = RandomKind::Glued)]
        kind: RandomKind,
        /// Triangles of the main sphere (glued, sphere) or of the soup.
        #[arg(long, default_value_t = 12)]
        triangles: usize,
        #[arg(long, default_value_t = 1)]
        extra_spheres: usize,
        #[arg(long, default_value_t = 4)]
        extra_triangles: usize,
        /// Probability that a glued piece shares an edge rather than a vertex.
        #[arg(long, default_value_t = 0.5)]
        conflict_density: f64,
        /// Vertex count for `--kind soup`.
        #[arg(long, default_value_t = 7)]
        vertices: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Time a solver on seeded random instances.
    Bench {
        #[arg(long, value_enum, default_value_t = BenchTask::Search)]
        task: BenchTask,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        /// Budget (search: sphere size bound; deletion/kernel: triangles).
        #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
        k: i64,
        /// Main sphere size of the generated instances.
        #[arg(long, default_value_t = 24)]
        triangles: usize,
        #[arg(long, value_enum)]
        engine: Option<EngineName>,
    },
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    match &cli.command {
        Command::Validate(i) => commands::validate(&i.input),
        Command::Stats(i) => commands::stats(&i.input),
        Command::Recognize(i) => commands::recognize(&i.input),
        Command::Components(i) => commands::components(&i.input),
        Command::Sd { input, output } => commands::subdivide(&input.input, output),
        Command::FindSphere {
            input,
            budget,
            exact,
            engine,
            randomness,
        } => commands::find_sphere(&input.input, budget.k, *exact, *engine, randomness),
        Command::DeleteToSphere {
            input,
            budget,
            engine,
            weighted,
        } => commands::delete_to_sphere(&input.input, budget.k, *engine, *weighted),
        Command::Kernelize { input, budget, output } => commands::kernelize(&input.input, budget.k, output, false),
        Command::Compress { input, budget, output } => commands::kernelize(&input.input, budget.k, output, true),
        Command::GenGridTiling {
            input,
            out,
            format,
            sidecar,
        } => commands::gen_grid_tiling(input, out, *format, sidecar.as_deref()),
        Command::SolveGridTiling { input } => commands::solve_grid_tiling(input),
        Command::GenRandom {
            seed,
            kind,
            triangles,
            extra_spheres,
            extra_triangles,
            conflict_density,
            vertices,
            output,
        } => commands::gen_random(
            &commands::RandomSpec {
                seed: *seed,
                kind: *kind,
                triangles: *triangles,
                extra_spheres: *extra_spheres,
                extra_triangles: *extra_triangles,
                conflict_density: *conflict_density,
                vertices: *vertices,
            },
            output,
        ),
        Command::Bench {
            task,
            seed,
            instances,
            k,
            triangles,
            engine,
        } => commands::bench(*task, *seed, *instances, *k, *triangles, *engine, !cli.no_timing),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        // Help and version exit 0, parse errors exit 2.
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    let (mut report, code) = match run(&cli) {
        Ok(report) => {
            let code = report.verdict.exit_code();
            (report, code)
        }
        Err(e) => {
            let mut r = RunReport::new(Verdict::Error);
            r.error = Some(e.to_string());
            r.summary = format!("error: {e}");
            (r, e.exit_code())
        }
    };
    report.command = argv.into_iter().skip(1).collect();
    if !cli.no_timing && report.timing_ms.is_none() && report.verdict != Verdict::Error {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let json = serde_json::to_string(&report).expect("report serializes");
    // A closed pipe is not worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{json}");
    if !report.summary.is_empty() {
        let _ = writeln!(std::io::stderr().lock(), "{}", report.summary);
    }
    ExitCode::from(code as u8)
}
