use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use thiserror::Error;
use twosphere::format::{self, ComplexFile, ComplexJson};
use twosphere::{Complex2, FormatError, GridTilingInstance, Triangle};

use std::collections::BTreeMap;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: String,
        #[source]
        source: FormatError,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Write { .. } => 2,
            CliError::Read { .. } | CliError::Format { .. } => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    #[value(name = "2sc")]
    TwoSc,
    Json,
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Reads a file, or standard input for `-`.
pub fn read_text(path: &Path) -> Result<String, CliError> {
    let result = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|source| CliError::Read {
        path: display(path),
        source,
    })
}

/// Parses `.2sc`, or the JSON form when the text starts with `{`.
pub fn read_complex(path: &Path) -> Result<ComplexFile, CliError> {
    let text = read_text(path)?;
    let wrap = |source| CliError::Format {
        path: display(path),
        source,
    };
    if text.trim_start().starts_with('{') {
        let json: ComplexJson = serde_json::from_str(&text).map_err(|e| wrap(FormatError::Json(e.to_string())))?;
        let (complex, weights) = format::from_json(&json).map_err(wrap)?;
        let mut file = ComplexFile::from_complex(complex);
        file.weights = weights;
        Ok(file)
    } else {
        format::parse_2sc(&text).map_err(wrap)
    }
}

pub fn read_grid_tiling(path: &Path) -> Result<GridTilingInstance, CliError> {
    let text = read_text(path)?;
    format::parse_gt(&text).map_err(|source| CliError::Format {
        path: display(path),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: display(path),
        source,
    })
}

/// Serializes triangles in the given order.
pub fn render_complex(
    triangles: &[Triangle],
    weights: Option<&BTreeMap<Triangle, u64>>,
    comments: &[String],
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::TwoSc => format::write_2sc_ordered(triangles, weights, comments),
        OutputFormat::Json => {
            let json = ComplexJson {
                triangles: triangles.iter().map(|&t| t.into()).collect(),
                weights: format::to_json(&Complex2::from_triangles(triangles.iter().copied()), weights).weights,
            };
            let mut s = serde_json::to_string(&json).expect("complex JSON serializes");
            s.push('\n');
            s
        }
    }
}

/// Sidecar path for a generated complex: `g.2sc` gives `g.squares.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("squares.json")
}
