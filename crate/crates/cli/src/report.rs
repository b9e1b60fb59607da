use serde::Serialize;
use serde_json::Value;
use twosphere::{Complex2, Triangle};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Ok,
    Error,
}

impl Verdict {
    pub fn from_bool(yes: bool) -> Self {
        if yes {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes | Verdict::Ok => 0,
            Verdict::No => 1,
            // Errors carry their own code.
            Verdict::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InstanceStats {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub euler_characteristic: i64,
    pub components: usize,
    pub conflict_triangles: usize,
    pub boundary_edges: usize,
    /// Maximal edges and isolated vertices listed in the input.
    #[serde(skip_serializing_if = "is_zero")]
    pub loose_edges: usize,
    #[serde(skip_serializing_if = "is_zero")]
    pub loose_vertices: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl InstanceStats {
    pub fn of(k: &Complex2) -> Self {
        InstanceStats {
            vertices: k.num_vertices(),
            edges: k.num_edges(),
            triangles: k.num_triangles(),
            euler_characteristic: k.euler_characteristic(),
            components: k.edge_connected_components().len(),
            conflict_triangles: k.conflict_triangles().len(),
            boundary_edges: k.boundary_edges().len(),
            loose_edges: 0,
            loose_vertices: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EngineReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

/// Machine-readable result of one invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub report: u32,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceStats>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<Triangle>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineReport>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// One-line human summary, printed to stderr.
    #[serde(skip)]
    pub summary: String,
}

impl RunReport {
    pub fn new(verdict: Verdict) -> Self {
        RunReport {
            report: REPORT_VERSION,
            command: Vec::new(),
            instance: None,
            verdict,
            certificate: None,
            timing_ms: None,
            engine: None,
            details: Value::Null,
            warnings: Vec::new(),
            error: None,
            summary: String::new(),
        }
    }

    pub fn with_instance(mut self, k: &Complex2) -> Self {
        self.instance = Some(InstanceStats::of(k));
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn with_summary(mut self, summary: impl Into<String>) -> Self {
        self.summary = summary.into();
        self
    }
}
