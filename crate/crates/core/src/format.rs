//! Text formats.
//!
//! `.2sc` lists maximal simplices of a 2-complex:
//!
//! ```text
//! 2sc 1
//! # comment
//! t 1 2 3        triangle
//! t 1 2 4 5      weighted triangle (weight 5)
//! e 7 8          maximal edge
//! v 9            isolated vertex
//! ```
//!
//! `.gt` describes a grid tiling instance: header `gt 1`, a line `n k`, then
//! one `i j a b` line per member `(a, b)` of `S_{i,j}` (all 1-based).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Complex2, ComplexError, Edge, Triangle, Vertex};
use crate::gridtiling::GridTilingInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line `{0}`")]
    MissingHeader(&'static str),
    #[error("line {line}: {source}")]
    Complex {
        line: usize,
        #[source]
        source: ComplexError,
    },
    #[error("invalid JSON complex: {0}")]
    Json(String),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Contents of a `.2sc` file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexFile {
    pub complex: Complex2,
    /// Per-triangle weights, present iff any triangle line carried a weight.
    pub weights: Option<BTreeMap<Triangle, u64>>,
    /// Maximal edges not covered by any triangle.
    pub loose_edges: BTreeSet<Edge>,
    /// Vertices not covered by any edge or triangle.
    pub loose_vertices: BTreeSet<Vertex>,
    /// Triangle order as it appeared in the file (duplicates removed).
    pub file_order: Vec<Triangle>,
}

impl ComplexFile {
    pub fn from_complex(complex: Complex2) -> Self {
        ComplexFile {
            file_order: complex.triangles().to_vec(),
            complex,
            ..Default::default()
        }
    }

    /// True if the file lists simplices that are not faces of any triangle.
    pub fn has_lower_dimensional_maximal_simplices(&self) -> bool {
        !self.loose_edges.is_empty() || !self.loose_vertices.is_empty()
    }
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_u32(line: usize, s: &str) -> Result<u32, FormatError> {
    s.parse::<u32>()
        .map_err(|_| syntax(line, format!("expected a non-negative integer, found `{s}`")))
}

fn parse_u64(line: usize, s: &str) -> Result<u64, FormatError> {
    s.parse::<u64>()
        .map_err(|_| syntax(line, format!("expected a non-negative integer, found `{s}`")))
}

pub fn parse_2sc(text: &str) -> Result<ComplexFile, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, f)) if f == ["2sc", "1"] => {}
        Some((line, f)) => {
            return Err(syntax(
                line,
                format!("expected header `2sc 1`, found `{}`", f.join(" ")),
            ))
        }
        None => return Err(FormatError::MissingHeader("2sc 1")),
    }

    let mut triangles: Vec<(Triangle, Option<u64>, usize)> = Vec::new();
    let mut edges: Vec<(Edge, usize)> = Vec::new();
    let mut vertices: Vec<Vertex> = Vec::new();
    for (line, fields) in lines {
        let ids = &fields[1..];
        match fields[0] {
            "t" => {
                if ids.len() != 3 && ids.len() != 4 {
                    return Err(syntax(line, "triangle line needs 3 vertex ids and an optional weight"));
                }
                let [a, b, c] = [0, 1, 2].map(|i| parse_u32(line, ids[i]));
                let t = Triangle::new(a?, b?, c?).map_err(|source| FormatError::Complex { line, source })?;
                let w = match ids.get(3) {
                    Some(s) => {
                        let w = parse_u64(line, s)?;
                        if w == 0 {
                            return Err(syntax(line, "triangle weight must be positive"));
                        }
                        Some(w)
                    }
                    None => None,
                };
                triangles.push((t, w, line));
            }
            "e" => {
                if ids.len() != 2 {
                    return Err(syntax(line, "edge line needs 2 vertex ids"));
                }
                let e = Edge::new(parse_u32(line, ids[0])?, parse_u32(line, ids[1])?)
                    .map_err(|source| FormatError::Complex { line, source })?;
                edges.push((e, line));
            }
            "v" => {
                if ids.len() != 1 {
                    return Err(syntax(line, "vertex line needs 1 vertex id"));
                }
                vertices.push(Vertex(parse_u32(line, ids[0])?));
            }
            other => return Err(syntax(line, format!("unknown simplex tag `{other}`"))),
        }
    }

    let weighted = triangles.iter().any(|(_, w, _)| w.is_some());
    let mut weights: BTreeMap<Triangle, u64> = BTreeMap::new();
    let mut file_order = Vec::new();
    for (t, w, line) in &triangles {
        let w = match (weighted, w) {
            (true, Some(w)) => *w,
            (true, None) => return Err(syntax(*line, "weighted file: every triangle needs a weight")),
            (false, _) => 1,
        };
        match weights.insert(*t, w) {
            Some(prev) if prev != w => {
                return Err(syntax(*line, format!("triangle {t} listed with conflicting weights")))
            }
            Some(_) => {}
            None => file_order.push(*t),
        }
    }
    let complex = Complex2::from_triangles(file_order.iter().copied());
    let loose_edges: BTreeSet<Edge> = edges
        .into_iter()
        .map(|(e, _)| e)
        .filter(|e| !complex.contains_edge(e))
        .collect();
    let covered: BTreeSet<Vertex> = loose_edges.iter().flat_map(|e| e.endpoints()).collect();
    let loose_vertices = vertices
        .into_iter()
        .filter(|v| !complex.contains_vertex(*v) && !covered.contains(v))
        .collect();
    Ok(ComplexFile {
        complex,
        weights: weighted.then_some(weights),
        loose_edges,
        loose_vertices,
        file_order,
    })
}

/// Writes a complex in canonical (sorted) order.
pub fn write_2sc(complex: &Complex2, weights: Option<&BTreeMap<Triangle, u64>>, comments: &[String]) -> String {
    write_2sc_ordered(complex.triangles(), weights, comments)
}

/// Writes triangles in the given order, e.g. to keep generator blocks contiguous.
pub fn write_2sc_ordered(
    triangles: &[Triangle],
    weights: Option<&BTreeMap<Triangle, u64>>,
    comments: &[String],
) -> String {
    let mut out = String::from("2sc 1\n");
    for c in comments {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    for t in triangles {
        let [a, b, c] = t.corners();
        match weights {
            Some(w) => {
                let _ = writeln!(out, "t {a} {b} {c} {}", w.get(t).copied().unwrap_or(1));
            }
            None => {
                let _ = writeln!(out, "t {a} {b} {c}");
            }
        }
    }
    out
}

pub fn write_complex_file(file: &ComplexFile, comments: &[String]) -> String {
    let mut out = write_2sc(&file.complex, file.weights.as_ref(), comments);
    for e in &file.loose_edges {
        let [a, b] = e.endpoints();
        let _ = writeln!(out, "e {a} {b}");
    }
    for v in &file.loose_vertices {
        let _ = writeln!(out, "v {v}");
    }
    out
}

/// JSON form: `{"triangles": [[a,b,c], ...], "weights": {"a,b,c": w, ...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub triangles: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, u64>>,
}

fn weight_key(t: &Triangle) -> String {
    let [a, b, c] = t.corners();
    format!("{a},{b},{c}")
}

pub fn to_json(complex: &Complex2, weights: Option<&BTreeMap<Triangle, u64>>) -> ComplexJson {
    ComplexJson {
        triangles: complex.triangles().iter().map(|&t| t.into()).collect(),
        weights: weights.map(|w| w.iter().map(|(t, w)| (weight_key(t), *w)).collect()),
    }
}

pub fn from_json(json: &ComplexJson) -> Result<(Complex2, Option<BTreeMap<Triangle, u64>>), FormatError> {
    let complex =
        Complex2::from_triples(json.triangles.iter().copied()).map_err(|e| FormatError::Json(e.to_string()))?;
    let weights = match &json.weights {
        None => None,
        Some(map) => {
            let lookup: BTreeMap<String, Triangle> = complex.triangles().iter().map(|t| (weight_key(t), *t)).collect();
            let mut out = BTreeMap::new();
            for (key, w) in map {
                let t = lookup
                    .get(key)
                    .ok_or_else(|| FormatError::Json(format!("weight for unknown triangle `{key}`")))?;
                out.insert(*t, *w);
            }
            Some(out)
        }
    };
    Ok((complex, weights))
}

pub fn parse_gt(text: &str) -> Result<GridTilingInstance, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, f)) if f == ["gt", "1"] => {}
        Some((line, f)) => return Err(syntax(line, format!("expected header `gt 1`, found `{}`", f.join(" ")))),
        None => return Err(FormatError::MissingHeader("gt 1")),
    }
    let (size_line, fields) = lines.next().ok_or_else(|| syntax(1, "missing `n k` line"))?;
    if fields.len() != 2 {
        return Err(syntax(size_line, "expected `n k`"));
    }
    let n = parse_u32(size_line, fields[0])?;
    let k = parse_u32(size_line, fields[1])?;
    if n == 0 || k == 0 {
        return Err(syntax(size_line, "n and k must be positive"));
    }
    let mut sets: BTreeMap<(u32, u32), BTreeSet<(u32, u32)>> = BTreeMap::new();
    for (line, fields) in lines {
        if fields.len() != 4 {
            return Err(syntax(line, "expected `i j a b`"));
        }
        let [i, j, a, b] = [0, 1, 2, 3].map(|x| parse_u32(line, fields[x]));
        let (i, j, a, b) = (i?, j?, a?, b?);
        if !(1..=k).contains(&i) || !(1..=k).contains(&j) {
            return Err(syntax(line, format!("tile ({i}, {j}) outside [1, {k}]")));
        }
        if !(1..=n).contains(&a) || !(1..=n).contains(&b) {
            return Err(syntax(line, format!("pair ({a}, {b}) outside [1, {n}]")));
        }
        sets.entry((i, j)).or_default().insert((a, b));
    }
    GridTilingInstance::new(n, k, sets).map_err(|e| syntax(size_line, e.to_string()))
}

pub fn write_gt(instance: &GridTilingInstance) -> String {
    let mut out = format!("gt 1\n{} {}\n", instance.n(), instance.k());
    for ((i, j), set) in instance.sets() {
        for (a, b) in set {
            let _ = writeln!(out, "{i} {j} {a} {b}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_tetrahedron() {
        let text = "2sc 1\n# tetra\nt 1 2 3\nt 1 2 4\nt 1 3 4 # inline\n\nt 2 3 4\n";
        let f = parse_2sc(text).unwrap();
        assert_eq!(f.complex.num_triangles(), 4);
        assert!(f.weights.is_none());
        assert!(!f.has_lower_dimensional_maximal_simplices());
    }

    #[test]
    fn loose_simplices_are_recorded() {
        let f = parse_2sc("2sc 1\nt 1 2 3\ne 1 2\ne 3 4\nv 4\nv 9\n").unwrap();
        assert_eq!(f.loose_edges.len(), 1);
        assert_eq!(f.loose_vertices.into_iter().collect::<Vec<_>>(), vec![Vertex(9)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_2sc("2sc 1\nt 1 2 3\nt 1 1 2\n").unwrap_err();
        assert!(matches!(err, FormatError::Complex { line: 3, .. }));
        let err = parse_2sc("2sc 1\nt 1 2 x\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
        let err = parse_2sc("# nothing\n2sc 2\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
        assert_eq!(parse_2sc("").unwrap_err(), FormatError::MissingHeader("2sc 1"));
        let err = parse_2sc("2sc 1\nt 1 2 3 2\nt 1 2 4\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 3, .. }));
        let err = parse_2sc("2sc 1\nq 1\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
    }

    #[test]
    fn weighted_round_trip() {
        let f = parse_2sc("2sc 1\nt 3 2 1 4\nt 1 2 4 1\n").unwrap();
        let w = f.weights.as_ref().unwrap();
        assert_eq!(w[&Triangle::new(1, 2, 3).unwrap()], 4);
        let text = write_complex_file(&f, &["budget 3".into()]);
        assert_eq!(text, "2sc 1\n# budget 3\nt 1 2 3 4\nt 1 2 4 1\n");
        let back = parse_2sc(&text).unwrap();
        assert_eq!(back.complex, f.complex);
        assert_eq!(back.weights, f.weights);
    }

    #[test]
    fn json_round_trip() {
        let f = parse_2sc("2sc 1\nt 3 2 1 4\nt 1 2 4 1\n").unwrap();
        let json = to_json(&f.complex, f.weights.as_ref());
        let text = serde_json::to_string(&json).unwrap();
        assert_eq!(
            text,
            r#"{"triangles":[[1,2,3],[1,2,4]],"weights":{"1,2,3":4,"1,2,4":1}}"#
        );
        let parsed: ComplexJson = serde_json::from_str(&text).unwrap();
        let (c, w) = from_json(&parsed).unwrap();
        assert_eq!(c, f.complex);
        assert_eq!(w, f.weights);
    }

    #[test]
    fn gt_parse_and_validate() {
        let g = parse_gt("gt 1\n2 1\n1 1 1 2\n1 1 2 2\n").unwrap();
        assert_eq!((g.n(), g.k()), (2, 1));
        assert_eq!(write_gt(&g), "gt 1\n2 1\n1 1 1 2\n1 1 2 2\n");
        // S_{1,2} etc. missing for k = 2
        assert!(parse_gt("gt 1\n2 2\n1 1 1 1\n").is_err());
        assert!(matches!(
            parse_gt("gt 1\n2 1\n1 1 3 1\n"),
            Err(FormatError::Syntax { line: 3, .. })
        ));
    }
}
