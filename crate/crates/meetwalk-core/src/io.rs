//! File formats: graph JSON, matrix JSON (edge list), and dense CSV.
//!
//! All formats label nodes 1-based. The graph JSON shape is
//! `{"n": 5, "edges": [[1, 2, 1.0], ...]}`; matrices reuse the same shape
//! with probabilities or rates as weights. CSV is dense, row-major,
//! header-free.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, RateMatrix, TransitionMatrix};

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

fn parse_error(path: &Path, line: Option<usize>, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

fn read_graph_file(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path)?;
    let parsed: GraphFile = serde_json::from_str(&text)
        .map_err(|e| parse_error(path, Some(e.line()), e.to_string()))?;
    for &(src, dst, w) in &parsed.edges {
        if src == 0 || dst == 0 {
            return Err(parse_error(
                path,
                None,
                format!("edge ({src}, {dst}): nodes are 1-based, index 0 is invalid"),
            ));
        }
        if src > parsed.n || dst > parsed.n {
            return Err(parse_error(
                path,
                None,
                format!("edge ({src}, {dst}) outside node range 1..={}", parsed.n),
            ));
        }
        if w <= 0.0 || !w.is_finite() {
            return Err(parse_error(
                path,
                None,
                format!("edge ({src}, {dst}) has invalid weight {w}"),
            ));
        }
    }
    Ok(parsed)
}

/// Load a digraph from the 1-based JSON edge format.
pub fn load_graph(path: impl AsRef<Path>) -> Result<Digraph> {
    let path = path.as_ref();
    let parsed = read_graph_file(path)?;
    let edges = parsed
        .edges
        .into_iter()
        .map(|(s, d, w)| (s - 1, d - 1, w))
        .collect();
    Digraph::new(parsed.n, edges).map_err(|e| parse_error(path, None, e.to_string()))
}

/// Save a digraph in the 1-based JSON edge format. Edges are written in
/// sorted order so identical graphs produce identical files.
pub fn save_graph(g: &Digraph, path: impl AsRef<Path>) -> Result<()> {
    let file = GraphFile {
        n: g.n(),
        edges: g
            .edges()
            .iter()
            .map(|&(s, d, w)| (s + 1, d + 1, w))
            .collect(),
    };
    fs::write(
        path,
        serde_json::to_string_pretty(&file).expect("serializable"),
    )?;
    Ok(())
}

/// Save a transition matrix as a JSON edge list (probabilities as weights,
/// self-loops included as `(i, i, p)` entries).
pub fn save_transition_json(p: &TransitionMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut edges = Vec::new();
    for i in 0..p.n() {
        for &(j, v) in p.row(i) {
            edges.push((i + 1, j + 1, v));
        }
    }
    let file = GraphFile { n: p.n(), edges };
    fs::write(
        path,
        serde_json::to_string_pretty(&file).expect("serializable"),
    )?;
    Ok(())
}

/// Load a transition matrix from the JSON edge format.
pub fn load_transition_json(path: impl AsRef<Path>) -> Result<TransitionMatrix> {
    let path = path.as_ref();
    let parsed = read_graph_file(path)?;
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); parsed.n];
    for (s, d, w) in parsed.edges {
        rows[s - 1].push((d - 1, w));
    }
    TransitionMatrix::from_rows(parsed.n, rows).map_err(|e| parse_error(path, None, e.to_string()))
}

/// Save a rate matrix as a JSON edge list (off-diagonal rates as weights;
/// the diagonal is derived on load).
pub fn save_rate_json(q: &RateMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut edges = Vec::new();
    for i in 0..q.n() {
        for &(j, v) in q.off_diagonal(i) {
            edges.push((i + 1, j + 1, v));
        }
    }
    let file = GraphFile { n: q.n(), edges };
    fs::write(
        path,
        serde_json::to_string_pretty(&file).expect("serializable"),
    )?;
    Ok(())
}

/// Load a rate matrix from the JSON edge format (off-diagonal rates).
pub fn load_rate_json(path: impl AsRef<Path>) -> Result<RateMatrix> {
    let path = path.as_ref();
    let parsed = read_graph_file(path)?;
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); parsed.n];
    for (s, d, w) in parsed.edges {
        if s == d {
            return Err(parse_error(
                path,
                None,
                format!("rate file must not carry diagonal entry ({s}, {d})"),
            ));
        }
        rows[s - 1].push((d - 1, w));
    }
    RateMatrix::from_off_diagonal(parsed.n, rows)
        .map_err(|e| parse_error(path, None, e.to_string()))
}

/// Render a dense matrix as header-free row-major CSV with full precision.
pub fn dense_to_csv(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Parse header-free dense CSV into rows of `f64`.
pub fn csv_to_dense(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                cell.trim().parse::<f64>().map_err(|e| {
                    parse_error(path, Some(lineno + 1), format!("bad number {cell:?}: {e}"))
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Load a transition matrix from CSV or JSON, chosen by file extension.
pub fn load_transition(path: impl AsRef<Path>) -> Result<TransitionMatrix> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "csv") {
        let rows = csv_to_dense(path)?;
        TransitionMatrix::from_dense(&rows).map_err(|e| parse_error(path, None, e.to_string()))
    } else {
        load_transition_json(path)
    }
}

/// Load a rate matrix from CSV (dense, diagonal included) or JSON.
pub fn load_rate(path: impl AsRef<Path>) -> Result<RateMatrix> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "csv") {
        let rows = csv_to_dense(path)?;
        RateMatrix::from_dense(&rows).map_err(|e| parse_error(path, None, e.to_string()))
    } else {
        load_rate_json(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    #[test]
    fn graph_round_trip() {
        let g = generate(&GraphFamily::Ring { n: 5 }).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ring.json");
        save_graph(&g, &path).unwrap();
        let back = load_graph(&path).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn zero_based_edge_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"n": 2, "edges": [[0, 1, 1.0]]}"#).unwrap();
        let err = load_graph(&path).unwrap_err();
        assert!(err.to_string().contains("1-based"), "{err}");
    }

    #[test]
    fn negative_weight_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"n": 2, "edges": [[1, 2, -0.5]]}"#).unwrap();
        let err = load_graph(&path).unwrap_err();
        assert!(err.to_string().contains("invalid weight"), "{err}");
    }

    #[test]
    fn duplicate_edge_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.json");
        std::fs::write(&path, r#"{"n": 2, "edges": [[1, 2, 1.0], [1, 2, 0.5]]}"#).unwrap();
        let err = load_graph(&path).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn malformed_json_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{\"n\": 2,\n  \"edges\": [[1, 2,]]}").unwrap();
        let err = load_graph(&path).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn transition_matrix_json_round_trip() {
        let g = generate(&GraphFamily::Star { n: 4 }).unwrap();
        let p = crate::graph::equal_neighbor_matrix(&g, true).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        save_transition_json(&p, &path).unwrap();
        assert_eq!(load_transition(&path).unwrap(), p);
    }

    #[test]
    fn rate_matrix_csv_round_trip() {
        let g = generate(&GraphFamily::Path { n: 3 }).unwrap();
        let q = crate::graph::rate_matrix_from_digraph(&g);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.csv");
        std::fs::write(&path, dense_to_csv(&q.to_dense())).unwrap();
        assert_eq!(load_rate(&path).unwrap(), q);
    }
}
