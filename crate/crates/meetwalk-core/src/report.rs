//! External JSON/CSV shaping of results.
//!
//! Node labels are 1-based in every serialized artifact. Meeting tables
//! serialize as an object keyed by comma-joined start tuples in flattened
//! order, values as numbers or the string `"inf"`. The finiteness
//! certificate lists at most 100 infinite start tuples.

use serde_json::{json, Map, Value};

use crate::analysis::ChainDecomposition;
use crate::result::{MeetingTimes, MeetingValue};

/// Cap on explicitly listed infinite states in certificates.
pub const CERTIFICATE_STATE_CAP: usize = 100;

/// Time semantics marker carried by meeting reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    Discrete,
    Continuous,
}

impl TimeUnit {
    fn as_str(self) -> &'static str {
        match self {
            TimeUnit::Discrete => "discrete",
            TimeUnit::Continuous => "continuous",
        }
    }
}

fn unflatten(mut index: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

fn tuple_key(tuple: &[usize]) -> String {
    tuple
        .iter()
        .map(|&t| (t + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn value_json(v: MeetingValue) -> Value {
    match v {
        MeetingValue::Finite(x) => json!(x),
        MeetingValue::Infinite => json!("inf"),
    }
}

/// Finiteness certificate: `{"all_finite": bool, "infinite_states": [...]}`
/// with 1-based tuples, capped at [`CERTIFICATE_STATE_CAP`] entries.
pub fn certificate_json(result: &MeetingTimes) -> Value {
    let k = result.pursuer_count() + result.evader_count();
    let n = result.n();
    let infinite: Vec<Value> = result
        .finite_mask()
        .iter()
        .enumerate()
        .filter(|(_, &f)| !f)
        .take(CERTIFICATE_STATE_CAP)
        .map(|(s, _)| Value::Array(unflatten(s, n, k).iter().map(|&t| json!(t + 1)).collect()))
        .collect();
    json!({
        "all_finite": result.all_finite(),
        "infinite_states": infinite,
    })
}

/// Full meeting-time report. `selected` optionally restricts the value
/// table to the given flattened start indices (canonical order is kept).
pub fn meeting_report(
    result: &MeetingTimes,
    mean: Option<f64>,
    time_unit: TimeUnit,
    selected: Option<&[usize]>,
) -> Value {
    let k = result.pursuer_count() + result.evader_count();
    let n = result.n();
    let mut values = Map::new();
    let mut indices: Vec<usize> = match selected {
        Some(sel) => sel.to_vec(),
        None => (0..result.values().len()).collect(),
    };
    indices.sort_unstable();
    indices.dedup();
    for s in indices {
        let tuple = unflatten(s, n, k);
        values.insert(tuple_key(&tuple), value_json(result.values()[s]));
    }
    json!({
        "L": result.pursuer_count(),
        "M": result.evader_count(),
        "n": n,
        "time_unit": time_unit.as_str(),
        "values": Value::Object(values),
        "max": value_json(result.max_value()),
        "mean": mean,
        "residual": result.residual(),
        "finiteness": certificate_json(result),
    })
}

/// Dense CSV of a two-agent table (`L = M = 1`): row `i`, column `j` holds
/// the meeting time from the start pair `(i, j)`; infinite entries render
/// as `inf`.
pub fn pair_table_csv(result: &MeetingTimes) -> Option<String> {
    if result.pursuer_count() != 1 || result.evader_count() != 1 {
        return None;
    }
    let n = result.n();
    let mut out = String::new();
    for i in 0..n {
        let cells: Vec<String> = (0..n)
            .map(|j| match result.values()[i * n + j] {
                MeetingValue::Finite(v) => format!("{v}"),
                MeetingValue::Infinite => "inf".to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Some(out)
}

/// Chain decomposition with 1-based node labels:
/// `{"classes": [{"nodes": [...], "kind": "absorbing"|"transient",
/// "period": d}, ...]}`.
pub fn decomposition_report(d: &ChainDecomposition) -> Value {
    let classes: Vec<Value> = d
        .classes
        .iter()
        .map(|c| {
            json!({
                "nodes": c.nodes.iter().map(|&v| v + 1).collect::<Vec<_>>(),
                "kind": if c.absorbing { "absorbing" } else { "transient" },
                "period": c.period,
            })
        })
        .collect();
    json!({ "classes": classes })
}
