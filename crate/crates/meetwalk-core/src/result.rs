//! Result types shared by the discrete- and continuous-time solvers.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// An expected meeting time: a finite value or an explicit infinity mark.
/// Infinity is never represented by a floating-point sentinel inside
/// arithmetic; it serializes as the JSON string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeetingValue {
    Finite(f64),
    Infinite,
}

impl MeetingValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, MeetingValue::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            MeetingValue::Finite(v) => Some(v),
            MeetingValue::Infinite => None,
        }
    }
}

impl Serialize for MeetingValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            MeetingValue::Finite(v) => serializer.serialize_f64(v),
            MeetingValue::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for MeetingValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = MeetingValue;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<MeetingValue, E> {
                Ok(MeetingValue::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<MeetingValue, E> {
                Ok(MeetingValue::Finite(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<MeetingValue, E> {
                Ok(MeetingValue::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<MeetingValue, E> {
                if v == "inf" {
                    Ok(MeetingValue::Infinite)
                } else {
                    Err(E::custom(format!("unexpected string {v:?}")))
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Expected meeting times for every start configuration, with the
/// finiteness certificate and the max-norm fixed-point residual of the
/// solve.
#[derive(Debug, Clone, PartialEq)]
pub struct MeetingTimes {
    pursuer_count: usize,
    evader_count: usize,
    n: usize,
    values: Vec<MeetingValue>,
    finite_mask: Vec<bool>,
    residual: f64,
}

impl MeetingTimes {
    pub(crate) fn new(
        pursuer_count: usize,
        evader_count: usize,
        n: usize,
        values: Vec<MeetingValue>,
        finite_mask: Vec<bool>,
        residual: f64,
    ) -> Self {
        debug_assert_eq!(values.len(), finite_mask.len());
        debug_assert!(values
            .iter()
            .zip(&finite_mask)
            .all(|(v, &f)| v.is_finite() == f));
        Self {
            pursuer_count,
            evader_count,
            n,
            values,
            finite_mask,
            residual,
        }
    }

    pub fn pursuer_count(&self) -> usize {
        self.pursuer_count
    }

    pub fn evader_count(&self) -> usize {
        self.evader_count
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Values by flattened start index (pursuer-major, last coordinate
    /// fastest).
    pub fn values(&self) -> &[MeetingValue] {
        &self.values
    }

    /// Per-start finiteness certificate; `values` is infinite exactly
    /// where this is false.
    pub fn finite_mask(&self) -> &[bool] {
        &self.finite_mask
    }

    /// Max-norm residual of the defining fixed-point equations over the
    /// finite starts.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn all_finite(&self) -> bool {
        self.finite_mask.iter().all(|&b| b)
    }

    /// Value for a start tuple `(pursuers…, evaders…)`, 0-based nodes.
    pub fn value(&self, tuple: &[usize]) -> MeetingValue {
        assert_eq!(tuple.len(), self.pursuer_count + self.evader_count);
        let idx = tuple.iter().fold(0, |acc, &t| {
            assert!(t < self.n);
            acc * self.n + t
        });
        self.values[idx]
    }

    /// Two-agent convenience accessor (`L = M = 1`).
    pub fn pair_value(&self, i: usize, j: usize) -> MeetingValue {
        assert_eq!(self.pursuer_count + self.evader_count, 2);
        self.value(&[i, j])
    }

    /// Largest finite value, if any start is finite.
    pub fn max_finite(&self) -> Option<f64> {
        self.values
            .iter()
            .filter_map(MeetingValue::finite)
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
    }

    /// Maximum over all starts: infinite if any start is infinite.
    pub fn max_value(&self) -> MeetingValue {
        if self.all_finite() {
            self.max_finite()
                .map(MeetingValue::Finite)
                .unwrap_or(MeetingValue::Infinite)
        } else {
            MeetingValue::Infinite
        }
    }
}
