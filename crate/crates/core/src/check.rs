//! Pass/fail records shared by every verification routine.

use serde::{Deserialize, Serialize};

/// Outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_point: Option<Vec<f64>>,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckOutcome {
    /// A check that passes when `measured ≤ tolerance` (NaN fails).
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64, citation: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            expected: 0.0,
            tolerance,
            citation: citation.into(),
            worst_point: None,
            samples: 0,
            detail: String::new(),
        }
    }

    /// A check that passes when `|measured − expected| ≤ tolerance`.
    pub fn close_to(
        name: impl Into<String>,
        measured: f64,
        expected: f64,
        tolerance: f64,
        citation: impl Into<String>,
    ) -> Self {
        Self {
            passed: (measured - expected).abs() <= tolerance,
            expected,
            ..Self::at_most(name, measured, tolerance, citation)
        }
    }

    /// A check that passes when `measured ≥ threshold`.
    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64, citation: impl Into<String>) -> Self {
        Self {
            passed: measured >= threshold,
            expected: threshold,
            ..Self::at_most(name, measured, 0.0, citation)
        }
    }

    pub fn with_worst(mut self, point: Vec<f64>) -> Self {
        self.worst_point = Some(point);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Index and value of the largest entry, treating NaN as larger than anything.
pub(crate) fn worst_of(values: &[f64]) -> Option<(usize, f64)> {
    values
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| {
            let ka = if a.1.is_nan() { f64::INFINITY } else { a.1 };
            let kb = if b.1.is_nan() { f64::INFINITY } else { b.1 };
            ka.total_cmp(&kb)
        })
        .map(|(i, v)| (i, if v.is_nan() { f64::INFINITY } else { v }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_measurements_fail() {
        assert!(!CheckOutcome::at_most("x", f64::NAN, 1.0, "").passed);
        assert_eq!(worst_of(&[1.0, f64::NAN, 3.0]), Some((1, f64::INFINITY)));
        assert!(CheckOutcome::close_to("x", 1.0, 1.05, 0.1, "").passed);
        assert!(!CheckOutcome::at_least("x", -1e-9, 0.0, "").passed);
    }
}
